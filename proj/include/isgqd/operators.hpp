#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "isgqd/green.hpp"
#include "isgqd/semigroup.hpp"

namespace isgqd {

/// Real sparse operator on the basis {delta_x : x in S}, column x being the
/// image of delta_x. Every operator built here has real entries.
using SparseOp = Eigen::SparseMatrix<double>;

struct LinOp {
  SparseOp matrix;
  bool projection = false;
  bool partial_isometry = false;
};

/// max |entries| of A* - A, A^2 - A.
bool is_projection(const SparseOp& a, double tol = 1e-12);
/// max |entries| of A A* A - A.
bool is_partial_isometry(const SparseOp& a, double tol = 1e-12);
double max_abs_entry(const SparseOp& a);

/// v_s delta_x = delta_{sx} when s*s x = x. Products leaving a window are
/// dropped; see leaked_columns.
LinOp left_regular(const InverseSemigroup& s, Index elem);
/// w_s delta_x = delta_{xs*} when x s*s = x.
LinOp right_regular(const InverseSemigroup& s, Index elem);

/// Basis elements x in the domain of v_s whose image leaves the window.
std::vector<Index> leaked_columns(const InverseSemigroup& s, Index elem);
/// Bound on how far the window commutator [v_s, q] can be from the true
/// one: |P_X(s) q| + |P_X(s*) q|, X as in leaked_columns. Zero on finite S.
double window_defect(const InverseSemigroup& s, Index elem, const SparseOp& q);

/// Diagonal projection onto span{delta_x : x in D}.
LinOp dclass_block(const InverseSemigroup& s, const GreenClasses& g, std::uint32_t d);

SparseOp diagonal_projection(std::size_t dim, const std::vector<Index>& support);
SparseOp commutator(const SparseOp& a, const SparseOp& b);

/// Largest singular value. The nonzero pattern is split into connected
/// blocks; each block is solved densely up to `dense_limit` columns and by
/// Lanczos on A*A with full reorthogonalization above it.
double opnorm(const SparseOp& a, std::size_t dense_limit = 2000);
double opnorm_lanczos(const SparseOp& a);

/// <v_s, v_t> in the Hilbert-Schmidt pairing:
/// #{x : s*s x = x, t*t x = x, sx = tx}.
Eigen::MatrixXd hs_gram(const InverseSemigroup& s);
/// Dimension of span{v_s}, by the numerical rank of hs_gram.
std::size_t algebra_dim(const InverseSemigroup& s, double tol = 1e-9);

/// Matrix Market coordinate format.
void save_matrix_market(const SparseOp& a, const std::string& path);

}  // namespace isgqd
