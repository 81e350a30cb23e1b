#include "isgqd/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/SparseExtra>

#include "isgqd/error.hpp"

namespace isgqd {

namespace {

SparseOp from_triplets(std::size_t n, const std::vector<Eigen::Triplet<double>>& t) {
  SparseOp m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

double largest_eigenvalue_dense(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace

double max_abs_entry(const SparseOp& a) {
  double m = 0;
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseOp::InnerIterator it(a, k); it; ++it) m = std::max(m, std::abs(it.value()));
  }
  return m;
}

bool is_projection(const SparseOp& a, double tol) {
  const SparseOp t = a.transpose();
  const SparseOp sq = a * a;
  return max_abs_entry(t - a) <= tol && max_abs_entry(sq - a) <= tol;
}

bool is_partial_isometry(const SparseOp& a, double tol) {
  const SparseOp t = a.transpose();
  const SparseOp p = a * t * a;
  return max_abs_entry(p - a) <= tol;
}

LinOp left_regular(const InverseSemigroup& s, Index elem) {
  std::vector<Eigen::Triplet<double>> t;
  const Index e = s.source(elem);
  for (Index x = 0; x < s.size(); ++x) {
    if (s.mul(e, x) != x) continue;
    const Index y = s.mul(elem, x);
    if (y != kUndefined) t.emplace_back(y, x, 1.0);
  }
  LinOp op{from_triplets(s.size(), t), false, true};
  op.projection = s.is_idempotent(elem);
  return op;
}

LinOp right_regular(const InverseSemigroup& s, Index elem) {
  std::vector<Eigen::Triplet<double>> t;
  const Index e = s.source(elem);
  const Index inv = s.star(elem);
  for (Index x = 0; x < s.size(); ++x) {
    if (s.mul(x, e) != x) continue;
    const Index y = s.mul(x, inv);
    if (y != kUndefined) t.emplace_back(y, x, 1.0);
  }
  LinOp op{from_triplets(s.size(), t), false, true};
  op.projection = s.is_idempotent(elem);
  return op;
}

std::vector<Index> leaked_columns(const InverseSemigroup& s, Index elem) {
  std::vector<Index> out;
  if (!s.windowed()) return out;
  const Index e = s.source(elem);
  for (Index x = 0; x < s.size(); ++x) {
    if (s.mul(e, x) == x && s.mul(elem, x) == kUndefined) out.push_back(x);
  }
  return out;
}

double window_defect(const InverseSemigroup& s, Index elem, const SparseOp& q) {
  if (!s.windowed()) return 0.0;
  double total = 0;
  for (Index t : {elem, s.star(elem)}) {
    const auto cols = leaked_columns(s, t);
    if (cols.empty()) continue;
    const SparseOp p = diagonal_projection(s.size(), cols);
    total += opnorm(SparseOp(p * q));
  }
  return total;
}

SparseOp diagonal_projection(std::size_t dim, const std::vector<Index>& support) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(support.size());
  for (Index x : support) t.emplace_back(x, x, 1.0);
  return from_triplets(dim, t);
}

LinOp dclass_block(const InverseSemigroup& s, const GreenClasses& g, std::uint32_t d) {
  if (d >= g.num_d) throw Error(ErrorCode::kBadIdempotent, "no such D-class");
  return LinOp{diagonal_projection(s.size(), g.d_members[d]), true, true};
}

SparseOp commutator(const SparseOp& a, const SparseOp& b) {
  SparseOp ab = a * b;
  SparseOp ba = b * a;
  SparseOp c = ab - ba;
  c.prune(0.0);
  return c;
}

double opnorm(const SparseOp& a, std::size_t dense_limit) {
  const auto rows = static_cast<std::size_t>(a.rows());
  const auto cols = static_cast<std::size_t>(a.cols());
  // Rows are nodes 0..rows-1, columns rows..rows+cols-1.
  std::vector<std::size_t> parent(rows + cols);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  bool any = false;
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseOp::InnerIterator it(a, k); it; ++it) {
      if (it.value() == 0.0) continue;
      any = true;
      const std::size_t r = find(static_cast<std::size_t>(it.row()));
      const std::size_t c = find(rows + static_cast<std::size_t>(it.col()));
      if (r != c) parent[std::max(r, c)] = std::min(r, c);
    }
  }
  if (!any) return 0.0;

  std::vector<std::vector<Index>> comp_rows(rows + cols), comp_cols(rows + cols);
  std::vector<Index> local(rows + cols, kUndefined);
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseOp::InnerIterator it(a, k); it; ++it) {
      if (it.value() == 0.0) continue;
      const auto r = static_cast<std::size_t>(it.row());
      const auto c = rows + static_cast<std::size_t>(it.col());
      const std::size_t root = find(r);
      if (local[r] == kUndefined) {
        local[r] = static_cast<Index>(comp_rows[root].size());
        comp_rows[root].push_back(static_cast<Index>(r));
      }
      if (local[c] == kUndefined) {
        local[c] = static_cast<Index>(comp_cols[root].size());
        comp_cols[root].push_back(static_cast<Index>(c - rows));
      }
    }
  }

  double best = 0;
  for (std::size_t root = 0; root < rows + cols; ++root) {
    if (comp_rows[root].empty()) continue;
    const auto nr = comp_rows[root].size(), nc = comp_cols[root].size();
    std::vector<Eigen::Triplet<double>> t;
    for (Index c : comp_cols[root]) {
      for (SparseOp::InnerIterator it(a, static_cast<Eigen::Index>(c)); it; ++it) {
        if (it.value() != 0.0) t.emplace_back(local[static_cast<std::size_t>(it.row())], local[rows + c], it.value());
      }
    }
    SparseOp block(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(nc));
    block.setFromTriplets(t.begin(), t.end());
    double norm;
    if (std::min(nr, nc) <= dense_limit) {
      const Eigen::MatrixXd dense(block);
      const Eigen::MatrixXd gram = nr < nc ? Eigen::MatrixXd(dense * dense.transpose())
                                           : Eigen::MatrixXd(dense.transpose() * dense);
      norm = std::sqrt(std::max(0.0, largest_eigenvalue_dense(gram)));
    } else {
      norm = opnorm_lanczos(block);
    }
    best = std::max(best, norm);
  }
  return best;
}

double opnorm_lanczos(const SparseOp& a) {
  const auto n = a.cols();
  if (n == 0) return 0.0;
  const SparseOp at = a.transpose();
  const Eigen::Index max_steps = std::min<Eigen::Index>(n, 400);
  Eigen::MatrixXd basis(n, max_steps);
  std::vector<double> alpha, beta;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = 1.0 + 0.01 * static_cast<double>(i % 7);
  v.normalize();
  double theta = 0;
  for (Eigen::Index j = 0; j < max_steps; ++j) {
    basis.col(j) = v;
    Eigen::VectorXd w = at * (a * v);
    alpha.push_back(v.dot(w));
    // Full reorthogonalization, twice.
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd coef = basis.leftCols(j + 1).transpose() * w;
      w -= basis.leftCols(j + 1) * coef;
    }
    const double b = w.norm();
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(j + 1, j + 1);
    for (Eigen::Index i = 0; i <= j; ++i) {
      tri(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i > 0) tri(i, i - 1) = tri(i - 1, i) = beta[static_cast<std::size_t>(i - 1)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    theta = es.eigenvalues()[j];
    const double residual = std::abs(b * es.eigenvectors()(j, j));
    if (residual <= 1e-12 * std::max(theta, 1e-300) || b <= 1e-14 * std::max(theta, 1.0)) break;
    beta.push_back(b);
    v = w / b;
  }
  return std::sqrt(std::max(0.0, theta));
}

Eigen::MatrixXd hs_gram(const InverseSemigroup& s) {
  const std::size_t n = s.size();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<std::vector<Index>> bucket(n);
  for (Index x = 0; x < n; ++x) {
    for (auto& b : bucket) b.clear();
    for (Index a = 0; a < n; ++a) {
      if (s.mul(s.source(a), x) != x) continue;
      const Index y = s.mul(a, x);
      if (y != kUndefined) bucket[y].push_back(a);
    }
    for (const auto& b : bucket) {
      for (Index a : b) {
        for (Index c : b) k(a, c) += 1.0;
      }
    }
  }
  return k;
}

std::size_t algebra_dim(const InverseSemigroup& s, double tol) {
  const Eigen::MatrixXd k = hs_gram(s);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  return static_cast<std::size_t>((es.eigenvalues().array() > tol * scale).count());
}

void save_matrix_market(const SparseOp& a, const std::string& path) {
  if (!Eigen::saveMarket(a, path)) throw Error(ErrorCode::kUnsupported, "cannot write " + path);
}

}  // namespace isgqd
