#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <boost/rational.hpp>

#include "isgqd/green.hpp"
#include "isgqd/semigroup.hpp"

namespace isgqd {

/// Linear functional on span{v_s}, given by tau(v_s) per element.
struct TraceFunctional {
  std::vector<double> coeffs;
};

/// Columns span the linear relations among the v_s (kernel of the
/// Hilbert-Schmidt Gram matrix).
Eigen::MatrixXd dependency_kernel(const InverseSemigroup& s, double tol = 1e-9);
/// Throws kInconsistentOnDependencies if tau does not vanish on a relation.
void check_consistent(const InverseSemigroup& s, const TraceFunctional& tau, double tol = 1e-9);

/// Coefficients a with sum a_s v_s = 1, if the identity lies in the span.
std::optional<Eigen::VectorXd> unit_expansion(const InverseSemigroup& s, double tol = 1e-9);
/// tau(1). Throws kNotUnital when 1 is not in span{v_s}.
double tau_of_one(const InverseSemigroup& s, const TraceFunctional& tau);

/// tau(v_s v_t) = tau(v_t v_s) for all pairs.
bool is_tracial(const InverseSemigroup& s, const TraceFunctional& tau, double tol = 1e-9);
/// G_{t,s} = tau(v_t* v_s).
Eigen::MatrixXd trace_gram(const InverseSemigroup& s, const TraceFunctional& tau);
/// tau(1) = 1 and G positive semidefinite within tol.
bool is_state(const InverseSemigroup& s, const TraceFunctional& tau, double tol = 1e-9);

struct Faithfulness {
  bool faithful = false;
  /// Smallest eigenvalue of G on a complement of the dependency kernel.
  double margin = 0;
};
Faithfulness is_faithful(const InverseSemigroup& s, const TraceFunctional& tau, double tol = 1e-9);

enum class GrpdminFormula {
  /// tau(v_s) = 1/2 + [s non-zero idempotent]/(2k): the values of the
  /// stated functional at 0 and at idempotents, and 1/2 elsewhere.
  kTracial,
  /// Coefficient reading: 1/2 a_0 + (1/(2k) + 1/2) sum_e a_e, zero on
  /// every other element. Not tracial once k >= 2.
  kAsPrinted,
};
/// Throws kNotBrandt unless S has Brandt structure.
TraceFunctional grpdmin_trace(const InverseSemigroup& s, const GreenClasses& g,
                              GrpdminFormula formula = GrpdminFormula::kTracial);

/// Affine space {particular + directions * c} of functionals that are
/// tracial, consistent on dependencies and have tau(1) = 1. Throws
/// kNotUnital.
struct TraceSpace {
  Eigen::VectorXd particular;
  Eigen::MatrixXd directions;
  std::size_t dimension() const { return static_cast<std::size_t>(directions.cols()); }
};
TraceSpace trace_space(const InverseSemigroup& s, double tol = 1e-9);

/// tau(v_1) = 1 and zero on T: the state of the summand C.
TraceFunctional qdnotr_character_trace(std::size_t k);
/// rho on the zero and off-diagonal pairs, delta on diagonal pairs, 1 on
/// the unit.
TraceFunctional qdnotr_trace(std::size_t k, double rho, double delta);

using Rational = boost::rational<long long>;
struct TraceMargin {
  Rational value;
  Rational rho, delta;
  /// Each constraint a_rho rho + a_delta delta + a_1 >= 0 comes from tau of
  /// one of the projections v_0, v_(e,e) - v_0, 1 - v_0 - sum (v_(e,e) - v_0).
  std::vector<std::array<Rational, 3>> constraints;
  bool optimizer_is_state = false;
  bool optimizer_is_tracial = false;
};
/// max (delta - rho) over the trace space of qdnotr_family(k), solved
/// exactly by vertex enumeration.
TraceMargin qdnotr_trace_margin(std::size_t k);

}  // namespace isgqd
