#include "isgqd/traces.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "isgqd/constructions.hpp"
#include "isgqd/error.hpp"
#include "isgqd/operators.hpp"
#include "isgqd/spectrum.hpp"

namespace isgqd {

namespace {

void require_finite(const InverseSemigroup& s) {
  if (s.windowed()) throw Error(ErrorCode::kUnsupported, "traces on a window of an infinite semigroup");
}

void require_size(const InverseSemigroup& s, const TraceFunctional& tau) {
  if (tau.coeffs.size() != s.size()) throw Error(ErrorCode::kBadTable, "functional has the wrong number of values");
}

Eigen::VectorXd as_vector(const TraceFunctional& tau) {
  return Eigen::Map<const Eigen::VectorXd>(tau.coeffs.data(), static_cast<Eigen::Index>(tau.coeffs.size()));
}

Eigen::VectorXd trace_of_each(const InverseSemigroup& s) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.size()));
  for (Index a = 0; a < s.size(); ++a) {
    const Index e = s.source(a);
    for (Index x = 0; x < s.size(); ++x) {
      if (s.mul(e, x) == x && s.mul(a, x) == x) b[a] += 1.0;
    }
  }
  return b;
}

double to_double(const Rational& r) { return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator()); }

}  // namespace

Eigen::MatrixXd dependency_kernel(const InverseSemigroup& s, double tol) {
  require_finite(s);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hs_gram(s));
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()[i] <= tol * scale) cols.push_back(i);
  }
  Eigen::MatrixXd k(es.eigenvectors().rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) k.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(cols[j]);
  return k;
}

void check_consistent(const InverseSemigroup& s, const TraceFunctional& tau, double tol) {
  require_size(s, tau);
  const Eigen::MatrixXd k = dependency_kernel(s, tol);
  if (k.cols() == 0) return;
  const double worst = (k.transpose() * as_vector(tau)).cwiseAbs().maxCoeff();
  if (worst > tol * std::max(1.0, as_vector(tau).cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::kInconsistentOnDependencies, "functional is nonzero on a linear relation among the v_s");
  }
}

std::optional<Eigen::VectorXd> unit_expansion(const InverseSemigroup& s, double tol) {
  require_finite(s);
  const auto n = static_cast<Eigen::Index>(s.size());
  if (const auto u = s.unit()) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    a[*u] = 1.0;
    return a;
  }
  const Eigen::MatrixXd k = hs_gram(s);
  const Eigen::VectorXd b = trace_of_each(s);
  const Eigen::VectorXd a = k.completeOrthogonalDecomposition().solve(b);
  // |1 - sum a_s v_s|^2 in the Hilbert-Schmidt norm.
  const double residual = static_cast<double>(n) - 2.0 * b.dot(a) + a.dot(k * a);
  if (std::abs(residual) > tol * static_cast<double>(n)) return std::nullopt;
  return a;
}

double tau_of_one(const InverseSemigroup& s, const TraceFunctional& tau) {
  require_size(s, tau);
  const auto a = unit_expansion(s);
  if (!a) throw Error(ErrorCode::kNotUnital, "the identity is not in span{v_s}");
  return a->dot(as_vector(tau));
}

bool is_tracial(const InverseSemigroup& s, const TraceFunctional& tau, double tol) {
  check_consistent(s, tau, tol);
  for (Index a = 0; a < s.size(); ++a) {
    for (Index b = 0; b < s.size(); ++b) {
      if (std::abs(tau.coeffs[s.mul(a, b)] - tau.coeffs[s.mul(b, a)]) > tol) return false;
    }
  }
  return true;
}

Eigen::MatrixXd trace_gram(const InverseSemigroup& s, const TraceFunctional& tau) {
  require_size(s, tau);
  const auto n = static_cast<Eigen::Index>(s.size());
  Eigen::MatrixXd g(n, n);
  for (Index t = 0; t < s.size(); ++t) {
    for (Index a = 0; a < s.size(); ++a) g(t, a) = tau.coeffs[s.mul(s.star(t), a)];
  }
  return g;
}

bool is_state(const InverseSemigroup& s, const TraceFunctional& tau, double tol) {
  check_consistent(s, tau, tol);
  if (std::abs(tau_of_one(s, tau) - 1.0) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(trace_gram(s, tau), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

Faithfulness is_faithful(const InverseSemigroup& s, const TraceFunctional& tau, double tol) {
  check_consistent(s, tau, tol);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> kes(hs_gram(s));
  const double scale = std::max(1.0, kes.eigenvalues().cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < kes.eigenvalues().size(); ++i) {
    if (kes.eigenvalues()[i] > tol * scale) cols.push_back(i);
  }
  Eigen::MatrixXd q(kes.eigenvectors().rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) q.col(static_cast<Eigen::Index>(j)) = kes.eigenvectors().col(cols[j]);
  const Eigen::MatrixXd g = trace_gram(s, tau);
  const Eigen::MatrixXd restricted = q.transpose() * g * q;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (restricted + restricted.transpose()), Eigen::EigenvaluesOnly);
  Faithfulness f;
  f.margin = es.eigenvalues().size() ? es.eigenvalues().minCoeff() : 0.0;
  f.faithful = f.margin > tol;
  return f;
}

TraceFunctional grpdmin_trace(const InverseSemigroup& s, const GreenClasses& g, GrpdminFormula formula) {
  require_finite(s);
  bool brandt = false;
  try {
    brandt = grpdmin_check(s, g).brandt;
  } catch (const Error&) {
    brandt = false;
  }
  if (!brandt || s.size() < 2) throw Error(ErrorCode::kNotBrandt, "the trace formula needs a Brandt semigroup");
  const auto k = static_cast<double>(s.idempotents().size() - 1);
  TraceFunctional tau;
  tau.coeffs.assign(s.size(), formula == GrpdminFormula::kTracial ? 0.5 : 0.0);
  tau.coeffs[s.zero()] = 0.5;
  for (Index e : s.idempotents()) {
    if (e != s.zero()) tau.coeffs[e] = 1.0 / (2.0 * k) + 0.5;
  }
  return tau;
}

TraceSpace trace_space(const InverseSemigroup& s, double tol) {
  require_finite(s);
  const auto n = static_cast<Eigen::Index>(s.size());
  const auto unit = unit_expansion(s, tol);
  if (!unit) throw Error(ErrorCode::kNotUnital, "the identity is not in span{v_s}");
  std::set<std::pair<Index, Index>> pairs;
  for (Index a = 0; a < s.size(); ++a) {
    for (Index b = 0; b < s.size(); ++b) {
      const Index x = s.mul(a, b), y = s.mul(b, a);
      if (x != y) pairs.emplace(std::min(x, y), std::max(x, y));
    }
  }
  const Eigen::MatrixXd kernel = dependency_kernel(s, tol);
  const auto rows = static_cast<Eigen::Index>(pairs.size()) + kernel.cols() + 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);
  Eigen::Index r = 0;
  for (const auto& [x, y] : pairs) {
    a(r, x) = 1.0;
    a(r, y) = -1.0;
    ++r;
  }
  for (Eigen::Index j = 0; j < kernel.cols(); ++j) a.row(r++) = kernel.col(j).transpose();
  a.row(r) = unit->transpose();
  rhs[r] = 1.0;

  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV | Eigen::ComputeThinU);
  svd.setThreshold(tol);
  TraceSpace out;
  out.particular = svd.solve(rhs);
  if ((a * out.particular - rhs).cwiseAbs().maxCoeff() > 1e-7) {
    throw Error(ErrorCode::kSelfCheckFailed, "trace constraints have no solution");
  }
  const auto rank = svd.rank();
  out.directions = svd.matrixV().rightCols(n - rank);
  return out;
}

TraceFunctional qdnotr_trace(std::size_t k, double rho, double delta) {
  TraceFunctional tau;
  const std::size_t n = k * k + 2;
  tau.coeffs.assign(n, rho);
  for (std::size_t e = 0; e < k; ++e) tau.coeffs[1 + e * k + e] = delta;
  tau.coeffs[n - 1] = 1.0;
  return tau;
}

TraceFunctional qdnotr_character_trace(std::size_t k) { return qdnotr_trace(k, 0.0, 0.0); }

TraceMargin qdnotr_trace_margin(std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kBadTable, "k must be >= 1");
  const InverseSemigroup s = qdnotr_family(k, true);
  const std::size_t n = s.size();
  const Index zero = s.zero(), one = static_cast<Index>(n - 1);
  auto diag = [k](std::size_t e) { return static_cast<Index>(1 + e * k + e); };

  // Positive elements from the argument, as coefficient vectors.
  std::vector<std::vector<long long>> positives;
  std::vector<long long> p0(n, 0), rest(n, 0);
  p0[zero] = 1;
  positives.push_back(p0);
  rest[one] = 1;
  rest[zero] = -1;
  for (std::size_t e = 0; e < k; ++e) {
    std::vector<long long> pe(n, 0);
    pe[diag(e)] = 1;
    pe[zero] = -1;
    positives.push_back(pe);
    rest[diag(e)] -= 1;
    rest[zero] += 1;
  }
  positives.push_back(rest);

  TraceMargin out;
  std::set<std::array<long long, 3>> seen;
  for (const auto& c : positives) {
    SparseOp op(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::array<long long, 3> row{0, 0, 0};  // rho, delta, constant
    for (Index x = 0; x < n; ++x) {
      if (c[x] == 0) continue;
      op += static_cast<double>(c[x]) * left_regular(s, x).matrix;
      const bool diagonal = x != zero && x != one && (x - 1) / k == (x - 1) % k;
      row[x == one ? 2 : diagonal ? 1 : 0] += c[x];
    }
    if (!is_projection(op)) throw Error(ErrorCode::kSelfCheckFailed, "positivity witness is not a projection");
    if (seen.insert(row).second) out.constraints.push_back({Rational(row[0]), Rational(row[1]), Rational(row[2])});
  }

  // Vertices of the feasible polygon.
  bool found = false;
  for (std::size_t i = 0; i < out.constraints.size(); ++i) {
    for (std::size_t j = i + 1; j < out.constraints.size(); ++j) {
      const auto& a = out.constraints[i];
      const auto& b = out.constraints[j];
      const Rational det = a[0] * b[1] - b[0] * a[1];
      if (det == Rational(0)) continue;
      const Rational rho = (-a[2] * b[1] + b[2] * a[1]) / det;
      const Rational delta = (-a[0] * b[2] + b[0] * a[2]) / det;
      const bool feasible = std::all_of(out.constraints.begin(), out.constraints.end(),
                                        [&](const auto& c) { return c[0] * rho + c[1] * delta + c[2] >= Rational(0); });
      if (!feasible) continue;
      const Rational value = delta - rho;
      if (!found || value > out.value) {
        out.value = value;
        out.rho = rho;
        out.delta = delta;
        found = true;
      }
    }
  }
  if (!found) throw Error(ErrorCode::kSelfCheckFailed, "empty trace polygon");
  const TraceFunctional tau = qdnotr_trace(k, to_double(out.rho), to_double(out.delta));
  out.optimizer_is_tracial = is_tracial(s, tau);
  out.optimizer_is_state = is_state(s, tau);
  return out;
}

}  // namespace isgqd
