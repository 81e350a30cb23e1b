#include "doctest.h"

#include <cmath>

#include "isgqd/constructions.hpp"
#include "isgqd/error.hpp"
#include "isgqd/green.hpp"
#include "isgqd/operators.hpp"
#include "isgqd/spec_io.hpp"
#include "isgqd/traces.hpp"
#include "oracles.hpp"

using namespace isgqd;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kSelfCheckFailed;
}

GroupTable symmetric3() { return group_from_permutations({{1, 0, 2}, {1, 2, 0}}); }

}  // namespace

TEST_SUITE("traces") {
  TEST_CASE("grpdmin trace on the two-element Brandt semigroup") {
    const auto s = brandt(trivial_group(), 1);
    const auto tau = grpdmin_trace(s, green_partition(s));
    CHECK(tau.coeffs[s.zero()] == 0.5);
    CHECK(tau.coeffs[1] == 1.0);
    CHECK(is_tracial(s, tau));
    CHECK(is_state(s, tau));
    const auto f = is_faithful(s, tau);
    CHECK(f.faithful);
    // Gram [[1/2, 1/2], [1/2, 1]] has smallest eigenvalue (3 - sqrt 5)/4.
    CHECK(f.margin == doctest::Approx((3.0 - std::sqrt(5.0)) / 4.0).epsilon(1e-12));
  }

  TEST_CASE("grpdmin trace is a faithful tracial state for k <= 8, |H| <= 6") {
    const std::vector<GroupTable> groups{trivial_group(), cyclic_group(2), cyclic_group(3), symmetric3()};
    for (const auto& h : groups) {
      for (std::size_t k = 1; k <= 8; ++k) {
        CAPTURE(k);
        CAPTURE(h.size());
        const auto s = brandt(h, k);
        const auto g = green_partition(s);
        const auto tau = grpdmin_trace(s, g);
        CHECK(is_tracial(s, tau));
        CHECK(is_state(s, tau));
        const auto f = is_faithful(s, tau);
        CHECK(f.faithful);
        CHECK(f.margin > 0.0);
        const Index e = s.brandt_layout()->index(0, 0, 0);
        CHECK(tau.coeffs[e] - tau.coeffs[s.zero()] == doctest::Approx(1.0 / (2.0 * k)));
        CHECK(tau_of_one(s, tau) == doctest::Approx(1.0));
      }
    }
  }

  TEST_CASE("the formula as printed is not tracial once k >= 2") {
    const auto s = brandt(trivial_group(), 2);
    const auto g = green_partition(s);
    const auto printed = grpdmin_trace(s, g, GrpdminFormula::kAsPrinted);
    CHECK_FALSE(is_tracial(s, printed));
    // s = (1,1,2), t = (1,1,1): st = 0 but ts = s.
    const auto& layout = *s.brandt_layout();
    const Index a = layout.index(0, 0, 1), b = layout.index(0, 0, 0);
    CHECK(s.mul(a, b) == s.zero());
    CHECK(s.mul(b, a) == a);
    CHECK(printed.coeffs[s.mul(a, b)] != printed.coeffs[s.mul(b, a)]);
    const auto one = brandt(trivial_group(), 1);
    CHECK(is_tracial(one, grpdmin_trace(one, green_partition(one), GrpdminFormula::kAsPrinted)));
  }

  TEST_CASE("grpdmin trace needs a Brandt semigroup") {
    const auto i3 = symmetric_inverse_monoid(3);
    CHECK(code_of([&] { grpdmin_trace(i3, green_partition(i3)); }) == ErrorCode::kNotBrandt);
  }

  TEST_CASE("traciality on commutative semigroups is automatic") {
    const auto s = InverseSemigroup::from_table({"0", "ef", "e", "f"},
                                                {{0, 0, 0, 0}, {0, 1, 1, 1}, {0, 1, 2, 1}, {0, 1, 1, 3}}, 0);
    TraceFunctional tau{{0.3, -1.0, 2.0, 0.7}};
    CHECK(is_tracial(s, tau));
  }

  TEST_CASE("zero functional is not a state") {
    const auto s = brandt(cyclic_group(2), 2);
    CHECK_FALSE(is_state(s, TraceFunctional{std::vector<double>(s.size(), 0.0)}));
  }

  TEST_CASE("canonical trace on a group with zero") {
    const auto s = brandt(cyclic_group(2), 1);
    // The unit indicator is tracial and a state but kills v_0.
    TraceFunctional indicator{std::vector<double>(s.size(), 0.0)};
    indicator.coeffs[s.brandt_layout()->index(0, 0, 0)] = 1.0;
    CHECK(is_tracial(s, indicator));
    CHECK_FALSE(is_faithful(s, indicator).faithful);
    const auto tau = grpdmin_trace(s, green_partition(s));
    CHECK(is_tracial(s, tau));
    CHECK(is_state(s, tau));
    CHECK(is_faithful(s, tau).faithful);
  }

  TEST_CASE("trace spaces") {
    for (std::size_t k = 1; k <= 6; ++k) {
      const auto s = qdnotr_family(k, true);
      const auto space = trace_space(s);
      CAPTURE(k);
      CHECK(space.dimension() == 2);
      // Every solution is constant on off-diagonal pairs and the zero.
      for (Eigen::Index c = 0; c < space.directions.cols(); ++c) {
        const auto& v = space.directions.col(c);
        for (std::size_t f = 0; f < k; ++f) {
          for (std::size_t e = 0; e < k; ++e) {
            const Index x = static_cast<Index>(1 + f * k + e);
            if (f != e) CHECK(v[x] == doctest::Approx(v[s.zero()]).epsilon(1e-9));
            if (f == e) CHECK(v[x] == doctest::Approx(v[1]).epsilon(1e-9));
          }
        }
      }
    }
    // Abelian: every normalized functional is tracial.
    const auto chain = InverseSemigroup::from_table({"0", "f", "e"}, {{0, 0, 0}, {0, 1, 1}, {0, 1, 2}}, 0);
    CHECK(trace_space(chain).dimension() == 2);
    // Group S3 with zero: one value per conjugacy class plus the zero, minus normalization.
    CHECK(trace_space(brandt(symmetric3(), 1)).dimension() == 3);
    CHECK(code_of([] { trace_space(brandt(integer_window(3), 1)); }) == ErrorCode::kUnsupported);
  }

  TEST_CASE("finite semigroups always expand the identity") {
    // The v_e are commuting projections closed under products whose ranges
    // cover l2(S), so inclusion-exclusion writes 1 in their span.
    for (const auto& name : oracle::catalog_files()) {
      const auto spec = load_spec(oracle::catalog_path(name));
      const auto& s = spec.semi();
      if (s.windowed()) continue;
      CAPTURE(name);
      const auto a = unit_expansion(s);
      REQUIRE(a.has_value());
      SparseOp sum(static_cast<Eigen::Index>(s.size()), static_cast<Eigen::Index>(s.size()));
      for (Index x = 0; x < s.size(); ++x) {
        if ((*a)[x] != 0.0) sum += (*a)[x] * left_regular(s, x).matrix;
      }
      CHECK((Eigen::MatrixXd(sum) - Eigen::MatrixXd::Identity(s.size(), s.size())).cwiseAbs().maxCoeff() < 1e-9);
    }
    // Brandt: 1 = sum_e v_(e,1,e) - (k - 1) v_0.
    const auto b = brandt(trivial_group(), 3);
    const auto a = *unit_expansion(b);
    CHECK(a[b.zero()] == doctest::Approx(-2.0));
  }

  TEST_CASE("qdnotr margin is exactly 1/k") {
    for (std::size_t k = 1; k <= 8; ++k) {
      CAPTURE(k);
      const auto m = qdnotr_trace_margin(k);
      CHECK(m.value == Rational(1, static_cast<long long>(k)));
      CHECK(m.rho == Rational(0));
      CHECK(m.optimizer_is_state);
      CHECK(m.optimizer_is_tracial);
      // The canonical trace on the non-unital part stays below the margin.
      CHECK(1.0 / (2.0 * k) <= static_cast<double>(m.value.numerator()) / m.value.denominator());
    }
  }

  TEST_CASE("the character trace on qdnotr is tracial, a state, and not faithful") {
    for (std::size_t k = 1; k <= 5; ++k) {
      const auto s = qdnotr_family(k, true);
      const auto ch = qdnotr_character_trace(k);
      CHECK(is_tracial(s, ch));
      CHECK(is_state(s, ch));
      CHECK_FALSE(is_faithful(s, ch).faithful);
      // Vanishes on T: the Gram form is zero on span{v_t : t in T}.
      const auto g = trace_gram(s, ch);
      for (Index a = 0; a + 1 < s.size(); ++a) {
        for (Index b = 0; b + 1 < s.size(); ++b) CHECK(g(a, b) == 0.0);
      }
    }
  }

  TEST_CASE("tracial states with delta = rho = 0 vanish on T") {
    const auto s = qdnotr_family(4, true);
    const auto tau = qdnotr_trace(4, 0.0, 0.0);
    for (Index a = 0; a + 1 < s.size(); ++a) CHECK(tau.coeffs[a] == 0.0);
    CHECK(is_state(s, tau));
  }

  TEST_CASE("inconsistent functionals on dependent spanning sets") {
    // The regular representation of a finite inverse semigroup is faithful on
    // the semigroup algebra, so the kernel is empty and every functional passes.
    const auto s = symmetric_inverse_monoid(1);
    CHECK(dependency_kernel(s).cols() == 0);
    check_consistent(s, TraceFunctional{{1.0, 2.0}});
  }
}
