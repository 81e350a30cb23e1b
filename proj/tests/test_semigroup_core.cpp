#include "doctest.h"

#include <algorithm>

#include "isgqd/constructions.hpp"
#include "isgqd/error.hpp"
#include "isgqd/green.hpp"
#include "isgqd/semigroup.hpp"
#include "isgqd/spec_io.hpp"
#include "oracles.hpp"

using namespace isgqd;

namespace {

InverseSemigroup chain3() {
  return InverseSemigroup::from_table({"0", "f", "e"}, {{0, 0, 0}, {0, 1, 1}, {0, 1, 2}}, 0);
}

Index find_map(const InverseSemigroup& s, const std::string& label) {
  const auto i = s.find(label);
  REQUIRE(i.has_value());
  return *i;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kSelfCheckFailed;
}

}  // namespace

TEST_SUITE("semigroup_core") {
  TEST_CASE("two-element semilattice is its own inverse") {
    const auto s = InverseSemigroup::from_table({"0", "e"}, {{0, 0}, {0, 1}}, 0);
    CHECK(s.size() == 2);
    CHECK(s.star(0) == 0);
    CHECK(s.star(1) == 1);
    CHECK(s.idempotents() == std::vector<Index>{0, 1});
  }

  TEST_CASE("table errors") {
    // Left-zero band {0} u {a, b}: ab = a, ba = b. Both a and b are inverses of a.
    CHECK(code_of([] {
            InverseSemigroup::from_table({"0", "a", "b"}, {{0, 0, 0}, {0, 1, 1}, {0, 2, 2}}, 0);
          }) == ErrorCode::kNoUniqueInverse);
    CHECK(code_of([] { InverseSemigroup::from_table({"0", "e"}, {{0, 0}, {0, 1}}, 1); }) == ErrorCode::kBadZero);
    CHECK(code_of([] { InverseSemigroup::from_table({"0", "e"}, {{0, 0}}, 0); }) == ErrorCode::kBadTable);
    // x*x = 0 for x in {1, 2} and 1*2 = 1, 2*1 = 2: (1*2)*2 = 1*2 = 1 but 1*(2*2) = 0.
    CHECK(code_of([] {
            InverseSemigroup::from_table({"0", "x", "y"}, {{0, 0, 0}, {0, 0, 1}, {0, 2, 0}}, 0);
          }) == ErrorCode::kNotAssociative);
  }

  TEST_CASE("symmetric inverse monoid on two points matches brute force") {
    const auto s = symmetric_inverse_monoid(2);
    const auto maps = oracle::all_partial_bijections(2);
    CHECK(s.size() == maps.size());
    CHECK(s.size() == 7);
    CHECK(s.idempotents().size() == 4);
    CHECK(oracle::idempotents(s) == s.idempotents());
    for (Index a = 0; a < s.size(); ++a) CHECK(oracle::inverse_by_search(s, a) == s.star(a));
  }

  TEST_CASE("idempotent counts") {
    const auto b = brandt(cyclic_group(2), 2);
    CHECK(b.size() == 9);
    CHECK(b.idempotents().size() == 3);
    CHECK(symmetric_inverse_monoid(3).idempotents().size() == 8);
    const auto sq = InverseSemigroup::from_table({"0", "ef", "e", "f"},
                                                 {{0, 0, 0, 0}, {0, 1, 1, 1}, {0, 1, 2, 1}, {0, 1, 1, 3}}, 0);
    CHECK(sq.idempotents().size() == 4);
  }

  TEST_CASE("natural order") {
    const auto s = symmetric_inverse_monoid(2);
    const Index id = find_map(s, "[1,2]");
    const Index one = find_map(s, "[1,-]");
    CHECK(natural_leq(s, one, id));
    CHECK_FALSE(natural_leq(s, id, one));
    for (Index t = 0; t < s.size(); ++t) CHECK(natural_leq(s, s.zero(), t));
    for (Index e : s.idempotents()) {
      for (Index f : s.idempotents()) CHECK(natural_leq(s, e, f) == (s.mul(e, f) == e));
    }
    const auto order = natural_order(s);
    for (Index a = 0; a < s.size(); ++a) {
      CHECK(order(a, a));
      for (Index b = 0; b < s.size(); ++b) {
        if (a != b && order(a, b)) CHECK_FALSE(order(b, a));
        for (Index c = 0; c < s.size(); ++c) {
          if (order(a, b) && order(b, c)) CHECK(order(a, c));
        }
        if (order(a, b)) {
          CHECK(order(s.star(a), s.star(b)));
          for (Index u = 0; u < s.size(); ++u) CHECK(order(s.mul(u, a), s.mul(u, b)));
        }
      }
    }
  }

  TEST_CASE("Green's relations agree with ideal-based definitions") {
    for (const auto& name : oracle::catalog_files()) {
      const auto spec = load_spec(oracle::catalog_path(name));
      const auto& s = spec.semi();
      if (s.windowed()) continue;
      CAPTURE(name);
      const auto g = green_partition(s);
      CHECK(oracle::same_partition(g.l_class, oracle::l_classes(s)));
      CHECK(oracle::same_partition(g.r_class, oracle::r_classes(s)));
      CHECK(oracle::same_partition(g.d_class, oracle::j_classes(s)));
      for (const auto& sub : g.max_subgroups) validate_group(sub.table);
    }
  }

  TEST_CASE("symmetric inverse monoid on two points: D-classes by rank") {
    const auto s = symmetric_inverse_monoid(2);
    const auto g = green_partition(s);
    CHECK(g.num_d == 3);
    const auto maps = oracle::all_partial_bijections(2);
    for (Index a = 0; a < s.size(); ++a) {
      for (Index b = 0; b < s.size(); ++b) {
        const auto count_defined = [&](Index x) {
          return std::count(s.label(x).begin(), s.label(x).end(), '-');
        };
        CHECK((g.d_class[a] == g.d_class[b]) == (count_defined(a) == count_defined(b)));
      }
    }
    const Index one = find_map(s, "[1,-]");
    const auto d = g.d_class[one];
    CHECK(g.d_members[d].size() == 4);
    CHECK(g.d_idempotents[d].size() == 2);
    std::set<std::uint32_t> hs;
    for (Index x : g.d_members[d]) hs.insert(g.h_class[x]);
    CHECK(hs.size() == 4);
  }

  TEST_CASE("Clifford semigroups have L = R = H = D") {
    const auto spec = load_spec(oracle::catalog_path("clifford_chain_z4"));
    const auto g = green_partition(spec.semi());
    CHECK(oracle::same_partition(g.l_class, g.d_class));
    CHECK(oracle::same_partition(g.r_class, g.d_class));
    CHECK(oracle::same_partition(g.h_class, g.d_class));
  }

  TEST_CASE("group with zero has one non-zero D-class equal to the group") {
    const auto s = brandt(cyclic_group(5), 1);
    const auto g = green_partition(s);
    CHECK(g.num_d == 2);
    CHECK(g.num_h == 2);
    CHECK(g.d_members[g.d_class[1]].size() == 5);
  }

  TEST_CASE("H-class bijection on Brandt semigroups") {
    const auto s = brandt(cyclic_group(3), 3);
    const auto g = green_partition(s);
    const auto& layout = *s.brandt_layout();
    const Index e0 = layout.index(0, 0, 0);
    const auto bij = hclass_bijection(s, g, e0);
    CHECK(bij.connector[e0] == e0);
    CHECK(verify_hclass_bijection(s, g, bij));
    for (std::size_t f = 0; f < 3; ++f) {
      for (Index h = 0; h < 3; ++h) {
        for (std::size_t e = 0; e < 3; ++e) {
          // (e0,1,f)(f,h,e)(e,1,e0) = (e0,h,e0).
          const Index oracle_image =
              s.mul(s.mul(layout.index(0, 0, f), layout.index(f, h, e)), layout.index(e, 0, 0));
          CHECK(bij.image[layout.index(f, h, e)] == oracle_image);
          CHECK(oracle_image == layout.index(0, h, 0));
        }
      }
    }
  }

  TEST_CASE("H-class bijection on the rank-2 class of I3 is the identity on S2") {
    const auto s = symmetric_inverse_monoid(3);
    const auto g = green_partition(s);
    const Index e0 = find_map(s, "[1,2,-]");
    const auto bij = hclass_bijection(s, g, e0);
    CHECK(verify_hclass_bijection(s, g, bij));
    const Index swap = find_map(s, "[2,1,-]");
    CHECK(bij.image[e0] == e0);
    CHECK(bij.image[swap] == swap);
    CHECK(code_of([&] { hclass_bijection(s, g, swap); }) == ErrorCode::kNotIdempotent);
  }

  TEST_CASE("order equality on D-classes and 0-bisimplicity") {
    for (const auto& name : oracle::catalog_files()) {
      const auto spec = load_spec(oracle::catalog_path(name));
      const auto g = green_partition(spec.semi());
      CAPTURE(name);
      const auto r = order_equality_on_dclasses(spec.semi(), g);
      CHECK(r.holds);
      CHECK_FALSE(r.witness.has_value());
    }
    CHECK(is_0_bisimple(brandt(cyclic_group(3), 4), green_partition(brandt(cyclic_group(3), 4))));
    const auto i3 = symmetric_inverse_monoid(3);
    CHECK_FALSE(is_0_bisimple(i3, green_partition(i3)));
    CHECK(green_partition(i3).num_d == 4);
    const auto two = InverseSemigroup::from_table({"0", "e"}, {{0, 0}, {0, 1}}, 0);
    CHECK(is_0_bisimple(two, green_partition(two)));
    CHECK(order_equality_on_dclasses(chain3(), green_partition(chain3())).holds);
  }

  TEST_CASE("H-class multiplication facts hold on the catalog") {
    for (const auto& name : oracle::catalog_files()) {
      const auto spec = load_spec(oracle::catalog_path(name));
      CAPTURE(name);
      const auto failure = check_hclass_multiplication(spec.semi(), green_partition(spec.semi()));
      CHECK_FALSE(failure.has_value());
    }
  }

  TEST_CASE("inverse laws") {
    const auto s = symmetric_inverse_monoid(3);
    for (Index a = 0; a < s.size(); ++a) {
      CHECK(s.star(s.star(a)) == a);
      CHECK(s.is_idempotent(s.source(a)));
      CHECK(s.is_idempotent(s.range(a)));
    }
  }
}
