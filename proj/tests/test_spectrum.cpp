#include "doctest.h"

#include "isgqd/constructions.hpp"
#include "isgqd/error.hpp"
#include "isgqd/green.hpp"
#include "isgqd/spec_io.hpp"
#include "isgqd/spectrum.hpp"
#include "oracles.hpp"

using namespace isgqd;

TEST_SUITE("spectrum_groupoid") {
  TEST_CASE("filters match subset enumeration") {
    for (const auto& name : oracle::catalog_files()) {
      const auto spec = load_spec(oracle::catalog_path(name));
      const auto& s = spec.semi();
      if (s.idempotents().size() > 16) continue;
      CAPTURE(name);
      auto filters = enumerate_spectrum(s);
      std::vector<std::vector<Index>> got;
      for (const auto& f : filters) {
        got.push_back(f.members);
        CHECK(f == principal_filter(s, f.principal_at));
        CHECK(is_filter(s, f.members));
      }
      std::sort(got.begin(), got.end());
      CHECK(got == oracle::brute_force_filters(s));
    }
  }

  TEST_CASE("theta action") {
    const auto s = symmetric_inverse_monoid(2);
    const Index t = *s.find("[2,-]");  // 1 -> 2
    const Index src = s.source(t), rng = s.range(t);
    const Filter at_src = principal_filter(s, src);
    CHECK(theta(s, t, at_src) == principal_filter(s, rng));
    const Filter at_rng = principal_filter(s, rng);
    CHECK_THROWS_AS(theta(s, t, at_rng), Error);
    try {
      theta(s, t, at_rng);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kDomainViolation);
    }
  }

  TEST_CASE("germ counts against existential germ equality") {
    for (const auto& name : oracle::catalog_files()) {
      const auto spec = load_spec(oracle::catalog_path(name));
      const auto& s = spec.semi();
      if (s.size() > 120) continue;
      CAPTURE(name);
      CHECK(enumerate_groupoid(s).size() == oracle::brute_force_germ_count(s));
    }
  }

  TEST_CASE("Brandt groupoids: k filters and k^2 |H| germs") {
    for (std::size_t k = 1; k <= 4; ++k) {
      for (std::size_t order : {1, 2, 3}) {
        const auto s = brandt(cyclic_group(order), k);
        CHECK(enumerate_spectrum(s).size() == k);
        CHECK(enumerate_groupoid(s).size() == k * k * order);
      }
    }
    const auto s = brandt(cyclic_group(3), 4);
    CHECK(enumerate_spectrum(s).size() == 4);
    CHECK(enumerate_groupoid(s).size() == 48);
  }

  TEST_CASE("germ equality is existential, not elementwise") {
    // In a chain 0 < f < e, [e, f^] = [f, f^] although e != f.
    const auto s = InverseSemigroup::from_table({"0", "f", "e"}, {{0, 0, 0}, {0, 1, 1}, {0, 1, 2}}, 0);
    const Filter low = principal_filter(s, 1);
    CHECK(germs_equal_by_definition(s, 2, 1, low));
    CHECK_FALSE(germs_equal_by_definition(s, 2, 1, principal_filter(s, 2)));
    const auto g = germ_canonical(s, 2, low);
    CHECK(g.canonical == 1);
  }

  TEST_CASE("groupoid composition and inverses") {
    const auto s = symmetric_inverse_monoid(3);
    const auto gt = enumerate_groupoid(s);
    for (Index g = 0; g < gt.size(); ++g) {
      const Index inv = gt.inverse(s, g);
      const auto left = gt.compose(s, inv, g);
      REQUIRE(left.has_value());
      CHECK(s.is_idempotent(gt.canonical[*left]));
      CHECK(gt.source[inv] == gt.range[g]);
    }
    const auto j = groupoid_to_json(s, gt);
    CHECK(j.at("format_version") == 1);
    CHECK(j.at("germs").size() == gt.size());
  }

  TEST_CASE("isolation certificates") {
    const auto chain = InverseSemigroup::from_table({"0", "f", "e"}, {{0, 0, 0}, {0, 1, 1}, {0, 1, 2}}, 0);
    const auto c = isolated_certificate(chain, 2);
    CHECK(c.valid);
    CHECK(c.cover == std::vector<Index>{1});
    const auto b = brandt(cyclic_group(2), 2);
    const auto cb = isolated_certificate(b, b.brandt_layout()->index(0, 0, 0));
    CHECK(cb.valid);
    CHECK(cb.cover == std::vector<Index>{b.zero()});
    const auto spec = load_spec(oracle::catalog_path("tower_free_group"));
    const auto ct = isolated_certificate(spec.semi(), spec.semi().idempotents().back());
    REQUIRE(ct.limit_level_has_finite_cover.has_value());
    CHECK_FALSE(*ct.limit_level_has_finite_cover);
  }

  TEST_CASE("minimality") {
    CHECK(is_minimal(brandt(cyclic_group(3), 4)));
    CHECK_FALSE(is_minimal(symmetric_inverse_monoid(3)));
    CHECK_FALSE(is_minimal(qdnotr_family(3, true)));
    CHECK(is_minimal(qdnotr_family(3, false)));
  }

  TEST_CASE("structure characterizations agree on the catalog") {
    for (const auto& name : oracle::catalog_files()) {
      const auto spec = load_spec(oracle::catalog_path(name));
      CAPTURE(name);
      const auto r = grpdmin_check(spec.semi());
      CHECK(r.minimal == r.bisimple_and_order);
      CHECK(r.minimal == r.brandt);
      const bool expect = spec.type == "brandt" || (spec.type == "qdnotr" && !spec.semi().unit()) ||
                          name == "semilattice_two" || name == "tower_free_group";
      CHECK(r.brandt == expect);
    }
  }

  TEST_CASE("the one-element semigroup is vacuously Brandt") {
    const auto s = InverseSemigroup::from_table({"0"}, {{0}}, 0);
    const auto r = grpdmin_check(s);
    CHECK(r.minimal);
    CHECK(r.brandt);
  }
}
