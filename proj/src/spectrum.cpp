#include "isgqd/spectrum.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "isgqd/error.hpp"

namespace isgqd {

namespace {

constexpr std::size_t kBruteForceFilterLimit = 12;
constexpr std::size_t kGermEqualityCheckLimit = 300;
constexpr std::size_t kFullAssociativityGerms = 200;
constexpr std::size_t kSampledTriples = 200000;

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

std::vector<Index> nonzero_idempotents(const InverseSemigroup& s) {
  std::vector<Index> out;
  for (Index e : s.idempotents()) {
    if (e != s.zero()) out.push_back(e);
  }
  return out;
}

bool leq_idempotent(const InverseSemigroup& s, Index e, Index f) { return s.mul(e, f) == e; }

/// The minimum of a finite filter, if it has one.
std::optional<Index> minimum_of(const InverseSemigroup& s, const std::vector<Index>& members) {
  for (Index m : members) {
    if (std::all_of(members.begin(), members.end(), [&](Index x) { return leq_idempotent(s, m, x); })) return m;
  }
  return std::nullopt;
}

}  // namespace

bool Filter::contains(Index e) const { return std::binary_search(members.begin(), members.end(), e); }

Filter principal_filter(const InverseSemigroup& s, Index e) {
  if (e >= s.size() || !s.is_idempotent(e) || e == s.zero()) {
    throw Error(ErrorCode::kNotIdempotent, "principal filters sit at non-zero idempotents");
  }
  Filter f;
  f.principal_at = e;
  for (Index x : nonzero_idempotents(s)) {
    if (leq_idempotent(s, e, x)) f.members.push_back(x);
  }
  return f;
}

bool is_filter(const InverseSemigroup& s, const std::vector<Index>& members) {
  if (members.empty()) return false;
  std::set<Index> set(members.begin(), members.end());
  for (Index m : members) {
    if (m == s.zero() || !s.is_idempotent(m)) return false;
    for (Index f : s.idempotents()) {
      if (leq_idempotent(s, m, f) && !set.count(f)) return false;
    }
    for (Index m2 : members) {
      if (!set.count(s.mul(m, m2))) return false;
    }
  }
  return true;
}

std::vector<Filter> enumerate_spectrum(const InverseSemigroup& s) {
  const auto ids = nonzero_idempotents(s);
  std::vector<Filter> out;
  for (Index e : ids) {
    Filter f = principal_filter(s, e);
    if (!is_filter(s, f.members) || minimum_of(s, f.members) != e) {
      throw Error(ErrorCode::kSelfCheckFailed, "principal set at " + s.label(e) + " is not a filter");
    }
    out.push_back(std::move(f));
  }
  // A finite filter contains the product of its members, which is then its
  // minimum. Small semilattices are also searched exhaustively.
  if (ids.size() <= kBruteForceFilterLimit) {
    std::size_t count = 0;
    for (std::uint32_t mask = 1; mask < (1u << ids.size()); ++mask) {
      std::vector<Index> members;
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (mask & (1u << i)) members.push_back(ids[i]);
      }
      if (!is_filter(s, members)) continue;
      ++count;
      if (!minimum_of(s, members)) throw Error(ErrorCode::kSelfCheckFailed, "found a non-principal filter");
    }
    if (count != out.size()) throw Error(ErrorCode::kSelfCheckFailed, "filter count differs from |E| - 1");
  }
  return out;
}

IsolationCertificate isolated_certificate(const InverseSemigroup& s, Index e) {
  if (e >= s.size() || !s.is_idempotent(e) || e == s.zero()) {
    throw Error(ErrorCode::kNotIdempotent, "isolation needs a non-zero idempotent");
  }
  IsolationCertificate c;
  c.e = e;
  std::vector<Index> below;
  for (Index f : s.idempotents()) {
    if (f != e && leq_idempotent(s, f, e)) below.push_back(f);
  }
  for (Index f : below) {
    const bool maximal = std::none_of(below.begin(), below.end(),
                                      [&](Index g) { return g != f && leq_idempotent(s, f, g); });
    if (maximal) c.cover.push_back(f);
  }
  c.valid = std::all_of(below.begin(), below.end(), [&](Index f) {
    return std::any_of(c.cover.begin(), c.cover.end(), [&](Index g) { return leq_idempotent(s, f, g); });
  });
  if (const auto& chain = s.chain_layout(); chain && chain->has_limit_level && !chain->level_units.empty()) {
    c.limit_level_has_finite_cover = false;
  }
  return c;
}

Filter theta(const InverseSemigroup& s, Index elem, const Filter& xi) {
  if (!xi.contains(s.source(elem))) {
    throw Error(ErrorCode::kDomainViolation, "s*s of " + s.label(elem) + " is not in the filter");
  }
  std::vector<Index> images;
  for (Index f : xi.members) {
    const Index t = s.mul(elem, f, s.star(elem));
    if (t != kUndefined) images.push_back(t);
  }
  Filter out;
  for (Index e : nonzero_idempotents(s)) {
    if (std::any_of(images.begin(), images.end(), [&](Index t) { return leq_idempotent(s, t, e); })) {
      out.members.push_back(e);
    }
  }
  const auto least = minimum_of(s, out.members);
  if (out.members.empty() || !least) throw Error(ErrorCode::kSelfCheckFailed, "theta left the spectrum");
  out.principal_at = *least;
  return out;
}

Germ germ_canonical(const InverseSemigroup& s, Index elem, const Filter& xi) {
  if (!xi.contains(s.source(elem))) {
    throw Error(ErrorCode::kDomainViolation, "germ of " + s.label(elem) + " outside its domain");
  }
  return Germ{elem, xi, s.mul(elem, xi.principal_at)};
}

bool germs_equal_by_definition(const InverseSemigroup& s, Index a, Index b, const Filter& xi) {
  return std::any_of(xi.members.begin(), xi.members.end(), [&](Index e) {
    const Index x = s.mul(a, e);
    return x != kUndefined && x == s.mul(b, e);
  });
}

std::optional<Index> GroupoidTable::compose(const InverseSemigroup& s, Index g, Index h) const {
  if (source[g] != range[h]) return std::nullopt;
  const Index c = s.mul(canonical[g], canonical[h]);
  if (c == kUndefined) return std::nullopt;
  return germ_of[c];
}

GroupoidTable enumerate_groupoid(const InverseSemigroup& s) {
  GroupoidTable t;
  t.units = enumerate_spectrum(s);
  t.unit_of.assign(s.size(), kUndefined);
  for (Index u = 0; u < t.units.size(); ++u) t.unit_of[t.units[u].principal_at] = u;
  t.germ_of.assign(s.size(), kUndefined);

  for (Index u = 0; u < t.units.size(); ++u) {
    const Filter& xi = t.units[u];
    std::vector<Index> domain, reps;
    for (Index x = 0; x < s.size(); ++x) {
      if (xi.contains(s.source(x))) domain.push_back(x);
    }
    for (Index x : domain) {
      const Index c = germ_canonical(s, x, xi).canonical;
      if (c == kUndefined) continue;
      reps.push_back(c);
      if (t.germ_of[c] == kUndefined) {
        if (s.source(c) != xi.principal_at) {
          throw Error(ErrorCode::kSelfCheckFailed, "canonical germ representative has the wrong source");
        }
        t.germ_of[c] = static_cast<Index>(t.canonical.size());
        t.canonical.push_back(c);
        t.source.push_back(u);
        const Filter r = theta(s, c, xi);
        t.range.push_back(t.unit_of[r.principal_at]);
        if (r.principal_at != s.range(c)) throw Error(ErrorCode::kSelfCheckFailed, "theta disagrees with ss*");
      }
    }
    if (s.size() <= kGermEqualityCheckLimit) {
      for (std::size_t i = 0; i < domain.size(); ++i) {
        for (std::size_t j = i + 1; j < domain.size(); ++j) {
          const bool canonical_equal = reps[i] == reps[j];
          if (canonical_equal != germs_equal_by_definition(s, domain[i], domain[j], xi)) {
            throw Error(ErrorCode::kSelfCheckFailed, "germ equality of " + s.label(domain[i]) + " and " +
                                                         s.label(domain[j]) + " differs from its canonical form");
          }
        }
      }
    }
  }

  // Groupoid axioms.
  const std::size_t n = t.size();
  std::vector<std::vector<Index>> by_range(t.units.size()), by_source(t.units.size());
  for (Index g = 0; g < n; ++g) {
    by_range[t.range[g]].push_back(g);
    by_source[t.source[g]].push_back(g);
  }
  for (Index g = 0; g < n; ++g) {
    const Index inv = t.inverse(s, g);
    if (t.source[inv] != t.range[g] || t.range[inv] != t.source[g]) {
      throw Error(ErrorCode::kSelfCheckFailed, "inverse germ swaps the wrong units");
    }
    const auto left = t.compose(s, inv, g);
    if (left && t.canonical[*left] != t.units[t.source[g]].principal_at) {
      throw Error(ErrorCode::kSelfCheckFailed, "g^-1 g is not the source unit");
    }
  }
  auto check_triple = [&](Index a, Index b, Index c) {
    const auto bc = t.compose(s, b, c);
    const auto ab = t.compose(s, a, b);
    if (!bc || !ab) return;
    const auto l = t.compose(s, a, *bc);
    const auto r = t.compose(s, *ab, c);
    if (l && r && *l != *r) throw Error(ErrorCode::kSelfCheckFailed, "germ composition is not associative");
    if (l && (t.source[*l] != t.source[c] || t.range[*l] != t.range[a])) {
      throw Error(ErrorCode::kSelfCheckFailed, "germ composition has the wrong source or range");
    }
  };
  if (n <= kFullAssociativityGerms) {
    for (Index b = 0; b < n; ++b) {
      for (Index c : by_range[t.source[b]]) {
        for (Index a : by_source[t.range[b]]) check_triple(a, b, c);
      }
    }
  } else if (n > 0) {
    std::mt19937_64 rng(0x5eedf00dULL);
    for (std::size_t i = 0; i < kSampledTriples; ++i) {
      const Index b = static_cast<Index>(rng() % n);
      const auto& cs = by_range[t.source[b]];
      const Index c = cs[rng() % cs.size()];
      const auto& as = by_source[t.range[b]];
      check_triple(as[rng() % as.size()], b, c);
    }
  }
  return t;
}

nlohmann::json groupoid_to_json(const InverseSemigroup& s, const GroupoidTable& g) {
  nlohmann::json units = nlohmann::json::array();
  for (Index u = 0; u < g.units.size(); ++u) {
    nlohmann::json members = nlohmann::json::array();
    for (Index m : g.units[u].members) members.push_back(s.label(m));
    units.push_back({{"id", u}, {"principal", s.label(g.units[u].principal_at)}, {"members", members}});
  }
  nlohmann::json germs = nlohmann::json::array();
  for (Index i = 0; i < g.size(); ++i) {
    germs.push_back({{"id", i}, {"canonical", s.label(g.canonical[i])}, {"source", g.source[i]}, {"range", g.range[i]}});
  }
  return {{"format_version", 1}, {"unit_count", g.units.size()}, {"germ_count", g.size()},
          {"units", units},      {"germs", germs}};
}

std::vector<std::vector<Index>> unit_orbits(const GroupoidTable& g) {
  UnionFind uf(g.units.size());
  for (Index i = 0; i < g.size(); ++i) uf.unite(g.source[i], g.range[i]);
  std::map<std::size_t, std::vector<Index>> orbits;
  for (Index u = 0; u < g.units.size(); ++u) orbits[uf.find(u)].push_back(u);
  std::vector<std::vector<Index>> out;
  for (auto& [root, members] : orbits) out.push_back(std::move(members));
  return out;
}

bool is_minimal(const InverseSemigroup& s) { return unit_orbits(enumerate_groupoid(s)).size() <= 1; }

namespace {

/// Condition (4): Phi(s) = (ss*, phi(s), s*s) is an isomorphism onto the
/// Brandt semigroup over the subgroup at the smallest non-zero idempotent.
std::optional<std::string> brandt_failure(const InverseSemigroup& s, const GreenClasses& g, StructureReport& r) {
  const auto ids = nonzero_idempotents(s);
  if (ids.empty()) {
    if (s.size() == 1) {
      r.group = trivial_group();
      return std::nullopt;
    }
    return "no non-zero idempotent";
  }
  const Index e0 = ids.front();
  r.base_idempotent = e0;
  const auto d = g.d_class[e0];
  for (Index x = 0; x < s.size(); ++x) {
    if (x != s.zero() && g.d_class[x] != d) return "element " + s.label(x) + " lies outside the D-class of " + s.label(e0);
  }
  const auto& sub = g.subgroup_at(e0);
  r.group = sub.table;
  std::vector<Index> group_index(s.size(), kUndefined);
  for (Index i = 0; i < sub.elements.size(); ++i) group_index[sub.elements[i]] = i;
  std::vector<Index> id_pos(s.size(), kUndefined);
  for (Index i = 0; i < ids.size(); ++i) id_pos[ids[i]] = i;

  const HClassBijection bij = hclass_bijection(s, g, e0);
  const std::size_t k = ids.size(), h = sub.table.size();
  if (s.size() - 1 != k * k * h) return "size is not k^2 |H| + 1";
  std::vector<std::uint64_t> phi(s.size(), 0);
  std::set<std::uint64_t> seen;
  for (Index x = 0; x < s.size(); ++x) {
    if (x == s.zero()) continue;
    if (bij.image[x] == kUndefined || group_index[bij.image[x]] == kUndefined) {
      return "no subgroup image for " + s.label(x);
    }
    phi[x] = (static_cast<std::uint64_t>(id_pos[s.range(x)]) * h + group_index[bij.image[x]]) * k + id_pos[s.source(x)];
    if (!seen.insert(phi[x]).second) return "Phi is not injective at " + s.label(x);
  }
  for (Index a = 0; a < s.size(); ++a) {
    if (a == s.zero()) continue;
    for (Index b = 0; b < s.size(); ++b) {
      if (b == s.zero()) continue;
      const Index ab = s.mul(a, b);
      if (ab == kUndefined) continue;
      if (s.source(a) != s.range(b)) {
        if (ab != s.zero()) return "product " + s.label(a) + " " + s.label(b) + " should be zero";
        continue;
      }
      const Index hh = sub.table.mul(group_index[bij.image[a]], group_index[bij.image[b]]);
      if (hh == kUndefined) continue;
      const std::uint64_t want = (static_cast<std::uint64_t>(id_pos[s.range(a)]) * h + hh) * k + id_pos[s.source(b)];
      if (ab == s.zero() || phi[ab] != want) return "Phi is not multiplicative at " + s.label(a) + " " + s.label(b);
    }
  }
  return std::nullopt;
}

}  // namespace

StructureReport grpdmin_check(const InverseSemigroup& s) { return grpdmin_check(s, green_partition(s)); }

StructureReport grpdmin_check(const InverseSemigroup& s, const GreenClasses& g) {
  StructureReport r;
  r.num_d_classes = g.num_d;
  r.nonzero_idempotents = nonzero_idempotents(s).size();
  r.minimal = unit_orbits(enumerate_groupoid(s)).size() <= 1;
  r.zero_bisimple = is_0_bisimple(s, g);
  r.order_equality = order_equality_on_dclasses(s, g).holds;
  r.bisimple_and_order = r.zero_bisimple && r.order_equality;
  r.brandt_failure = brandt_failure(s, g, r);
  r.brandt = !r.brandt_failure;
  for (const auto& m : g.max_subgroups) r.subgroups_amenable = r.subgroups_amenable && m.table.amenable();
  if (r.minimal && r.subgroups_amenable) r.qd_by_minimality = true;
  if (r.minimal != r.bisimple_and_order || r.minimal != r.brandt) {
    throw Error(ErrorCode::kInconsistentEquivalence,
                std::string("minimal=") + (r.minimal ? "true" : "false") +
                    " bisimple_and_order=" + (r.bisimple_and_order ? "true" : "false") +
                    " brandt=" + (r.brandt ? "true" : "false"));
  }
  return r;
}

nlohmann::json structure_to_json(const StructureReport& r) {
  nlohmann::json j = {{"minimal", r.minimal},
                      {"zero_bisimple", r.zero_bisimple},
                      {"order_equality", r.order_equality},
                      {"bisimple_and_order_equality", r.bisimple_and_order},
                      {"brandt", r.brandt},
                      {"d_classes", r.num_d_classes},
                      {"nonzero_idempotents", r.nonzero_idempotents},
                      {"subgroups_amenable", r.subgroups_amenable},
                      {"verdicts_agree", true}};
  if (r.brandt_failure) j["brandt_failure"] = *r.brandt_failure;
  if (r.group) j["subgroup_order"] = r.group->size();
  j["qd_by_minimality"] = r.qd_by_minimality ? nlohmann::json(*r.qd_by_minimality) : nlohmann::json(nullptr);
  return j;
}

}  // namespace isgqd
