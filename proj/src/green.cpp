#include "isgqd/green.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "isgqd/error.hpp"

namespace isgqd {

namespace {

std::vector<std::uint32_t> classes_by_key(const std::vector<std::uint64_t>& key, std::size_t& count) {
  std::map<std::uint64_t, std::uint32_t> ids;
  std::vector<std::uint32_t> out(key.size());
  for (std::size_t i = 0; i < key.size(); ++i) {
    auto [it, inserted] = ids.emplace(key[i], static_cast<std::uint32_t>(ids.size()));
    out[i] = it->second;
  }
  count = ids.size();
  return out;
}

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

MaximalSubgroup subgroup_from_table(const InverseSemigroup& s, Index e, const std::vector<Index>& members) {
  MaximalSubgroup out;
  out.idempotent = e;
  out.elements.push_back(e);
  for (Index x : members) {
    if (x != e) out.elements.push_back(x);
  }
  const std::size_t m = out.elements.size();
  std::map<Index, Index> pos;
  for (Index i = 0; i < m; ++i) pos[out.elements[i]] = i;
  std::vector<std::string> labels;
  std::vector<Index> mul(m * m);
  for (Index i = 0; i < m; ++i) {
    labels.push_back(s.label(out.elements[i]));
    for (Index j = 0; j < m; ++j) {
      const Index p = s.mul(out.elements[i], out.elements[j]);
      auto it = pos.find(p);
      if (it == pos.end()) {
        throw Error(ErrorCode::kSelfCheckFailed, "H-class of " + s.label(e) + " is not closed");
      }
      mul[i * m + j] = it->second;
    }
  }
  out.table = GroupTable(std::move(labels), std::move(mul), 0);
  validate_group(out.table);
  return out;
}

MaximalSubgroup subgroup_from_layout(const InverseSemigroup& s, Index e) {
  MaximalSubgroup out;
  out.idempotent = e;
  if (e == s.zero()) {
    out.elements = {e};
    out.table = trivial_group();
    return out;
  }
  const auto& layout = *s.brandt_layout();
  const std::size_t pos = (e - 1) % layout.k;
  out.table = layout.group;
  for (Index h = 0; h < layout.group.size(); ++h) out.elements.push_back(layout.index(pos, h, pos));
  if (out.elements[layout.group.unit()] != e) {
    throw Error(ErrorCode::kSelfCheckFailed, "Brandt layout does not match idempotent " + s.label(e));
  }
  return out;
}

}  // namespace

const MaximalSubgroup& GreenClasses::subgroup_at(Index e) const {
  for (const auto& m : max_subgroups) {
    if (m.idempotent == e) return m;
  }
  throw Error(ErrorCode::kNotIdempotent, "no maximal subgroup at index " + std::to_string(e));
}

GreenClasses green_partition(const InverseSemigroup& s) {
  const std::size_t n = s.size();
  GreenClasses g;
  std::vector<std::uint64_t> lkey(n), rkey(n), hkey(n);
  for (Index x = 0; x < n; ++x) {
    lkey[x] = s.source(x);
    rkey[x] = s.range(x);
    hkey[x] = (static_cast<std::uint64_t>(s.source(x)) << 32) | s.range(x);
  }
  g.l_class = classes_by_key(lkey, g.num_l);
  g.r_class = classes_by_key(rkey, g.num_r);
  g.h_class = classes_by_key(hkey, g.num_h);

  // D as the closure of L u R.
  UnionFind uf(n);
  std::vector<Index> first_l(g.num_l, kUndefined), first_r(g.num_r, kUndefined);
  for (Index x = 0; x < n; ++x) {
    if (first_l[g.l_class[x]] == kUndefined) first_l[g.l_class[x]] = x;
    if (first_r[g.r_class[x]] == kUndefined) first_r[g.r_class[x]] = x;
    uf.unite(x, first_l[g.l_class[x]]);
    uf.unite(x, first_r[g.r_class[x]]);
  }
  std::vector<std::uint64_t> dkey(n);
  for (Index x = 0; x < n; ++x) dkey[x] = uf.find(x);
  g.d_class = classes_by_key(dkey, g.num_d);

  // D as L o R: s D t iff some u has u*u = s*s and uu* = tt*.
  const auto& idem = s.idempotents();
  std::vector<std::size_t> idem_pos(n, SIZE_MAX);
  for (std::size_t i = 0; i < idem.size(); ++i) idem_pos[idem[i]] = i;
  const std::size_t ne = idem.size();
  std::vector<bool> linked(ne * ne, false);
  for (Index u = 0; u < n; ++u) linked[idem_pos[s.source(u)] * ne + idem_pos[s.range(u)]] = true;
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y) {
      const bool closure = g.d_class[x] == g.d_class[y];
      const bool composite = linked[idem_pos[s.source(x)] * ne + idem_pos[s.range(y)]];
      if (closure != composite) {
        throw Error(ErrorCode::kSelfCheckFailed,
                    "closure(L u R) and L o R disagree on " + s.label(x) + ", " + s.label(y));
      }
    }
  }
  for (std::size_t i = 0; i < ne; ++i) {
    for (std::size_t j = 0; j < ne; ++j) {
      if ((g.d_class[idem[i]] == g.d_class[idem[j]]) != linked[i * ne + j]) {
        throw Error(ErrorCode::kSelfCheckFailed, "idempotent D-criterion fails");
      }
    }
  }

  g.d_members.assign(g.num_d, {});
  g.d_idempotents.assign(g.num_d, {});
  for (Index x = 0; x < n; ++x) {
    g.d_members[g.d_class[x]].push_back(x);
    if (s.is_idempotent(x)) g.d_idempotents[g.d_class[x]].push_back(x);
  }

  std::vector<std::vector<Index>> h_members(g.num_h);
  for (Index x = 0; x < n; ++x) h_members[g.h_class[x]].push_back(x);
  for (Index e : idem) {
    if (s.windowed()) {
      if (!s.brandt_layout()) {
        throw Error(ErrorCode::kUnsupported, "maximal subgroups of a window without Brandt layout");
      }
      g.max_subgroups.push_back(subgroup_from_layout(s, e));
    } else {
      g.max_subgroups.push_back(subgroup_from_table(s, e, h_members[g.h_class[e]]));
    }
  }
  return g;
}

bool natural_leq(const InverseSemigroup& s, Index a, Index b) {
  bool right = false, left = false;
  for (Index e : s.idempotents()) {
    right = right || s.mul(b, e) == a;
    left = left || s.mul(e, b) == a;
  }
  if (right != left) {
    throw Error(ErrorCode::kSelfCheckFailed,
                "natural order tests disagree on " + s.label(a) + " <= " + s.label(b));
  }
  return right;
}

PartialOrder natural_order(const InverseSemigroup& s) {
  PartialOrder po;
  po.n = s.size();
  po.leq.assign(po.n * po.n, false);
  for (Index a = 0; a < po.n; ++a) {
    for (Index b = 0; b < po.n; ++b) po.leq[static_cast<std::size_t>(a) * po.n + b] = natural_leq(s, a, b);
  }
  return po;
}

HClassBijection hclass_bijection(const InverseSemigroup& s, const GreenClasses& g, Index e0) {
  if (e0 >= s.size() || !s.is_idempotent(e0)) {
    throw Error(ErrorCode::kNotIdempotent, "base of the H-class bijection must be an idempotent");
  }
  HClassBijection b;
  b.e0 = e0;
  b.d_class = g.d_class[e0];
  b.connector.assign(s.size(), kUndefined);
  b.image.assign(s.size(), kUndefined);
  for (Index f : g.d_idempotents[b.d_class]) {
    if (f == e0) {
      b.connector[f] = e0;
      continue;
    }
    for (Index r : g.d_members[b.d_class]) {
      if (s.source(r) == e0 && s.range(r) == f) {
        b.connector[f] = r;
        break;
      }
    }
    if (b.connector[f] == kUndefined) {
      throw Error(ErrorCode::kSelfCheckFailed, "no connecting element for " + s.label(f));
    }
  }
  for (Index x : g.d_members[b.d_class]) {
    b.image[x] = s.mul(s.star(b.connector[s.range(x)]), x, b.connector[s.source(x)]);
  }
  return b;
}

bool verify_hclass_bijection(const InverseSemigroup& s, const GreenClasses& g, const HClassBijection& b) {
  const auto target = g.h_class[b.e0];
  std::map<std::uint32_t, std::set<Index>> images;
  std::map<std::uint32_t, std::size_t> sizes;
  for (Index x : g.d_members[b.d_class]) {
    ++sizes[g.h_class[x]];
    const Index y = b.image[x];
    if (y == kUndefined) {
      if (!s.windowed()) return false;
      continue;
    }
    if (g.h_class[y] != target) return false;
    if (!images[g.h_class[x]].insert(y).second) return false;
  }
  if (!s.windowed()) {
    const std::size_t target_size = sizes[target];
    for (const auto& [h, size] : sizes) {
      if (size != target_size || images[h].size() != target_size) return false;
    }
  }
  for (Index f : g.d_idempotents[b.d_class]) {
    for (Index x : g.subgroup_at(f).elements) {
      for (Index y : g.subgroup_at(f).elements) {
        const Index xy = s.mul(x, y);
        if (xy == kUndefined || b.image[x] == kUndefined || b.image[y] == kUndefined) continue;
        const Index prod = s.mul(b.image[x], b.image[y]);
        if (prod != kUndefined && b.image[xy] != kUndefined && prod != b.image[xy]) return false;
      }
    }
  }
  return true;
}

OrderEqualityResult order_equality_on_dclasses(const InverseSemigroup& s, const GreenClasses& g) {
  OrderEqualityResult out;
  for (const auto& members : g.d_members) {
    for (Index big : members) {
      for (Index small : members) {
        // small <= big iff small = big * small*small.
        if (big != small && s.mul(big, s.source(small)) == small) {
          out.holds = false;
          out.witness = std::make_pair(big, small);
          return out;
        }
      }
    }
  }
  return out;
}

bool is_0_bisimple(const InverseSemigroup& s, const GreenClasses& g) {
  if (s.size() == 1) return true;
  return g.num_d == 2;
}

std::optional<std::string> check_hclass_multiplication(const InverseSemigroup& s, const GreenClasses& g) {
  const std::size_t n = s.size();
  std::vector<std::vector<Index>> h_members(g.num_h);
  for (Index x = 0; x < n; ++x) h_members[g.h_class[x]].push_back(x);
  for (Index a = 0; a < n; ++a) {
    const Index p = s.source(a);
    for (const auto& h : h_members) {
      std::size_t inside = 0;
      for (Index x : h) inside += s.mul(p, x) == x ? 1 : 0;
      if (inside != 0 && inside != h.size()) {
        return "H-class of " + s.label(h.front()) + " meets but is not contained in " + s.label(p) + ".S";
      }
      if (inside == 0) continue;
      const Index f = s.range(h.front());
      const Index expected_range = s.mul(a, f, s.star(a));
      std::set<Index> image;
      std::optional<std::uint32_t> image_class;
      for (Index x : h) {
        const Index y = s.mul(a, x);
        if (y == kUndefined) {
          if (!s.windowed()) return "undefined product in a finite table";
          continue;
        }
        if (image_class && *image_class != g.h_class[y]) {
          return s.label(a) + " maps the H-class of " + s.label(h.front()) + " into several H-classes";
        }
        image_class = g.h_class[y];
        image.insert(y);
        if (g.l_class[y] != g.l_class[x]) {
          return s.label(a) + "." + s.label(x) + " leaves the L-class";
        }
        if (expected_range != kUndefined && s.range(y) != expected_range) {
          return s.label(a) + "." + s.label(x) + " does not have range s f s*";
        }
      }
      if (!s.windowed() && image_class && image.size() != h.size()) {
        return s.label(a) + " is not injective on the H-class of " + s.label(h.front());
      }
      if (!s.windowed() && image_class && image.size() != h_members[*image_class].size()) {
        return s.label(a) + " does not map the H-class of " + s.label(h.front()) + " onto an H-class";
      }
    }
  }
  return std::nullopt;
}

}  // namespace isgqd
