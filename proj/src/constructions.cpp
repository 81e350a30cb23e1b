#include "isgqd/constructions.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "isgqd/error.hpp"

namespace isgqd {

namespace {

constexpr std::size_t kFullValidationLimit = 600;

Validation validation_for(std::size_t n) {
  return n <= kFullValidationLimit ? Validation::kFull : Validation::kSampled;
}

struct PermHash {
  std::size_t operator()(const Perm& p) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto v : p) h = (h ^ v) * 1099511628211ull;
    return h;
  }
};

std::string perm_label(const Perm& p) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? " " : "") << p[i];
  os << ']';
  return os.str();
}

std::string partial_label(const PartialPerm& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ',';
    out += p[i] < 0 ? "-" : std::to_string(p[i] + 1);
  }
  return out + "]";
}

PartialPerm compose_partial(const PartialPerm& s, const PartialPerm& t) {
  PartialPerm r(t.size(), -1);
  for (std::size_t x = 0; x < t.size(); ++x) {
    if (t[x] >= 0) r[x] = s[static_cast<std::size_t>(t[x])];
  }
  return r;
}

PartialPerm invert_partial(const PartialPerm& s) {
  PartialPerm r(s.size(), -1);
  for (std::size_t x = 0; x < s.size(); ++x) {
    if (s[x] >= 0) r[static_cast<std::size_t>(s[x])] = static_cast<int>(x);
  }
  return r;
}

std::size_t rank_of(const PartialPerm& p) {
  return static_cast<std::size_t>(std::count_if(p.begin(), p.end(), [](int v) { return v >= 0; }));
}

/// Sorted by rank, then by image list; the empty map comes first.
InverseSemigroup from_partial_maps(std::vector<PartialPerm> maps) {
  std::sort(maps.begin(), maps.end(), [](const PartialPerm& x, const PartialPerm& y) {
    const auto rx = rank_of(x), ry = rank_of(y);
    return rx != ry ? rx < ry : x < y;
  });
  maps.erase(std::unique(maps.begin(), maps.end()), maps.end());
  std::map<PartialPerm, Index> index;
  for (Index i = 0; i < maps.size(); ++i) index[maps[i]] = i;
  const std::size_t n = maps.size();
  std::vector<std::string> labels;
  std::vector<Index> table(n * n);
  for (Index a = 0; a < n; ++a) {
    labels.push_back(partial_label(maps[a]));
    for (Index b = 0; b < n; ++b) table[a * n + b] = index.at(compose_partial(maps[a], maps[b]));
  }
  return InverseSemigroup(std::move(labels), std::move(table), 0, validation_for(n));
}

}  // namespace

InverseSemigroup brandt(const GroupTable& group, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kBadTable, "Brandt semigroup needs k >= 1");
  const std::size_t m = group.size();
  BrandtLayout layout{group, k};
  const std::size_t n = k * k * m + 1;
  std::vector<std::string> labels(n);
  std::vector<Index> table(n * n, 0);
  labels[0] = "0";
  for (std::size_t f = 0; f < k; ++f) {
    for (Index h = 0; h < m; ++h) {
      for (std::size_t e = 0; e < k; ++e) {
        labels[layout.index(f, h, e)] =
            "(" + std::to_string(f + 1) + "," + group.label(h) + "," + std::to_string(e + 1) + ")";
      }
    }
  }
  for (std::size_t f2 = 0; f2 < k; ++f2) {
    for (Index h2 = 0; h2 < m; ++h2) {
      for (std::size_t e2 = 0; e2 < k; ++e2) {
        const Index x = layout.index(f2, h2, e2);
        for (Index h1 = 0; h1 < m; ++h1) {
          for (std::size_t e1 = 0; e1 < k; ++e1) {
            const Index h = group.mul(h2, h1);
            // Only f1 = e2 gives a non-zero product.
            table[x * n + layout.index(e2, h1, e1)] = h == kUndefined ? kUndefined : layout.index(f2, h, e1);
          }
        }
      }
    }
  }
  InverseSemigroup s(std::move(labels), std::move(table), 0, validation_for(n), group.windowed());
  s.set_brandt_layout(std::move(layout));
  return s;
}

InverseSemigroup clifford(const Semilattice& lattice, const std::vector<GroupTable>& groups,
                          const CliffordHoms& homs) {
  const std::size_t ne = lattice.labels.size();
  if (ne == 0 || lattice.meet.size() != ne || groups.size() != ne) {
    throw Error(ErrorCode::kBadTable, "semilattice, meet table and group list sizes differ");
  }
  for (const auto& row : lattice.meet) {
    if (row.size() != ne) throw Error(ErrorCode::kBadTable, "meet table is not square");
    for (Index v : row) {
      if (v >= ne) throw Error(ErrorCode::kBadTable, "meet table entry out of range");
    }
  }
  for (Index e = 0; e < ne; ++e) {
    if (lattice.meet[e][e] != e) throw Error(ErrorCode::kBadTable, "meet is not idempotent");
    for (Index f = 0; f < ne; ++f) {
      if (lattice.meet[e][f] != lattice.meet[f][e]) throw Error(ErrorCode::kBadTable, "meet is not commutative");
      for (Index g = 0; g < ne; ++g) {
        if (lattice.meet[lattice.meet[e][f]][g] != lattice.meet[e][lattice.meet[f][g]]) {
          throw Error(ErrorCode::kBadTable, "meet is not associative");
        }
      }
    }
  }
  for (const auto& g : groups) {
    if (g.windowed()) throw Error(ErrorCode::kUnsupported, "Clifford semigroups over windowed groups");
  }
  for (const auto& [key, images] : homs) {
    const auto [from, to] = key;
    if (from >= ne || to >= ne || !lattice.geq(from, to)) {
      throw Error(ErrorCode::kBadTable, "connecting map given for a non-comparable pair");
    }
    if (images.size() != groups[from].size()) throw Error(ErrorCode::kBadTable, "connecting map has wrong length");
  }

  auto pi = [&](Index from, Index to, Index g) -> Index {
    if (from == to) return g;
    return homs.at({from, to})[g];
  };
  for (Index e = 0; e < ne; ++e) {
    for (Index f = 0; f < ne; ++f) {
      if (e == f || !lattice.geq(e, f)) continue;
      auto it = homs.find({e, f});
      if (it == homs.end()) {
        throw Error(ErrorCode::kFunctorialityViolated,
                    "missing connecting map " + lattice.labels[e] + " -> " + lattice.labels[f]);
      }
      const auto& ge = groups[e];
      const auto& gf = groups[f];
      for (Index v : it->second) {
        if (v >= gf.size()) throw Error(ErrorCode::kBadTable, "connecting map image out of range");
      }
      for (Index x = 0; x < ge.size(); ++x) {
        for (Index y = 0; y < ge.size(); ++y) {
          if (pi(e, f, ge.mul(x, y)) != gf.mul(pi(e, f, x), pi(e, f, y))) {
            throw Error(ErrorCode::kFunctorialityViolated,
                        "connecting map " + lattice.labels[e] + " -> " + lattice.labels[f] + " is not a homomorphism");
          }
        }
      }
    }
  }
  for (Index e1 = 0; e1 < ne; ++e1) {
    for (Index e2 = 0; e2 < ne; ++e2) {
      for (Index e3 = 0; e3 < ne; ++e3) {
        if (!lattice.geq(e1, e2) || !lattice.geq(e2, e3)) continue;
        for (Index g = 0; g < groups[e1].size(); ++g) {
          if (pi(e1, e3, g) != pi(e2, e3, pi(e1, e2, g))) {
            throw Error(ErrorCode::kFunctorialityViolated, "(" + lattice.labels[e1] + "," + lattice.labels[e2] +
                                                               "," + lattice.labels[e3] + ")");
          }
        }
      }
    }
  }

  std::optional<Index> bottom;
  for (Index b = 0; b < ne && !bottom; ++b) {
    bool below_all = true;
    for (Index x = 0; x < ne && below_all; ++x) below_all = lattice.meet[b][x] == b;
    if (below_all) bottom = b;
  }
  const bool adjoin_zero = !bottom || groups[*bottom].size() != 1;

  std::vector<std::string> labels;
  std::vector<std::size_t> offset(ne);
  if (adjoin_zero) labels.push_back("0");
  for (Index e = 0; e < ne; ++e) {
    offset[e] = labels.size();
    for (Index g = 0; g < groups[e].size(); ++g) labels.push_back(groups[e].label(g) + "@" + lattice.labels[e]);
  }
  const std::size_t n = labels.size();
  const Index zero = adjoin_zero ? 0 : static_cast<Index>(offset[*bottom]);
  std::vector<Index> table(n * n, zero);
  for (Index e = 0; e < ne; ++e) {
    for (Index f = 0; f < ne; ++f) {
      const Index m = lattice.meet[e][f];
      for (Index g = 0; g < groups[e].size(); ++g) {
        for (Index h = 0; h < groups[f].size(); ++h) {
          const Index prod = groups[m].mul(pi(e, m, g), pi(f, m, h));
          table[(offset[e] + g) * n + offset[f] + h] = static_cast<Index>(offset[m] + prod);
        }
      }
    }
  }
  return InverseSemigroup(std::move(labels), std::move(table), zero, validation_for(n));
}

InverseSemigroup symmetric_inverse_monoid(std::size_t n) {
  if (n > 4) throw Error(ErrorCode::kTooLarge, "symmetric inverse monoid on more than 4 points");
  std::vector<PartialPerm> maps;
  PartialPerm current(n, -1);
  std::vector<bool> used(n, false);
  auto rec = [&](auto&& self, std::size_t x) -> void {
    if (x == n) {
      maps.push_back(current);
      return;
    }
    current[x] = -1;
    self(self, x + 1);
    for (std::size_t y = 0; y < n; ++y) {
      if (used[y]) continue;
      used[y] = true;
      current[x] = static_cast<int>(y);
      self(self, x + 1);
      used[y] = false;
    }
    current[x] = -1;
  };
  rec(rec, 0);
  return from_partial_maps(std::move(maps));
}

InverseSemigroup partial_bijections(std::size_t degree, const std::vector<PartialPerm>& generators) {
  std::set<PartialPerm> seen{PartialPerm(degree, -1)};
  std::vector<PartialPerm> queue;
  for (const auto& g : generators) {
    if (g.size() != degree) throw Error(ErrorCode::kBadTable, "generator has the wrong degree");
    std::vector<bool> hit(degree, false);
    for (int v : g) {
      if (v < -1 || v >= static_cast<int>(degree) || (v >= 0 && hit[static_cast<std::size_t>(v)])) {
        throw Error(ErrorCode::kBadTable, "generator " + partial_label(g) + " is not a partial bijection");
      }
      if (v >= 0) hit[static_cast<std::size_t>(v)] = true;
    }
    for (const auto& x : {g, invert_partial(g)}) {
      if (seen.insert(x).second) queue.push_back(x);
    }
  }
  const std::vector<PartialPerm> gens(queue.begin(), queue.end());
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (const auto& g : gens) {
      for (auto x : {compose_partial(queue[head], g), compose_partial(g, queue[head])}) {
        if (seen.insert(x).second) {
          queue.push_back(std::move(x));
          if (seen.size() > 5000) throw Error(ErrorCode::kTooLarge, "generated semigroup exceeds 5000 elements");
        }
      }
    }
  }
  return from_partial_maps(std::vector<PartialPerm>(seen.begin(), seen.end()));
}

InverseSemigroup qdnotr_family(std::size_t k, bool with_unit) {
  if (k == 0) throw Error(ErrorCode::kBadTable, "family needs k >= 1");
  const std::size_t n = k * k + 1 + (with_unit ? 1 : 0);
  auto pair_index = [k](std::size_t f, std::size_t e) { return static_cast<Index>(1 + f * k + e); };
  std::vector<std::string> labels(n);
  std::vector<Index> table(n * n, 0);
  labels[0] = "0";
  for (std::size_t f = 0; f < k; ++f) {
    for (std::size_t e = 0; e < k; ++e) {
      labels[pair_index(f, e)] = "(" + std::to_string(f + 1) + "," + std::to_string(e + 1) + ")";
      for (std::size_t e1 = 0; e1 < k; ++e1) table[pair_index(f, e) * n + pair_index(e, e1)] = pair_index(f, e1);
    }
  }
  if (with_unit) {
    const Index one = static_cast<Index>(n - 1);
    labels[one] = "1";
    for (Index x = 0; x < n; ++x) {
      table[one * n + x] = x;
      table[x * n + one] = x;
    }
  }
  InverseSemigroup s(std::move(labels), std::move(table), 0, validation_for(n));
  if (!with_unit) s.set_brandt_layout(BrandtLayout{trivial_group(), k});
  return s;
}

FreeGroupBall::FreeGroupBall(int radius) : radius_(radius) {
  if (radius < 0) throw Error(ErrorCode::kWindowTooSmall, "negative ball radius");
  std::map<std::vector<std::uint8_t>, Index> index;
  words_.push_back({});
  index[{}] = 0;
  by_radius_.push_back(1);
  std::size_t begin = 0;
  for (int len = 1; len <= radius; ++len) {
    const std::size_t end = words_.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (std::uint8_t l = 0; l < 4; ++l) {
        const auto& w = words_[i];
        if (!w.empty() && w.front() == (l ^ 1)) continue;
        std::vector<std::uint8_t> next{l};
        next.insert(next.end(), w.begin(), w.end());
        if (index.emplace(next, static_cast<Index>(words_.size())).second) words_.push_back(std::move(next));
      }
    }
    begin = end;
    by_radius_.push_back(words_.size());
  }
  left_.assign(words_.size() * 4, kUndefined);
  for (Index i = 0; i < words_.size(); ++i) {
    for (std::uint8_t l = 0; l < 4; ++l) {
      const auto& w = words_[i];
      std::vector<std::uint8_t> next;
      if (!w.empty() && w.front() == (l ^ 1)) {
        next.assign(w.begin() + 1, w.end());
      } else {
        next.push_back(l);
        next.insert(next.end(), w.begin(), w.end());
      }
      auto it = index.find(next);
      if (it != index.end()) left_[static_cast<std::size_t>(i) * 4 + l] = it->second;
    }
  }
}

std::string FreeGroupBall::label(Index i) const {
  if (words_[i].empty()) return "1";
  static constexpr char kLetters[] = {'a', 'A', 'b', 'B'};
  std::string out;
  for (auto l : words_[i]) out += kLetters[l];
  return out;
}

Perm QuotientTower::letter(std::size_t level, std::uint8_t l) const {
  const auto& lv = levels.at(level);
  switch (l) {
    case 0: return lv.a;
    case 1: return invert(lv.a);
    case 2: return lv.b;
    default: return invert(lv.b);
  }
}

Perm QuotientTower::evaluate(std::size_t level, const std::vector<std::uint8_t>& word) const {
  Perm r = identity_perm(levels.at(level).a.size());
  for (auto l : word) r = compose(r, letter(level, l));
  return r;
}

namespace {

/// Images of the first `count` ball elements at a level. Each word is its
/// first letter times a shorter word listed earlier.
std::vector<Perm> ball_images(const QuotientTower& tower, std::size_t level, std::size_t count) {
  std::vector<Perm> images(count);
  for (Index i = 0; i < count; ++i) {
    const auto& w = tower.ball.word(i);
    if (w.empty()) {
      images[i] = identity_perm(tower.levels[level].a.size());
      continue;
    }
    const Index t = tower.ball.left_multiply(w.front() ^ 1, i);
    images[i] = compose(tower.letter(level, w.front()), images[t]);
  }
  return images;
}

}  // namespace

QuotientTower quotient_tower(const std::vector<std::pair<Perm, Perm>>& levels, int radius,
                             std::size_t materialize_cap) {
  if (levels.empty()) throw Error(ErrorCode::kDegenerateLevel, "tower has no levels");
  QuotientTower tower;
  tower.ball = FreeGroupBall(radius);
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const auto& [a, b] = levels[k];
    if (a.empty() || a.size() != b.size() || !is_permutation(a) || !is_permutation(b)) {
      throw Error(ErrorCode::kDegenerateLevel, "level " + std::to_string(k) + " is not a pair of permutations");
    }
    tower.levels.push_back(TowerLevel{a, b, std::nullopt, std::nullopt});
  }
  for (std::size_t k = 0; k < tower.levels.size(); ++k) {
    std::vector<Perm> elements{identity_perm(tower.levels[k].a.size())};
    std::vector<std::vector<std::uint8_t>> words{{}};
    std::unordered_map<Perm, Index, PermHash> seen{{elements[0], 0}};
    bool capped = false;
    for (std::size_t head = 0; head < elements.size() && !capped; ++head) {
      for (std::uint8_t l = 0; l < 4; ++l) {
        Perm next = compose(elements[head], tower.letter(k, l));
        if (seen.emplace(next, static_cast<Index>(elements.size())).second) {
          elements.push_back(std::move(next));
          auto w = words[head];
          w.push_back(l);
          words.push_back(std::move(w));
          if (elements.size() > materialize_cap) {
            capped = true;
            break;
          }
        }
      }
    }
    if (!capped) {
      tower.levels[k].elements = std::move(elements);
      tower.levels[k].words = std::move(words);
    }
  }
  // Descending chain: equal images at level k+1 force equal images at k.
  const std::size_t count = tower.ball.size();
  std::vector<Perm> lower = ball_images(tower, 0, count);
  for (std::size_t k = 0; k + 1 < tower.levels.size(); ++k) {
    std::vector<Perm> upper = ball_images(tower, k + 1, count);
    std::unordered_map<Perm, Index, PermHash> first;
    for (Index i = 0; i < count; ++i) {
      auto [it, inserted] = first.emplace(upper[i], i);
      if (!inserted && lower[it->second] != lower[i]) {
        throw Error(ErrorCode::kNotDescendingChain,
                    "level " + std::to_string(k + 1) + " identifies " + tower.ball.label(it->second) + " and " +
                        tower.ball.label(i) + " but level " + std::to_string(k) + " does not");
      }
    }
    lower = std::move(upper);
  }
  return tower;
}

bool verify_ball_injectivity(const QuotientTower& tower, std::size_t level, int rho) {
  if (rho > tower.ball.radius()) {
    throw Error(ErrorCode::kWindowTooSmall, "radius " + std::to_string(rho) + " exceeds the materialized ball");
  }
  if (level >= tower.levels.size()) throw Error(ErrorCode::kDegenerateLevel, "no such level");
  const auto images = ball_images(tower, level, tower.ball.ball_size(rho));
  std::unordered_set<Perm, PermHash> seen;
  for (const auto& p : images) {
    if (!seen.insert(p).second) return false;
  }
  return true;
}

int injectivity_radius(const QuotientTower& tower, std::size_t level) {
  int best = 0;
  for (int rho = 1; rho <= tower.ball.radius(); ++rho) {
    if (!verify_ball_injectivity(tower, level, rho)) break;
    best = rho;
  }
  return best;
}

InverseSemigroup tower_truncation(const QuotientTower& tower, std::size_t m) {
  if (m >= tower.levels.size()) throw Error(ErrorCode::kDegenerateLevel, "truncation above the top level");
  Semilattice chain;
  std::vector<GroupTable> groups;
  CliffordHoms homs;
  std::vector<std::unordered_map<Perm, Index, PermHash>> index(m + 1);
  for (std::size_t k = 0; k <= m; ++k) {
    const auto& lv = tower.levels[k];
    if (!lv.elements) {
      throw Error(ErrorCode::kTooLarge, "level " + std::to_string(k) + " is too large to list");
    }
    chain.labels.push_back("L" + std::to_string(k));
    const auto& el = *lv.elements;
    for (Index i = 0; i < el.size(); ++i) index[k][el[i]] = i;
    std::vector<std::string> labels;
    std::vector<Index> mul(el.size() * el.size());
    for (Index i = 0; i < el.size(); ++i) {
      labels.push_back(perm_label(el[i]));
      for (Index j = 0; j < el.size(); ++j) mul[i * el.size() + j] = index[k].at(compose(el[i], el[j]));
    }
    groups.emplace_back(std::move(labels), std::move(mul), 0);
  }
  chain.meet.assign(m + 1, std::vector<Index>(m + 1));
  for (Index i = 0; i <= m; ++i) {
    for (Index j = 0; j <= m; ++j) chain.meet[i][j] = std::min(i, j);
  }
  for (Index k = 1; k <= m; ++k) {
    for (Index j = 0; j < k; ++j) {
      std::vector<Index> images;
      for (const auto& w : *tower.levels[k].words) {
        auto it = index[j].find(tower.evaluate(j, w));
        if (it == index[j].end()) throw Error(ErrorCode::kNotDescendingChain, "word image missing at lower level");
        images.push_back(it->second);
      }
      homs[{k, j}] = std::move(images);
    }
  }
  InverseSemigroup s = clifford(chain, groups, homs);
  ChainLayout layout;
  for (std::size_t k = 0; k <= m; ++k) layout.level_units.push_back(*s.find(groups[k].label(0) + "@" + chain.labels[k]));
  s.set_chain_layout(std::move(layout));
  return s;
}

TowerCatalogEntry default_tower_levels(std::uint64_t seed, int min_radius) {
  TowerCatalogEntry entry;
  entry.seed = seed;
  const Perm ka{1, 0, 3, 2}, kb{2, 3, 0, 1};
  entry.levels.push_back({Perm{0}, Perm{0}});
  entry.levels.push_back({ka, kb});
  std::mt19937_64 rng(seed);
  auto random_perm = [&](std::size_t d) {
    Perm p = identity_perm(d);
    for (std::size_t i = d - 1; i > 0; --i) std::swap(p[i], p[rng() % (i + 1)]);
    return p;
  };
  for (std::size_t degree = 12;; degree += 4) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      Perm a = ka, b = kb;
      const Perm ra = random_perm(degree), rb = random_perm(degree);
      for (auto v : ra) a.push_back(v + 4);
      for (auto v : rb) b.push_back(v + 4);
      auto levels = entry.levels;
      levels.push_back({a, b});
      const QuotientTower tower = quotient_tower(levels, min_radius, 1);
      if (verify_ball_injectivity(tower, 2, min_radius)) {
        entry.levels = std::move(levels);
        entry.verified_radius = min_radius;
        entry.search_degree = degree;
        return entry;
      }
    }
  }
}

}  // namespace isgqd
