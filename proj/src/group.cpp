#include "isgqd/group.hpp"

#include <deque>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "isgqd/error.hpp"

namespace isgqd {

Perm compose(const Perm& p, const Perm& q) {
  Perm r(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) r[i] = p[q[i]];
  return r;
}

Perm invert(const Perm& p) {
  Perm r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[p[i]] = static_cast<std::uint32_t>(i);
  return r;
}

Perm identity_perm(std::size_t degree) {
  Perm r(degree);
  std::iota(r.begin(), r.end(), 0u);
  return r;
}

bool is_permutation(const Perm& p) {
  std::vector<bool> seen(p.size(), false);
  for (auto v : p) {
    if (v >= p.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

GroupTable::GroupTable(std::vector<std::string> labels, std::vector<Index> mul, Index unit,
                       std::optional<long> z_radius)
    : labels_(std::move(labels)), mul_(std::move(mul)), unit_(unit), z_radius_(z_radius) {
  const std::size_t n = labels_.size();
  if (mul_.size() != n * n || unit_ >= n) {
    throw Error(ErrorCode::kBadTable, "group table shape does not match its labels");
  }
  inv_.assign(n, kUndefined);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      if (this->mul(a, b) == unit_ && this->mul(b, a) == unit_) {
        inv_[a] = b;
        break;
      }
    }
    if (inv_[a] == kUndefined) {
      throw Error(ErrorCode::kBadTable, "element " + labels_[a] + " has no inverse");
    }
  }
}

long GroupTable::integer_of(Index a) const {
  // 0, 1, -1, 2, -2, ...
  const long i = static_cast<long>(a);
  return (i % 2 == 1) ? (i + 1) / 2 : -(i / 2);
}

Index GroupTable::index_of_integer(long h) const {
  if (!z_radius_ || h > *z_radius_ || h < -*z_radius_) return kUndefined;
  return static_cast<Index>(h > 0 ? 2 * h - 1 : -2 * h);
}

GroupTable trivial_group() { return GroupTable({"1"}, {0}, 0); }

GroupTable cyclic_group(std::size_t order) {
  if (order == 0) throw Error(ErrorCode::kBadTable, "cyclic group of order 0");
  std::vector<std::string> labels;
  std::vector<Index> mul(order * order);
  for (std::size_t a = 0; a < order; ++a) {
    labels.push_back(std::to_string(a));
    for (std::size_t b = 0; b < order; ++b) mul[a * order + b] = static_cast<Index>((a + b) % order);
  }
  return GroupTable(std::move(labels), std::move(mul), 0);
}

GroupTable integer_window(long radius) {
  if (radius < 0) throw Error(ErrorCode::kBadTable, "negative window radius");
  const std::size_t n = static_cast<std::size_t>(2 * radius + 1);
  auto index_of = [&](long h) -> Index {
    if (h > radius || h < -radius) return kUndefined;
    return static_cast<Index>(h > 0 ? 2 * h - 1 : -2 * h);
  };
  auto int_of = [](std::size_t i) -> long {
    const long j = static_cast<long>(i);
    return (j % 2 == 1) ? (j + 1) / 2 : -(j / 2);
  };
  std::vector<std::string> labels(n);
  std::vector<Index> mul(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    labels[a] = std::to_string(int_of(a));
    for (std::size_t b = 0; b < n; ++b) mul[a * n + b] = index_of(int_of(a) + int_of(b));
  }
  return GroupTable(std::move(labels), std::move(mul), 0, radius);
}

namespace {

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

}  // namespace

GroupTable group_from_permutations(const std::vector<Perm>& generators, std::size_t cap) {
  if (generators.empty()) return trivial_group();
  const std::size_t degree = generators.front().size();
  for (const auto& g : generators) {
    if (g.size() != degree || !is_permutation(g)) {
      throw Error(ErrorCode::kBadTable, "generators are not permutations of a common degree");
    }
  }
  std::vector<Perm> elements{identity_perm(degree)};
  std::unordered_map<Perm, Index, PermHash> index{{elements[0], 0}};
  for (std::size_t head = 0; head < elements.size(); ++head) {
    for (const auto& g : generators) {
      Perm next = compose(g, elements[head]);
      if (index.emplace(next, static_cast<Index>(elements.size())).second) {
        elements.push_back(std::move(next));
        if (elements.size() > cap) {
          throw Error(ErrorCode::kTooLarge,
                      "permutation group exceeds " + std::to_string(cap) + " elements");
        }
      }
    }
  }
  const std::size_t n = elements.size();
  std::vector<std::string> labels;
  labels.reserve(n);
  for (const auto& p : elements) labels.push_back(perm_label(p));
  std::vector<Index> mul(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) mul[a * n + b] = index.at(compose(elements[a], elements[b]));
  }
  return GroupTable(std::move(labels), std::move(mul), 0);
}

GroupTable group_from_table(std::vector<std::string> labels, const std::vector<std::vector<Index>>& mul) {
  const std::size_t n = labels.size();
  if (mul.size() != n) throw Error(ErrorCode::kBadTable, "group table is not square");
  std::vector<Index> flat;
  flat.reserve(n * n);
  for (const auto& row : mul) {
    if (row.size() != n) throw Error(ErrorCode::kBadTable, "group table is not square");
    for (auto v : row) {
      if (v >= n) throw Error(ErrorCode::kBadTable, "group table entry out of range");
      flat.push_back(v);
    }
  }
  Index unit = kUndefined;
  for (Index e = 0; e < n && unit == kUndefined; ++e) {
    bool ok = true;
    for (Index a = 0; a < n && ok; ++a) ok = flat[e * n + a] == a && flat[a * n + e] == a;
    if (ok) unit = e;
  }
  if (unit == kUndefined) throw Error(ErrorCode::kBadTable, "group table has no unit");
  GroupTable g(std::move(labels), std::move(flat), unit);
  validate_group(g);
  return g;
}

GroupTable direct_product(const GroupTable& a, const GroupTable& b) {
  if (a.windowed() || b.windowed()) {
    throw Error(ErrorCode::kUnsupported, "direct products of windowed groups");
  }
  const std::size_t na = a.size(), nb = b.size(), n = na * nb;
  std::vector<std::string> labels(n);
  std::vector<Index> mul(n * n);
  for (Index x = 0; x < n; ++x) {
    labels[x] = "(" + a.label(x / nb) + "," + b.label(x % nb) + ")";
    for (Index y = 0; y < n; ++y) {
      mul[x * n + y] = static_cast<Index>(a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb));
    }
  }
  return GroupTable(std::move(labels), std::move(mul), static_cast<Index>(a.unit() * nb + b.unit()));
}

void validate_group(const GroupTable& g) {
  const std::size_t n = g.size();
  for (Index a = 0; a < n; ++a) {
    if (g.mul(g.unit(), a) != a || g.mul(a, g.unit()) != a) {
      throw Error(ErrorCode::kBadTable, "unit fails on " + g.label(a));
    }
    for (Index b = 0; b < n; ++b) {
      const Index ab = g.mul(a, b);
      if (ab == kUndefined) {
        if (!g.windowed()) throw Error(ErrorCode::kBadTable, "undefined product in a finite group");
        continue;
      }
      for (Index c = 0; c < n; ++c) {
        const Index bc = g.mul(b, c);
        if (bc == kUndefined) continue;
        const Index l = g.mul(ab, c), r = g.mul(a, bc);
        if (l != kUndefined && r != kUndefined && l != r) {
          throw Error(ErrorCode::kBadTable, "group table is not associative at (" + g.label(a) + "," +
                                                g.label(b) + "," + g.label(c) + ")");
        }
      }
    }
  }
}

}  // namespace isgqd
