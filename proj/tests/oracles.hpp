#pragma once

// Reference computations written straight from the definitions. They share
// no code with the library beyond the multiplication table they read.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "isgqd/semigroup.hpp"

#ifndef ISGQD_CATALOG_DIR
#define ISGQD_CATALOG_DIR "catalog"
#endif

namespace oracle {

using isgqd::Index;
using isgqd::InverseSemigroup;

inline std::vector<std::string> catalog_files() {
  return {"semilattice_two",     "semilattice_chain",  "semilattice_square", "symmetric_inverse_2",
          "symmetric_inverse_3", "partial_shift_3",    "brandt_trivial_2",   "brandt_z2_2",
          "brandt_z2_3",         "brandt_z3_4",        "brandt_s3_2",        "brandt_z_window_12",
          "brandt_z_window_200", "clifford_chain_z4",  "clifford_diamond",   "qdnotr_k1",
          "qdnotr_k2",           "qdnotr_k3",          "qdnotr_k4",          "qdnotr_k5",
          "qdnotr_k6",           "qdnotr_k7",          "qdnotr_k8",          "qdnotr_nounit_k3",
          "tower_free_group"};
}

inline std::string catalog_path(const std::string& name) {
  return std::string(ISGQD_CATALOG_DIR) + "/" + name + ".json";
}

/// Partial bijection of {0..n-1} as images, -1 outside the domain.
using PMap = std::vector<int>;

/// Every partial bijection of an n-set, by choosing an image or nothing for
/// each point.
inline std::vector<PMap> all_partial_bijections(int n) {
  std::vector<PMap> out;
  PMap cur(n, -1);
  std::vector<bool> used(n, false);
  auto rec = [&](auto&& self, int i) -> void {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    cur[i] = -1;
    self(self, i + 1);
    for (int v = 0; v < n; ++v) {
      if (used[v]) continue;
      used[v] = true;
      cur[i] = v;
      self(self, i + 1);
      used[v] = false;
    }
    cur[i] = -1;
  };
  rec(rec, 0);
  return out;
}

/// (s t)(x) = s(t(x)).
inline PMap compose(const PMap& s, const PMap& t) {
  PMap r(t.size(), -1);
  for (std::size_t x = 0; x < t.size(); ++x) {
    if (t[x] >= 0) r[x] = s[t[x]];
  }
  return r;
}

inline int rank(const PMap& s) {
  return static_cast<int>(std::count_if(s.begin(), s.end(), [](int v) { return v >= 0; }));
}

/// Sum over k of C(n,k)^2 k!.
inline long symmetric_inverse_order(int n) {
  long total = 0;
  for (int k = 0; k <= n; ++k) {
    long c = 1;
    for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
    long f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    total += c * c * f;
  }
  return total;
}

/// Reduced words of length <= m in a free group of rank 2.
inline long free_ball_size(int m) {
  long p = 1;
  for (int i = 0; i < m; ++i) p *= 3;
  return 1 + 2 * (p - 1);
}

inline std::vector<Index> idempotents(const InverseSemigroup& s) {
  std::vector<Index> out;
  for (Index x = 0; x < s.size(); ++x) {
    if (s.mul(x, x) == x) out.push_back(x);
  }
  return out;
}

/// The inverse by search: the unique t with sts = s, tst = t.
inline Index inverse_by_search(const InverseSemigroup& s, Index a) {
  Index found = isgqd::kUndefined;
  for (Index t = 0; t < s.size(); ++t) {
    if (s.mul(s.mul(a, t), a) == a && s.mul(s.mul(t, a), t) == t) {
      if (found != isgqd::kUndefined) return isgqd::kUndefined;
      found = t;
    }
  }
  return found;
}

/// Principal left ideal S^1 a as a sorted set.
inline std::vector<Index> left_ideal(const InverseSemigroup& s, Index a) {
  std::set<Index> out{a};
  for (Index x = 0; x < s.size(); ++x) out.insert(s.mul(x, a));
  return {out.begin(), out.end()};
}

inline std::vector<Index> right_ideal(const InverseSemigroup& s, Index a) {
  std::set<Index> out{a};
  for (Index x = 0; x < s.size(); ++x) out.insert(s.mul(a, x));
  return {out.begin(), out.end()};
}

/// Class ids of a relation given by a key per element.
template <typename Key>
std::vector<std::uint32_t> classes_by_key(const std::vector<Key>& keys) {
  std::map<Key, std::uint32_t> ids;
  std::vector<std::uint32_t> out;
  for (const auto& k : keys) out.push_back(ids.emplace(k, static_cast<std::uint32_t>(ids.size())).first->second);
  return out;
}

/// True iff two class-id vectors describe the same partition.
inline bool same_partition(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  if (a.size() != b.size()) return false;
  std::map<std::uint32_t, std::uint32_t> ab, ba;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (ab.emplace(a[i], b[i]).first->second != b[i]) return false;
    if (ba.emplace(b[i], a[i]).first->second != a[i]) return false;
  }
  return true;
}

/// Green's L, R by principal one-sided ideals, D by principal two-sided
/// ideals (equal to J, which coincides with D on finite semigroups).
inline std::vector<std::uint32_t> l_classes(const InverseSemigroup& s) {
  std::vector<std::vector<Index>> keys;
  for (Index a = 0; a < s.size(); ++a) keys.push_back(left_ideal(s, a));
  return classes_by_key(keys);
}

inline std::vector<std::uint32_t> r_classes(const InverseSemigroup& s) {
  std::vector<std::vector<Index>> keys;
  for (Index a = 0; a < s.size(); ++a) keys.push_back(right_ideal(s, a));
  return classes_by_key(keys);
}

inline std::vector<std::uint32_t> j_classes(const InverseSemigroup& s) {
  std::vector<std::vector<Index>> keys;
  for (Index a = 0; a < s.size(); ++a) {
    std::set<Index> ideal;
    for (Index x : left_ideal(s, a)) {
      for (Index y : right_ideal(s, x)) ideal.insert(y);
    }
    keys.emplace_back(ideal.begin(), ideal.end());
  }
  return classes_by_key(keys);
}

/// All filters of E(S) \ {0} by subset enumeration. Each filter is a sorted
/// member list.
inline std::vector<std::vector<Index>> brute_force_filters(const InverseSemigroup& s) {
  std::vector<Index> e;
  for (Index x : idempotents(s)) {
    if (x != s.zero()) e.push_back(x);
  }
  std::vector<std::vector<Index>> out;
  const std::size_t n = e.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<Index> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) members.push_back(e[i]);
    }
    auto in = [&](Index x) { return std::binary_search(members.begin(), members.end(), x); };
    bool ok = true;
    for (Index a : members) {
      for (Index b : e) {
        if (s.mul(a, b) == a && !in(b)) ok = false;  // upward closed
      }
      for (Index b : members) {
        if (!in(s.mul(a, b))) ok = false;  // closed under meets, so 0 excluded
      }
    }
    if (ok) out.push_back(members);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Germs [s, xi] with s*s in xi, counted as classes of the relation
/// "some e in xi has se = te" by union-find.
inline std::size_t brute_force_germ_count(const InverseSemigroup& s) {
  const auto filters = brute_force_filters(s);
  std::vector<std::pair<Index, std::size_t>> germs;
  for (std::size_t f = 0; f < filters.size(); ++f) {
    const auto& xi = filters[f];
    for (Index a = 0; a < s.size(); ++a) {
      if (std::binary_search(xi.begin(), xi.end(), s.mul(s.star(a), a))) germs.emplace_back(a, f);
    }
  }
  std::vector<std::size_t> parent(germs.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < germs.size(); ++i) {
    for (std::size_t j = i + 1; j < germs.size(); ++j) {
      if (germs[i].second != germs[j].second) continue;
      for (Index e : filters[germs[i].second]) {
        if (s.mul(germs[i].first, e) == s.mul(germs[j].first, e)) {
          parent[find(i)] = find(j);
          break;
        }
      }
    }
  }
  std::set<std::size_t> roots;
  for (std::size_t i = 0; i < germs.size(); ++i) roots.insert(find(i));
  return roots.size();
}

/// v_s from its definition as a dense matrix.
inline Eigen::MatrixXd dense_left_regular(const InverseSemigroup& s, Index a) {
  const auto n = static_cast<Eigen::Index>(s.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const Index src = s.mul(s.star(a), a);
  for (Index x = 0; x < s.size(); ++x) {
    if (s.mul(src, x) == x) m(s.mul(a, x), x) = 1.0;
  }
  return m;
}

inline Eigen::MatrixXd dense_right_regular(const InverseSemigroup& s, Index a) {
  const auto n = static_cast<Eigen::Index>(s.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const Index src = s.mul(s.star(a), a);
  for (Index x = 0; x < s.size(); ++x) {
    if (s.mul(x, src) == x) m(s.mul(x, s.star(a)), x) = 1.0;
  }
  return m;
}

inline double dense_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

/// Commutator norm of the rotation witness against the shift, as a plain
/// dense computation on Z truncated to [-L, L].
inline double berg_dense(int n, int length) {
  const int dim = 2 * length + 1;
  auto at = [&](int h) { return h + length; };
  const int m = n, c = m / 2, big = 2 * m + 1;
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(dim, big);
  for (int i = 0; i < big; ++i) {
    const double phi = i <= m ? 0.0 : (i - m) * M_PI / (2.0 * (m + 1));
    basis(at(i - c), i) += std::cos(phi);
    basis(at(i - big - c), i) += std::sin(phi);
  }
  const Eigen::MatrixXd p = basis * basis.transpose();
  Eigen::MatrixXd shift = Eigen::MatrixXd::Zero(dim, dim);
  for (int h = -length; h < length; ++h) shift(at(h + 1), at(h)) = 1.0;
  return dense_norm(shift * p - p * shift);
}

}  // namespace oracle
