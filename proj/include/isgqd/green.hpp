#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isgqd/group.hpp"
#include "isgqd/semigroup.hpp"

namespace isgqd {

/// An H-class containing an idempotent, as a group. `elements[i]` is the
/// semigroup element for group index i; index 0 is the idempotent.
struct MaximalSubgroup {
  Index idempotent = 0;
  std::vector<Index> elements;
  GroupTable table;
};

struct GreenClasses {
  std::vector<std::uint32_t> l_class, r_class, h_class, d_class;
  std::size_t num_l = 0, num_r = 0, num_h = 0, num_d = 0;
  /// Per D-class: its elements and its idempotents, both ascending.
  std::vector<std::vector<Index>> d_members;
  std::vector<std::vector<Index>> d_idempotents;
  /// One entry per idempotent, in ascending idempotent order.
  std::vector<MaximalSubgroup> max_subgroups;

  const MaximalSubgroup& subgroup_at(Index e) const;
};

/// Computes L, R, H and D. D is taken as the transitive closure of L u R and
/// cross-checked against the one-step composite L o R and, on idempotents,
/// against the criterion e = s*s, f = ss*. Throws kSelfCheckFailed if the
/// routes disagree.
GreenClasses green_partition(const InverseSemigroup& s);

/// s <= t in the natural partial order. Both "s = te" and "s = ft" for
/// idempotents e, f are evaluated; a disagreement throws kSelfCheckFailed.
bool natural_leq(const InverseSemigroup& s, Index a, Index b);

/// Full natural order as a row-major boolean matrix: leq[a * n + b].
struct PartialOrder {
  std::size_t n = 0;
  std::vector<bool> leq;
  bool operator()(Index a, Index b) const { return leq[static_cast<std::size_t>(a) * n + b]; }
};
PartialOrder natural_order(const InverseSemigroup& s);

/// Connecting elements and the map D -> H_{e0} from s to r*_{ss*} s r_{s*s}.
struct HClassBijection {
  Index e0 = 0;
  std::uint32_t d_class = 0;
  /// connector[f] for every idempotent f of the class; kUndefined elsewhere.
  std::vector<Index> connector;
  /// image[s] for s in the class; kUndefined elsewhere.
  std::vector<Index> image;
};

/// The connecting element r_f is the smallest index with r*r = e0, rr* = f,
/// and r_{e0} = e0.
HClassBijection hclass_bijection(const InverseSemigroup& s, const GreenClasses& g, Index e0);
/// Checks that `b` restricts to a bijection on every H-class of its D-class
/// and to an isomorphism on every maximal subgroup there.
bool verify_hclass_bijection(const InverseSemigroup& s, const GreenClasses& g, const HClassBijection& b);

struct OrderEqualityResult {
  bool holds = true;
  /// (larger, smaller) pair in a common D-class.
  std::optional<std::pair<Index, Index>> witness;
};
/// Whether the natural order restricts to equality on every D-class.
OrderEqualityResult order_equality_on_dclasses(const InverseSemigroup& s, const GreenClasses& g);

/// Zero plus exactly one other D-class (or just the zero).
bool is_0_bisimple(const InverseSemigroup& s, const GreenClasses& g);

/// Exhaustive check of the H-class multiplication facts: for every H-class H
/// and element s, H lies in s*s.S iff it meets it, and in that case sH is the
/// H-class in the same L-class with range s f s*. Returns a description of
/// the first failure, or nullopt.
std::optional<std::string> check_hclass_multiplication(const InverseSemigroup& s, const GreenClasses& g);

}  // namespace isgqd
