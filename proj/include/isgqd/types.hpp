#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace isgqd {

/// Dense element index into a multiplication table.
using Index = std::uint32_t;

/// Table entry for a product that leaves a finite window of an infinite
/// semigroup or group.
inline constexpr Index kUndefined = std::numeric_limits<Index>::max();

/// Permutation of {0, ..., d-1}, stored as its image list.
using Perm = std::vector<std::uint32_t>;

/// (p * q)(i) = p(q(i)): q acts first.
Perm compose(const Perm& p, const Perm& q);
Perm invert(const Perm& p);
Perm identity_perm(std::size_t degree);
bool is_permutation(const Perm& p);

}  // namespace isgqd
