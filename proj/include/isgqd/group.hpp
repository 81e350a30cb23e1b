#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isgqd/types.hpp"

namespace isgqd {

/// A group given by its multiplication table. A window of the integers is
/// represented the same way, with products leaving the window marked
/// kUndefined; `z_radius` is then set.
class GroupTable {
 public:
  GroupTable() = default;
  GroupTable(std::vector<std::string> labels, std::vector<Index> mul, Index unit,
             std::optional<long> z_radius = std::nullopt);

  std::size_t size() const { return labels_.size(); }
  Index mul(Index a, Index b) const { return mul_[a * size() + b]; }
  Index unit() const { return unit_; }
  Index inverse(Index a) const { return inv_[a]; }
  const std::string& label(Index a) const { return labels_[a]; }
  const std::vector<std::string>& labels() const { return labels_; }

  bool windowed() const { return z_radius_.has_value(); }
  std::optional<long> z_radius() const { return z_radius_; }
  /// Integer represented by element `a` of a Z-window.
  long integer_of(Index a) const;
  /// Element index of integer h in a Z-window, kUndefined outside it.
  Index index_of_integer(long h) const;

  /// Finite groups and windows of Z are amenable; nothing else is
  /// representable here.
  bool amenable() const { return true; }

 private:
  std::vector<std::string> labels_;
  std::vector<Index> mul_;
  Index unit_ = 0;
  std::vector<Index> inv_;
  std::optional<long> z_radius_;
};

GroupTable trivial_group();
GroupTable cyclic_group(std::size_t order);
/// The integers restricted to [-radius, radius], ordered 0, 1, -1, 2, -2, ...
GroupTable integer_window(long radius);
/// Group generated by permutations of a common degree, elements in BFS
/// order from the identity. Throws kTooLarge past `cap` elements.
GroupTable group_from_permutations(const std::vector<Perm>& generators, std::size_t cap = 50000);
/// Validated group from an explicit table.
GroupTable group_from_table(std::vector<std::string> labels, const std::vector<std::vector<Index>>& mul);
GroupTable direct_product(const GroupTable& a, const GroupTable& b);

/// Checks closure, associativity, unit and inverses on all defined products.
/// Throws Error(kBadTable) with a description on failure.
void validate_group(const GroupTable& g);

}  // namespace isgqd
