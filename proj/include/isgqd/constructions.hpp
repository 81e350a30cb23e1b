#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isgqd/group.hpp"
#include "isgqd/semigroup.hpp"

namespace isgqd {

/// E+ x H x E+ with a zero: (f2,h2,e2)(f1,h1,e1) = (f2,h2h1,e1) if e2 = f1,
/// else 0. A windowed H yields a windowed semigroup.
InverseSemigroup brandt(const GroupTable& group, std::size_t k);

/// A meet semilattice on labelled points.
struct Semilattice {
  std::vector<std::string> labels;
  std::vector<std::vector<Index>> meet;
  bool geq(Index e, Index f) const { return meet[e][f] == f; }
};

/// Connecting homomorphism G_from -> G_to for from >= to, as an image list.
using CliffordHoms = std::map<std::pair<Index, Index>, std::vector<Index>>;

/// Semilattice of groups with g_e . h_f = pi(g) pi(h) in G_{e meet f}. Maps
/// for e = e are the identity and need not be listed. When the bottom group
/// is trivial its element is the zero, otherwise a zero is adjoined.
InverseSemigroup clifford(const Semilattice& lattice, const std::vector<GroupTable>& groups,
                          const CliffordHoms& homs);

/// All partial bijections of {1..n} under composition (apply the right
/// factor first), the empty map being the zero. n <= 4.
InverseSemigroup symmetric_inverse_monoid(std::size_t n);

/// Partial bijection of {0..degree-1}; -1 marks points outside the domain.
using PartialPerm = std::vector<int>;
/// Inverse subsemigroup of I_degree generated by the given maps, with the
/// empty map adjoined as zero.
InverseSemigroup partial_bijections(std::size_t degree, const std::vector<PartialPerm>& generators);

/// T = E+ x E+ with a zero, (f2,e2)(f1,e1) = (f2,e1) iff e2 = f1, plus an
/// adjoined unit when `with_unit`.
InverseSemigroup qdnotr_family(std::size_t k, bool with_unit = true);

/// Reduced words of the free group on a, b of length <= radius.
/// Letters: 0 = a, 1 = a^-1, 2 = b, 3 = b^-1.
class FreeGroupBall {
 public:
  explicit FreeGroupBall(int radius);

  int radius() const { return radius_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::uint8_t>& word(Index i) const { return words_[i]; }
  int length(Index i) const { return static_cast<int>(words_[i].size()); }
  std::string label(Index i) const;
  /// Index of letter.x, kUndefined when it leaves the ball.
  Index left_multiply(std::uint8_t letter, Index x) const { return left_[static_cast<std::size_t>(x) * 4 + letter]; }
  /// Number of elements of length <= r (r <= radius).
  std::size_t ball_size(int r) const { return by_radius_[r]; }

 private:
  int radius_;
  std::vector<std::vector<std::uint8_t>> words_;
  std::vector<Index> left_;
  std::vector<std::size_t> by_radius_;
};

/// One finite quotient of F2, given by the images of a and b.
struct TowerLevel {
  Perm a, b;
  /// Elements of the quotient with a representative word each, when the
  /// group is small enough to list.
  std::optional<std::vector<Perm>> elements;
  std::optional<std::vector<std::vector<std::uint8_t>>> words;
};

/// A truncated descending chain of finite quotients of F2 plus a
/// materialized ball of F2 standing in for the limit level.
struct QuotientTower {
  std::vector<TowerLevel> levels;
  FreeGroupBall ball{0};
  /// Trivial intersection of the kernels cannot be witnessed at finite
  /// scale; this records that it is assumed.
  bool kernels_assumed_separating = true;

  Perm evaluate(std::size_t level, const std::vector<std::uint8_t>& word) const;
  Perm letter(std::size_t level, std::uint8_t l) const;
};

/// Validates perms and the descending-chain condition on the ball of radius
/// `radius`. Levels up to `materialize_cap` elements are listed.
QuotientTower quotient_tower(const std::vector<std::pair<Perm, Perm>>& levels, int radius,
                             std::size_t materialize_cap = 5000);

/// True iff level m is injective on the ball of radius rho.
bool verify_ball_injectivity(const QuotientTower& tower, std::size_t level, int rho);
/// Largest rho <= ball radius with verified injectivity.
int injectivity_radius(const QuotientTower& tower, std::size_t level);

/// Levels 0..m as a finite Clifford semigroup over the chain of their units.
InverseSemigroup tower_truncation(const QuotientTower& tower, std::size_t m);

/// Deterministic tower: trivial group, the mod-2 abelianization, and a third
/// level found by seeded search over symmetric groups, extended diagonally
/// so the chain descends, with injectivity radius >= `min_radius`.
struct TowerCatalogEntry {
  std::vector<std::pair<Perm, Perm>> levels;
  int verified_radius = 0;
  std::uint64_t seed = 0;
  std::size_t search_degree = 0;
};
TowerCatalogEntry default_tower_levels(std::uint64_t seed, int min_radius);

}  // namespace isgqd
