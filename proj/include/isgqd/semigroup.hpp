#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "isgqd/group.hpp"
#include "isgqd/types.hpp"

namespace isgqd {

/// How thoroughly build-time validation checks associativity. Exhaustive
/// triple scans are cubic, so large tables built by trusted constructors
/// fall back to a seeded sample of triples.
enum class Validation { kFull, kSampled };

/// Present on semigroups built as E+ x H x E+ with a zero. Elements are laid
/// out lexicographically in (range, group element, source) after the zero.
struct BrandtLayout {
  GroupTable group;
  std::size_t k = 0;

  Index index(std::size_t range, Index h, std::size_t source) const {
    return static_cast<Index>(1 + (range * group.size() + h) * k + source);
  }
};

/// Present on truncations of a quotient tower: the units of the levels, from
/// the bottom level upwards. In the untruncated family a limit level sits
/// above every listed one.
struct ChainLayout {
  std::vector<Index> level_units;
  bool has_limit_level = true;
};

/// A finite inverse semigroup with a zero, given by a validated
/// multiplication table. Windows of infinite semigroups are represented by
/// tables with kUndefined entries; validation then only covers products that
/// stay inside the window.
class InverseSemigroup {
 public:
  InverseSemigroup(std::vector<std::string> labels, std::vector<Index> table, Index zero,
                   Validation validation = Validation::kFull, bool windowed = false);

  /// Builds from a row-major nested table. Rejects anything that is not an
  /// inverse semigroup with the given zero.
  static InverseSemigroup from_table(std::vector<std::string> labels,
                                     const std::vector<std::vector<Index>>& mul, Index zero);

  std::size_t size() const { return labels_.size(); }
  Index mul(Index a, Index b) const { return table_[static_cast<std::size_t>(a) * size() + b]; }
  /// a * b * c, kUndefined if any partial product leaves the window.
  Index mul(Index a, Index b, Index c) const;
  Index star(Index a) const { return star_[a]; }
  /// s*s, the source idempotent.
  Index source(Index a) const { return mul(star_[a], a); }
  /// ss*, the range idempotent.
  Index range(Index a) const { return mul(a, star_[a]); }
  Index zero() const { return zero_; }

  const std::string& label(Index a) const { return labels_[a]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<Index> find(const std::string& label) const;

  const std::vector<Index>& idempotents() const { return idempotents_; }
  bool is_idempotent(Index a) const { return is_idempotent_[a]; }
  std::optional<Index> unit() const { return unit_; }
  bool windowed() const { return windowed_; }

  const std::optional<BrandtLayout>& brandt_layout() const { return brandt_; }
  const std::optional<ChainLayout>& chain_layout() const { return chain_; }
  void set_brandt_layout(BrandtLayout layout) { brandt_ = std::move(layout); }
  void set_chain_layout(ChainLayout layout) { chain_ = std::move(layout); }

 private:
  void validate(Validation validation);

  std::vector<std::string> labels_;
  std::vector<Index> table_;
  Index zero_;
  bool windowed_;
  std::vector<Index> star_;
  std::vector<Index> idempotents_;
  std::vector<bool> is_idempotent_;
  std::optional<Index> unit_;
  std::optional<BrandtLayout> brandt_;
  std::optional<ChainLayout> chain_;
};

}  // namespace isgqd
