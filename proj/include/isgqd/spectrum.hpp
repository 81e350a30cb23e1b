#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "isgqd/green.hpp"
#include "isgqd/semigroup.hpp"

namespace isgqd {

/// A filter of E(S) \ {0}: non-empty, upward closed, closed under products.
/// Finite semilattices only have principal filters.
struct Filter {
  std::vector<Index> members;  // ascending
  Index principal_at = 0;

  bool contains(Index e) const;
  bool operator==(const Filter& o) const { return members == o.members; }
};

/// e^ = {f in E : f >= e}.
Filter principal_filter(const InverseSemigroup& s, Index e);
/// Checks the filter axioms directly on a set of idempotents.
bool is_filter(const InverseSemigroup& s, const std::vector<Index>& members);

/// One filter per non-zero idempotent, in idempotent order. Each is checked
/// against the filter axioms and shown to be principal.
std::vector<Filter> enumerate_spectrum(const InverseSemigroup& s);

struct IsolationCertificate {
  Index e = 0;
  /// Maximal idempotents strictly below e. The zero appears when nothing
  /// non-zero lies below e.
  std::vector<Index> cover;
  bool valid = false;
  /// Only set on tower truncations: whether the limit level sitting above
  /// every truncation has a finite cover. It never does, since the levels
  /// below it form an infinite ascending chain.
  std::optional<bool> limit_level_has_finite_cover;
};
IsolationCertificate isolated_certificate(const InverseSemigroup& s, Index e);

/// theta_s(xi) = {e : e >= s f s* for some f in xi}. Throws kDomainViolation
/// unless s*s is in xi.
Filter theta(const InverseSemigroup& s, Index elem, const Filter& xi);

struct Germ {
  Index s = 0;
  Filter base;
  /// s . principal_at(base).
  Index canonical = 0;
};
Germ germ_canonical(const InverseSemigroup& s, Index elem, const Filter& xi);
/// [a, xi] = [b, xi] by the definition: some e in xi has ae = be.
bool germs_equal_by_definition(const InverseSemigroup& s, Index a, Index b, const Filter& xi);

/// Germs indexed by their canonical representative. Units are the filters
/// of enumerate_spectrum in the same order.
struct GroupoidTable {
  std::vector<Filter> units;
  /// Per germ: canonical element, source unit, range unit.
  std::vector<Index> canonical, source, range;
  /// Germ id by element index, kUndefined for the zero.
  std::vector<Index> germ_of;
  /// Unit id by idempotent index, kUndefined for the zero.
  std::vector<Index> unit_of;

  std::size_t size() const { return canonical.size(); }
  /// g . h when source(g) = range(h); nullopt otherwise or when the product
  /// leaves a window.
  std::optional<Index> compose(const InverseSemigroup& s, Index g, Index h) const;
  Index inverse(const InverseSemigroup& s, Index g) const { return germ_of[s.star(canonical[g])]; }
};

/// All germs, with the groupoid axioms and the germ-equality reduction
/// checked. Throws kSelfCheckFailed on any violation.
GroupoidTable enumerate_groupoid(const InverseSemigroup& s);
nlohmann::json groupoid_to_json(const InverseSemigroup& s, const GroupoidTable& g);

/// Orbits of the units under the germs.
std::vector<std::vector<Index>> unit_orbits(const GroupoidTable& g);
/// Every orbit is the whole unit space. Finite spectra are discrete, so
/// density is equality.
bool is_minimal(const InverseSemigroup& s);

struct StructureReport {
  bool minimal = false;
  bool zero_bisimple = false;
  bool order_equality = false;
  bool bisimple_and_order = false;
  bool brandt = false;
  std::optional<std::string> brandt_failure;
  std::size_t num_d_classes = 0;
  std::size_t nonzero_idempotents = 0;
  /// Subgroup recovered at the smallest non-zero idempotent.
  std::optional<GroupTable> group;
  std::optional<Index> base_idempotent;
  bool subgroups_amenable = true;
  /// Minimal groupoid and amenable subgroups give a quasi-diagonal algebra.
  std::optional<bool> qd_by_minimality;
};

/// Evaluates the three characterizations separately and throws
/// kInconsistentEquivalence if they disagree.
StructureReport grpdmin_check(const InverseSemigroup& s);
StructureReport grpdmin_check(const InverseSemigroup& s, const GreenClasses& g);
nlohmann::json structure_to_json(const StructureReport& r);

}  // namespace isgqd
