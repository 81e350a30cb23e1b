#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "isgqd/constructions.hpp"
#include "isgqd/group.hpp"
#include "isgqd/semigroup.hpp"

namespace isgqd {

/// A parsed semigroup specification. Tower specs also carry the tower, and
/// their semigroup is the truncation at `truncated_at`.
struct LoadedSpec {
  std::string type;
  std::string name;
  nlohmann::json source;
  std::optional<InverseSemigroup> semigroup;
  std::optional<QuotientTower> tower;
  std::size_t truncated_at = 0;

  const InverseSemigroup& semi() const { return *semigroup; }
};

/// Group payloads: {"kind": "trivial"}, {"kind": "cyclic", "order": n},
/// {"kind": "integers", "radius": N}, {"kind": "permutations",
/// "generators": [[...]]} (0-based images), {"kind": "table", "elements":
/// [...], "mul": [[...]]}.
GroupTable parse_group(const nlohmann::json& j);

/// Builds from parsed JSON. Schema problems throw kSpecInvalid naming the
/// offending field.
LoadedSpec build_spec(const nlohmann::json& j);

/// Parses text; malformed JSON throws kSpecInvalid with line and column.
LoadedSpec parse_spec(const std::string& text);

LoadedSpec load_spec(const std::string& path);

}  // namespace isgqd
