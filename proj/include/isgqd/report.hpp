#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "isgqd/qd.hpp"
#include "isgqd/spec_io.hpp"

namespace isgqd {

struct CommandOptions {
  std::uint64_t seed = 1;
  int n_max = 4;
  /// "full", "berg", "user:<file>", or empty for berg on windows and full
  /// elsewhere.
  std::string strategy;
  double tol = 1e-9;
  int r = 2;
  int n = 4;
  std::optional<std::size_t> m;
  bool margin = false;
  std::string weights = "corrected";
};

/// Exit status 0 when every check passes, 2 on soft failures.
struct CommandResult {
  nlohmann::json report;
  std::optional<std::string> csv;
  int exit_code = 0;
};

CommandResult run_analyze(const LoadedSpec& spec, const CommandOptions& options);
CommandResult run_qd(const LoadedSpec& spec, const CommandOptions& options);
CommandResult run_nonfl(const LoadedSpec& spec, const CommandOptions& options);
CommandResult run_trace(const LoadedSpec& spec, const CommandOptions& options);
CommandResult run_groupoid(const LoadedSpec& spec, const CommandOptions& options);

/// The witness named by `options.strategy` for this semigroup.
QDWitness witness_for(const InverseSemigroup& s, const CommandOptions& options);

}  // namespace isgqd
