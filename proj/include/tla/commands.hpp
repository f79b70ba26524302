#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "tla/presentation.hpp"

namespace tla {

// Command-line values that take precedence over the configuration file.
struct CommandOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> steps;
  std::optional<double> tol;
  bool family = false;
};

struct CommandOutput {
  std::string text;
  // Suggested extension of the output: "json" or "csv".
  std::string format = "json";
  // False when a verification command ran to completion and found failures.
  bool passed = true;
};

// Builds a presentation from a JSON description; unknown keys are Config errors.
SquarePresentation presentation_from_json(const nlohmann::json& spec);

// Runs classify, monodromy, transport, integrate or selftest. Output is a
// deterministic function of the configuration and overrides.
CommandOutput run_command(const std::string& command, const nlohmann::json& config,
                          const CommandOverrides& overrides = {});

}  // namespace tla
