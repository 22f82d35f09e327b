#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>

#include "pestscout/experiments.hpp"

namespace pestscout {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

using ParsedConfig = std::variant<SimConfig, Scenario, SweepSpec>;

// Flat key=value text with '#' comments and [field] [spread] [cost] [policy]
// [run] [sweep] sections. Unknown sections or keys are rejected with their
// line number; anything omitted takes the mode's defaults. A [sweep] section
// yields a SweepSpec, several policies (or repetitions > 1) a Scenario, and
// a plain single-policy file a SimConfig.
ParsedConfig parse_config(const std::filesystem::path& path);
ParsedConfig parse_config_text(const std::string& text, const std::string& origin);

// Every key written out explicitly; re-parsing reproduces the same
// configuration.
std::string emit_config(const SimConfig& config);
std::string emit_config(const Scenario& scenario);
std::string emit_config(const SweepSpec& sweep);

// Parse a policy list entry like "neighbor_every_n:3" (the parameter sets n,
// or max_skip for the online-random kinds).
PolicySpec parse_policy_entry(const std::string& entry);

}  // namespace pestscout
