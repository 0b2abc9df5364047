#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "condint/montecarlo.hpp"

namespace condint {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Line-based `key = value` format. `#` starts a comment. Keys before the
/// first `[section]` are shared defaults; each section is one experiment
/// named after its header. Without sections the shared keys form a single
/// experiment named "default". Errors carry the offending line number.
std::vector<ExperimentConfig> parse_config_text(std::string_view text);
std::vector<ExperimentConfig> parse_config(const std::filesystem::path& path);

/// Canonical text that parses back to the same experiments.
std::string echo_config(const std::vector<ExperimentConfig>& experiments);

/// Keys and values of one experiment in canonical order and spelling.
KeyValues config_fields(const ExperimentConfig& cfg);

/// Key reference with defaults, for --help.
std::string config_reference();

}  // namespace condint
