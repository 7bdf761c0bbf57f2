#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "freemix/algebra.hpp"
#include "freemix/markov.hpp"

namespace freemix {

/// Environment variable consulted for the default output directory.
inline constexpr const char* kOutDirEnvVar = "FREEMIX_OUT";

/// Parsed experiment configuration: structurally validated entries plus the
/// optional default output directory from the file itself.
struct ExperimentConfig {
  std::vector<nlohmann::json> entries;
  std::optional<std::string> out;
};

/// Loads and structurally validates a configuration file (ConfigError on any
/// problem: unknown kind, missing fields, empty or non-increasing n-grid,
/// missing seed where sampling is used, duplicate output names).
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const nlohmann::json& root);

/// Output directory resolution: CLI flag, then the config's "out" field,
/// then the FREEMIX_OUT environment variable, then the working directory.
std::filesystem::path resolve_out_dir(const ExperimentConfig& config,
                                      const std::optional<std::string>& cli_out);

/// Matrix literal: rows of entries, each entry a [re, im] pair or a plain
/// number.
Matrix parse_matrix(const nlohmann::json& j);

/// Operator literal: a builtin description or an explicit Kraus family /
/// superoperator over a declared block algebra. Malformed input raises
/// ConfigError; complete-positivity failures surface later as
/// ValidationError.
MarkovOperator parse_operator(const nlohmann::json& j);

/// Runs every entry, writing one CSV per entry into out_dir. Returns 0 on
/// success, 3 if any entry failed Markov validation, 4 if any internal
/// invariant check (classification guard, gallery expectation, bound order)
/// failed. Diagnostics go to stderr.
int run_experiments(const ExperimentConfig& config,
                    const std::filesystem::path& out_dir);

/// Validation pass without outputs: instantiates every configured object and
/// validates every operator. Same exit-code contract as run_experiments.
int validate_experiments(const ExperimentConfig& config);

}  // namespace freemix
