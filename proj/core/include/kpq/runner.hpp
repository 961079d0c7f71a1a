#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace kpq {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { exit_pass = 0, exit_error = 1, exit_fail = 2 };

struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  std::string experiment;
  std::string instance;
  nlohmann::json parameters = nlohmann::json::object();
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
};

/// Strict: unknown keys and unknown experiments throw config. A missing seed
/// is caught by execute, so that a command-line seed can still fill it.
ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);

/// Whether the experiment draws random samples with these parameters.
bool is_stochastic(const ExperimentConfig& c);

struct Outcome {
  nlohmann::json payload;     ///< numerical results, covered by the digest
  nlohmann::json tolerances;
  std::string csv;
  bool pass = false;
};

/// Pure computation; results do not depend on jobs.
Outcome execute(const ExperimentConfig& c, unsigned jobs = 1);

/// FNV-1a 64 of the canonical (sorted-key) serialization, as 16 hex digits.
std::string digest(const nlohmann::json& j);

struct RunOverrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
};

struct RunResult {
  int exit_code = exit_error;
  std::string message;
  std::filesystem::path output_dir;
  nlohmann::json report;
};

/// Runs and writes report.json and tables.csv atomically into the output
/// directory. Never throws; errors become exit code 1.
RunResult run(const nlohmann::json& config, const RunOverrides& overrides = {});
RunResult run_file(const std::filesystem::path& config_path, const RunOverrides& overrides = {});

/// Recomputes a report's payload and compares digests.
RunResult replay(const std::filesystem::path& report_path, unsigned jobs = 1);

/// One line per registry pattern.
std::string list_instances();

}  // namespace kpq
