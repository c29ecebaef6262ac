#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace hagedorn {

/// A scenario configuration held as JSON text. See README for the schema.
class ScenarioConfig {
 public:
  /// Throws ConfigError on malformed JSON or a non-object document.
  static ScenarioConfig parse(const std::string& text);
  static ScenarioConfig load(const std::filesystem::path& path);
  /// Throws ConfigError for unknown names.
  static ScenarioConfig preset(const std::string& name);

  /// JSON merge patch of `patch` onto this config.
  ScenarioConfig merged(const ScenarioConfig& patch) const;

  /// Sorted-key JSON.
  std::string dump(int indent = 2) const;
  /// FNV-1a 64 of the compact dump with output_dir removed.
  std::uint64_t hash() const;

  std::string output_dir() const;
  void set_output_dir(const std::string& dir);
  void disable_oracle();
  void set_ode_tol(double tol);
  void set_grid_tol(double tol);

 private:
  std::string text_;
};

std::vector<std::string> preset_names();

struct Diagnostic {
  std::string code;
  std::string message;
};

/// Empty iff the config is runnable.
std::vector<Diagnostic> validate_config(const ScenarioConfig& config);

struct CheckResult {
  std::string name;
  double value = 0.0;  // passes when value <= threshold
  double threshold = 0.0;
  bool passed = false;
};

struct RunReport {
  int exit_code = 0;
  std::vector<CheckResult> checks;
  double horizon = 0.0;  // +inf when positivity held
  bool truncated = false;
  std::size_t states = 0;
  std::vector<std::filesystem::path> files;
  std::string message;
};

/// Propagates, verifies and writes every artifact into output_dir().
/// Throws ConfigError when the config does not validate.
RunReport run_scenario(const ScenarioConfig& config);

}  // namespace hagedorn
