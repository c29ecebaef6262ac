#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hagedorn/error.hpp"
#include "hagedorn/scenario.hpp"

namespace {

using hagedorn::ScenarioConfig;

int print_diagnostics(const std::vector<hagedorn::Diagnostic>& diags) {
  for (const auto& d : diags) std::cerr << "[" << d.code << "] " << d.message << '\n';
  return diags.empty() ? 0 : 2;
}

int run(const std::string& path, const std::string& preset, const std::string& out, bool no_oracle,
        std::optional<double> ode_tol, std::optional<double> grid_tol) {
  if (path.empty() && preset.empty()) {
    std::cerr << "run: give a config path or --preset NAME\n";
    return 2;
  }
  // A preset is the base; a config file given alongside it is merged on top.
  ScenarioConfig config = preset.empty() ? ScenarioConfig::load(path) : ScenarioConfig::preset(preset);
  if (!preset.empty() && !path.empty()) config = config.merged(ScenarioConfig::load(path));
  if (const char* env = std::getenv("HAGEDORN_OUT_DIR"); env && *env) config.set_output_dir(env);
  if (!out.empty()) config.set_output_dir(out);
  if (no_oracle) config.disable_oracle();
  if (ode_tol) config.set_ode_tol(*ode_tol);
  if (grid_tol) config.set_grid_tol(*grid_tol);

  if (const auto diags = hagedorn::validate_config(config); !diags.empty()) return print_diagnostics(diags);

  const hagedorn::RunReport report = hagedorn::run_scenario(config);
  for (const auto& c : report.checks) {
    std::cout << (c.passed ? "ok    " : "FAIL  ") << c.name << "  " << c.value << " <= " << c.threshold << '\n';
  }
  if (!report.message.empty()) std::cout << report.message << '\n';
  std::cout << "wrote " << report.files.size() << " files to " << config.output_dir() << '\n';
  return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hagedorn wavepacket propagation under non-Hermitian quadratic Hamiltonians"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write its artifacts");
  std::string config_path, preset, out;
  bool no_oracle = false;
  std::optional<double> ode_tol, grid_tol;
  run_cmd->add_option("config", config_path, "Scenario config (JSON)");
  run_cmd->add_option("--preset", preset, "Embedded preset to run");
  run_cmd->add_option("--out", out, "Output directory (overrides HAGEDORN_OUT_DIR)");
  run_cmd->add_flag("--no-oracle", no_oracle, "Skip the grid oracle");
  run_cmd->add_option("--ode-tol", ode_tol, "ODE tolerance")->check(CLI::PositiveNumber);
  run_cmd->add_option("--grid-tol", grid_tol, "Grid oracle tolerance")->check(CLI::PositiveNumber);

  auto* validate_cmd = app.add_subcommand("validate", "Check a config and print diagnostics");
  std::string validate_path;
  validate_cmd->add_option("config", validate_path, "Scenario config (JSON)")->required();

  auto* presets_cmd = app.add_subcommand("presets", "Embedded presets");
  presets_cmd->require_subcommand(1);
  auto* list_cmd = presets_cmd->add_subcommand("list", "List preset names");
  auto* show_cmd = presets_cmd->add_subcommand("show", "Print a preset config");
  std::string show_name;
  show_cmd->add_option("name", show_name, "Preset name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return run(config_path, preset, out, no_oracle, ode_tol, grid_tol);
    if (*validate_cmd) {
      const int rc = print_diagnostics(hagedorn::validate_config(ScenarioConfig::load(validate_path)));
      if (rc == 0) std::cout << "ok\n";
      return rc;
    }
    if (*list_cmd) {
      for (const auto& name : hagedorn::preset_names()) std::cout << name << '\n';
      return 0;
    }
    if (*show_cmd) {
      std::cout << ScenarioConfig::preset(show_name).dump(2) << '\n';
      return 0;
    }
  } catch (const hagedorn::Error& e) {
    std::cerr << "error [" << hagedorn::to_string(e.code()) << "]: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
