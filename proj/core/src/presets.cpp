#include <map>

#include "hagedorn/error.hpp"
#include "hagedorn/scenario.hpp"

namespace hagedorn {

namespace {

// Oracle times end at t omega = pi/2 with omega = sqrt(1.25).
const std::map<std::string, std::string>& presets() {
  static const std::map<std::string, std::string> table{
      {"swanson-fig1", R"({
  "name": "swanson-fig1",
  "description": "Davies-Swanson oscillator, omega0 = 1, delta = 0.5, over one period",
  "hamiltonian": {"kind": "davies_swanson", "omega0": 1.0, "delta": 0.5},
  "initial_frame": {"kind": "explicit", "matrix": [[1.0], [[0.0, -1.0]]]},
  "center": [0.0, 0.0],
  "eps": 1.0,
  "times": {"start": 0.0, "stop": 5.619851784832581, "count": 200},
  "alphas": ["0", "1", "2"],
  "oracle": {"enabled": true, "lower": -12.0, "upper": 12.0, "points": 1024, "dt": 1e-3,
             "times": [0.25, 0.5, 1.0, 1.4049629462081452], "ks": [0, 1, 2, 3]},
  "output_dir": "out/swanson-fig1"
})"},
      {"hermitian-sanity", R"({
  "name": "hermitian-sanity",
  "description": "Davies-Swanson with delta = 0: the harmonic oscillator, all norms stay 1",
  "hamiltonian": {"kind": "davies_swanson", "omega0": 1.0, "delta": 0.0},
  "initial_frame": {"kind": "explicit", "matrix": [[1.0], [[0.0, -1.0]]]},
  "eps": 1.0,
  "times": {"start": 0.0, "stop": 6.283185307179586, "count": 100},
  "alphas": ["0", "1", "2", "3"],
  "oracle": {"enabled": true, "times": [1.0, 3.141592653589793, 6.283185307179586], "ks": [0, 1, 2, 3]},
  "output_dir": "out/hermitian-sanity"
})"},
      {"horizon", R"({
  "name": "horizon",
  "description": "Davies-Swanson with omega0 = 0.5, delta = 1: positivity is lost near t = 0.8155",
  "hamiltonian": {"kind": "davies_swanson", "omega0": 0.5, "delta": 1.0},
  "initial_frame": {"kind": "explicit", "matrix": [[1.0], [[0.0, -1.0]]]},
  "eps": 1.0,
  "times": {"start": 0.0, "stop": 2.0, "count": 101},
  "alphas": ["0", "1", "2"],
  "expect_horizon": true,
  "output_dir": "out/horizon"
})"},
      {"squeezed-metric", R"({
  "name": "squeezed-metric",
  "description": "Squeezed initial metric diag(4, 1/4), displaced center, weakly dissipative constant H",
  "hamiltonian": {"kind": "constant", "matrix": [[1.0, [0.0, -0.1]], [[0.0, -0.1], 1.0]]},
  "initial_frame": {"kind": "metric", "G": [[4.0, 0.0], [0.0, 0.25]]},
  "center": [0.5, 1.0],
  "eps": 1.0,
  "times": {"start": 0.0, "stop": 6.0, "count": 121},
  "alphas": ["0", "1", "2", "3"],
  "oracle": {"enabled": true, "modes": 80, "times": [0.25, 0.5, 1.0], "ks": [0, 1, 2, 3]},
  "snapshots": {"times": [0.0, 3.0], "lower": -8.0, "upper": 8.0, "points": 256},
  "output_dir": "out/squeezed-metric"
})"},
  };
  return table;
}

}  // namespace

ScenarioConfig ScenarioConfig::preset(const std::string& name) {
  const auto it = presets().find(name);
  if (it == presets().end()) throw Error(ErrorCode::ConfigError, "unknown preset '" + name + "'");
  return parse(it->second);
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, text] : presets()) out.push_back(name);
  return out;
}

}  // namespace hagedorn
