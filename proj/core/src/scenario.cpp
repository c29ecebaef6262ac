#include "hagedorn/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "hagedorn/csv.hpp"
#include "hagedorn/error.hpp"
#include "hagedorn/hamiltonian.hpp"
#include "hagedorn/oracle_grid.hpp"
#include "hagedorn/propagation.hpp"
#include "hagedorn/swanson.hpp"
#include "hagedorn/symplectic.hpp"
#include "hagedorn/wavepacket.hpp"

namespace hagedorn {

using json = nlohmann::json;

namespace {

json parse_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, "config must be a JSON object");
  return j;
}

}  // namespace

ScenarioConfig ScenarioConfig::parse(const std::string& text) {
  ScenarioConfig c;
  c.text_ = parse_json(text).dump();
  return c;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

ScenarioConfig ScenarioConfig::merged(const ScenarioConfig& patch) const {
  json base = parse_json(text_);
  base.merge_patch(parse_json(patch.text_));
  ScenarioConfig c;
  c.text_ = base.dump();
  return c;
}

std::string ScenarioConfig::dump(int indent) const { return parse_json(text_).dump(indent); }

std::uint64_t ScenarioConfig::hash() const {
  json j = parse_json(text_);
  j.erase("output_dir");
  const std::string s = j.dump();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string ScenarioConfig::output_dir() const {
  const json j = parse_json(text_);
  if (j.contains("output_dir") && j["output_dir"].is_string()) return j["output_dir"].get<std::string>();
  return "out";
}

void ScenarioConfig::set_output_dir(const std::string& dir) {
  json j = parse_json(text_);
  j["output_dir"] = dir;
  text_ = j.dump();
}

void ScenarioConfig::disable_oracle() {
  json j = parse_json(text_);
  j["oracle"]["enabled"] = false;
  text_ = j.dump();
}

void ScenarioConfig::set_ode_tol(double tol) {
  json j = parse_json(text_);
  j["tolerances"]["ode_tol"] = tol;
  text_ = j.dump();
}

void ScenarioConfig::set_grid_tol(double tol) {
  json j = parse_json(text_);
  j["tolerances"]["grid_tol"] = tol;
  text_ = j.dump();
}

namespace {

// ---- parsing -------------------------------------------------------------

[[noreturn]] void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

double number(const json& j, const std::string& what) {
  if (!j.is_number()) fail(ErrorCode::ConfigError, what + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(ErrorCode::ConfigError, what + " must be finite");
  return v;
}

double number_or(const json& parent, const char* key, double fallback, const std::string& where) {
  if (!parent.contains(key)) return fallback;
  return number(parent[key], where + "." + key);
}

Complex complex_entry(const json& j, const std::string& what) {
  if (j.is_number()) return number(j, what);
  if (j.is_array() && j.size() == 2) return {number(j[0], what + "[0]"), number(j[1], what + "[1]")};
  fail(ErrorCode::ConfigError, what + " must be a number or a [re, im] pair");
}

CMatrix complex_matrix(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
    fail(ErrorCode::ConfigError, what + " must be a non-empty array of rows");
  }
  const size_t rows = j.size(), cols = j[0].size();
  CMatrix m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) fail(ErrorCode::ConfigError, what + " has ragged rows");
    for (size_t c = 0; c < cols; ++c) {
      m(r, c) = complex_entry(j[r][c], what + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  return m;
}

RMatrix real_matrix(const json& j, const std::string& what) {
  const CMatrix m = complex_matrix(j, what);
  if (!m.imag().isZero(0.0)) fail(ErrorCode::ConfigError, what + " must be real");
  return m.real();
}

struct HamiltonianSpec {
  std::optional<QuadraticHamiltonian> h;
  std::optional<SwansonParams> ds;
};

HamiltonianSpec parse_hamiltonian(const json& root, double tol) {
  if (!root.contains("hamiltonian")) fail(ErrorCode::ConfigError, "missing section 'hamiltonian'");
  const json& j = root["hamiltonian"];
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    fail(ErrorCode::ConfigError, "hamiltonian.kind must be a string");
  }
  const std::string kind = j["kind"];
  HamiltonianSpec out;
  if (kind == "davies_swanson") {
    out.ds = SwansonParams(number_or(j, "omega0", 1.0, "hamiltonian"), number_or(j, "delta", 0.5, "hamiltonian"));
    out.h = out.ds->hamiltonian();
  } else if (kind == "constant") {
    if (!j.contains("matrix")) fail(ErrorCode::ConfigError, "hamiltonian.matrix missing");
    out.h = QuadraticHamiltonian::constant(complex_matrix(j["matrix"], "hamiltonian.matrix"), tol);
  } else if (kind == "sampled") {
    if (!j.contains("times") || !j["times"].is_array() || !j.contains("matrices") || !j["matrices"].is_array()) {
      fail(ErrorCode::ConfigError, "sampled hamiltonian needs 'times' and 'matrices' arrays");
    }
    std::vector<double> ts;
    std::vector<CMatrix> ms;
    for (size_t i = 0; i < j["times"].size(); ++i) ts.push_back(number(j["times"][i], "hamiltonian.times"));
    for (size_t i = 0; i < j["matrices"].size(); ++i) {
      ms.push_back(complex_matrix(j["matrices"][i], "hamiltonian.matrices[" + std::to_string(i) + "]"));
    }
    out.h = QuadraticHamiltonian::sampled(std::move(ts), std::move(ms), tol);
  } else if (kind == "polynomial") {
    if (!j.contains("coefficients") || !j["coefficients"].is_array()) {
      fail(ErrorCode::ConfigError, "polynomial hamiltonian needs a 'coefficients' array");
    }
    std::vector<CMatrix> cs;
    for (size_t i = 0; i < j["coefficients"].size(); ++i) {
      cs.push_back(complex_matrix(j["coefficients"][i], "hamiltonian.coefficients[" + std::to_string(i) + "]"));
    }
    out.h = QuadraticHamiltonian::polynomial(std::move(cs), tol);
  } else {
    fail(ErrorCode::ConfigError, "unknown hamiltonian.kind '" + kind + "'");
  }
  return out;
}

NormalisedFrame parse_frame(const json& root, int n, const Tolerances& tol) {
  if (!root.contains("initial_frame")) return NormalisedFrame::standard(n);
  const json& j = root["initial_frame"];
  const std::string kind = j.is_object() && j.contains("kind") && j["kind"].is_string() ? j["kind"] : "";
  if (kind == "standard") return NormalisedFrame::standard(n);
  if (kind == "explicit") {
    if (!j.contains("matrix")) fail(ErrorCode::ConfigError, "initial_frame.matrix missing");
    const CMatrix z = complex_matrix(j["matrix"], "initial_frame.matrix");
    if (z.rows() != 2 * n || z.cols() != n) {
      fail(ErrorCode::DimensionMismatch, "initial_frame.matrix must be 2n x n with n = " + std::to_string(n));
    }
    return normalise_frame(LagrangianFrame(z, tol), tol).frame;
  }
  if (kind == "metric") {
    if (!j.contains("G")) fail(ErrorCode::ConfigError, "initial_frame.G missing");
    const RMatrix g = real_matrix(j["G"], "initial_frame.G");
    if (g.rows() != 2 * n || g.cols() != 2 * n) {
      fail(ErrorCode::DimensionMismatch, "initial_frame.G must be 2n x 2n with n = " + std::to_string(n));
    }
    return frame_from_metric(SymplecticMetricPair::from_metric(g, tol.frame), tol);
  }
  fail(ErrorCode::ConfigError, "initial_frame.kind must be standard, explicit or metric");
}

RVector parse_center(const json& root, int n) {
  if (!root.contains("center")) return RVector::Zero(2 * n);
  const json& j = root["center"];
  if (!j.is_array() || static_cast<int>(j.size()) != 2 * n) {
    fail(ErrorCode::DimensionMismatch, "center must list 2n = " + std::to_string(2 * n) + " numbers (p then q)");
  }
  RVector z(2 * n);
  for (int i = 0; i < 2 * n; ++i) z(i) = number(j[i], "center");
  return z;
}

std::vector<double> parse_times(const json& root) {
  if (!root.contains("times") || !root["times"].is_object()) fail(ErrorCode::BadTimeGrid, "missing section 'times'");
  const json& j = root["times"];
  std::vector<double> ts;
  if (j.contains("values")) {
    if (!j["values"].is_array()) fail(ErrorCode::BadTimeGrid, "times.values must be an array");
    for (const json& v : j["values"]) ts.push_back(number(v, "times.values"));
  } else {
    const double start = number_or(j, "start", 0.0, "times");
    if (!j.contains("stop")) fail(ErrorCode::BadTimeGrid, "times.stop missing");
    const double stop = number(j["stop"], "times.stop");
    if (!j.contains("count") || !j["count"].is_number_integer()) {
      fail(ErrorCode::BadTimeGrid, "times.count must be an integer");
    }
    const long count = j["count"].get<long>();
    if (count < 2) fail(ErrorCode::BadTimeGrid, "times.count must be at least 2");
    if (!(stop > start)) fail(ErrorCode::BadTimeGrid, "times.stop must exceed times.start");
    for (long i = 0; i < count; ++i) ts.push_back(start + (stop - start) * static_cast<double>(i) / (count - 1));
  }
  if (ts.empty()) fail(ErrorCode::BadTimeGrid, "no output times");
  for (size_t i = 1; i < ts.size(); ++i) {
    if (!(ts[i] > ts[i - 1])) fail(ErrorCode::BadTimeGrid, "times are not strictly increasing");
  }
  return ts;
}

std::vector<MultiIndex> parse_alphas(const json& root, int n, int alpha_max) {
  std::vector<MultiIndex> out;
  if (!root.contains("alphas")) {
    out.emplace_back(n, 0);
    return out;
  }
  const json& j = root["alphas"];
  if (!j.is_array() || j.empty()) fail(ErrorCode::ConfigError, "alphas must be a non-empty array");
  for (const json& a : j) {
    MultiIndex alpha;
    if (a.is_number_integer()) {
      alpha = MultiIndex{a.get<int>()};
    } else if (a.is_string()) {
      alpha = parse_multi_index(a.get<std::string>());
    } else if (a.is_array()) {
      for (const json& c : a) {
        if (!c.is_number_integer()) fail(ErrorCode::ConfigError, "multi-index entries must be integers");
        alpha.push_back(c.get<int>());
      }
    } else {
      fail(ErrorCode::ConfigError, "alpha must be an integer, a \"1;0\" string or an array");
    }
    if (static_cast<int>(alpha.size()) != n) {
      fail(ErrorCode::DimensionMismatch, "alpha " + to_string(alpha) + " needs " + std::to_string(n) + " components");
    }
    if (std::any_of(alpha.begin(), alpha.end(), [](int v) { return v < 0; })) {
      fail(ErrorCode::ConfigError, "alpha components must be non-negative");
    }
    if (order(alpha) > alpha_max) {
      fail(ErrorCode::ConfigError, "|alpha| of " + to_string(alpha) + " exceeds alpha_max");
    }
    out.push_back(alpha);
  }
  return out;
}

struct OracleSettings {
  bool enabled = false;
  Axis axis{-12.0, 12.0, 1024};
  GridOptions grid;
  std::vector<double> times;
  std::vector<int> ks;
};

OracleSettings parse_oracle(const json& root, const std::vector<double>& times, const std::vector<MultiIndex>& alphas,
                            int n, bool constant_h) {
  OracleSettings o;
  if (!root.contains("oracle")) return o;
  const json& j = root["oracle"];
  if (!j.is_object()) fail(ErrorCode::ConfigError, "oracle must be an object");
  o.enabled = j.value("enabled", false);
  o.axis.lower = number_or(j, "lower", -12.0, "oracle");
  o.axis.upper = number_or(j, "upper", 12.0, "oracle");
  if (j.contains("points")) {
    if (!j["points"].is_number_integer()) fail(ErrorCode::ConfigError, "oracle.points must be an integer");
    o.axis.count = j["points"].get<int>();
  }
  o.grid.dt = number_or(j, "dt", 1e-3, "oracle");
  if (j.contains("modes")) {
    if (!j["modes"].is_number_integer()) fail(ErrorCode::ConfigError, "oracle.modes must be an integer");
    o.grid.modes = j["modes"].get<int>();
  }
  if (j.contains("max_halvings")) o.grid.max_halvings = j["max_halvings"].get<int>();
  if (!o.enabled) return o;
  if (n != 1) fail(ErrorCode::UnsupportedDimension, "the grid oracle supports n = 1 only");
  if (!constant_h) fail(ErrorCode::UnsupportedDimension, "the grid oracle supports constant Hamiltonians only");
  if (o.axis.count < 2 || !(o.axis.upper > o.axis.lower)) fail(ErrorCode::ConfigError, "bad oracle grid");
  if (!(o.grid.dt > 0.0) || o.grid.modes < 0 || o.grid.max_halvings < 0) {
    fail(ErrorCode::ConfigError, "oracle.dt must be positive, modes and max_halvings non-negative");
  }
  if (j.contains("times")) {
    for (const json& v : j["times"]) o.times.push_back(number(v, "oracle.times"));
  } else {
    o.times = {times.back()};
  }
  std::sort(o.times.begin(), o.times.end());
  o.times.erase(std::unique(o.times.begin(), o.times.end()), o.times.end());
  for (double t : o.times) {
    if (t < times.front()) fail(ErrorCode::BadTimeGrid, "oracle.times must not precede times.start");
  }
  if (j.contains("ks")) {
    for (const json& v : j["ks"]) {
      if (!v.is_number_integer() || v.get<int>() < 0) fail(ErrorCode::ConfigError, "oracle.ks must be integers >= 0");
      o.ks.push_back(v.get<int>());
    }
  } else {
    for (const MultiIndex& a : alphas) o.ks.push_back(a[0]);
  }
  return o;
}

struct SnapshotSettings {
  std::vector<double> times;
  Axis axis{-10.0, 10.0, 256};
};

SnapshotSettings parse_snapshots(const json& root, const std::vector<double>& times) {
  SnapshotSettings s;
  if (!root.contains("snapshots")) return s;
  const json& j = root["snapshots"];
  if (!j.is_object()) fail(ErrorCode::ConfigError, "snapshots must be an object");
  s.axis.lower = number_or(j, "lower", -10.0, "snapshots");
  s.axis.upper = number_or(j, "upper", 10.0, "snapshots");
  if (j.contains("points")) {
    if (!j["points"].is_number_integer()) fail(ErrorCode::ConfigError, "snapshots.points must be an integer");
    s.axis.count = j["points"].get<int>();
  }
  if (s.axis.count < 2 || !(s.axis.upper > s.axis.lower)) fail(ErrorCode::ConfigError, "bad snapshot grid");
  if (j.contains("times")) {
    for (const json& v : j["times"]) s.times.push_back(number(v, "snapshots.times"));
  }
  std::sort(s.times.begin(), s.times.end());
  s.times.erase(std::unique(s.times.begin(), s.times.end()), s.times.end());
  for (double t : s.times) {
    if (t < times.front()) fail(ErrorCode::BadTimeGrid, "snapshots.times must not precede times.start");
  }
  return s;
}

struct Settings {
  double ode_tol = kDefaultOdeTol;
  double grid_tol = 1e-8;
  double check_tol = 1e-8;
  Tolerances tol;
};

Settings parse_tolerances(const json& root) {
  Settings s;
  if (!root.contains("tolerances")) return s;
  const json& j = root["tolerances"];
  if (!j.is_object()) fail(ErrorCode::ConfigError, "tolerances must be an object");
  s.ode_tol = number_or(j, "ode_tol", s.ode_tol, "tolerances");
  s.grid_tol = number_or(j, "grid_tol", s.grid_tol, "tolerances");
  s.check_tol = number_or(j, "check_tol", s.check_tol, "tolerances");
  s.tol.frame = number_or(j, "tol_frame", s.tol.frame, "tolerances");
  if (!(s.ode_tol > 0.0) || !(s.grid_tol > 0.0) || !(s.check_tol > 0.0) || !(s.tol.frame > 0.0)) {
    fail(ErrorCode::ConfigError, "tolerances must be positive");
  }
  return s;
}

const std::vector<std::string> kKnownKeys{"name",   "hamiltonian", "initial_frame", "center",     "eps",
                                          "times",  "alphas",      "alpha_max",     "oracle",     "snapshots",
                                          "output_dir", "tolerances", "expect_horizon", "description"};

struct Scenario {
  std::string name;
  HamiltonianSpec ham;
  std::optional<NormalisedFrame> z0;
  RVector center;
  double eps = 1.0;
  std::vector<double> times;
  int alpha_max = kDefaultAlphaMax;
  std::vector<MultiIndex> alphas;
  OracleSettings oracle;
  SnapshotSettings snapshots;
  Settings settings;
  bool expect_horizon = false;
};

// Parses section by section, recording one diagnostic per failing section.
Scenario build(const json& root, std::vector<Diagnostic>& diags) {
  Scenario sc;
  auto guard = [&diags](auto&& fn) {
    try {
      fn();
      return true;
    } catch (const Error& e) {
      diags.push_back({std::string(to_string(e.code())), e.what()});
    } catch (const json::exception& e) {
      diags.push_back({"ConfigError", e.what()});
    }
    return false;
  };
  for (auto it = root.begin(); it != root.end(); ++it) {
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), it.key()) == kKnownKeys.end()) {
      diags.push_back({"ConfigError", "unknown key '" + it.key() + "'"});
    }
  }
  guard([&] {
    sc.name = root.value("name", std::string("scenario"));
    sc.expect_horizon = root.value("expect_horizon", false);
  });
  guard([&] { sc.settings = parse_tolerances(root); });
  const bool have_h = guard([&] { sc.ham = parse_hamiltonian(root, sc.settings.tol.frame); });
  guard([&] {
    sc.eps = number_or(root, "eps", 1.0, "config");
    if (!(sc.eps > 0.0)) fail(ErrorCode::ConfigError, "eps must be positive");
  });
  const bool have_times = guard([&] { sc.times = parse_times(root); });
  if (have_h && have_times) {
    guard([&] {
      if (sc.times.front() < sc.ham.h->t_min() || sc.times.back() > sc.ham.h->t_max()) {
        fail(ErrorCode::BadTimeGrid, "times leave the sampled Hamiltonian's range");
      }
    });
  }
  guard([&] {
    if (root.contains("alpha_max")) {
      if (!root["alpha_max"].is_number_integer() || root["alpha_max"].get<int>() < 0) {
        fail(ErrorCode::ConfigError, "alpha_max must be a non-negative integer");
      }
      sc.alpha_max = root["alpha_max"].get<int>();
    }
  });
  if (!have_h) return sc;
  const int n = sc.ham.h->n();
  guard([&] { sc.z0 = parse_frame(root, n, sc.settings.tol); });
  guard([&] { sc.center = parse_center(root, n); });
  const bool have_alphas = guard([&] { sc.alphas = parse_alphas(root, n, sc.alpha_max); });
  if (have_times && have_alphas) {
    guard([&] { sc.oracle = parse_oracle(root, sc.times, sc.alphas, n, sc.ham.h->is_constant()); });
    guard([&] { sc.snapshots = parse_snapshots(root, sc.times); });
  }
  return sc;
}

// ---- checks -------------------------------------------------------------

class Checks {
 public:
  void add(const std::string& name, double value, double threshold) {
    const bool ok = std::isfinite(value) && value <= threshold;
    auto it = index_.find(name);
    if (it == index_.end()) {
      index_[name] = results_.size();
      results_.push_back({name, value, threshold, ok});
      return;
    }
    CheckResult& r = results_[it->second];
    if (!std::isfinite(value) || value > r.value || !std::isfinite(r.value)) r.value = value;
    r.passed = r.passed && ok;
  }
  const std::vector<CheckResult>& results() const { return results_; }
  bool all_passed() const {
    return std::all_of(results_.begin(), results_.end(), [](const CheckResult& r) { return r.passed; });
  }

 private:
  std::vector<CheckResult> results_;
  std::map<std::string, size_t> index_;
};

void state_checks(const PropagatedState& s, const NormalisedFrame& z0, const RVector& center0, const Settings& set,
                  bool real_h, Checks& checks) {
  const int n = s.n();
  const double zscale = tolerance_scale(max_abs(s.Z.matrix()));
  const CMatrix w = omega(n).cast<Complex>();
  const CMatrix& z = s.Z.matrix();
  const double norm_defect =
      std::max(max_abs(CMatrix(z.transpose() * w * z)),
               max_abs(CMatrix(z.adjoint() * w * z - 2.0 * kI * CMatrix::Identity(n, n))));
  checks.add("frame_normalised", norm_defect, set.tol.frame * zscale * zscale);
  const double sscale = tolerance_scale(max_abs(s.S));
  checks.add("symplectic_defect", s.symplectic_defect, 10.0 * set.ode_tol * sscale * sscale);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (s.N + s.N.adjoint()), Eigen::EigenvaluesOnly);
  checks.add("normaliser_hermitian", max_abs(CMatrix(s.N - s.N.adjoint())), set.tol.frame * tolerance_scale(max_abs(s.N)));
  checks.add("normaliser_positive", -es.eigenvalues()(0), 0.0);
  const double mscale = tolerance_scale(std::max(max_abs(s.M), max_abs(s.Mtilde)));
  checks.add("recursion_matrices_symmetric",
             std::max(max_abs(CMatrix(s.M - s.M.transpose())), max_abs(CMatrix(s.Mtilde - s.Mtilde.transpose()))),
             set.tol.frame * mscale);
  checks.add("beta_vs_det_normaliser", s.beta_defect, set.check_tol);
  const LadderDecomposition ld = ladder_decomposition(s, z0);
  checks.add("ladder_decomposition", std::max({ld.reconstruction, ld.c_minus_n, ld.m_minus_dc}),
             set.check_tol * sscale * sscale);
  const RVector projected = project_center(s.S, s.metric, center0);
  checks.add("center_projection", (s.z - projected).cwiseAbs().maxCoeff(),
             set.check_tol * tolerance_scale(s.z.cwiseAbs().maxCoeff()));
  if (real_h) {
    const double deg = std::max({std::abs(s.beta), max_abs(CMatrix(s.N - CMatrix::Identity(n, n))), max_abs(s.M)});
    checks.add("hermitian_degeneration", deg, 10.0 * set.ode_tol);
  }
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string alpha_tag(const MultiIndex& a) {
  std::string s = to_string(a);
  std::replace(s.begin(), s.end(), ';', '_');
  return s;
}

std::vector<double> with_start(double start, const std::vector<double>& ts) {
  std::vector<double> out{start};
  for (double t : ts) {
    if (t > start) out.push_back(t);
  }
  return out;
}

json check_json(const CheckResult& r) {
  return json{{"name", r.name}, {"value", r.value}, {"threshold", r.threshold}, {"passed", r.passed}};
}

}  // namespace

std::vector<Diagnostic> validate_config(const ScenarioConfig& config) {
  std::vector<Diagnostic> diags;
  try {
    build(parse_json(config.dump(-1)), diags);
  } catch (const Error& e) {
    diags.push_back({std::string(to_string(e.code())), e.what()});
  }
  return diags;
}

RunReport run_scenario(const ScenarioConfig& config) {
  const json root = parse_json(config.dump(-1));
  std::vector<Diagnostic> diags;
  Scenario sc = build(root, diags);
  if (!diags.empty()) {
    std::string msg = "config does not validate:";
    for (const Diagnostic& d : diags) msg += "\n  [" + d.code + "] " + d.message;
    throw Error(ErrorCode::ConfigError, msg);
  }
  const QuadraticHamiltonian& h = *sc.ham.h;
  const NormalisedFrame& z0 = *sc.z0;
  const Settings& set = sc.settings;
  const int n = h.n();
  const std::filesystem::path dir = config.output_dir();
  std::filesystem::create_directories(dir);

  RunReport report;
  Checks checks;
  std::vector<std::filesystem::path> files;

  // trajectory
  const Trajectory traj = propagate_trajectory(z0, sc.center, h, sc.times, sc.eps, set.ode_tol, set.tol);

  // The closed forms describe phi_k(l0) at the origin; Z0 = l0 u for a unit phase u.
  std::optional<Complex> ds_gauge;
  if (sc.ham.ds && n == 1) {
    const CMatrix l0 = ds_initial_frame().matrix();
    const Complex u = z0.matrix()(1, 0) / l0(1, 0);
    if (max_abs(CMatrix(z0.matrix() - l0 * u)) <= set.tol.frame) ds_gauge = u;
  }
  const bool ds_closed = ds_gauge.has_value() && sc.center.isZero(0.0);
  report.horizon = traj.horizon;
  report.truncated = traj.truncated();
  report.states = traj.states.size();
  write_trajectory_csv(dir / "trajectory.csv", traj.states);
  files.push_back("trajectory.csv");

  for (const PropagatedState& s : traj.states) state_checks(s, z0, sc.center, set, h.is_real(), checks);

  // Riccati metric against the frame-derived metric
  if (!traj.states.empty()) {
    std::vector<double> ts;
    for (const PropagatedState& s : traj.states) ts.push_back(s.t);
    try {
      const auto ric = evolve_metric_riccati(metric_and_structure(z0), h, ts, set.ode_tol);
      for (size_t i = 0; i < ric.size(); ++i) {
        const RMatrix& g = traj.states[i].metric.G;
        checks.add("riccati_vs_frame_metric", max_abs(RMatrix(ric[i].G - g)), set.check_tol * tolerance_scale(max_abs(g)));
        checks.add("riccati_structure", max_abs(RMatrix(ric[i].J + omega(n) * ric[i].G)), set.check_tol * tolerance_scale(max_abs(g)));
      }
    } catch (const Error& e) {
      checks.add("riccati_vs_frame_metric", kInfinity, set.check_tol);
    }
  }

  // coefficients
  std::map<MultiIndex, std::vector<HagedornExpansion>, GradedLess> expansions;
  for (const MultiIndex& a : sc.alphas) {
    auto& ex = expansions[a];
    for (const PropagatedState& s : traj.states) ex.push_back(hagedorn_coefficients(s, a, sc.alpha_max));
    const std::string file = "coefficients_alpha_" + alpha_tag(a) + ".csv";
    write_coefficients_csv(dir / file, traj.states, ex);
    files.push_back(file);
    for (size_t i = 0; i < ex.size(); ++i) {
      // Parity only holds when the raising operators carry no center offset.
      if (traj.states[i].shift.cwiseAbs().maxCoeff() > set.tol.frame) continue;
      double structure = 0.0;
      for (const auto& [k, c] : ex[i].coefficients) {
        const int gap = order(a) - order(k);
        if (gap < 0 || gap % 2 != 0) structure = std::max(structure, std::abs(c));
      }
      checks.add("lower_state_activation_structure", structure, 0.0);
      if (h.is_real()) {
        double dev = 0.0;
        for (const auto& [k, c] : ex[i].coefficients) dev = std::max(dev, std::abs(c - (k == a ? 1.0 : 0.0)));
        checks.add("hermitian_degeneration", dev, 10.0 * set.ode_tol);
      }
    }
  }

  // grid oracle
  std::vector<NormCurveRow> rows;
  json oracle_cases = json::array();
  if (sc.oracle.enabled) {
    const Grid grid({sc.oracle.axis});
    const DiscretizedOperator op = discretize_hamiltonian(h.at(sc.times.front()), sc.eps, grid);
    GridOptions gopt = sc.oracle.grid;
    gopt.grid_tol = set.grid_tol;
    const GridPropagator prop(op, gopt);
    const std::vector<double> ots = with_start(sc.times.front(), sc.oracle.times);
    const Trajectory otraj = propagate_trajectory(z0, sc.center, h, ots, sc.eps, set.ode_tol, set.tol);
    const WavepacketParams p0(z0, sc.center, sc.eps);
    CMatrix psi0(grid.size(), sc.oracle.ks.size());
    for (size_t c = 0; c < sc.oracle.ks.size(); ++c) psi0.col(c) = eval_excited(p0, {sc.oracle.ks[c]}, grid);
    for (const PropagatedState& s : otraj.states) {
      if (std::find(sc.oracle.times.begin(), sc.oracle.times.end(), s.t) == sc.oracle.times.end()) continue;
      GridPropagation gp;
      try {
        gp = prop.propagate(psi0, s.t - sc.times.front());
      } catch (const Error& e) {
        checks.add("oracle_convergence", kInfinity, set.grid_tol);
        continue;
      }
      for (size_t c = 0; c < sc.oracle.ks.size(); ++c) {
        const int k = sc.oracle.ks[c];
        const HagedornExpansion ex = hagedorn_coefficients(s, {k}, sc.alpha_max);
        const CVector hag = expansion_on_grid(s, ex, grid);
        const CVector g = gp.psi.col(c);
        const double ng = l2_norm(g, grid), nh = l2_norm(hag, grid);
        const double fidelity = std::abs(overlap(g, hag, grid)) / (ng * nh);
        const double predicted = ex.norm();
        oracle_cases.push_back({{"k", k},
                                {"t", s.t},
                                {"norm_grid", ng},
                                {"norm_predicted", predicted},
                                {"fidelity", fidelity},
                                {"richardson_error", gp.richardson_error}});
        checks.add("oracle_fidelity", 1.0 - fidelity, 1e-5);
        checks.add("oracle_norm", std::abs(ng - predicted) / std::max(1.0, predicted), 1e-5);
        if (ds_closed) {
          rows.push_back({s.t, k, ds_norm(*sc.ham.ds, k, s.t - sc.times.front(), sc.alpha_max), predicted, ng});
        }
      }
    }
    json rep{{"scenario", sc.name}, {"grid", {{"lower", sc.oracle.axis.lower}, {"upper", sc.oracle.axis.upper}, {"points", sc.oracle.axis.count}}},
             {"dt", gopt.dt}, {"modes", gopt.modes}, {"grid_tol", gopt.grid_tol}, {"cases", oracle_cases}};
    std::ofstream(dir / "oracle_report.json", std::ios::binary) << rep.dump(2) << '\n';
    files.push_back("oracle_report.json");
  }

  // closed-form norm curves
  if (ds_closed) {
    const SwansonParams& ds = *sc.ham.ds;
    for (const MultiIndex& a : sc.alphas) {
      const auto& ex = expansions[a];
      for (size_t i = 0; i < traj.states.size(); ++i) {
        const double t = traj.states[i].t - sc.times.front();
        const double closed = ds_norm(ds, a[0], t, sc.alpha_max);
        const double general = ex[i].norm();
        rows.push_back({traj.states[i].t, a[0], closed, general, std::nullopt});
        checks.add("closed_form_norms", std::abs(closed - general) / std::max(1.0, closed), set.check_tol);
      }
    }
    for (const PropagatedState& s : traj.states) {
      const SwansonStateScalars cs = ds_scalars(ds, s.t - sc.times.front());
      checks.add("closed_form_scalars",
                 std::max({std::abs(cs.n - s.N(0, 0).real()), std::abs(cs.beta - s.beta), std::abs(std::conj(*ds_gauge * *ds_gauge) * cs.m - s.M(0, 0)),
                           max_abs(RMatrix(cs.G - s.metric.G))}),
                 set.check_tol * tolerance_scale(std::max(cs.n * cs.n, std::abs(cs.m))));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const NormCurveRow& a, const NormCurveRow& b) {
      return a.t != b.t ? a.t < b.t : a.k < b.k;
    });
    write_norm_curves_csv(dir / "norm_curves.csv", rows, sc.oracle.enabled);
    files.push_back("norm_curves.csv");
  }

  // snapshots
  if (!sc.snapshots.times.empty()) {
    const Grid grid(std::vector<Axis>(n, sc.snapshots.axis));
    const Trajectory straj =
        propagate_trajectory(z0, sc.center, h, with_start(sc.times.front(), sc.snapshots.times), sc.eps, set.ode_tol, set.tol);
    int idx = 0;
    for (const PropagatedState& s : straj.states) {
      if (std::find(sc.snapshots.times.begin(), sc.snapshots.times.end(), s.t) == sc.snapshots.times.end()) continue;
      for (const MultiIndex& a : sc.alphas) {
        const std::string file = "snapshot_" + std::to_string(idx) + "_alpha_" + alpha_tag(a) + ".csv";
        write_snapshot_csv(dir / file, grid, evolved_state_on_grid(s, a, grid, sc.alpha_max));
        files.push_back(file);
      }
      ++idx;
    }
  }

  // horizon expectations
  if (sc.expect_horizon) {
    checks.add("horizon_detected", report.truncated ? 0.0 : 1.0, 0.0);
    if (ds_gauge && report.truncated) {
      checks.add("horizon_vs_closed_form",
                 std::abs(report.horizon - sc.times.front() - ds_positivity_time(*sc.ham.ds)), 1e-6);
    }
  } else {
    checks.add("positivity_maintained", report.truncated ? 1.0 : 0.0, 0.0);
  }

  report.checks = checks.results();
  const bool ok = checks.all_passed();
  report.exit_code = ok ? 0 : 1;
  if (report.truncated) {
    report.message = "positivity lost at t = " + format_double(report.horizon) + "; trajectory truncated after " +
                     std::to_string(report.states) + " states";
  }
  files.push_back("manifest.json");
  report.files = files;

  json manifest;
  manifest["scenario"] = sc.name;
  manifest["config_hash"] = hex(config.hash());
  json cfg = root;
  cfg.erase("output_dir");
  manifest["config"] = cfg;
  manifest["tolerances"] = {{"ode_tol", set.ode_tol},
                            {"grid_tol", set.grid_tol},
                            {"tol_frame", set.tol.frame},
                            {"check_tol", set.check_tol},
                            {"positivity", set.tol.positivity}};
  manifest["horizon"] = report.truncated ? json(report.horizon) : json(nullptr);
  manifest["truncated"] = report.truncated;
  manifest["expect_horizon"] = sc.expect_horizon;
  manifest["states"] = report.states;
  manifest["checks"] = json::array();
  for (const CheckResult& r : report.checks) manifest["checks"].push_back(check_json(r));
  manifest["passed"] = ok;
  manifest["exit_code"] = report.exit_code;
  json fl = json::array();
  for (const auto& f : files) fl.push_back(f.string());
  manifest["files"] = fl;
  if (!report.message.empty()) manifest["message"] = report.message;
  std::ofstream(dir / "manifest.json", std::ios::binary) << manifest.dump(2) << '\n';
  return report;
}

}  // namespace hagedorn
