// One PASS/FAIL line per acceptance criterion, with wall-clock runtime.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "../unit/generators.hpp"
#include "hagedorn/error.hpp"
#include "hagedorn/multipoly.hpp"
#include "hagedorn/oracle_grid.hpp"
#include "hagedorn/propagation.hpp"
#include "hagedorn/swanson.hpp"
#include "hagedorn/symplectic.hpp"
#include "hagedorn/wavepacket.hpp"

namespace {

using namespace hagedorn;
using testing::Rng;

struct Outcome {
  bool passed = true;
  std::string detail;

  // Records value <= limit under `label`.
  void check(const std::string& label, double value, double limit) {
    char buf[160];
    const bool ok = value <= limit;
    std::snprintf(buf, sizeof buf, "%s%s=%.3g%s%.0e", detail.empty() ? "" : "; ", label.c_str(), value,
                  ok ? "<=" : ">", limit);
    detail += buf;
    passed = passed && ok;
  }
};

struct Criterion {
  std::string name;
  double time_limit;  // seconds, 0 for none
  std::function<Outcome()> body;
};

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> t(count);
  for (int i = 0; i < count; ++i) t[i] = a + (b - a) * i / (count - 1);
  return t;
}

const SwansonParams kSwanson(1.0, 0.5);
const double kQuarter = std::numbers::pi / (2.0 * kSwanson.omega());

Outcome norm_curves() {
  Outcome out;
  const auto times = linspace(0.0, 2.0 * std::numbers::pi / kSwanson.omega(), 200);
  const auto states = propagate(ds_initial_frame(), RVector::Zero(2), kSwanson.hamiltonian(), times, 1.0);
  double worst = 0.0;
  for (const auto& s : states) {
    const SwansonStateScalars c = ds_scalars(kSwanson, s.t);
    const double eb = std::exp(c.beta);
    const double closed[3] = {eb, eb * c.n, eb * std::sqrt(std::pow(c.n, 4) + 0.5 * std::norm(c.m))};
    for (int k = 0; k < 3; ++k) {
      const double v = hagedorn_coefficients(s, {k}).norm();
      worst = std::max(worst, std::abs(v - closed[k]) / tolerance_scale(closed[k]));
    }
  }
  out.check("pipeline_vs_closed_form", worst, 1e-8);
  // Published spot values at t omega = pi/2.
  const double spot[3] = {std::pow(0.6, 0.25), std::pow(0.6, -0.25), 1.6853};
  const double spot_tol[3] = {1e-8, 1e-8, 1e-4};
  const auto quarter = propagate(ds_initial_frame(), RVector::Zero(2), kSwanson.hamiltonian(), {0.0, kQuarter}, 1.0);
  for (int k = 0; k < 3; ++k) {
    const double v = hagedorn_coefficients(quarter.back(), {k}).norm();
    char label[64];
    std::snprintf(label, sizeof label, "spot_k%d(got %.6f want %.6f)", k, v, spot[k]);
    out.check(label, std::abs(v - spot[k]), spot_tol[k]);
  }
  return out;
}

Outcome grid_fidelity() {
  Outcome out;
  const Grid grid({Axis{-12.0, 12.0, 1024}});
  const DiscretizedOperator op = discretize_hamiltonian(kSwanson.matrix(), 1.0, grid);
  const WavepacketParams p0(ds_initial_frame(), RVector::Zero(2), 1.0);
  CMatrix psi0(grid.size(), 4);
  for (int k = 0; k < 4; ++k) psi0.col(k) = eval_excited(p0, {k}, grid);
  GridOptions opt;
  opt.dt = 1e-3;
  const GridPropagator prop(op, opt);
  const std::vector<double> times{0.0, 0.25, 0.5, 1.0, kQuarter};
  const auto states = propagate(ds_initial_frame(), RVector::Zero(2), kSwanson.hamiltonian(), times, 1.0);
  double fid = 0.0, norm = 0.0;
  for (size_t i = 1; i < times.size(); ++i) {
    const GridPropagation g = prop.propagate(psi0, times[i]);
    for (int k = 0; k < 4; ++k) {
      const CVector a = g.psi.col(k);
      const CVector b = evolved_state_on_grid(states[i], {k}, grid);
      const double na = l2_norm(a, grid), nb = l2_norm(b, grid);
      fid = std::max(fid, 1.0 - std::norm(overlap(a, b, grid)) / (na * na * nb * nb));
      const double predicted = ds_norm(kSwanson, k, times[i]);
      norm = std::max(norm, std::abs(na - predicted) / tolerance_scale(predicted));
    }
  }
  out.check("fidelity_defect", fid, 1e-5);
  out.check("norm_error", norm, 1e-5);
  return out;
}

Outcome horizon() {
  Outcome out;
  const SwansonParams params(0.5, 1.0);
  const double expected = std::acos(-0.25) / (2.0 * params.omega());
  const Trajectory traj =
      propagate_trajectory(ds_initial_frame(), RVector::Zero(2), params.hamiltonian(), linspace(0.0, 2.0, 101), 1.0);
  out.check("horizon_error", std::abs(traj.horizon - expected), 1e-6);
  out.check("closed_form_error", std::abs(ds_positivity_time(params) - expected), 1e-12);
  return out;
}

Outcome hermitian_degeneration() {
  Outcome out;
  Rng rng(2024);
  std::vector<QuadraticHamiltonian> hs{SwansonParams(1.0, 0.0).hamiltonian()};
  for (int n : {1, 2, 2}) hs.push_back(QuadraticHamiltonian::constant(rng.real_symmetric(2 * n, 0.4).cast<Complex>()));
  double beta = 0.0, n_err = 0.0, m_err = 0.0, coef = 0.0;
  for (const auto& h : hs) {
    const int n = h.n();
    const NormalisedFrame z0 = rng.normalised_frame(n, 0.3);
    RVector center(2 * n);
    for (int i = 0; i < 2 * n; ++i) center(i) = rng.uniform(-1.0, 1.0);
    for (const auto& s : propagate(z0, center, h, linspace(0.0, 5.0, 51), 1.0)) {
      beta = std::max(beta, std::abs(s.beta));
      n_err = std::max(n_err, max_abs(CMatrix(s.N - CMatrix::Identity(n, n))));
      m_err = std::max(m_err, max_abs(s.M));
      for (const auto& a : indices_up_to(n, 3)) {
        for (const auto& [k, c] : hagedorn_coefficients(s, a).coefficients) {
          coef = std::max(coef, std::abs(c - (k == a ? 1.0 : 0.0)));
        }
      }
    }
  }
  out.check("beta", beta, 1e-9);
  out.check("N_minus_Id", n_err, 1e-9);
  out.check("M", m_err, 1e-9);
  out.check("coefficients", coef, 1e-9);
  return out;
}

Outcome consistency_triangle() {
  Outcome out;
  const auto times = linspace(0.0, 2.0 * std::numbers::pi / kSwanson.omega(), 50);
  const NormalisedFrame z0 = ds_initial_frame();
  const auto states = propagate(z0, RVector::Zero(2), kSwanson.hamiltonian(), times, 1.0);
  const auto riccati = evolve_metric_riccati(metric_and_structure(z0), kSwanson.hamiltonian(), times);
  double rf = 0.0, rc = 0.0, fc = 0.0;
  for (size_t i = 0; i < times.size(); ++i) {
    const RMatrix closed = ds_scalars(kSwanson, times[i]).G;
    const double scale = tolerance_scale(max_abs(closed));
    rf = std::max(rf, max_abs(RMatrix(riccati[i].G - states[i].metric.G)) / scale);
    rc = std::max(rc, max_abs(RMatrix(riccati[i].G - closed)) / scale);
    fc = std::max(fc, max_abs(RMatrix(states[i].metric.G - closed)) / scale);
  }
  out.check("riccati_vs_frame", rf, 1e-8);
  out.check("riccati_vs_closed", rc, 1e-8);
  out.check("frame_vs_closed", fc, 1e-8);
  return out;
}

MultiIndex random_index(Rng& rng, int n, int max_order) {
  MultiIndex a(n, 0);
  const int total = rng.integer(0, max_order);
  for (int i = 0; i < total; ++i) ++a[rng.integer(0, n - 1)];
  return a;
}

Outcome algebraic_suite() {
  Outcome out;
  Rng rng(7);
  double frame = 0.0, proj = 0.0, siegel = 0.0, round_trip = 0.0, appell = 0.0, quad = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 2;
    const NormalisedFrame z = rng.normalised_frame(n, 0.4);
    const CMatrix zm = z.matrix();
    const RMatrix om = omega(n);
    frame = std::max(frame, max_abs(CMatrix(zm.transpose() * om * zm)));
    frame = std::max(frame, max_abs(CMatrix(positivity_matrix(zm) - CMatrix::Identity(n, n))));
    const ProjectionPair pp = projections(z);
    const CMatrix id = CMatrix::Identity(2 * n, 2 * n);
    proj = std::max(proj, max_abs(CMatrix(pp.onto_l + pp.onto_lbar - id)));
    proj = std::max(proj, max_abs(CMatrix(pp.onto_l * pp.onto_l - pp.onto_l)));
    proj = std::max(proj, max_abs(CMatrix(pp.onto_l * zm - zm)));
    const CMatrix u = rng.unitary(n);
    siegel = std::max(siegel, max_abs(CMatrix(siegel_matrix(z.frame()).B -
                                              siegel_matrix(LagrangianFrame(CMatrix(zm * u))).B)));
    const SymplecticMetricPair g = metric_and_structure(z);
    round_trip = std::max(round_trip, max_abs(RMatrix(metric_and_structure(frame_from_metric(g)).G - g.G)));
    const CMatrix m = rng.complex_symmetric(n);
    for (const auto& a : indices_up_to(n, 4)) {
      const MultiPoly p = poly_recursion(m, a);
      for (int j = 0; j < n; ++j) {
        MultiPoly expected(n);
        if (a[j] > 0) {
          MultiIndex lower = a;
          --lower[j];
          expected = poly_recursion(m, lower) * Complex(a[j]);
        }
        appell = std::max(appell, p.derivative(j).distance(expected));
      }
    }
  }
  for (int n : {1, 2}) {
    const Grid grid = n == 1 ? Grid::uniform(1, -14.0, 14.0, 1400) : Grid::uniform(2, -10.0, 10.0, 181);
    for (int trial = 0; trial < 3; ++trial) {
      const NormalisedFrame z = rng.normalised_frame(n, 0.25);
      const CMatrix c = rng.invertible(n);
      const WavepacketParams pz(z, RVector::Zero(2 * n), 1.0);
      const WavepacketParams pzc(LagrangianFrame(CMatrix(z.matrix() * c)), RVector::Zero(2 * n), 1.0);
      for (int rep = 0; rep < 4; ++rep) {
        const MultiIndex a = random_index(rng, n, 3), b = random_index(rng, n, 3);
        const Complex closed = expansion_overlap(z, c, a, b);
        const Complex q = overlap(eval_excited(pzc, b, grid), eval_excited(pz, a, grid), grid);
        quad = std::max(quad, std::abs(closed - q) / tolerance_scale(std::abs(closed)));
      }
    }
  }
  RMatrix squeezed = RMatrix::Zero(2, 2);
  squeezed.diagonal() << 4.0, 0.25;
  // wide enough for the position spread of the squeezed packets
  const Grid grid({Axis{-20.0, 20.0, 1024}});
  double number = 0.0;
  for (const RMatrix& gm : {RMatrix(RMatrix::Identity(2, 2)), squeezed, RMatrix(squeezed.inverse())}) {
    for (int k = 0; k <= 3; ++k) {
      number = std::max(number, number_operator_check(SymplecticMetricPair::from_metric(gm), 1.0, grid, {k}));
    }
  }
  out.check("frame_invariants", frame, 1e-10);
  out.check("projections", proj, 1e-10);
  out.check("siegel_gauge", siegel, 1e-10);
  out.check("metric_round_trip", round_trip, 1e-10);
  out.check("appell", appell, 1e-12);
  out.check("overlap_vs_quadrature", quad, 1e-6);
  out.check("number_operator", number, 1e-6);
  return out;
}

Outcome ladder() {
  Outcome out;
  const auto times = linspace(0.0, 2.0 * std::numbers::pi / kSwanson.omega(), 50);
  const NormalisedFrame z0 = ds_initial_frame();
  double rec = 0.0, cn = 0.0, mdc = 0.0;
  for (const auto& s : propagate(z0, RVector::Zero(2), kSwanson.hamiltonian(), times, 1.0)) {
    const LadderDecomposition d = ladder_decomposition(s, z0);
    rec = std::max(rec, d.reconstruction);
    cn = std::max(cn, d.c_minus_n);
    mdc = std::max(mdc, d.m_minus_dc);
  }
  out.check("reconstruction", rec, 1e-8);
  out.check("C_minus_N", cn, 1e-8);
  out.check("M_minus_DtCbar", mdc, 1e-8);
  return out;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"swanson_norm_curves", 10.0, norm_curves},
      {"grid_oracle_fidelity", 120.0, grid_fidelity},
      {"positivity_horizon", 5.0, horizon},
      {"hermitian_degeneration", 0.0, hermitian_degeneration},
      {"consistency_triangle", 0.0, consistency_triangle},
      {"algebraic_properties", 0.0, algebraic_suite},
      {"ladder_decomposition", 0.0, ladder},
  };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.body();
    } catch (const std::exception& e) {
      out.passed = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0) out.check("runtime_s", secs, c.time_limit);
    std::printf("%s [%zu] %s (%.2f s) %s\n", out.passed ? "PASS" : "FAIL", i + 1, c.name.c_str(), secs,
                out.detail.c_str());
    std::fflush(stdout);
    failures += out.passed ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
