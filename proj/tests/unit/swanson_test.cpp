#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "hagedorn/error.hpp"
#include "hagedorn/propagation.hpp"
#include "hagedorn/swanson.hpp"

namespace hagedorn {
namespace {

const SwansonParams kSwanson(1.0, 0.5);
const double kQuarter = std::numbers::pi / (2.0 * std::sqrt(1.25));

TEST(SwansonFlow, Examples) {
  EXPECT_LE(max_abs(CMatrix(ds_flow(kSwanson, 0.0) - CMatrix::Identity(2, 2))), 0.0);
  const SwansonParams harmonic(1.0, 0.0);
  const CMatrix s = ds_flow(harmonic, std::numbers::pi / 2.0);
  EXPECT_LE(max_abs(CMatrix(s - omega(1).cast<Complex>())), 1e-15);
  for (double t : {0.3, 1.1, 4.0}) EXPECT_LE(symplectic_defect(ds_flow(kSwanson, t)), 1e-14);
}

TEST(SwansonParamsType, Validation) {
  EXPECT_NEAR(kSwanson.omega(), std::sqrt(1.25), 1e-15);
  EXPECT_THROW(SwansonParams(0.0, 0.5), Error);
  EXPECT_THROW(SwansonParams(1.0, -0.5), Error);
  EXPECT_THROW(SwansonParams(std::nan(""), 0.5), Error);
}

TEST(SwansonHorizon, Examples) {
  EXPECT_EQ(ds_positivity_time(kSwanson), kInfinity);
  EXPECT_NEAR(ds_positivity_time(SwansonParams(0.5, 1.0)), 0.8154835, 1e-6);
  EXPECT_NEAR(ds_positivity_time(SwansonParams(1.0, 1.0)), std::numbers::pi / (2.0 * std::sqrt(2.0)), 1e-14);
}

TEST(SwansonScalars, InitialTime) {
  const SwansonStateScalars s = ds_scalars(kSwanson, 0.0);
  EXPECT_NEAR(s.n, 1.0, 1e-15);
  EXPECT_NEAR(s.beta, 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.m), 0.0, 1e-15);
}

TEST(SwansonScalars, QuarterPeriod) {
  const SwansonStateScalars s = ds_scalars(kSwanson, kQuarter);
  EXPECT_NEAR(s.n, std::pow(0.6, -0.5), 1e-14);
  EXPECT_NEAR(std::abs(s.m - 4.0 / 3.0), 0.0, 1e-14);
  EXPECT_NEAR(std::exp(s.beta), std::pow(0.6, -0.25), 1e-14);
  EXPECT_LE(s.frame_defect, 1e-12);
}

TEST(SwansonScalars, HermitianLimit) {
  const SwansonParams harmonic(1.3, 0.0);
  for (double t : {0.2, 1.0, 5.0}) {
    const SwansonStateScalars s = ds_scalars(harmonic, t);
    EXPECT_NEAR(s.n, 1.0, 1e-15);
    EXPECT_NEAR(s.beta, 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.m), 0.0, 1e-15);
  }
}

TEST(SwansonScalars, OutsideHorizon) {
  try {
    ds_scalars(SwansonParams(0.5, 1.0), 1.0);
    FAIL() << "expected OutsideHorizon";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutsideHorizon);
  }
  EXPECT_THROW(ds_norm(SwansonParams(0.5, 1.0), 1, 1.0), Error);
}

TEST(SwansonScalars, Periodicity) {
  const double period = std::numbers::pi / kSwanson.omega();
  for (double t : {0.1, 0.9, 2.3}) {
    const SwansonStateScalars a = ds_scalars(kSwanson, t), b = ds_scalars(kSwanson, t + period);
    EXPECT_NEAR(a.beta, b.beta, 1e-12);
    EXPECT_NEAR(a.n, b.n, 1e-12);
    EXPECT_NEAR(std::abs(a.m), std::abs(b.m), 1e-12);
  }
}

TEST(SwansonNorm, LowOrdersReduceToClosedForms) {
  for (double t : {0.0, 0.4, kQuarter, 3.0}) {
    const SwansonStateScalars s = ds_scalars(kSwanson, t);
    const double eb = std::exp(s.beta);
    EXPECT_NEAR(ds_norm(kSwanson, 0, t), eb, 1e-14);
    EXPECT_NEAR(ds_norm(kSwanson, 1, t), eb * s.n, 1e-14);
    EXPECT_NEAR(ds_norm(kSwanson, 2, t), eb * std::sqrt(std::pow(s.n, 4) + 0.5 * std::norm(s.m)), 1e-13);
  }
}

TEST(SwansonNorm, QuarterPeriodValues) {
  EXPECT_NEAR(ds_norm(kSwanson, 0, kQuarter), 1.1362193664674993, 1e-13);
  EXPECT_NEAR(ds_norm(kSwanson, 1, kQuarter), 1.4668528946556556, 1e-13);
  EXPECT_NEAR(ds_norm(kSwanson, 2, kQuarter), 2.1756944436274335, 1e-13);
  EXPECT_NEAR(ds_norm(kSwanson, 3, kQuarter), 3.42265675419653, 1e-12);
}

TEST(SwansonNorm, HigherOrderAgreesWithGeneralPipeline) {
  std::vector<double> times;
  for (int i = 0; i < 20; ++i) times.push_back(0.3 * i);
  const auto states = propagate(ds_initial_frame(), RVector::Zero(2), kSwanson.hamiltonian(), times, 1.0);
  for (const auto& s : states) {
    for (int k : {5, 8}) {
      const double closed = ds_norm(kSwanson, k, s.t);
      EXPECT_NEAR(hagedorn_coefficients(s, {k}).norm(), closed, 1e-8 * tolerance_scale(closed)) << s.t;
    }
  }
}

TEST(SwansonNorm, DeviationGrowsWithOrderAtQuarterPeriod) {
  for (int k = 0; k <= 1; ++k) {
    EXPECT_GE(std::abs(ds_norm(kSwanson, k + 1, kQuarter) - 1.0), std::abs(ds_norm(kSwanson, k, kQuarter) - 1.0));
  }
}

TEST(SwansonScalars, AgreeWithGeneralPipeline) {
  std::vector<double> times;
  const double stop = 2.0 * std::numbers::pi / kSwanson.omega();
  for (int i = 0; i < 50; ++i) times.push_back(stop * i / 50.0);
  const auto states = propagate(ds_initial_frame(), RVector::Zero(2), kSwanson.hamiltonian(), times, 1.0);
  for (const auto& s : states) {
    const SwansonStateScalars c = ds_scalars(kSwanson, s.t);
    EXPECT_NEAR(s.N(0, 0).real(), c.n, 1e-8);
    EXPECT_NEAR(s.beta, c.beta, 1e-8);
    EXPECT_NEAR(std::abs(s.M(0, 0) - c.m), 0.0, 1e-8);
    EXPECT_LE(max_abs(RMatrix(s.metric.G - c.G)), 1e-8);
    EXPECT_LE(max_abs(CMatrix(s.S - ds_flow(kSwanson, s.t))), 1e-8);
  }
}

}  // namespace
}  // namespace hagedorn
