#include <cmath>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "hagedorn/error.hpp"
#include "hagedorn/swanson.hpp"
#include "hagedorn/symplectic.hpp"

namespace hagedorn {
namespace {

using testing::Rng;

CMatrix column(std::initializer_list<Complex> entries) {
  CMatrix z(static_cast<Eigen::Index>(entries.size()), 1);
  Eigen::Index i = 0;
  for (Complex c : entries) z(i++, 0) = c;
  return z;
}

CMatrix blocks(const CMatrix& p, const CMatrix& q) {
  CMatrix z(p.rows() + q.rows(), p.cols());
  z << p, q;
  return z;
}

void expect_near(const CMatrix& a, const CMatrix& b, double tol) {
  ASSERT_EQ(a.rows(), b.rows());
  ASSERT_EQ(a.cols(), b.cols());
  EXPECT_LE(max_abs(CMatrix(a - b)), tol);
}

TEST(Isotropy, OneModeFrameIsAlwaysIsotropic) { EXPECT_TRUE(is_isotropic(column({kI, 1.0}), 1e-10)); }

TEST(Isotropy, CommutingDiagonalBlocks) {
  const CMatrix id = CMatrix::Identity(2, 2);
  EXPECT_TRUE(is_isotropic(blocks(id, -kI * id), 1e-10));
}

TEST(Isotropy, NonCommutingBlocksFail) {
  CMatrix q = CMatrix::Zero(2, 2);
  q(0, 1) = 1.0;
  EXPECT_FALSE(is_isotropic(blocks(CMatrix::Identity(2, 2), q), 1e-10));
}

TEST(Isotropy, ShapeErrors) {
  EXPECT_THROW(is_isotropic(CMatrix::Zero(3, 1)), Error);
  EXPECT_THROW(is_isotropic(CMatrix::Zero(2, 2)), Error);
  try {
    mode_count(CMatrix::Zero(3, 1));
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Normalisation, StandardFrame) { EXPECT_TRUE(is_normalised(column({kI, 1.0}), 1e-10)); }

TEST(Normalisation, ScaledFrameIsNot) { EXPECT_FALSE(is_normalised(column({2.0 * kI, 2.0}), 1e-10)); }

TEST(Normalisation, FrameFromIdentityMetric) {
  const NormalisedFrame z = frame_from_metric(SymplecticMetricPair::from_metric(RMatrix::Identity(2, 2)));
  EXPECT_TRUE(is_normalised(z.matrix(), 1e-10));
}

TEST(NormaliseFrame, AlreadyNormalisedGivesIdentity) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.integer(1, 3);
    const NormalisedFrame z = rng.normalised_frame(n);
    const NormalisedResult r = normalise_frame(z.frame());
    expect_near(r.N, CMatrix::Identity(n, n), 1e-10);
    expect_near(r.frame.matrix(), z.matrix(), 1e-10);
  }
}

TEST(NormaliseFrame, ScalarScaling) {
  const NormalisedResult r = normalise_frame(LagrangianFrame(column({2.0 * kI, 2.0})));
  EXPECT_NEAR(std::abs(r.N(0, 0) - 0.5), 0.0, 1e-14);
  expect_near(r.frame.matrix(), column({kI, 1.0}), 1e-14);
}

TEST(NormaliseFrame, DaviesSwansonQuarterPeriod) {
  const SwansonParams ds(1.0, 0.5);
  const double t = std::acos(0.0) / ds.omega();
  const CMatrix w = ds_flow(ds, t) * ds_initial_frame().matrix();
  const NormalisedResult r = normalise_frame(LagrangianFrame(w));
  EXPECT_NEAR(r.N(0, 0).real(), std::pow(0.6, -0.5), 1e-12);
  EXPECT_NEAR(r.N(0, 0).imag(), 0.0, 1e-12);
}

TEST(NormaliseFrame, NegativeLagrangianRejected) {
  try {
    normalise_frame(LagrangianFrame(column({-kI, 1.0})));
    FAIL() << "expected NotPositiveLagrangian";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPositiveLagrangian);
  }
}

TEST(NormaliseFrame, RandomPositiveFramesBecomeNormalised) {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.integer(1, 3);
    const CMatrix z = rng.normalised_frame(n).matrix() * rng.invertible(n);
    const NormalisedResult r = normalise_frame(LagrangianFrame(z));
    EXPECT_TRUE(is_normalised(r.frame.matrix(), 1e-10));
    expect_near(r.N, r.N.adjoint(), 1e-12);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(r.N);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(NormalisedFrameType, RejectsUnnormalisedInput) {
  try {
    NormalisedFrame(column({2.0 * kI, 2.0}));
    FAIL() << "expected NotNormalised";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotNormalised);
  }
}

TEST(Projections, StandardFrameResolvesIdentity) {
  const ProjectionPair pr = projections(NormalisedFrame::standard(1));
  expect_near(CMatrix(pr.onto_l + pr.onto_lbar), CMatrix::Identity(2, 2), 1e-14);
}

TEST(Projections, PropertiesOnRandomFrames) {
  Rng rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = rng.integer(1, 3);
    const NormalisedFrame z = rng.normalised_frame(n);
    const ProjectionPair pr = projections(z);
    const CMatrix id = CMatrix::Identity(2 * n, 2 * n);
    const double tol = 1e-10 * tolerance_scale(max_abs(z.matrix()) * max_abs(z.matrix()));
    expect_near(CMatrix(pr.onto_l * pr.onto_l), pr.onto_l, tol);
    expect_near(CMatrix(pr.onto_l * pr.onto_lbar), CMatrix::Zero(2 * n, 2 * n), tol);
    expect_near(CMatrix(pr.onto_l + pr.onto_lbar), id, tol);
    expect_near(CMatrix(pr.onto_l * z.matrix()), z.matrix(), tol);
    expect_near(CMatrix(pr.onto_l * z.matrix().conjugate()), CMatrix::Zero(2 * n, n), tol);

    const SymplecticMetricPair g = metric_and_structure(z);
    expect_near(pr.onto_l, CMatrix(0.5 * (id + kI * g.J.cast<Complex>())), tol);

    const CVector u = rng.complex_matrix(2 * n, 1), v = rng.complex_matrix(2 * n, 1);
    EXPECT_LE(std::abs(hermitian_form(pr.onto_l * u, v) - hermitian_form(u, pr.onto_l * v)), tol * 10);
  }
}

TEST(Siegel, StandardFrame) {
  const SiegelMatrix s = siegel_matrix(LagrangianFrame(column({kI, 1.0})));
  EXPECT_NEAR(std::abs(s.B(0, 0) - kI), 0.0, 1e-15);
  EXPECT_NEAR(s.min_imag_eigenvalue, 1.0, 1e-15);
  EXPECT_TRUE(s.positive());
}

TEST(Siegel, GaugeInvariance) {
  Rng rng(14);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = rng.integer(1, 3);
    const NormalisedFrame z = rng.normalised_frame(n);
    const SiegelMatrix a = siegel_matrix(z.frame());
    const SiegelMatrix b = siegel_matrix(LagrangianFrame(CMatrix(z.matrix() * rng.invertible(n))));
    expect_near(a.B, b.B, 1e-9 * tolerance_scale(max_abs(a.B)));
    expect_near(a.B, a.B.transpose(), 0.0);
    EXPECT_TRUE(a.positive());
  }
}

TEST(Siegel, DaviesSwansonInsideHorizonIsPositive) {
  const SwansonParams ds(1.0, 0.5);
  const double t = std::acos(0.0) / ds.omega();
  const CMatrix w = ds_flow(ds, t) * ds_initial_frame().matrix();
  EXPECT_TRUE(siegel_matrix(LagrangianFrame(w)).positive());
}

TEST(Siegel, SingularQ) {
  try {
    siegel_matrix(LagrangianFrame(column({1.0, 0.0})));
    FAIL() << "expected SingularQ";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularQ);
  }
}

TEST(Metric, StandardFrame) {
  const SymplecticMetricPair g = metric_and_structure(NormalisedFrame::standard(1));
  EXPECT_LE(max_abs(RMatrix(g.G - RMatrix::Identity(2, 2))), 1e-15);
  EXPECT_LE(max_abs(RMatrix(g.J + omega(1))), 1e-15);
}

TEST(Metric, InvariantsOnRandomFrames) {
  Rng rng(15);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = rng.integer(1, 3);
    const NormalisedFrame z = rng.normalised_frame(n);
    const CMatrix& m = z.matrix();
    const RMatrix om = omega(n);
    const double tol = 1e-10 * tolerance_scale(max_abs(m) * max_abs(m));
    expect_near(CMatrix(m.transpose() * om * m), CMatrix::Zero(n, n), tol);
    expect_near(CMatrix(m.adjoint() * om * m), CMatrix(2.0 * kI * CMatrix::Identity(n, n)), tol);
    const CMatrix zz = m * m.adjoint();
    EXPECT_LE(max_abs(RMatrix(zz.imag() + om)), tol);
    const RMatrix reom = zz.real() * om;
    EXPECT_LE(max_abs(RMatrix(reom * reom + RMatrix::Identity(2 * n, 2 * n))), tol * 10);

    const SymplecticMetricPair g = metric_and_structure(z);
    const double gtol = 1e-10 * tolerance_scale(max_abs(g.G) * max_abs(g.G));
    EXPECT_LE(max_abs(RMatrix(g.G - g.G.transpose())), gtol);
    EXPECT_LE(max_abs(RMatrix(g.G.transpose() * om * g.G - om)), gtol);
    EXPECT_LE(max_abs(RMatrix(g.J * g.J + RMatrix::Identity(2 * n, 2 * n))), gtol);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(g.G);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);

    // Unitary gauge leaves the Hermitian square unchanged.
    const SymplecticMetricPair gu = metric_and_structure(NormalisedFrame(CMatrix(m * rng.unitary(n))));
    EXPECT_LE(max_abs(RMatrix(gu.G - g.G)), gtol);
    EXPECT_LE(max_abs(RMatrix(gu.J - g.J)), gtol);
  }
}

TEST(FrameFromMetric, IdentityMetricGivesStandardColumns) {
  const NormalisedFrame z = frame_from_metric(SymplecticMetricPair::from_metric(RMatrix::Identity(2, 2)));
  expect_near(z.matrix(), column({1.0, -kI}), 1e-14);
}

TEST(FrameFromMetric, SqueezedMetric) {
  RMatrix g = RMatrix::Zero(2, 2);
  g.diagonal() << 4.0, 0.25;
  const NormalisedFrame z = frame_from_metric(SymplecticMetricPair::from_metric(g));
  expect_near(z.matrix(), column({0.5, -2.0 * kI}), 1e-14);
  EXPECT_LE(max_abs(RMatrix((z.matrix() * z.matrix().adjoint()).real() - g.inverse())), 1e-14);
}

TEST(FrameFromMetric, RoundTripOnRandomMetrics) {
  Rng rng(16);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = rng.integer(1, 3);
    const RMatrix s = rng.real_symplectic(n);
    const RMatrix g = s.transpose() * s;
    const NormalisedFrame z = frame_from_metric(SymplecticMetricPair::from_metric(g, 1e-9));
    const RMatrix back = metric_and_structure(z).G;
    EXPECT_LE(max_abs(RMatrix(back - g)), 1e-10 * tolerance_scale(max_abs(g) * max_abs(g)));
  }
}

TEST(FrameFromMetric, RejectsNonSymplecticMetric) {
  try {
    SymplecticMetricPair::from_metric(2.0 * RMatrix::Identity(2, 2));
    FAIL() << "expected NotSymplecticMetric";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSymplecticMetric);
  }
}

TEST(HermitianInvSqrt, Examples) {
  expect_near(hermitian_inv_sqrt(CMatrix::Identity(3, 3)), CMatrix::Identity(3, 3), 1e-15);
  CMatrix a = CMatrix::Zero(2, 2);
  a.diagonal() << 4.0, 9.0;
  CMatrix expected = CMatrix::Zero(2, 2);
  expected.diagonal() << 0.5, 1.0 / 3.0;
  expect_near(hermitian_inv_sqrt(a), expected, 1e-15);
}

TEST(HermitianInvSqrt, ResidualOnRandomMatrices) {
  Rng rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = rng.integer(1, 5);
    const CMatrix m = rng.complex_matrix(n, n);
    const CMatrix a = m.adjoint() * m + CMatrix::Identity(n, n);
    const CMatrix r = hermitian_inv_sqrt(a);
    expect_near(CMatrix(r * a * r), CMatrix::Identity(n, n), 1e-10);
    expect_near(r, r.adjoint(), 1e-12);
  }
}

TEST(HermitianInvSqrt, Errors) {
  CMatrix a = CMatrix::Identity(2, 2);
  a(0, 1) = 1.0;
  try {
    hermitian_inv_sqrt(a);
    FAIL() << "expected NotHermitian";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotHermitian);
  }
  try {
    hermitian_inv_sqrt(CMatrix(-CMatrix::Identity(2, 2)));
    FAIL() << "expected NotPositiveDefinite";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPositiveDefinite);
  }
}

}  // namespace
}  // namespace hagedorn
