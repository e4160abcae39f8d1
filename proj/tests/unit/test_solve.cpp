#include <gtest/gtest.h>

#include "jostkit/kirchhoff.hpp"
#include "jostkit/solve.hpp"
#include "random_models.hpp"

using namespace jostkit;
using jostkit::testing::max_abs;

TEST(Solve, FreeJostIsPlaneWave) {
  const PotentialModel p = PotentialModel::free(2, 8.0);
  for (Complex k : {Complex(0.5, 0), Complex(-2.0, 0), Complex(0.3, 0.7)}) {
    const SolutionField f = jost_field(p, k);
    for (double x : {0.0, 1.3, 4.0, 8.0}) {
      EXPECT_LT(max_abs(f.value(x) - std::exp(kI * k * x) * identity(2)), 1e-10);
      EXPECT_LT(max_abs(f.derivative(x) - kI * k * std::exp(kI * k * x) * identity(2)), 1e-10);
    }
  }
}

TEST(Solve, JostDomainGuards) {
  const PotentialModel p = PotentialModel::free(1);
  for (Complex k : {Complex(1.0, -0.1), Complex(1e-8, 0)}) {
    try {
      jost_field(p, k);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::OutOfDomain);
    }
  }
}

TEST(Solve, OutOfGridEvaluation) {
  const SolutionField f = jost_field(PotentialModel::free(1, 5.0), 1.0);
  try {
    f.at(6.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfGrid);
  }
}

TEST(Solve, DeltaJumpRule) {
  ComplexMatrix g(1, 1);
  g << 2.5;
  const PotentialModel p(1, 6.0, {}, {PointInteraction{2.0, g}});
  const SolutionField f = jost_field(p, 0.9);
  const ComplexMatrix jump = f.derivative(2.0, Side::Right) - f.derivative(2.0, Side::Left);
  EXPECT_LT(max_abs(jump - g * f.value(2.0)), 1e-10);
  EXPECT_EQ(f.jump_points().size(), 1u);
}

TEST(Solve, ZeroEnergyBundleFree) {
  const ZeroEnergyBundle z = zero_energy_bundle(PotentialModel::free(2, 10.0));
  EXPECT_EQ(z.a, 0.0);
  for (double x : {0.0, 3.0, 10.0}) {
    EXPECT_LT(max_abs(z.f0.value(x) - identity(2)), 1e-12);
    EXPECT_LT(max_abs(z.f0dot.value(x) - kI * x * identity(2)), 1e-10);
    EXPECT_LT(max_abs(z.f0dot.derivative(x) - kI * identity(2)), 1e-10);
  }
  EXPECT_LT(max_abs(z.q_tail), 1e-12);
}

TEST(Solve, ZeroEnergyBundleMatchesClosedForm) {
  const KirchhoffExample ex(Fraction(2));
  const ZeroEnergyBundle z = zero_energy_bundle(ex.potential());
  for (double x : {0.0, 0.5, 1.0, 2.0, 7.0}) {
    const FieldValue f = ex.exact_jost_zero(x);
    const FieldValue d = ex.exact_jost_zero_dot(x);
    EXPECT_LT(max_abs(z.f0.value(x) - f.psi), 1e-9);
    EXPECT_LT(max_abs(z.f0.derivative(x) - f.dpsi), 1e-9);
    EXPECT_LT(max_abs(z.f0dot.value(x) - d.psi), 1e-8);
    EXPECT_LT(max_abs(z.f0dot.derivative(x) - d.dpsi), 1e-8);
  }
}

TEST(Solve, BasePointOverride) {
  SolverConfig cfg;
  cfg.base_point = 2.0;
  const ZeroEnergyBundle z = zero_energy_bundle(KirchhoffExample(Fraction(1)).potential(), cfg);
  EXPECT_EQ(z.a, 2.0);
}

TEST(Solve, RegularFieldInitialData) {
  jostkit::testing::Rng rng(21);
  const BoundaryCondition bc = jostkit::testing::random_boundary(rng, 2);
  const SolutionField phi = regular_field(jostkit::testing::random_smooth_potential(rng, 2), bc, 0.8);
  EXPECT_LT(max_abs(phi.value(0.0) - bc.A), 1e-14);
  EXPECT_LT(max_abs(phi.derivative(0.0) - bc.B), 1e-14);
}

TEST(Solve, OmegaAtZeroIsJostAtZero) {
  const ZeroEnergyBundle z = zero_energy_bundle(KirchhoffExample(Fraction(0)).potential());
  const SolutionField w = omega_field(z, 0.0);
  for (double x : {0.0, 0.7, 1.0, 4.0, 12.0}) EXPECT_LT(max_abs(w.value(x) - z.f0.value(x)), 1e-9);
}

TEST(Solve, Omega1FreeCase) {
  SolverConfig cfg;
  cfg.base_point = 1.0;
  const ZeroEnergyBundle z = zero_energy_bundle(PotentialModel::free(2, 6.0), cfg);
  const auto [w0, w0p] = omega1_pair(z);
  EXPECT_LT(max_abs(w0 - 0.5 * kI * identity(2)), 1e-10);
  EXPECT_LT(max_abs(w0p + kI * identity(2)), 1e-10);
}

TEST(Solve, QuadratureIsExactForPolynomials) {
  const ComplexMatrix v = integrate_matrix(
      [](double x) { return ComplexMatrix(x * x * x * identity(1)); }, 0.0, 2.0, {0.7});
  EXPECT_NEAR(v(0, 0).real(), 4.0, 1e-13);
}

TEST(Solve, WronskianOfJostWithItself) {
  const SolutionField f = jost_field(KirchhoffExample(Fraction(1)).potential(), 1.2);
  for (double x : {0.0, 1.0, 5.0}) {
    EXPECT_LT(max_abs(wronskian_dagger(f, f, x) - 2.4 * kI * identity(3)), 1e-9);
  }
}
