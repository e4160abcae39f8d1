#include <gtest/gtest.h>

#include <cmath>

#include "jostkit/kirchhoff.hpp"
#include "jostkit/scattering.hpp"
#include "random_models.hpp"

using namespace jostkit;
using jostkit::testing::max_abs;

TEST(Scattering, FreeDirichletAndNeumann) {
  const PotentialModel p = PotentialModel::free(2);
  EXPECT_LT(max_abs(scattering_matrix(p, BoundaryCondition::dirichlet(2), 0.4) + identity(2)), 1e-10);
  EXPECT_LT(max_abs(scattering_matrix(p, BoundaryCondition::neumann(2), 0.4) - identity(2)), 1e-10);
}

TEST(Scattering, JostMatrixFromField) {
  const PotentialModel p = PotentialModel::free(1);
  const auto bc = BoundaryCondition::dirichlet(1);
  const JostPair pair = jost_matrix(p, bc, 0.5);
  // J(k) = -f'(-k,0)^* A with A = 0, B = I: f(-k,0)^* B = 1
  EXPECT_LT(max_abs(pair.J - identity(1)), 1e-12);
  ASSERT_TRUE(pair.Jminus.has_value());
}

TEST(Scattering, KirchhoffMatchesClosedFormJost) {
  const KirchhoffExample ex(Fraction(1));
  const BoundaryCondition bc = ex.boundary();
  const double k = 0.8;
  const FieldValue f = ex.exact_jost(-k, 0.0);
  const ComplexMatrix J = f.psi.adjoint() * bc.B - f.dpsi.adjoint() * bc.A;
  EXPECT_LT(max_abs(jost_matrix(ex.potential(), bc, k).J - J), 1e-9);
}

TEST(Scattering, GridKeepsOrderAndReportsUnitarity) {
  jostkit::testing::Rng rng(31);
  const PotentialModel p = jostkit::testing::random_smooth_potential(rng, 2);
  const BoundaryCondition bc = jostkit::testing::random_boundary(rng, 2);
  const std::vector<double> ks{2.0, 0.01, 0.5, 1.0};
  const auto rows = s_grid(p, bc, ks, {}, 3);
  ASSERT_EQ(rows.size(), ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    EXPECT_EQ(rows[i].k, ks[i]);
    ASSERT_TRUE(rows[i].S.has_value()) << rows[i].error;
    EXPECT_LT(rows[i].unitarity_defect, 1e-8);
    EXPECT_LT(max_abs(*rows[i].S - scattering_matrix(p, bc, ks[i])), 1e-13);
  }
}

TEST(Scattering, GridRowFailureIsLocal) {
  const auto rows = s_grid(PotentialModel::free(1), BoundaryCondition::dirichlet(1), {0.5, 1e-9, 1.0}, {}, 1);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_TRUE(rows[0].S.has_value());
  EXPECT_FALSE(rows[1].S.has_value());
  EXPECT_FALSE(rows[1].error.empty());
  EXPECT_TRUE(rows[2].S.has_value());
}

TEST(Scattering, BigJClosedFormInverse) {
  jostkit::testing::Rng rng(32);
  for (Eigen::Index n : {1, 2, 3}) {
    const PotentialModel p = jostkit::testing::random_smooth_potential(rng, n);
    const BoundaryCondition bc = jostkit::testing::random_boundary(rng, n);
    const BigJ b = big_j(zero_energy_bundle(p), bc);
    EXPECT_LT(max_abs(b.calJ * b.calJ_inv - identity(2 * n)), 1e-8);
    EXPECT_LT(b.mismatch, 1e-8);
  }
}

TEST(Scattering, KirchhoffJostZeroMatchesReference) {
  for (int g : {0, 1, 2}) {
    const KirchhoffExample ex{Fraction(g)};
    const ZeroEnergyBundle z = zero_energy_bundle(ex.potential());
    EXPECT_LT(max_abs(jost_zero(z, ex.boundary()) - ex.reference("J0")), 1e-8);
    EXPECT_LT(max_abs(jost_zero_dot(z, ex.boundary()) - ex.reference("J0dot")), 1e-8);
  }
}
