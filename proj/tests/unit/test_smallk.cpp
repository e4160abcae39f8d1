#include <gtest/gtest.h>

#include <cmath>

#include "jostkit/kirchhoff.hpp"
#include "jostkit/smallk.hpp"
#include "random_models.hpp"

using namespace jostkit;
using jostkit::testing::max_abs;

TEST(OrderCheck, PowerLawPasses) {
  const auto ks = halving_ks();
  ASSERT_EQ(ks.size(), 7u);
  EXPECT_DOUBLE_EQ(ks[0], 0.1);
  EXPECT_DOUBLE_EQ(ks[6], 0.1 / 64);
  std::vector<double> r;
  for (double k : ks) r.push_back(3.0 * k * k);
  EXPECT_TRUE(order_check(ks, r, 1.0).pass);
  EXPECT_FALSE(order_check(ks, r, 2.0).pass);
}

TEST(OrderCheck, NoiseFloorPairsPass) {
  const auto ks = halving_ks();
  std::vector<double> r(ks.size(), 1e-12);
  EXPECT_TRUE(order_check(ks, r, 1.0).pass);
}

TEST(OrderCheck, WindowUsesTrailingRatios) {
  const auto ks = halving_ks();
  std::vector<double> r;
  for (double k : ks) r.push_back(k * k);
  r[0] = 1e-9;  // spoils the first ratio only
  EXPECT_FALSE(order_check(ks, r, 1.0).pass);
  EXPECT_TRUE(order_check(ks, r, 1.0, 1.5, 1e-10, 2).pass);
}

TEST(Classify, GenericAndExceptional) {
  EXPECT_EQ(classify(identity(3)).tag, CaseTag::Generic);
  ComplexMatrix m = identity(3);
  m(2, 2) = 0.0;
  const Classification c = classify(m);
  EXPECT_EQ(c.tag, CaseTag::Exceptional);
  EXPECT_EQ(c.mu, 1);
}

TEST(SmallK, WrongBranchIsRefused) {
  const KirchhoffExample gen(Fraction(1));
  const KirchhoffExample exc(KirchhoffExample::exceptional_gamma());
  try {
    exceptional_expansion(zero_energy_bundle(gen.potential()), gen.boundary());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotExceptional);
  }
  try {
    generic_expansion(zero_energy_bundle(exc.potential()), exc.boundary());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotGeneric);
  }
}

TEST(SmallK, GenericCoefficientsAreConsistent) {
  const KirchhoffExample ex(Fraction(1));
  const SmallKReport r = analyze(ex.potential(), ex.boundary());
  ASSERT_EQ(r.case_tag, CaseTag::Generic);
  EXPECT_EQ(r.S0, -identity(3));
  const ComplexMatrix J0i = inverse(r.J0);
  EXPECT_LT(max_abs(r.Jinv_const - J0i), 1e-12);
  EXPECT_LT(max_abs(*r.Jinv_linear + J0i * r.J0dot * J0i), 1e-10);
  EXPECT_LT(max_abs(r.S0dot - 2.0 * r.J0dot * J0i), 1e-10);
}

TEST(SmallK, ExceptionalReportMatchesExample) {
  const KirchhoffExample ex(KirchhoffExample::exceptional_gamma());
  const SmallKReport r = analyze(ex.potential(), ex.boundary());
  ASSERT_EQ(r.case_tag, CaseTag::Exceptional);
  EXPECT_EQ(r.mu, 1);
  EXPECT_EQ(r.nu, 1);
  ASSERT_TRUE(r.intermediates.has_value());
  EXPECT_LT(max_abs(r.intermediates->J0_rebuilt - r.J0), 1e-10);
  EXPECT_LT(max_abs(r.S0 * r.S0 - identity(3)), 1e-8);
  EXPECT_LT(max_abs(r.S0 * r.S0.adjoint() - identity(3)), 1e-8);
  for (const char* label : {"B1", "C1", "D1", "A2", "E2", "E3"}) {
    const ComplexMatrix* got = nullptr;
    const auto& x = *r.intermediates;
    const std::string l = label;
    if (l == "B1") got = &x.B1;
    if (l == "C1") got = &x.C1;
    if (l == "D1") got = &x.D1;
    if (l == "A2") got = &x.A2;
    if (l == "E2") got = &x.E2;
    if (l == "E3") got = &x.E3;
    EXPECT_LT(max_abs(*got - ex.reference(label)), 1e-7) << label;
  }
}

TEST(SmallK, FreeNeumannIsFullyExceptional) {
  const SmallKReport r = analyze(PotentialModel::free(2), BoundaryCondition::neumann(2));
  EXPECT_EQ(r.case_tag, CaseTag::Exceptional);
  EXPECT_EQ(r.mu, 2);
  EXPECT_LT(max_abs(*r.Jinv_pole - kI * identity(2)), 1e-10);
  EXPECT_LT(max_abs(r.S0 - identity(2)), 1e-10);
}

TEST(SmallK, AmbiguousRankCarriesBranches) {
  // gamma close to the exceptional value puts the smallest singular value of
  // J(0) near the rank threshold.
  const Fraction g = KirchhoffExample::exceptional_gamma() + Fraction(1, 1000000000);
  const KirchhoffExample ex(g);
  const SmallKReport r = analyze(ex.potential(), ex.boundary(), 1e-9);
  EXPECT_EQ(r.case_tag, CaseTag::Ambiguous);
  EXPECT_FALSE(r.branches.empty());
  EXPECT_FALSE(r.warnings.empty());
}

TEST(SmallK, RatioExpansionCoefficients) {
  const ZeroEnergyBundle z = zero_energy_bundle(PotentialModel::free(2, 8.0));
  const RatioExpansion r = ratio_expansion(z, 0.0);
  EXPECT_LT(max_abs(r.c0), 1e-12);
  EXPECT_LT(max_abs(r.c1 - kI * identity(2)), 1e-12);
  EXPECT_FALSE(r.d0.has_value());
}

TEST(SmallK, PExpansionCheckPasses) {
  const ZeroEnergyBundle z = zero_energy_bundle(KirchhoffExample(Fraction(1)).potential());
  const OrderCheck oc = p_expansion_check(z, halving_ks());
  EXPECT_TRUE(oc.pass);
  EXPECT_LT(oc.normalized.back(), 0.05);
}
