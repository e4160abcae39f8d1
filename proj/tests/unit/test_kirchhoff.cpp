#include <gtest/gtest.h>

#include "jostkit/kirchhoff.hpp"
#include "random_models.hpp"

using namespace jostkit;
using jostkit::testing::max_abs;

TEST(Fraction, ArithmeticReduces) {
  EXPECT_EQ(Fraction(6, -4), Fraction(-3, 2));
  EXPECT_EQ(Fraction(1, 3) + Fraction(1, 6), Fraction(1, 2));
  EXPECT_EQ(Fraction(2, 3) * Fraction(9, 4), Fraction(3, 2));
  EXPECT_EQ(Fraction(1, 2) / Fraction(1, 4), Fraction(2));
  EXPECT_EQ(-Fraction(1, 2) - Fraction(1, 2), Fraction(-1));
  EXPECT_EQ(to_string(Fraction(-31, 77)), "-31/77");
  EXPECT_THROW(Fraction(1, 0), std::exception);
}

TEST(Fraction, Parse) {
  EXPECT_EQ(Fraction::parse("-31/77"), Fraction(-31, 77));
  EXPECT_EQ(Fraction::parse("2"), Fraction(2));
  EXPECT_EQ(Fraction::parse("0.25"), Fraction(1, 4));
  EXPECT_THROW(Fraction::parse("abc"), Error);
  EXPECT_THROW(Fraction::parse("1/"), Error);
}

TEST(Kirchhoff, ExactDeterminantTransition) {
  for (const Fraction& g : {Fraction(-31, 77), Fraction(0), Fraction(1), Fraction(5, 3)}) {
    const KirchhoffExample ex(g);
    const RefMatrix& J0 = ex.exact("J0");
    std::vector<Fraction> entries;
    for (const auto& e : J0.entries) {
      ASSERT_EQ(e.re.radical, Fraction(0));
      ASSERT_EQ(e.im.rational, Fraction(0));
      entries.push_back(e.re.rational);
    }
    EXPECT_EQ(det3(entries), (Fraction(31) + Fraction(77) * g) / Fraction(9)) << to_string(g);
  }
  EXPECT_TRUE(KirchhoffExample(Fraction(-31, 77)).is_exceptional());
  EXPECT_FALSE(KirchhoffExample(Fraction(0)).is_exceptional());
}

TEST(Kirchhoff, LabelsDependOnCase) {
  const KirchhoffExample exc(KirchhoffExample::exceptional_gamma());
  const KirchhoffExample gen(Fraction(1));
  for (const char* l : {"A", "B", "J0", "J0dot", "f00", "fp00", "fd00", "fdp00"}) {
    EXPECT_TRUE(exc.has(l));
    EXPECT_TRUE(gen.has(l));
  }
  for (const char* l : {"M1", "M2", "R", "F2", "q1_0", "D0", "A1"}) {
    EXPECT_TRUE(exc.has(l));
    EXPECT_FALSE(gen.has(l));
  }
  EXPECT_EQ(exc.reference("A1")(0, 0), Complex(0, 6971.0 / 623.0));
  EXPECT_EQ(exc.reference("M1")(0, 0), Complex(144.0 / 6971.0, 0));
  EXPECT_THROW(gen.reference("M1"), std::out_of_range);
}

// The closed form must solve the equation, carry the jump at x = 1 and have
// the plane-wave tail, independently of any integrator.
TEST(Kirchhoff, ClosedFormSolvesTheEquation) {
  const KirchhoffExample ex(Fraction(2));
  const PotentialModel pot = ex.potential();
  const double h = 1e-4;
  for (Complex k : {Complex(0.4, 0), Complex(1.7, 0), Complex(0.3, 0.5)}) {
    for (double x : {0.3, 0.8, 2.0, 5.0}) {
      const FieldValue p = ex.exact_jost(k, x + h), m = ex.exact_jost(k, x - h), c = ex.exact_jost(k, x);
      const ComplexMatrix dd = (p.dpsi - m.dpsi) / (2 * h);
      ComplexMatrix v = pot(x);
      v.diagonal().array() -= k * k;
      EXPECT_LT(max_abs(dd - v * c.psi), 1e-6);
      EXPECT_LT(max_abs((p.psi - m.psi) / (2 * h) - c.dpsi), 1e-6);
    }
    const FieldValue right = ex.exact_jost(k, 1.0);
    const FieldValue left = ex.exact_jost(k, 1.0 - 1e-7);
    EXPECT_LT(max_abs(right.dpsi - left.dpsi - ex.Gamma() * right.psi), 1e-5);
    const FieldValue far = ex.exact_jost(k, 30.0);
    EXPECT_LT(max_abs(far.psi - std::exp(kI * k * 30.0) * identity(3)), 1e-12);
  }
}

TEST(Kirchhoff, BoundaryIsSelfadjoint) {
  const BoundaryCondition bc = KirchhoffExample(Fraction(0)).boundary();
  EXPECT_LT(bc.pairing_residual, 1e-14);
  EXPECT_GT(bc.min_eigenvalue, 0.1);
}

TEST(Kirchhoff, DocumentLoads) {
  const KirchhoffExample ex(Fraction(1));
  const Problem p = load_problem(ex.to_document());
  ASSERT_TRUE(p.boundary.has_value());
  EXPECT_LT(max_abs(p.boundary->A - ex.A()), 1e-15);
  EXPECT_EQ(p.potential.x_max(), 13.0);
  ASSERT_EQ(p.potential.deltas().size(), 1u);
  EXPECT_LT(max_abs(p.potential.deltas()[0].gamma - ex.Gamma()), 1e-15);
}

TEST(Kirchhoff, ZeroEnergyClosedFormsMatchReferenceValues) {
  const KirchhoffExample ex(Fraction(-31, 77));
  EXPECT_LT(max_abs(ex.exact_jost_zero(0.0).psi - ex.reference("f00")), 1e-14);
  EXPECT_LT(max_abs(ex.exact_jost_zero(0.0).dpsi - ex.reference("fp00")), 1e-14);
  EXPECT_LT(max_abs(ex.exact_jost_zero_dot(0.0).psi - ex.reference("fd00")), 1e-14);
  EXPECT_LT(max_abs(ex.exact_jost_zero_dot(0.0).dpsi - ex.reference("fdp00")), 1e-14);
}
