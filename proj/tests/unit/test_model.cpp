#include <gtest/gtest.h>

#include <random>

#include "jostkit/kirchhoff.hpp"
#include "jostkit/model.hpp"
#include "random_models.hpp"

using namespace jostkit;
using jostkit::testing::max_abs;
using jostkit::testing::Rng;

namespace {

ErrorCode load_error(const std::string& doc) {
  try {
    load_problem(doc);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "document loaded unexpectedly: " << doc;
  return ErrorCode::ParseError;
}

}  // namespace

TEST(Model, FreeIsFree) {
  const PotentialModel p = PotentialModel::free(3);
  EXPECT_TRUE(p.is_free());
  EXPECT_EQ(max_abs(p(1.0)), 0.0);
  EXPECT_EQ(p.x_max(), 12.0);
}

TEST(Model, RejectsNonSelfadjointBuiltin) {
  ComplexMatrix h(2, 2);
  h << 1.0, 2.0, 3.0, 1.0;
  BuiltinProfile b{"constant", {}, h, 0, 0};
  try {
    PotentialModel(2, 5.0, {Piece{0.0, 1.0, b}}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSelfadjoint);
  }
}

TEST(Model, RejectsNonSelfadjointDelta) {
  ComplexMatrix g(2, 2);
  g << 0.0, 1.0, 0.0, 0.0;
  try {
    PotentialModel(2, 5.0, {}, {PointInteraction{1.0, g}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSelfadjoint);
  }
}

TEST(Model, RejectsOverlappingPieces) {
  BuiltinProfile b{"constant", {}, identity(1), 0, 0};
  try {
    PotentialModel(1, 5.0, {Piece{0.0, 2.0, b}, Piece{1.0, 3.0, b}}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OverlappingPieces);
  }
}

TEST(Model, DeltaMustBeInside) {
  EXPECT_THROW(PotentialModel(1, 5.0, {}, {PointInteraction{0.0, identity(1)}}), Error);
  EXPECT_THROW(PotentialModel(1, 5.0, {}, {PointInteraction{6.0, identity(1)}}), Error);
}

TEST(Model, PiecesAreHalfOpen) {
  BuiltinProfile one{"constant", {}, identity(1), 0, 0};
  BuiltinProfile two{"constant", {}, 2.0 * identity(1), 0, 0};
  const PotentialModel p(1, 5.0, {Piece{0.0, 1.0, one}, Piece{1.0, 2.0, two}}, {});
  EXPECT_EQ(p(0.5)(0, 0), 1.0);
  EXPECT_EQ(p(1.0)(0, 0), 2.0);
  EXPECT_EQ(p(2.5)(0, 0), 0.0);
  const auto bp = p.breakpoints();
  EXPECT_NE(std::find(bp.begin(), bp.end(), 1.0), bp.end());
}

TEST(Model, GridProfileInterpolatesAndSymmetrizes) {
  GridProfile g;
  for (int i = 0; i <= 10; ++i) {
    const double x = 0.1 * i;
    ComplexMatrix v(2, 2);
    v << x * x, Complex(x, 0.1), Complex(x, -0.1), 1.0;
    g.xs.push_back(x);
    g.values.push_back(v);
  }
  const PotentialModel p(2, 3.0, {Piece{0.0, 1.0, g}}, {});
  const ComplexMatrix v = p(0.55);
  EXPECT_NEAR(v(0, 0).real(), 0.55 * 0.55, 1e-3);
  EXPECT_LT(max_abs(v - v.adjoint()), 1e-15);
}

TEST(Model, BoundaryValidation) {
  const auto d = BoundaryCondition::dirichlet(2);
  EXPECT_EQ(max_abs(d.A), 0.0);
  const auto n = BoundaryCondition::neumann(2);
  EXPECT_EQ(max_abs(n.B), 0.0);
  ComplexMatrix A = identity(2), B = identity(2);
  B(0, 1) = 1.0;  // B*A != A*B
  try {
    validate_boundary(A, B);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSelfadjointPairing);
  }
  ComplexMatrix Z = ComplexMatrix::Zero(2, 2);
  Z(0, 0) = 1.0;
  try {
    validate_boundary(Z, ComplexMatrix::Zero(2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPositive);
  }
}

// Property: right multiplication by an invertible M keeps a boundary pair valid.
TEST(Model, BoundaryGaugeInvarianceProperty) {
  Rng rng(11);
  for (int t = 0; t < 30; ++t) {
    const Eigen::Index n = 1 + t % 4;
    const BoundaryCondition bc = jostkit::testing::random_boundary(rng, n);
    const ComplexMatrix M = jostkit::testing::random_invertible(rng, n);
    EXPECT_NO_THROW(validate_boundary(bc.A * M, bc.B * M));
    EXPECT_LT(bc.pairing_residual, 1e-12);
    EXPECT_GT(bc.min_eigenvalue, 1e-12);
  }
}

// Property: serialize then load reproduces V at 1000 points to 1e-14.
TEST(Model, DocumentRoundTripProperty) {
  Rng rng(12);
  std::uniform_real_distribution<double> ux(0.0, 13.0);
  std::vector<PotentialModel> models;
  models.push_back(KirchhoffExample(Fraction(-31, 77)).potential());
  for (Eigen::Index n : {1, 2, 3}) models.push_back(jostkit::testing::random_smooth_potential(rng, n));
  for (const auto& p : models) {
    const Problem back = load_problem(serialize_problem(p, std::nullopt));
    EXPECT_EQ(back.potential.n(), p.n());
    EXPECT_EQ(back.potential.x_max(), p.x_max());
    EXPECT_EQ(back.potential.deltas().size(), p.deltas().size());
    for (int i = 0; i < 1000; ++i) {
      const double x = ux(rng);
      EXPECT_LE(max_abs(back.potential(x) - p(x)), 1e-14) << "x=" << x;
    }
  }
}

TEST(Model, DocumentDefaultsAndErrors) {
  const Problem p = load_problem(R"({"n": 1, "deltas": [{"x0": 2.0, "gamma": [[1.5]]}]})");
  EXPECT_DOUBLE_EQ(p.potential.x_max(), 14.0);
  EXPECT_FALSE(p.boundary.has_value());
  const Problem q = load_problem(R"({"n": 2})");
  EXPECT_DOUBLE_EQ(q.potential.x_max(), 12.0);
  LoadOptions lo;
  lo.x_max_override = 7.5;
  EXPECT_DOUBLE_EQ(load_problem(R"({"n": 2})", lo).potential.x_max(), 7.5);

  EXPECT_EQ(load_error("not json"), ErrorCode::ParseError);
  EXPECT_EQ(load_error(R"({"n": 2, "deltas": [{"x0": 1.0, "gamma": [[0, 1], [0, 0]]}]})"),
            ErrorCode::NotSelfadjoint);
  EXPECT_EQ(load_error(R"({"n": 2, "deltas": [{"x0": 1.0, "gamma": [[0, 1, 2], [0, 0]]}]})"), ErrorCode::NonSquare);
}

// Property: weighted moments grow with the weight exponent.
TEST(Model, MomentMonotonicityProperty) {
  Rng rng(13);
  std::vector<PotentialModel> models{KirchhoffExample(Fraction(1)).potential()};
  for (Eigen::Index n : {1, 2, 3}) models.push_back(jostkit::testing::random_smooth_potential(rng, n));
  for (const auto& p : models) {
    const double m0 = moment_norm(p, 0), m1 = moment_norm(p, 1), m2 = moment_norm(p, 2);
    EXPECT_GT(m0, 0.0);
    EXPECT_LE(m0, m1);
    EXPECT_LE(m1, m2);
  }
  EXPECT_EQ(moment_norm(PotentialModel::free(2), 2), 0.0);
}

TEST(Model, SechStarMatchesFormula) {
  const PotentialModel p = KirchhoffExample(Fraction(0)).potential();
  for (double x : {0.1, 1.0, 3.0}) {
    const double e = std::exp(2 * x);
    EXPECT_NEAR(p(x)(0, 0).real(), 32 * e / ((4 * e - 1) * (4 * e - 1)), 1e-14);
    EXPECT_EQ(p(x)(1, 1), 0.0);
  }
  EXPECT_LT(p.tail_estimate(), 1e-6);
}
