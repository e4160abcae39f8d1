#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "jostkit/matrix.hpp"

namespace jostkit {

// Sampled matrix profile, interpolated entrywise by piecewise cubic Hermite
// polynomials and re-symmetrized to its selfadjoint part.
struct GridProfile {
  std::vector<double> xs;
  std::vector<ComplexMatrix> values;
  int order = 3;  // 1 = linear, 3 = cubic
};

// Closed-form profiles.
//   zero       V = 0
//   sech_star  V(row,col) = scale * 32 e^{2x} / (4 e^{2x} - 1)^2 (and its mirror entry)
//   gaussian   V = H exp(-((x - center)/width)^2)
//   constant   V = H
struct BuiltinProfile {
  std::string name;
  std::map<std::string, double> scalars;
  std::optional<ComplexMatrix> matrix;
  int row = 0;
  int col = 0;
};

struct Piece {
  double x_lo = 0.0;
  double x_hi = 0.0;
  std::variant<GridProfile, BuiltinProfile> profile;
};

struct PointInteraction {
  double x0 = 0.0;
  ComplexMatrix gamma;
};

// Selfadjoint matrix potential on [0, x_max]: regular pieces plus point
// interactions with the matching rule psi'(x0+) - psi'(x0-) = gamma psi(x0).
class PotentialModel {
 public:
  PotentialModel(Eigen::Index n, double x_max, std::vector<Piece> regular, std::vector<PointInteraction> deltas);

  static PotentialModel free(Eigen::Index n, double x_max = 12.0);

  Eigen::Index n() const { return n_; }
  double x_max() const { return x_max_; }
  const std::vector<Piece>& regular() const { return regular_; }
  const std::vector<PointInteraction>& deltas() const { return deltas_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  // Regular part at x (zero outside declared pieces).
  ComplexMatrix operator()(double x) const;
  void accumulate(double x, ComplexMatrix& out) const;
  // Same, but pieces are selected by the segment midpoint so that evaluation
  // at a segment edge uses the formula of the segment it belongs to.
  void accumulate_on_segment(double x, double seg_mid, ComplexMatrix& out) const;

  // Sorted points in (0, x_max) where the potential is not smooth: piece
  // edges and delta locations.
  std::vector<double> breakpoints() const;

  bool is_free() const;

  // Estimate of the integral of (1+x)^2 ||V|| beyond x_max from the decay of
  // ||V|| over the last unit interval.
  double tail_estimate() const;

  // Records a MomentDiverges warning when the weighted L1 norms exceed cap.
  void check_moments(double cap);

 private:
  void validate();

  Eigen::Index n_;
  double x_max_;
  std::vector<Piece> regular_;
  std::vector<PointInteraction> deltas_;
  std::vector<std::string> warnings_;
};

struct BoundaryCondition {
  ComplexMatrix A;
  ComplexMatrix B;
  double pairing_residual = 0.0;   // ||B^*A - A^*B||
  double min_eigenvalue = 0.0;     // smallest eigenvalue of A^*A + B^*B

  static BoundaryCondition dirichlet(Eigen::Index n);
  static BoundaryCondition neumann(Eigen::Index n);
};

BoundaryCondition validate_boundary(const ComplexMatrix& A, const ComplexMatrix& B);

struct Problem {
  PotentialModel potential;
  std::optional<BoundaryCondition> boundary;
};

struct LoadOptions {
  std::optional<double> x_max_override;
  double moment_cap = 1e8;
};

// Potential document: JSON text with keys n, x_max, regular, deltas, boundary.
PotentialModel load_potential(const std::string& document, const LoadOptions& options = {});
Problem load_problem(const std::string& document, const LoadOptions& options = {});
Problem load_problem_file(const std::string& path, const LoadOptions& options = {});

std::string serialize_problem(const PotentialModel& pot, const std::optional<BoundaryCondition>& bc);

// Integral of (1+x)^j ||V(x)|| over [0, x_max] plus the point masses.
double moment_norm(const PotentialModel& pot, int j);

}  // namespace jostkit
