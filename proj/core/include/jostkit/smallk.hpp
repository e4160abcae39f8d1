#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jostkit/matrix.hpp"
#include "jostkit/scattering.hpp"
#include "jostkit/solve.hpp"

namespace jostkit {

enum class CaseTag { Generic, Exceptional, Ambiguous };
std::string_view to_string(CaseTag tag);

struct Classification {
  CaseTag tag = CaseTag::Generic;
  Eigen::Index mu = 0;
  Eigen::Index nu = 0;
  RankDecision rank;
  std::optional<ZeroEigenData> zed;
};

// Generic iff the smallest singular value exceeds tol * sigma_max.
Classification classify(const ComplexMatrix& J0, double tol = 1e-9);

struct ExceptionalData {
  ComplexMatrix R;
  ComplexMatrix F2;
  ComplexMatrix q1a;
  ComplexMatrix omega1_0;
  ComplexMatrix omega1p_0;
  ComplexMatrix phi0_a;
  ComplexMatrix W;  // fdot(0,a)^* [f(0,a)^*]^-1
  ComplexMatrix A1, B1, C1, D1;
  ComplexMatrix A2, B2, C2, D2;
  ComplexMatrix D0;
  ComplexMatrix Y1;
  ComplexMatrix E2, E3;
  // J(0) and J'(0) rebuilt from the block data.
  ComplexMatrix J0_rebuilt;
  ComplexMatrix J0dot_rebuilt;
  ZeroEigenData zed;
};

struct SmallKReport {
  CaseTag case_tag = CaseTag::Generic;
  Eigen::Index n = 0;
  Eigen::Index mu = 0;
  Eigen::Index nu = 0;
  double a = 0.0;
  double tol = 1e-9;
  double rank_threshold = 0.0;
  Eigen::VectorXd singular_values;
  double tail_bound = 0.0;

  ComplexMatrix J0;
  ComplexMatrix J0dot;
  std::optional<ComplexMatrix> Jinv_pole;    // residue of the 1/k term
  ComplexMatrix Jinv_const;                  // J(0)^-1, or E1 when exceptional
  std::optional<ComplexMatrix> Jinv_linear;  // generic only
  ComplexMatrix S0;
  ComplexMatrix S0dot;
  std::optional<ExceptionalData> intermediates;

  std::vector<std::string> warnings;
  // Both branches when the rank decision was ambiguous.
  std::vector<SmallKReport> branches;
};

SmallKReport generic_expansion(const ZeroEnergyBundle& bundle, const BoundaryCondition& bc, double tol = 1e-9);

SmallKReport exceptional_expansion(const ZeroEnergyBundle& bundle, const BoundaryCondition& bc,
                                   const SolutionField& phi0, double tol = 1e-9);
SmallKReport exceptional_expansion(const ZeroEnergyBundle& bundle, const BoundaryCondition& bc, double tol = 1e-9,
                                   const SolverConfig& cfg = {});

// Classifies and dispatches; an ambiguous rank decision yields a report with
// case Ambiguous carrying whichever branches could be computed.
SmallKReport analyze(const ZeroEnergyBundle& bundle, const BoundaryCondition& bc, double tol = 1e-9,
                     const SolverConfig& cfg = {});
SmallKReport analyze(const PotentialModel& pot, const BoundaryCondition& bc, double tol = 1e-9,
                     const SolverConfig& cfg = {});

struct RatioExpansion {
  double x = 0.0;
  // f' f^-1 = c0 + k c1 + k^2 c2 + o(k^2)
  ComplexMatrix c0, c1, c2;
  // f f'^-1 = d0 + k d1 + k^2 d2 + o(k^2), when f'(0,x) is invertible
  std::optional<ComplexMatrix> d0, d1, d2;
};

RatioExpansion ratio_expansion(const ZeroEnergyBundle& bundle, double x, double cond_cap = 1e10);

struct OrderCheck {
  std::vector<double> ks;
  std::vector<double> residuals;
  std::vector<double> normalized;  // residual / |k|^power
  std::vector<double> ratios;      // normalized[m] / normalized[m+1]
  double min_ratio = 0.0;
  bool pass = false;
};

// Passes when every consecutive ratio of normalized residuals is at least
// min_factor; pairs whose raw residuals are both below noise_floor count as
// passing.  window limits the check to the trailing ratios (0 = all).
OrderCheck order_check(const std::vector<double>& ks, const std::vector<double>& residuals, double power,
                       double min_factor = 1.5, double noise_floor = 1e-10, std::size_t window = 0);

// Halving sequence k = k0 * 2^-m, m = 0..count-1.
std::vector<double> halving_ks(double k0 = 0.1, int count = 7);

// ||P(k) - ik I - k^2(-aI + q_tail + shift)|| over ks, checked at power 2 on
// the last three points.
OrderCheck p_expansion_check(const ZeroEnergyBundle& bundle, const std::vector<double>& ks,
                             const SolverConfig& cfg = {}, const ComplexMatrix* q_tail_shift = nullptr);

}  // namespace jostkit
