#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jostkit/solve.hpp"

namespace jostkit {

struct JostPair {
  Complex k;
  ComplexMatrix J;
  std::optional<ComplexMatrix> Jminus;  // J(-k), real k only
};

struct BigJ {
  ComplexMatrix J0;
  ComplexMatrix J0dot;
  ComplexMatrix K0;
  ComplexMatrix K0dot;
  ComplexMatrix calJ;
  ComplexMatrix calJ_inv;          // closed form
  ComplexMatrix calJ_inv_numeric;  // LU
  double mismatch = 0.0;
};

// J = F(0)^* B - F'(0)^* A for a Jost field F taken at -conj(k).
ComplexMatrix jost_from_field(const SolutionField& jost_at_minus_conj_k, const BoundaryCondition& bc);

JostPair jost_matrix(const PotentialModel& pot, const BoundaryCondition& bc, Complex k, const SolverConfig& cfg = {});

ComplexMatrix jost_zero(const ZeroEnergyBundle& bundle, const BoundaryCondition& bc);
ComplexMatrix jost_zero_dot(const ZeroEnergyBundle& bundle, const BoundaryCondition& bc);

// (K(0), K'(0)) for the boundary pair (-B, A).
std::pair<ComplexMatrix, ComplexMatrix> k_matrices_zero(const ZeroEnergyBundle& bundle, const BoundaryCondition& bc);

BigJ big_j(const ZeroEnergyBundle& bundle, const BoundaryCondition& bc, double tol = 1e-8);

// -J(-k) J(k)^-1 for real k.
ComplexMatrix scattering_from_pair(const JostPair& pair);
ComplexMatrix scattering_matrix(const PotentialModel& pot, const BoundaryCondition& bc, double k,
                                const SolverConfig& cfg = {});

struct SRow {
  double k = 0.0;
  std::optional<ComplexMatrix> S;
  double unitarity_defect = 0.0;
  std::string error;
};

// One row per k in input order; a failing row carries its error message and
// does not stop the grid.  threads = 0 uses the hardware concurrency.
std::vector<SRow> s_grid(const PotentialModel& pot, const BoundaryCondition& bc, const std::vector<double>& ks,
                         const SolverConfig& cfg = {}, unsigned threads = 0);

}  // namespace jostkit
