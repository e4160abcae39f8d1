#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "jostkit/field.hpp"
#include "jostkit/matrix.hpp"
#include "jostkit/model.hpp"

namespace jostkit {

struct SolverConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double max_step = 0.25;
  double initial_step = 0.01;
  // Direct Jost integration is refused for |k| below this.
  double k_floor = 1e-6;
  // Largest acceptable cond(f(0,a)) when choosing the base point.
  double base_cond_cap = 1e6;
  std::optional<double> base_point;
};

struct ZeroEnergyBundle {
  SolutionField f0;     // f(0,x), bounded
  SolutionField f0dot;  // d/dk f(k,x) at k=0, grows like i x
  double a = 0.0;
  double cond_a = 1.0;
  ComplexMatrix q_tail;      // integral over [a, x_max] of f^* f - I
  ComplexMatrix trace_tail;  // integral over [a, x_max] of f - I
  // Estimate of the neglected integral of (1+x)^2 ||V|| beyond x_max.
  double tail_bound = 0.0;
};

// Integrates psi'' = (V - k^2) psi from x_start (psi' right-sided there) over
// [lo, hi], crossing deltas with the derivative jump.
SolutionField integrate_field(std::shared_ptr<const PotentialModel> pot, Complex k, FieldKind kind, double x_start,
                              const ComplexMatrix& psi0, const ComplexMatrix& dpsi0, double lo, double hi,
                              const SolverConfig& cfg = {});

SolutionField jost_field(const PotentialModel& pot, Complex k, const SolverConfig& cfg = {});
ZeroEnergyBundle zero_energy_bundle(const PotentialModel& pot, const SolverConfig& cfg = {});
SolutionField regular_field(const PotentialModel& pot, const BoundaryCondition& bc, Complex k,
                            const SolverConfig& cfg = {});
SolutionField omega_field(const ZeroEnergyBundle& bundle, Complex k, const SolverConfig& cfg = {});

// F(x)^* G'(x) - F'(x)^* G(x), both derivatives taken from the same side.
ComplexMatrix wronskian_dagger(const SolutionField& F, const SolutionField& G, double x, Side side = Side::Right);

// f(0,x)^* f'(k,x) - f'(0,x)^* f(k,x), at x = bundle.a unless given.
ComplexMatrix p_matrix(const ZeroEnergyBundle& bundle, const SolutionField& jost_k, std::optional<double> x = {});

// (omega_1(0), omega_1'(0)).
std::pair<ComplexMatrix, ComplexMatrix> omega1_pair(const ZeroEnergyBundle& bundle);

// Integral of f(0,y)^* f(0,y) - I over [x, x_max].
ComplexMatrix gram_tail(const ZeroEnergyBundle& bundle, double x);

// -x I - i f(0,x)^-1 fdot(0,x) + integral over [x, x_max] of f^* f - I.
ComplexMatrix q1(const ZeroEnergyBundle& bundle, double x);

// Composite 10-point Gauss-Legendre over [lo, hi], splitting at the given
// points and into pieces no longer than max_h.
ComplexMatrix integrate_matrix(const std::function<ComplexMatrix(double)>& fn, double lo, double hi,
                               const std::vector<double>& splits, double max_h = 0.125);

}  // namespace jostkit
