#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jostkit/smallk.hpp"
#include "jostkit/solve.hpp"

namespace jostkit {

struct Check {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  SolverConfig solver;
  double rank_tol = 1e-9;
  // k sequence for the order checks
  double k0 = 0.1;
  int halvings = 7;
};

// Wronskian relations for Jost solutions at real and complex k and their
// independence of x.
std::vector<Check> verify_wronskian(const PotentialModel& pot, const VerifyOptions& opts = {});

// Zero-energy block identity, integral identities for f(0,x), ODE residuals,
// omega(0,x) = f(0,x) and the closed-form inverse of the 2n x 2n matrix.
std::vector<Check> verify_identities(const PotentialModel& pot, const BoundaryCondition& bc,
                                     const VerifyOptions& opts = {});

// Order checks for every small-k expansion that applies to the case at hand.
std::vector<Check> verify_expansions(const PotentialModel& pot, const BoundaryCondition& bc,
                                     const VerifyOptions& opts = {});

// suite: all | wronskian | identities | expansions
std::vector<Check> run_suite(const std::string& suite, const PotentialModel& pot, const BoundaryCondition& bc,
                             const VerifyOptions& opts = {});

Check order_to_check(const std::string& name, const OrderCheck& oc, double min_factor = 1.5);

}  // namespace jostkit
