#include "jostkit/smallk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jostkit {

std::string_view to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::Generic: return "generic";
    case CaseTag::Exceptional: return "exceptional";
    case CaseTag::Ambiguous: return "ambiguous";
  }
  return "unknown";
}

Classification classify(const ComplexMatrix& J0, double tol) {
  if (J0.rows() != J0.cols()) throw Error(ErrorCode::NonSquare, "J(0) must be square");
  Classification out;
  const double scale = spectral_norm(J0);
  out.rank = decide_rank(J0, tol, scale);
  if (out.rank.rank == J0.rows()) {
    out.tag = CaseTag::Generic;
    return out;
  }
  out.zed = zero_eigen_structure(J0, tol, scale);
  out.tag = CaseTag::Exceptional;
  out.mu = out.zed->mu;
  out.nu = out.zed->nu;
  return out;
}

namespace {

ComplexMatrix block_inverse(const ComplexMatrix& m, const char* name) {
  try {
    return inverse(m, 1e12);
  } catch (const Error& e) {
    throw Error(ErrorCode::BlockSingular, std::string(name) + " is not invertible: " + e.what());
  }
}

ComplexMatrix assemble(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c,
                       const ComplexMatrix& d) {
  return reassemble(BlockPartition{a, b, c, d});
}

// S P1 Z P2 S^-1
ComplexMatrix inverse_side(const ZeroEigenData& z, const ComplexMatrix& m) {
  return z.S * z.P2.right(z.P1.left(m)) * z.S_inv;
}

// S P2^-1 Z P2 S^-1
ComplexMatrix conjugate_p2(const ZeroEigenData& z, const ComplexMatrix& m) {
  return z.S * z.P2.right(z.P2.left_inv(m)) * z.S_inv;
}

SmallKReport base_report(const ZeroEnergyBundle& bundle, const BoundaryCondition& bc, double tol) {
  SmallKReport r;
  r.n = bundle.f0.n();
  r.a = bundle.a;
  r.tol = tol;
  r.tail_bound = bundle.tail_bound;
  r.J0 = jost_zero(bundle, bc);
  r.J0dot = jost_zero_dot(bundle, bc);
  return r;
}

SmallKReport generic_core(const ZeroEnergyBundle& bundle, const BoundaryCondition& bc, double tol) {
  SmallKReport r = base_report(bundle, bc, tol);
  r.case_tag = CaseTag::Generic;
  const ComplexMatrix Jinv = inverse(r.J0);
  r.Jinv_const = Jinv;
  r.Jinv_linear = -Jinv * r.J0dot * Jinv;
  r.S0 = -identity(r.n);
  r.S0dot = 2.0 * r.J0dot * Jinv;
  return r;
}

SmallKReport exceptional_core(const ZeroEnergyBundle& bundle, const BoundaryCondition& bc, const ComplexMatrix& phi0_a,
                              const ZeroEigenData& zed, double tol) {
  SmallKReport r = base_report(bundle, bc, tol);
  r.case_tag = CaseTag::Exceptional;
  r.mu = zed.mu;
  r.nu = zed.nu;
  if (zed.mu < zed.nu) {
    r.warnings.push_back("zero eigenvalue of J(0) is defective (mu < nu); expansion formulas are untested there");
  }

  ExceptionalData x;
  x.zed = zed;
  x.phi0_a = phi0_a;
  const Eigen::Index n = r.n;
  const Eigen::Index mu = zed.mu;
  const ComplexMatrix fa = bundle.f0.value(bundle.a);
  const ComplexMatrix fda = bundle.f0dot.value(bundle.a);

  x.R = inverse(fa) * phi0_a;
  x.q1a = q1(bundle, bundle.a);
  std::tie(x.omega1_0, x.omega1p_0) = omega1_pair(bundle);
  x.F2 = kI * (x.omega1p_0.adjoint() * bc.A - x.omega1_0.adjoint() * bc.B) - x.q1a.adjoint() * x.R;
  x.W = fda.adjoint() * inverse(ComplexMatrix(fa.adjoint()));

  const BlockPartition one = partition(zed.to_canonical(-kI * x.R), mu);
  const BlockPartition two = partition(zed.to_canonical(x.F2), mu);
  x.A1 = one.A;
  x.B1 = one.B;
  x.C1 = one.C;
  x.D1 = one.D;
  x.A2 = two.A;
  x.B2 = two.B;
  x.C2 = two.C;
  x.D2 = two.D;
  x.D0 = partition(zed.transformed, mu).D;

  const ComplexMatrix A1i = block_inverse(x.A1, "A1");
  const ComplexMatrix D0i = block_inverse(x.D0, "D0");

  const ComplexMatrix Zmu = ComplexMatrix::Zero(mu, mu);
  const ComplexMatrix Zb = ComplexMatrix::Zero(mu, n - mu);
  const ComplexMatrix Zc = ComplexMatrix::Zero(n - mu, mu);
  const ComplexMatrix Imu = identity(mu);
  const ComplexMatrix Irest = identity(n - mu);

  x.J0_rebuilt = zed.from_canonical(assemble(Zmu, Zb, Zc, x.D0));
  x.J0dot_rebuilt = -x.W * r.J0 + zed.from_canonical(assemble(x.A1, x.B1, x.C1, x.D1));

  const ComplexMatrix residue = inverse_side(zed, assemble(A1i, Zb, Zc, ComplexMatrix::Zero(n - mu, n - mu)));
  x.Y1 = A1i * (x.B1 * D0i * x.C1 - x.A2) * A1i;
  r.Jinv_pole = residue;
  r.Jinv_const =
      residue * x.W + inverse_side(zed, assemble(x.Y1, -A1i * x.B1 * D0i, -D0i * x.C1 * A1i, D0i));

  r.S0 = conjugate_p2(zed, assemble(Imu, Zb, 2.0 * x.C1 * A1i, -Irest));
  x.E3 = (x.C1 * A1i * x.B1 * D0i * x.C1 - x.C1 * A1i * x.A2 - x.D1 * D0i * x.C1) * A1i;
  x.E2 = 2.0 * assemble(-x.A2 * A1i, Zb, x.E3, (x.D1 - x.C1 * A1i * x.B1) * D0i);
  r.S0dot = conjugate_p2(zed, x.E2) + r.S0 * x.W + x.W * r.S0;

  const double invol = norm(r.S0 * r.S0 - identity(n));
  if (invol > 1e-8) r.warnings.push_back("S(0)^2 deviates from I by " + std::to_string(invol));

  r.rank_threshold = zed.tol * zed.scale;
  r.intermediates = std::move(x);
  return r;
}

void attach_rank(SmallKReport& r, const RankDecision& rank) {
  r.rank_threshold = rank.threshold;
  r.singular_values = rank.singular_values;
}

ComplexMatrix phi0_at(const ZeroEnergyBundle& bundle, const BoundaryCondition& bc, const SolverConfig& cfg) {
  if (bundle.a == 0.0) return bc.A;
  return regular_field(bundle.f0.potential(), bc, 0.0, cfg).value(bundle.a);
}

}  // namespace

SmallKReport generic_expansion(const ZeroEnergyBundle& bundle, const BoundaryCondition& bc, double tol) {
  const ComplexMatrix J0 = jost_zero(bundle, bc);
  const Classification c = classify(J0, tol);
  if (c.tag != CaseTag::Generic) throw Error(ErrorCode::NotGeneric, "J(0) is singular at tolerance");
  SmallKReport r = generic_core(bundle, bc, tol);
  attach_rank(r, c.rank);
  return r;
}

SmallKReport exceptional_expansion(const ZeroEnergyBundle& bundle, const BoundaryCondition& bc,
                                   const SolutionField& phi0, double tol) {
  const ComplexMatrix J0 = jost_zero(bundle, bc);
  const Classification c = classify(J0, tol);
  if (c.tag != CaseTag::Exceptional) throw Error(ErrorCode::NotExceptional, "J(0) is invertible at tolerance");
  SmallKReport r = exceptional_core(bundle, bc, phi0.value(bundle.a), *c.zed, tol);
  attach_rank(r, c.rank);
  return r;
}

SmallKReport exceptional_expansion(const ZeroEnergyBundle& bundle, const BoundaryCondition& bc, double tol,
                                   const SolverConfig& cfg) {
  const ComplexMatrix J0 = jost_zero(bundle, bc);
  const Classification c = classify(J0, tol);
  if (c.tag != CaseTag::Exceptional) throw Error(ErrorCode::NotExceptional, "J(0) is invertible at tolerance");
  SmallKReport r = exceptional_core(bundle, bc, phi0_at(bundle, bc, cfg), *c.zed, tol);
  attach_rank(r, c.rank);
  return r;
}

SmallKReport analyze(const ZeroEnergyBundle& bundle, const BoundaryCondition& bc, double tol,
                     const SolverConfig& cfg) {
  const ComplexMatrix J0 = jost_zero(bundle, bc);
  try {
    const Classification c = classify(J0, tol);
    SmallKReport r = c.tag == CaseTag::Generic ? generic_core(bundle, bc, tol)
                                               : exceptional_core(bundle, bc, phi0_at(bundle, bc, cfg), *c.zed, tol);
    attach_rank(r, c.rank);
    return r;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::RankAmbiguous) throw;
    SmallKReport r = base_report(bundle, bc, tol);
    r.case_tag = CaseTag::Ambiguous;
    r.warnings.push_back(e.what());
    r.S0 = ComplexMatrix::Zero(r.n, r.n);
    r.S0dot = ComplexMatrix::Zero(r.n, r.n);
    try {
      r.branches.push_back(generic_core(bundle, bc, tol));
    } catch (const std::exception& g) {
      r.warnings.push_back(std::string("generic branch failed: ") + g.what());
    }
    try {
      const double loose = tol * 100.0;
      const ZeroEigenData zed = zero_eigen_structure(J0, loose, spectral_norm(J0));
      if (zed.mu > 0) r.branches.push_back(exceptional_core(bundle, bc, phi0_at(bundle, bc, cfg), zed, loose));
    } catch (const std::exception& x) {
      r.warnings.push_back(std::string("exceptional branch failed: ") + x.what());
    }
    return r;
  }
}

SmallKReport analyze(const PotentialModel& pot, const BoundaryCondition& bc, double tol, const SolverConfig& cfg) {
  return analyze(zero_energy_bundle(pot, cfg), bc, tol, cfg);
}

RatioExpansion ratio_expansion(const ZeroEnergyBundle& bundle, double x, double cond_cap) {
  const auto f = bundle.f0.at(x);
  const auto fd = bundle.f0dot.at(x);
  const Eigen::Index n = f.psi.rows();
  if (!(condition_number(f.psi) <= cond_cap)) {
    throw Error(ErrorCode::BasePointSingular, "f(0,x) singular at x=" + std::to_string(x));
  }
  RatioExpansion out;
  out.x = x;
  const ComplexMatrix fi = inverse(f.psi, cond_cap);
  const ComplexMatrix tail = gram_tail(bundle, x);
  const ComplexMatrix q = -x * identity(n) - kI * fi * fd.psi + tail;
  out.c0 = f.dpsi * fi;
  out.c1 = kI * fi.adjoint() * fi;
  out.c2 = fi.adjoint() * q * fi;
  if (condition_number(f.dpsi) <= cond_cap) {
    const ComplexMatrix gi = inverse(f.dpsi, cond_cap);
    const ComplexMatrix q2 = x * identity(n) + kI * gi * fd.dpsi - tail;
    out.d0 = f.psi * gi;
    out.d1 = -kI * gi.adjoint() * gi;
    out.d2 = gi.adjoint() * q2 * gi;
  }
  return out;
}

OrderCheck order_check(const std::vector<double>& ks, const std::vector<double>& residuals, double power,
                       double min_factor, double noise_floor, std::size_t window) {
  OrderCheck out;
  out.ks = ks;
  out.residuals = residuals;
  for (std::size_t i = 0; i < ks.size(); ++i) out.normalized.push_back(residuals[i] / std::pow(std::abs(ks[i]), power));
  out.min_ratio = std::numeric_limits<double>::infinity();
  out.pass = ks.size() >= 2;
  const std::size_t pairs = ks.size() < 2 ? 0 : ks.size() - 1;
  const std::size_t first = (window == 0 || window >= pairs) ? 0 : pairs - window;
  for (std::size_t i = 0; i < pairs; ++i) {
    const double ratio = out.normalized[i] / out.normalized[i + 1];
    out.ratios.push_back(ratio);
    if (i < first) continue;
    const bool quiet = residuals[i] <= noise_floor && residuals[i + 1] <= noise_floor;
    if (quiet) continue;
    out.min_ratio = std::min(out.min_ratio, ratio);
    if (!(ratio >= min_factor)) out.pass = false;
  }
  return out;
}

std::vector<double> halving_ks(double k0, int count) {
  std::vector<double> ks;
  for (int m = 0; m < count; ++m) ks.push_back(k0 * std::ldexp(1.0, -m));
  return ks;
}

OrderCheck p_expansion_check(const ZeroEnergyBundle& bundle, const std::vector<double>& ks, const SolverConfig& cfg,
                             const ComplexMatrix* q_tail_shift) {
  const Eigen::Index n = bundle.f0.n();
  ComplexMatrix c2 = -bundle.a * identity(n) + bundle.q_tail;
  if (q_tail_shift) c2 += *q_tail_shift;
  std::vector<double> res;
  for (double k : ks) {
    const ComplexMatrix P = p_matrix(bundle, jost_field(bundle.f0.potential(), k, cfg));
    res.push_back(norm(P - kI * k * identity(n) - k * k * c2));
  }
  return order_check(ks, res, 2.0, 1.5, 1e-10, 2);
}

}  // namespace jostkit
