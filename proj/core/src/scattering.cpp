#include "jostkit/scattering.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace jostkit {

ComplexMatrix jost_from_field(const SolutionField& F, const BoundaryCondition& bc) {
  const auto f = F.at(0.0);
  return f.psi.adjoint() * bc.B - f.dpsi.adjoint() * bc.A;
}

JostPair jost_matrix(const PotentialModel& pot, const BoundaryCondition& bc, Complex k, const SolverConfig& cfg) {
  JostPair out{k, jost_from_field(jost_field(pot, -std::conj(k), cfg), bc), std::nullopt};
  if (k.imag() == 0.0) out.Jminus = jost_from_field(jost_field(pot, k, cfg), bc);
  return out;
}

ComplexMatrix jost_zero(const ZeroEnergyBundle& bundle, const BoundaryCondition& bc) {
  const auto f = bundle.f0.at(0.0);
  return f.psi.adjoint() * bc.B - f.dpsi.adjoint() * bc.A;
}

ComplexMatrix jost_zero_dot(const ZeroEnergyBundle& bundle, const BoundaryCondition& bc) {
  const auto fd = bundle.f0dot.at(0.0);
  return fd.dpsi.adjoint() * bc.A - fd.psi.adjoint() * bc.B;
}

std::pair<ComplexMatrix, ComplexMatrix> k_matrices_zero(const ZeroEnergyBundle& bundle, const BoundaryCondition& bc) {
  const auto f = bundle.f0.at(0.0);
  const auto fd = bundle.f0dot.at(0.0);
  return {f.psi.adjoint() * bc.A + f.dpsi.adjoint() * bc.B, -fd.psi.adjoint() * bc.A - fd.dpsi.adjoint() * bc.B};
}

BigJ big_j(const ZeroEnergyBundle& bundle, const BoundaryCondition& bc, double tol) {
  BigJ out;
  out.J0 = jost_zero(bundle, bc);
  out.J0dot = jost_zero_dot(bundle, bc);
  std::tie(out.K0, out.K0dot) = k_matrices_zero(bundle, bc);
  const Eigen::Index n = out.J0.rows();

  out.calJ.resize(2 * n, 2 * n);
  out.calJ << out.J0, out.K0, out.J0dot, out.K0dot;

  const ComplexMatrix G = inverse(bc.A.adjoint() * bc.A + bc.B.adjoint() * bc.B);
  out.calJ_inv.resize(2 * n, 2 * n);
  out.calJ_inv << kI * G * out.K0dot.adjoint(), kI * G * out.K0.adjoint(), -kI * G * out.J0dot.adjoint(),
      -kI * G * out.J0.adjoint();

  out.calJ_inv_numeric = inverse(out.calJ);
  out.mismatch = norm(out.calJ_inv_numeric - out.calJ_inv) / std::max(1.0, norm(out.calJ_inv));
  if (!(out.mismatch <= tol)) {
    throw Error(ErrorCode::ClosedFormMismatch, "numerical and closed-form inverses differ by " +
                                                   std::to_string(out.mismatch));
  }
  return out;
}

ComplexMatrix scattering_from_pair(const JostPair& pair) {
  if (!pair.Jminus) throw Error(ErrorCode::OutOfDomain, "S(k) needs real k");
  ComplexMatrix Jinv;
  try {
    Jinv = inverse(pair.J, 1e12);
  } catch (const Error& e) {
    throw Error(ErrorCode::JostSingular, "J(k) at k=" + std::to_string(pair.k.real()) + ": " + e.what());
  }
  return -(*pair.Jminus) * Jinv;
}

ComplexMatrix scattering_matrix(const PotentialModel& pot, const BoundaryCondition& bc, double k,
                                const SolverConfig& cfg) {
  if (k == 0.0 || std::abs(k) < cfg.k_floor) {
    throw Error(ErrorCode::OutOfDomain, "|k| below the direct-integration floor");
  }
  return scattering_from_pair(jost_matrix(pot, bc, k, cfg));
}

std::vector<SRow> s_grid(const PotentialModel& pot, const BoundaryCondition& bc, const std::vector<double>& ks,
                         const SolverConfig& cfg, unsigned threads) {
  std::vector<SRow> rows(ks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ks.size(); i = next++) {
      SRow& row = rows[i];
      row.k = ks[i];
      try {
        ComplexMatrix S = scattering_matrix(pot, bc, ks[i], cfg);
        row.unitarity_defect = norm(S * S.adjoint() - identity(S.rows()));
        row.S = std::move(S);
      } catch (const std::exception& e) {
        row.error = e.what();
        row.unitarity_defect = std::nan("");
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(ks.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

}  // namespace jostkit
