#include "jostkit/solve.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <boost/math/quadrature/gauss.hpp>

#include "ode.hpp"

namespace jostkit {

namespace odeint = boost::numeric::odeint;

namespace {

const ComplexMatrix* gamma_at(const PotentialModel& pot, double x) {
  for (const auto& d : pot.deltas()) {
    if (d.x0 == x) return &d.gamma;
  }
  return nullptr;
}

void apply_jump(detail::State& st, const ComplexMatrix& gamma, Eigen::Index n, double sign) {
  auto v = detail::view(st, n);
  const Eigen::Index m = v.cols() / 2;
  v.rightCols(m) += sign * gamma * v.leftCols(m);
}

struct Recorder {
  std::vector<double>* xs;
  std::vector<detail::State>* states;
  void operator()(const detail::State& s, double t) const {
    xs->push_back(t);
    states->push_back(s);
  }
};

}  // namespace

SolutionField integrate_field(std::shared_ptr<const PotentialModel> pot, Complex k, FieldKind kind, double x_start,
                              const ComplexMatrix& psi0, const ComplexMatrix& dpsi0, double lo, double hi,
                              const SolverConfig& cfg) {
  const Eigen::Index n = pot->n();
  std::vector<double> edges{lo};
  for (double b : pot->breakpoints()) {
    if (b > lo && b < hi) edges.push_back(b);
  }
  edges.push_back(hi);
  const std::size_t nseg = edges.size() - 1;

  std::vector<SolutionField::Segment> segs(nseg);
  std::vector<SolutionField::Segment> back(nseg);
  for (std::size_t j = 0; j < nseg; ++j) {
    segs[j].lo = back[j].lo = edges[j];
    segs[j].hi = back[j].hi = edges[j + 1];
  }

  std::size_t steps = 0;
  auto run = [&](std::size_t j, double from, double to, detail::State& st, SolutionField::Segment& seg) {
    detail::SchrodingerSystem sys(*pot, k, 0.5 * (edges[j] + edges[j + 1]));
    const double span = to - from;
    // The step cap must carry the direction of integration.
    auto stepper =
        odeint::make_controlled(cfg.abs_tol, cfg.rel_tol, std::copysign(cfg.max_step, span), detail::Stepper());
    const double dt = std::copysign(std::min(cfg.initial_step, std::abs(span)), span);
    try {
      steps += odeint::integrate_adaptive(stepper, sys, st, from, to, dt, Recorder{&seg.xs, &seg.states});
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw Error(ErrorCode::StepFailure, std::string("integration on [") + std::to_string(edges[j]) + ", " +
                                              std::to_string(edges[j + 1]) + "] failed: " + e.what());
    }
    if (!all_finite(detail::view(st, n))) {
      throw Error(ErrorCode::StepFailure, "non-finite solution near x=" + std::to_string(to));
    }
  };

  const detail::State init = detail::pack(psi0, dpsi0);

  // Forward sweep.
  {
    detail::State st = init;
    double x = x_start;
    while (x < hi) {
      auto it = std::upper_bound(edges.begin(), edges.end(), x);
      std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(it - edges.begin()) - 1, nseg - 1);
      run(j, x, edges[j + 1], st, segs[j]);
      x = edges[j + 1];
      if (x < hi) {
        if (const auto* g = gamma_at(*pot, x)) apply_jump(st, *g, n, +1.0);
      }
    }
  }

  // Backward sweep.
  {
    detail::State st = init;
    double x = x_start;
    if (x > lo) {
      if (const auto* g = gamma_at(*pot, x)) apply_jump(st, *g, n, -1.0);
    }
    while (x > lo) {
      auto it = std::lower_bound(edges.begin(), edges.end(), x);
      std::size_t j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - edges.begin() - 1, 0));
      run(j, x, edges[j], st, back[j]);
      x = edges[j];
      if (x > lo) {
        if (const auto* g = gamma_at(*pot, x)) apply_jump(st, *g, n, -1.0);
      }
    }
  }

  for (std::size_t j = 0; j < nseg; ++j) {
    auto& b = back[j];
    std::reverse(b.xs.begin(), b.xs.end());
    std::reverse(b.states.begin(), b.states.end());
    auto& f = segs[j];
    std::size_t skip = (!b.xs.empty() && !f.xs.empty() && b.xs.back() == f.xs.front()) ? 1 : 0;
    b.xs.insert(b.xs.end(), f.xs.begin() + static_cast<std::ptrdiff_t>(skip), f.xs.end());
    b.states.insert(b.states.end(), f.states.begin() + static_cast<std::ptrdiff_t>(skip), f.states.end());
    f = std::move(b);
  }
  return SolutionField(kind, k, std::move(pot), std::move(segs), steps);
}

SolutionField jost_field(const PotentialModel& pot, Complex k, const SolverConfig& cfg) {
  if (k.imag() < 0.0) throw Error(ErrorCode::OutOfDomain, "Im k < 0");
  if (std::abs(k) < cfg.k_floor) {
    throw Error(ErrorCode::OutOfDomain, "|k| below the direct-integration floor " + std::to_string(cfg.k_floor));
  }
  const double X = pot.x_max();
  const Eigen::Index n = pot.n();
  const Complex e = std::exp(kI * k * X);
  return integrate_field(std::make_shared<const PotentialModel>(pot), k, FieldKind::Jost, X, e * identity(n),
                         kI * k * e * identity(n), 0.0, X, cfg);
}

ZeroEnergyBundle zero_energy_bundle(const PotentialModel& pot, const SolverConfig& cfg) {
  auto shared = std::make_shared<const PotentialModel>(pot);
  const double X = pot.x_max();
  const Eigen::Index n = pot.n();
  const ComplexMatrix I = identity(n);
  const ComplexMatrix Z = ComplexMatrix::Zero(n, n);

  SolutionField f0 = integrate_field(shared, 0.0, FieldKind::JostZero, X, I, Z, 0.0, X, cfg);
  SolutionField fd = integrate_field(shared, 0.0, FieldKind::JostZeroKDeriv, X, kI * X * I, kI * I, 0.0, X, cfg);

  double a = 0.0;
  double cond = condition_number(f0.value(0.0));
  if (cfg.base_point) {
    a = *cfg.base_point;
    if (a < 0.0 || a > X) throw Error(ErrorCode::OutOfGrid, "base point outside [0, x_max]");
    cond = condition_number(f0.value(a));
    if (!(cond <= cfg.base_cond_cap)) {
      throw Error(ErrorCode::BasePointSingular, "cond f(0,a) = " + std::to_string(cond) + " at a=" + std::to_string(a));
    }
  } else if (!(cond <= cfg.base_cond_cap)) {
    bool found = false;
    for (double x : f0.grid()) {
      if (x == 0.0 || gamma_at(pot, x)) continue;
      cond = condition_number(f0.value(x));
      if (cond <= cfg.base_cond_cap) {
        a = x;
        found = true;
        break;
      }
    }
    if (!found) throw Error(ErrorCode::NoInvertiblePoint, "f(0,x) ill-conditioned on all of [0, x_max]");
  }

  const auto splits = f0.grid();
  ComplexMatrix q_tail = integrate_matrix(
      [&](double y) {
        const ComplexMatrix f = f0.value(y);
        return ComplexMatrix(f.adjoint() * f - I);
      },
      a, X, splits);
  ComplexMatrix trace_tail = integrate_matrix([&](double y) { return ComplexMatrix(f0.value(y) - I); }, a, X, splits);

  return ZeroEnergyBundle{std::move(f0), std::move(fd), a, cond, std::move(q_tail), std::move(trace_tail),
                          pot.tail_estimate()};
}

SolutionField regular_field(const PotentialModel& pot, const BoundaryCondition& bc, Complex k,
                            const SolverConfig& cfg) {
  return integrate_field(std::make_shared<const PotentialModel>(pot), k, FieldKind::RegularPhi, 0.0, bc.A, bc.B, 0.0,
                         pot.x_max(), cfg);
}

SolutionField omega_field(const ZeroEnergyBundle& bundle, Complex k, const SolverConfig& cfg) {
  const auto at_a = bundle.f0.at(bundle.a);
  return integrate_field(bundle.f0.potential_ptr(), k, FieldKind::Omega, bundle.a, at_a.psi, at_a.dpsi, 0.0,
                         bundle.f0.hi(), cfg);
}

ComplexMatrix wronskian_dagger(const SolutionField& F, const SolutionField& G, double x, Side side) {
  if (!F.covers(x) || !G.covers(x)) throw Error(ErrorCode::OutOfGrid, "x=" + std::to_string(x));
  const auto f = F.at(x, side);
  const auto g = G.at(x, side);
  return f.psi.adjoint() * g.dpsi - f.dpsi.adjoint() * g.psi;
}

ComplexMatrix p_matrix(const ZeroEnergyBundle& bundle, const SolutionField& jost_k, std::optional<double> x) {
  const double at = x.value_or(bundle.a);
  return wronskian_dagger(bundle.f0, jost_k, at);
}

std::pair<ComplexMatrix, ComplexMatrix> omega1_pair(const ZeroEnergyBundle& bundle) {
  const Eigen::Index n = bundle.f0.n();
  if (bundle.a == 0.0) return {ComplexMatrix::Zero(n, n), ComplexMatrix::Zero(n, n)};
  const auto splits = bundle.f0.grid();
  const ComplexMatrix G1 = -integrate_matrix(
      [&](double y) { return ComplexMatrix(bundle.f0dot.value(y).adjoint() * bundle.f0.value(y)); }, 0.0, bundle.a,
      splits);
  const ComplexMatrix G2 = -integrate_matrix(
      [&](double y) {
        const ComplexMatrix f = bundle.f0.value(y);
        return ComplexMatrix(f.adjoint() * f);
      },
      0.0, bundle.a, splits);
  const auto f = bundle.f0.at(0.0);
  const auto fd = bundle.f0dot.at(0.0);
  return {f.psi * G1 + fd.psi * G2, f.dpsi * G1 + fd.dpsi * G2};
}

ComplexMatrix gram_tail(const ZeroEnergyBundle& bundle, double x) {
  const Eigen::Index n = bundle.f0.n();
  const ComplexMatrix I = identity(n);
  if (x == bundle.a) return bundle.q_tail;
  return integrate_matrix(
      [&](double y) {
        const ComplexMatrix f = bundle.f0.value(y);
        return ComplexMatrix(f.adjoint() * f - I);
      },
      x, bundle.f0.hi(), bundle.f0.grid());
}

ComplexMatrix q1(const ZeroEnergyBundle& bundle, double x) {
  const Eigen::Index n = bundle.f0.n();
  const ComplexMatrix f = bundle.f0.value(x);
  const ComplexMatrix fd = bundle.f0dot.value(x);
  return -x * identity(n) - kI * inverse(f) * fd + gram_tail(bundle, x);
}

ComplexMatrix integrate_matrix(const std::function<ComplexMatrix(double)>& fn, double lo, double hi,
                               const std::vector<double>& splits, double max_h) {
  if (hi < lo) return -integrate_matrix(fn, hi, lo, splits, max_h);
  std::vector<double> pts{lo};
  for (double s : splits) {
    if (s > lo && s < hi) pts.push_back(s);
  }
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());

  using Rule = boost::math::quadrature::gauss<double, 10>;
  const auto& xs = Rule::abscissa();
  const auto& ws = Rule::weights();

  ComplexMatrix total;
  auto add = [&](const ComplexMatrix& m) {
    if (total.size() == 0) {
      total = m;
    } else {
      total += m;
    }
  };
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double len = pts[i + 1] - pts[i];
    if (len <= 0.0) continue;
    const int pieces = std::max(1, static_cast<int>(std::ceil(len / max_h)));
    const double h = len / pieces;
    for (int p = 0; p < pieces; ++p) {
      const double mid = pts[i] + (p + 0.5) * h;
      const double half = 0.5 * h;
      for (std::size_t q = 0; q < xs.size(); ++q) {
        add(ws[q] * half * (fn(mid - half * xs[q]) + fn(mid + half * xs[q])));
      }
    }
  }
  if (total.size() == 0) {
    const ComplexMatrix probe = fn(lo);
    return ComplexMatrix::Zero(probe.rows(), probe.cols());
  }
  return total;
}

}  // namespace jostkit
