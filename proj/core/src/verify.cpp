#include "jostkit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "jostkit/scattering.hpp"

namespace jostkit {

namespace {

Check make_check(std::string name, double residual, double threshold, std::string detail = {}) {
  return {std::move(name), residual, threshold, residual <= threshold, std::move(detail)};
}

std::vector<double> sample_points(const PotentialModel& pot, int count) {
  std::vector<double> xs;
  const double X = pot.x_max();
  for (int i = 0; i < count; ++i) xs.push_back(X * i / (count - 1));
  for (const auto& d : pot.deltas()) xs.push_back(d.x0);
  std::sort(xs.begin(), xs.end());
  return xs;
}

std::string k_label(Complex k) {
  std::ostringstream os;
  os << "k=" << k.real();
  if (k.imag() != 0.0) os << (k.imag() > 0 ? "+" : "") << k.imag() << "i";
  return os.str();
}

// Largest deviation of W(x) from target over the sample points, both sides
// at delta locations.
double wronskian_deviation(const SolutionField& F, const SolutionField& G, const ComplexMatrix& target,
                           const std::vector<double>& xs) {
  double worst = 0.0;
  for (double x : xs) {
    worst = std::max(worst, norm(wronskian_dagger(F, G, x) - target));
    worst = std::max(worst, norm(wronskian_dagger(F, G, x, Side::Left) - target));
  }
  return worst;
}

// psi'' from the stored derivative and psi' from the stored value, both by
// Richardson-extrapolated central differences, against the equation.
double ode_residual(const SolutionField& field, const std::vector<double>& xs) {
  const PotentialModel& pot = field.potential();
  const Complex k2 = field.k() * field.k();
  const double h = 1e-2;
  std::vector<double> avoid = pot.breakpoints();
  avoid.push_back(field.lo());
  avoid.push_back(field.hi());
  double worst = 0.0;
  for (double x : xs) {
    bool near = false;
    for (double b : avoid) near = near || std::abs(x - b) < 2.5 * h;
    if (near) continue;
    auto central = [&](double step) {
      const auto p = field.at(x + step);
      const auto m = field.at(x - step);
      return std::pair<ComplexMatrix, ComplexMatrix>{(p.psi - m.psi) / (2 * step), (p.dpsi - m.dpsi) / (2 * step)};
    };
    const auto [d1, dd1] = central(h);
    const auto [d2, dd2] = central(h / 2);
    const ComplexMatrix dpsi = (4.0 * d2 - d1) / 3.0;
    const ComplexMatrix ddpsi = (4.0 * dd2 - dd1) / 3.0;
    const auto here = field.at(x);
    ComplexMatrix v = pot(x);
    v.diagonal().array() -= k2;
    const double scale = std::max(1.0, norm(here.psi));
    worst = std::max(worst, norm(ddpsi - v * here.psi) / scale);
    worst = std::max(worst, norm(dpsi - here.dpsi) / scale);
  }
  return worst;
}

}  // namespace

Check order_to_check(const std::string& name, const OrderCheck& oc, double min_factor) {
  std::ostringstream os;
  os << "ratios";
  for (double r : oc.ratios) os << " " << r;
  return Check{name, std::isfinite(oc.min_ratio) ? oc.min_ratio : 0.0, min_factor, oc.pass, os.str()};
}

std::vector<Check> verify_wronskian(const PotentialModel& pot, const VerifyOptions& opts) {
  std::vector<Check> out;
  const auto xs = sample_points(pot, 12);
  const Eigen::Index n = pot.n();
  for (double k : {0.3, 1.0, 2.5}) {
    const SolutionField fk = jost_field(pot, k, opts.solver);
    const SolutionField fm = jost_field(pot, -k, opts.solver);
    out.push_back(make_check("wronskian_self " + k_label(k), wronskian_deviation(fk, fk, 2.0 * kI * k * identity(n), xs),
                             1e-8));
    out.push_back(make_check("wronskian_self " + k_label(-k),
                             wronskian_deviation(fm, fm, -2.0 * kI * k * identity(n), xs), 1e-8));
    out.push_back(make_check("wronskian_pair " + k_label(k),
                             wronskian_deviation(fm, fk, ComplexMatrix::Zero(n, n), xs), 1e-8));
  }
  for (Complex k : {Complex(0.6, 0.4), Complex(-1.1, 0.25)}) {
    const SolutionField fk = jost_field(pot, k, opts.solver);
    const SolutionField fc = jost_field(pot, -std::conj(k), opts.solver);
    out.push_back(make_check("wronskian_pair " + k_label(k),
                             wronskian_deviation(fc, fk, ComplexMatrix::Zero(n, n), xs), 1e-8));
  }
  return out;
}

std::vector<Check> verify_identities(const PotentialModel& pot, const BoundaryCondition& bc,
                                     const VerifyOptions& opts) {
  std::vector<Check> out;
  const Eigen::Index n = pot.n();
  const ComplexMatrix I = identity(n);
  const ZeroEnergyBundle z = zero_energy_bundle(pot, opts.solver);

  {
    double worst = 0.0;
    const auto grid = z.f0.grid();
    const std::size_t stride = std::max<std::size_t>(1, grid.size() / 20);
    std::vector<double> xs;
    for (std::size_t i = 0; i < grid.size(); i += stride) xs.push_back(grid[i]);
    for (const auto& d : pot.deltas()) xs.push_back(d.x0);
    for (double x : xs) {
      const auto f = z.f0.at(x);
      const auto g = z.f0dot.at(x);
      ComplexMatrix left(2 * n, 2 * n), right(2 * n, 2 * n);
      left << f.psi, g.psi, f.dpsi, g.dpsi;
      right << g.dpsi.adjoint(), -g.psi.adjoint(), f.dpsi.adjoint(), -f.psi.adjoint();
      worst = std::max(worst, norm(left * right + kI * identity(2 * n)));
    }
    out.push_back(make_check("zero_energy_block_identity", worst, 1e-8));
  }

  {
    const double X = pot.x_max();
    const auto splits = z.f0.grid();
    std::vector<double> points{0.0, z.a, 1.5};
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    double worst[3] = {0.0, 0.0, 0.0};
    for (double x : points) {
      if (x > X) continue;
      const auto f = z.f0.at(x);
      for (int j = 0; j < 3; ++j) {
        ComplexMatrix lhs = integrate_matrix(
            [&](double y) { return ComplexMatrix(std::pow(y, j) * pot(y) * z.f0.value(y)); }, x, X, splits);
        for (const auto& d : pot.deltas()) {
          if (d.x0 > x) lhs += std::pow(d.x0, j) * d.gamma * z.f0.value(d.x0);
        }
        ComplexMatrix rhs;
        if (j == 0) {
          rhs = -f.dpsi;
        } else if (j == 1) {
          rhs = -I + f.psi - x * f.dpsi;
        } else {
          const ComplexMatrix tail =
              integrate_matrix([&](double y) { return ComplexMatrix(z.f0.value(y) - I); }, x, X, splits);
          rhs = -x * x * f.dpsi + 2.0 * x * (f.psi - I) + 2.0 * tail;
        }
        worst[j] = std::max(worst[j], norm(lhs - rhs));
      }
    }
    out.push_back(make_check("integral_identity_first_moment", worst[0], 1e-7));
    out.push_back(make_check("integral_identity_second_moment", worst[1], 1e-7));
    out.push_back(make_check("integral_identity_third_moment", worst[2], 1e-7));
  }

  {
    const auto xs = sample_points(pot, 40);
    const double k = 1.3;
    double worst = 0.0;
    worst = std::max(worst, ode_residual(jost_field(pot, k, opts.solver), xs) / (1 + k * k));
    worst = std::max(worst, ode_residual(z.f0, xs));
    worst = std::max(worst, ode_residual(z.f0dot, xs));
    worst = std::max(worst, ode_residual(regular_field(pot, bc, 0.7, opts.solver), xs) / (1 + 0.49));
    worst = std::max(worst, ode_residual(omega_field(z, 0.5, opts.solver), xs) / (1 + 0.25));
    out.push_back(make_check("ode_residual", worst, 1e-6));
  }

  {
    const auto xs = sample_points(pot, 12);
    double worst = 0.0;
    for (Complex k : {Complex(0.8, 0.0), Complex(0.6, 0.4)}) {
      const SolutionField fc = jost_field(pot, -std::conj(k), opts.solver);
      const SolutionField phi = regular_field(pot, bc, k, opts.solver);
      const ComplexMatrix J = jost_from_field(fc, bc);
      worst = std::max(worst, wronskian_deviation(fc, phi, J, xs) / std::max(1.0, norm(J)));
    }
    out.push_back(make_check("jost_wronskian_constancy", worst, 1e-8));
  }

  {
    const SolutionField w0 = omega_field(z, 0.0, opts.solver);
    double worst = 0.0;
    for (double x : sample_points(pot, 25)) worst = std::max(worst, norm(w0.value(x) - z.f0.value(x)));
    out.push_back(make_check("omega_zero_equals_f_zero", worst, 1e-9));
  }

  {
    try {
      const BigJ bj = big_j(z, bc);
      out.push_back(make_check("big_j_closed_form_inverse", norm(bj.calJ * bj.calJ_inv - identity(2 * n)), 1e-8));
    } catch (const Error& e) {
      out.push_back(Check{"big_j_closed_form_inverse", INFINITY, 1e-8, false, e.what()});
    }
  }
  return out;
}

std::vector<Check> verify_expansions(const PotentialModel& pot, const BoundaryCondition& bc,
                                     const VerifyOptions& opts) {
  std::vector<Check> out;
  const Eigen::Index n = pot.n();
  const ZeroEnergyBundle z = zero_energy_bundle(pot, opts.solver);
  const SmallKReport rep = analyze(z, bc, opts.rank_tol, opts.solver);
  const auto ks = halving_ks(opts.k0, opts.halvings);
  const double a = z.a;
  const auto fa = z.f0.at(a);
  const auto fda = z.f0dot.at(a);
  const RatioExpansion ratio = ratio_expansion(z, a);

  std::vector<double> r_f, r_fp, r_p, r_ratio, r_ratio2, r_j, r_jinv, r_s;
  const ComplexMatrix p2 = -a * identity(n) + z.q_tail;
  for (double k : ks) {
    const SolutionField fk = jost_field(pot, k, opts.solver);
    const SolutionField fm = jost_field(pot, -k, opts.solver);
    const auto v = fk.at(a);
    r_f.push_back(norm(v.psi - fa.psi - k * fda.psi));
    r_fp.push_back(norm(v.dpsi - fa.dpsi - k * fda.dpsi));
    r_p.push_back(norm(p_matrix(z, fk) - kI * k * identity(n) - k * k * p2));
    r_ratio.push_back(norm(v.dpsi * inverse(v.psi) - ratio.c0 - k * ratio.c1 - k * k * ratio.c2));
    if (ratio.d0) r_ratio2.push_back(norm(v.psi * inverse(v.dpsi) - *ratio.d0 - k * *ratio.d1 - k * k * *ratio.d2));

    if (rep.case_tag == CaseTag::Ambiguous) continue;
    const JostPair pair{k, jost_from_field(fm, bc), jost_from_field(fk, bc)};
    const ComplexMatrix Jinv = inverse(pair.J);
    const ComplexMatrix S = scattering_from_pair(pair);
    if (rep.case_tag == CaseTag::Generic) {
      r_j.push_back(norm(pair.J - rep.J0 - k * rep.J0dot));
      r_jinv.push_back(norm(Jinv - rep.Jinv_const - k * *rep.Jinv_linear));
    } else {
      const auto& x = *rep.intermediates;
      r_j.push_back(norm(pair.J - x.J0_rebuilt - k * x.J0dot_rebuilt));
      r_jinv.push_back(norm(Jinv - *rep.Jinv_pole / k - rep.Jinv_const));
    }
    r_s.push_back(norm(S - rep.S0 - k * rep.S0dot));
  }

  out.push_back(order_to_check("jost_value_linear_order", order_check(ks, r_f, 1.0)));
  out.push_back(order_to_check("jost_derivative_linear_order", order_check(ks, r_fp, 1.0)));
  out.push_back(order_to_check("p_matrix_quadratic_order", order_check(ks, r_p, 2.0)));
  out.push_back(order_to_check("log_derivative_quadratic_order", order_check(ks, r_ratio, 2.0)));
  if (ratio.d0) out.push_back(order_to_check("inverse_log_derivative_quadratic_order", order_check(ks, r_ratio2, 2.0)));
  if (rep.case_tag == CaseTag::Ambiguous) {
    out.push_back(Check{"classification", INFINITY, 0.0, false, "rank decision for J(0) is ambiguous"});
    return out;
  }
  const bool generic = rep.case_tag == CaseTag::Generic;
  out.push_back(order_to_check("jost_matrix_linear_order", order_check(ks, r_j, 1.0)));
  out.push_back(order_to_check(generic ? "jost_inverse_linear_order" : "jost_inverse_pole_order",
                               order_check(ks, r_jinv, generic ? 1.0 : 0.0)));
  out.push_back(order_to_check("scattering_linear_order", order_check(ks, r_s, 1.0)));
  return out;
}

std::vector<Check> run_suite(const std::string& suite, const PotentialModel& pot, const BoundaryCondition& bc,
                             const VerifyOptions& opts) {
  std::vector<Check> out;
  auto append = [&](std::vector<Check> more) { out.insert(out.end(), more.begin(), more.end()); };
  if (suite == "all" || suite == "wronskian") append(verify_wronskian(pot, opts));
  if (suite == "all" || suite == "identities") append(verify_identities(pot, bc, opts));
  if (suite == "all" || suite == "expansions") append(verify_expansions(pot, bc, opts));
  if (suite != "all" && suite != "wronskian" && suite != "identities" && suite != "expansions") {
    throw Error(ErrorCode::ParseError, "unknown suite '" + suite + "'");
  }
  return out;
}

}  // namespace jostkit
