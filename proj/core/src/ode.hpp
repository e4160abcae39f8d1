#pragma once

#include <vector>

#include <boost/numeric/odeint.hpp>

#include "jostkit/matrix.hpp"
#include "jostkit/model.hpp"

namespace jostkit::detail {

using State = std::vector<double>;
using Stepper = boost::numeric::odeint::runge_kutta_fehlberg78<State>;

inline Eigen::Map<ComplexMatrix> view(State& s, Eigen::Index n) {
  return {reinterpret_cast<Complex*>(s.data()), n, static_cast<Eigen::Index>(s.size() / (2 * n))};
}

inline Eigen::Map<const ComplexMatrix> view(const State& s, Eigen::Index n) {
  return {reinterpret_cast<const Complex*>(s.data()), n, static_cast<Eigen::Index>(s.size() / (2 * n))};
}

inline State pack(const ComplexMatrix& psi, const ComplexMatrix& dpsi) {
  const Eigen::Index n = psi.rows();
  const Eigen::Index m = psi.cols();
  State s(static_cast<std::size_t>(4 * n * m));
  auto v = view(s, n);
  v.leftCols(m) = psi;
  v.rightCols(m) = dpsi;
  return s;
}

// psi' = dpsi, dpsi' = (V(x) - k^2) psi on one segment.
struct SchrodingerSystem {
  const PotentialModel* pot;
  Complex k2;
  double seg_mid;
  mutable ComplexMatrix v;

  SchrodingerSystem(const PotentialModel& p, Complex k, double mid)
      : pot(&p), k2(k * k), seg_mid(mid), v(p.n(), p.n()) {}

  void operator()(const State& s, State& ds, double x) const {
    const Eigen::Index n = pot->n();
    const auto in = view(s, n);
    auto out = view(ds, n);
    const Eigen::Index m = in.cols() / 2;
    v.setZero();
    pot->accumulate_on_segment(x, seg_mid, v);
    v.diagonal().array() -= k2;
    out.leftCols(m) = in.rightCols(m);
    out.rightCols(m).noalias() = v * in.leftCols(m);
  }
};

}  // namespace jostkit::detail
