#include "jostkit/field.hpp"

#include <algorithm>
#include <cmath>

#include "ode.hpp"

namespace jostkit {

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::Jost: return "jost";
    case FieldKind::JostZero: return "jost_zero";
    case FieldKind::JostZeroKDeriv: return "jost_zero_kderiv";
    case FieldKind::RegularPhi: return "regular_phi";
    case FieldKind::Omega: return "omega";
  }
  return "unknown";
}

SolutionField::SolutionField(FieldKind kind, Complex k, std::shared_ptr<const PotentialModel> pot,
                             std::vector<Segment> segments, std::size_t steps)
    : kind_(kind), k_(k), pot_(std::move(pot)), segments_(std::move(segments)), steps_(steps) {}

bool SolutionField::covers(double x) const {
  const double slack = 1e-12 * (1.0 + std::abs(hi()));
  return x >= lo() - slack && x <= hi() + slack;
}

FieldValue SolutionField::at(double x, Side side) const {
  if (!covers(x)) {
    throw Error(ErrorCode::OutOfGrid, "x=" + std::to_string(x) + " outside [" + std::to_string(lo()) + ", " +
                                          std::to_string(hi()) + "]");
  }
  x = std::clamp(x, lo(), hi());

  std::size_t s = 0;
  while (s + 1 < segments_.size() && x >= segments_[s].hi) ++s;
  if (side == Side::Left && s > 0 && x == segments_[s].lo) --s;
  const Segment& seg = segments_[s];

  auto it = std::upper_bound(seg.xs.begin(), seg.xs.end(), x);
  std::size_t i = it == seg.xs.begin() ? 0 : static_cast<std::size_t>(it - seg.xs.begin()) - 1;

  const Eigen::Index n = pot_->n();
  detail::State st = seg.states[i];
  const double h = x - seg.xs[i];
  if (h != 0.0) {
    detail::Stepper stepper;
    detail::SchrodingerSystem sys(*pot_, k_, 0.5 * (seg.lo + seg.hi));
    stepper.do_step(sys, st, seg.xs[i], h);
  }
  const auto v = detail::view(st, n);
  const Eigen::Index m = v.cols() / 2;
  return {v.leftCols(m), v.rightCols(m)};
}

std::vector<double> SolutionField::grid() const {
  std::vector<double> out;
  for (const auto& seg : segments_) {
    for (double x : seg.xs) {
      if (out.empty() || x > out.back()) out.push_back(x);
    }
  }
  return out;
}

std::vector<double> SolutionField::edges() const {
  std::vector<double> out{segments_.front().lo};
  for (const auto& seg : segments_) out.push_back(seg.hi);
  return out;
}

std::vector<double> SolutionField::jump_points() const {
  std::vector<double> out;
  for (const auto& d : pot_->deltas()) {
    if (d.x0 > lo() && d.x0 < hi()) out.push_back(d.x0);
  }
  return out;
}

}  // namespace jostkit
