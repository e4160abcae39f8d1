#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "jostkit/matrix.hpp"
#include "jostkit/model.hpp"

namespace jostkit {

enum class FieldKind { Jost, JostZero, JostZeroKDeriv, RegularPhi, Omega };
std::string_view to_string(FieldKind kind);

// Which one-sided derivative to return at a delta location.
enum class Side { Right, Left };

struct FieldValue {
  ComplexMatrix psi;
  ComplexMatrix dpsi;
};

// Matrix solution of -psi'' + V psi = k^2 psi tabulated at the accepted steps
// of the integrator.  Values between nodes are produced by one local step
// from the nearest node to the left, so evaluation is as accurate as the
// tabulation itself.
class SolutionField {
 public:
  // Nodes of one smooth stretch between consecutive breakpoints; states are
  // interleaved re/im of the n x 2n block [psi, psi'].
  struct Segment {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> xs;
    std::vector<std::vector<double>> states;
  };

  SolutionField(FieldKind kind, Complex k, std::shared_ptr<const PotentialModel> pot, std::vector<Segment> segments,
                std::size_t steps);

  FieldKind kind() const { return kind_; }
  Complex k() const { return k_; }
  Eigen::Index n() const { return pot_->n(); }
  double lo() const { return segments_.front().lo; }
  double hi() const { return segments_.back().hi; }
  bool covers(double x) const;
  std::size_t steps() const { return steps_; }
  const PotentialModel& potential() const { return *pot_; }
  const std::shared_ptr<const PotentialModel>& potential_ptr() const { return pot_; }

  FieldValue at(double x, Side side = Side::Right) const;
  ComplexMatrix value(double x) const { return at(x).psi; }
  ComplexMatrix derivative(double x, Side side = Side::Right) const { return at(x, side).dpsi; }

  // All node abscissae, ascending, without duplicates.
  std::vector<double> grid() const;
  // Segment edges including lo and hi.
  std::vector<double> edges() const;
  // Delta locations strictly inside the field's range.
  std::vector<double> jump_points() const;

 private:
  FieldKind kind_;
  Complex k_;
  std::shared_ptr<const PotentialModel> pot_;
  std::vector<Segment> segments_;
  std::size_t steps_;
};

}  // namespace jostkit
