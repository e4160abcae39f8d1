#include "random_models.hpp"

namespace jostkit::testing {

ComplexMatrix random_matrix(Rng& rng, Eigen::Index n, double scale) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = scale * Complex(g(rng), g(rng));
  return m;
}

ComplexMatrix random_hermitian(Rng& rng, Eigen::Index n, double scale) {
  const ComplexMatrix m = random_matrix(rng, n, scale);
  return (m + m.adjoint()) / 2.0;
}

ComplexMatrix random_unitary(Rng& rng, Eigen::Index n) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(rng, n));
  return qr.householderQ() * identity(n);
}

ComplexMatrix random_invertible(Rng& rng, Eigen::Index n) { return identity(n) + random_matrix(rng, n, 0.3 / n); }

PotentialModel random_smooth_potential(Rng& rng, Eigen::Index n, double x_max) {
  std::uniform_real_distribution<double> center(0.5, 2.0), width(0.5, 1.2);
  BuiltinProfile bump;
  bump.name = "gaussian";
  bump.scalars = {{"center", center(rng)}, {"width", width(rng)}};
  bump.matrix = random_hermitian(rng, n, 0.8);
  return PotentialModel(n, x_max, {Piece{0.0, x_max, bump}}, {});
}

BoundaryCondition random_boundary(Rng& rng, Eigen::Index n) {
  const ComplexMatrix U = random_unitary(rng, n);
  const ComplexMatrix M = random_invertible(rng, n);
  const ComplexMatrix I = identity(n);
  return validate_boundary((I + U) / 2.0 * M, kI * (I - U) / 2.0 * M);
}

double max_abs(const ComplexMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace jostkit::testing
