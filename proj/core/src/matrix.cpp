#include "jostkit/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace jostkit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::RankAmbiguous: return "RankAmbiguous";
    case ErrorCode::ChainConstructionFailed: return "ChainConstructionFailed";
    case ErrorCode::BadSplit: return "BadSplit";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotSelfadjoint: return "NotSelfadjoint";
    case ErrorCode::OverlappingPieces: return "OverlappingPieces";
    case ErrorCode::NotSelfadjointPairing: return "NotSelfadjointPairing";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NoInvertiblePoint: return "NoInvertiblePoint";
    case ErrorCode::OutOfGrid: return "OutOfGrid";
    case ErrorCode::BasePointSingular: return "BasePointSingular";
    case ErrorCode::ClosedFormMismatch: return "ClosedFormMismatch";
    case ErrorCode::JostSingular: return "JostSingular";
    case ErrorCode::NotGeneric: return "NotGeneric";
    case ErrorCode::NotExceptional: return "NotExceptional";
    case ErrorCode::BlockSingular: return "BlockSingular";
  }
  return "Unknown";
}

ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

double norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

double condition_number(const ComplexMatrix& m) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

ComplexMatrix adjoint(const ComplexMatrix& m) { return m.adjoint(); }

Complex det(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::NonSquare, "det of non-square matrix");
  return m.fullPivLu().determinant();
}

ComplexMatrix inverse(const ComplexMatrix& m, double cond_cap) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::NonSquare, "inverse of non-square matrix");
  if (m.size() == 0) return m;
  const double cond = condition_number(m);
  if (!(cond <= cond_cap)) {
    throw Error(ErrorCode::Singular,
                "condition number " + std::to_string(cond) + " exceeds cap " + std::to_string(cond_cap));
  }
  return m.partialPivLu().inverse();
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

Permutation::Permutation(std::vector<Eigen::Index> order) : order_(std::move(order)) {
  std::vector<bool> seen(order_.size(), false);
  for (auto idx : order_) {
    if (idx < 0 || idx >= size() || seen[static_cast<std::size_t>(idx)]) {
      throw Error(ErrorCode::BadSplit, "index list is not a permutation");
    }
    seen[static_cast<std::size_t>(idx)] = true;
  }
}

Permutation Permutation::identity(Eigen::Index n) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  return Permutation(std::move(order));
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < order_.size(); ++i) {
    if (order_[i] != static_cast<Eigen::Index>(i)) return false;
  }
  return true;
}

ComplexMatrix Permutation::left(const ComplexMatrix& x) const {
  ComplexMatrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < size(); ++i) out.row(i) = x.row(order_[static_cast<std::size_t>(i)]);
  return out;
}

ComplexMatrix Permutation::left_inv(const ComplexMatrix& x) const {
  ComplexMatrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < size(); ++i) out.row(order_[static_cast<std::size_t>(i)]) = x.row(i);
  return out;
}

ComplexMatrix Permutation::right(const ComplexMatrix& x) const {
  ComplexMatrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < size(); ++i) out.col(order_[static_cast<std::size_t>(i)]) = x.col(i);
  return out;
}

ComplexMatrix Permutation::right_inv(const ComplexMatrix& x) const {
  ComplexMatrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < size(); ++i) out.col(i) = x.col(order_[static_cast<std::size_t>(i)]);
  return out;
}

ComplexMatrix Permutation::matrix() const {
  ComplexMatrix p = ComplexMatrix::Zero(size(), size());
  for (Eigen::Index i = 0; i < size(); ++i) p(i, order_[static_cast<std::size_t>(i)]) = 1.0;
  return p;
}

Permutation Permutation::inverse() const {
  std::vector<Eigen::Index> inv(order_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) inv[static_cast<std::size_t>(order_[i])] = static_cast<Eigen::Index>(i);
  return Permutation(std::move(inv));
}

// ---------------------------------------------------------------------------

BlockPartition partition(const ComplexMatrix& m, Eigen::Index mu) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::NonSquare, "partition of non-square matrix");
  const Eigen::Index n = m.rows();
  if (mu < 0 || mu > n) {
    throw Error(ErrorCode::BadSplit, "split index " + std::to_string(mu) + " outside [0, " + std::to_string(n) + "]");
  }
  const Eigen::Index r = n - mu;
  return BlockPartition{m.topLeftCorner(mu, mu), m.topRightCorner(mu, r), m.bottomLeftCorner(r, mu),
                        m.bottomRightCorner(r, r)};
}

ComplexMatrix reassemble(const BlockPartition& b) {
  const Eigen::Index mu = b.A.rows();
  const Eigen::Index r = b.D.rows();
  ComplexMatrix m(mu + r, mu + r);
  m.topLeftCorner(mu, mu) = b.A;
  m.topRightCorner(mu, r) = b.B;
  m.bottomLeftCorner(r, mu) = b.C;
  m.bottomRightCorner(r, r) = b.D;
  return m;
}

// ---------------------------------------------------------------------------

RankDecision decide_rank(const ComplexMatrix& m, double tol, double scale) {
  RankDecision out;
  if (m.size() == 0) return out;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  out.singular_values = svd.singularValues();
  out.threshold = tol * scale;
  for (Eigen::Index i = 0; i < out.singular_values.size(); ++i) {
    const double s = out.singular_values(i);
    if (out.threshold > 0.0 && s > out.threshold / 10.0 && s < out.threshold * 10.0) {
      throw Error(ErrorCode::RankAmbiguous, "singular value " + std::to_string(s) + " within a factor 10 of threshold " +
                                                std::to_string(out.threshold));
    }
    if (s > out.threshold) ++out.rank;
  }
  return out;
}

ComplexMatrix kernel_basis(const ComplexMatrix& m, double tol, double scale) {
  const Eigen::Index n = m.cols();
  if (n == 0) return ComplexMatrix(0, 0);
  const RankDecision rank = decide_rank(m, tol, scale);
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  // JacobiSVD returns min(rows, cols) singular values; columns of V past the
  // rank span the kernel.
  return svd.matrixV().rightCols(n - rank.rank);
}

namespace {

// Orthonormal basis for the span of the given columns.
ComplexMatrix orthonormal_span(const ComplexMatrix& cols, double rel_floor) {
  if (cols.cols() == 0) return ComplexMatrix(cols.rows(), 0);
  Eigen::JacobiSVD<ComplexMatrix> svd(cols, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::Index r = 0;
  const double floor = rel_floor * std::max(sv(0), 1.0);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > floor) ++r;
  }
  return svd.matrixU().leftCols(r);
}

void normalize_last_entry(ComplexMatrix& cols, const ComplexVector& reference) {
  const double big = reference.cwiseAbs().maxCoeff();
  if (big == 0.0) return;
  for (Eigen::Index i = reference.size() - 1; i >= 0; --i) {
    if (std::abs(reference(i)) > 1e-4 * big) {
      cols /= reference(i);
      return;
    }
  }
}

bool lex_greater(Complex a, Complex b) {
  constexpr double eps = 1e-12;
  if (std::abs(a.real() - b.real()) > eps * (1.0 + std::abs(a.real()) + std::abs(b.real()))) return a.real() > b.real();
  return a.imag() > b.imag();
}

}  // namespace

ComplexMatrix ZeroEigenData::to_canonical(const ComplexMatrix& x) const {
  return P1.right(P2.left(S_inv * x * S));
}

ComplexMatrix ZeroEigenData::from_canonical(const ComplexMatrix& z) const {
  return S * P2.left_inv(P1.right_inv(z)) * S_inv;
}

ZeroEigenData zero_eigen_structure(const ComplexMatrix& m, double tol, double scale) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::NonSquare, "zero_eigen_structure needs a square matrix");
  if (!(tol > 0.0)) throw Error(ErrorCode::RankAmbiguous, "tolerance must be positive");
  const Eigen::Index n = m.rows();

  ZeroEigenData out;
  out.tol = tol;
  out.scale = scale >= 0.0 ? scale : spectral_norm(m);
  out.S = identity(n);
  out.S_inv = identity(n);
  out.P1 = Permutation::identity(n);
  out.P2 = Permutation::identity(n);
  out.transformed = m;

  if (out.scale == 0.0) {
    out.mu = out.nu = n;
    out.chain_lengths.assign(static_cast<std::size_t>(n), 1);
    return out;
  }

  // Nested generalized kernels N_j = ker(M^j), built as ker((I - N_{j-1}N_{j-1}^*) M).
  std::vector<ComplexMatrix> kernels;
  kernels.push_back(ComplexMatrix(n, 0));
  kernels.push_back(kernel_basis(m, tol, out.scale));
  out.mu = kernels.back().cols();
  if (out.mu == 0) return out;

  while (kernels.back().cols() < n) {
    const ComplexMatrix& prev = kernels.back();
    const ComplexMatrix projected = (identity(n) - prev * prev.adjoint()) * m;
    ComplexMatrix next = kernel_basis(projected, tol, out.scale);
    if (next.cols() <= prev.cols()) break;
    kernels.push_back(std::move(next));
  }
  const auto levels = static_cast<Eigen::Index>(kernels.size()) - 1;
  out.nu = kernels.back().cols();

  auto dim = [&](Eigen::Index j) { return kernels[static_cast<std::size_t>(j)].cols(); };

  // Top-down chain construction: pick fresh vectors at each level that are
  // independent of the lower kernel and of images of longer chains.
  struct Chain {
    std::vector<ComplexVector> vecs;  // vecs[0] = eigenvector, vecs.back() = chain head
  };
  std::vector<Chain> chains;
  std::vector<std::pair<std::size_t, Eigen::Index>> heads;  // chain index, level of head

  for (Eigen::Index j = levels; j >= 1; --j) {
    const Eigen::Index longer = (j < levels) ? dim(j + 1) - dim(j) : 0;
    const Eigen::Index fresh = (dim(j) - dim(j - 1)) - longer;
    if (fresh < 0) throw Error(ErrorCode::ChainConstructionFailed, "inconsistent generalized kernel dimensions");
    if (fresh == 0) continue;

    ComplexMatrix avoid(n, dim(j - 1) + static_cast<Eigen::Index>(chains.size()));
    avoid.leftCols(dim(j - 1)) = kernels[static_cast<std::size_t>(j - 1)];
    Eigen::Index c = dim(j - 1);
    for (const auto& [idx, head_level] : heads) {
      // the chain vector sitting at level j is M^(head_level - j) * head
      ComplexVector v = chains[idx].vecs.back();
      for (Eigen::Index p = 0; p < head_level - j; ++p) v = m * v;
      avoid.col(c++) = v;
    }
    const ComplexMatrix basis = orthonormal_span(avoid.leftCols(c), 1e-10);
    const ComplexMatrix residual =
        (identity(n) - basis * basis.adjoint()) * kernels[static_cast<std::size_t>(j)];
    Eigen::JacobiSVD<ComplexMatrix> svd(residual, Eigen::ComputeThinU);
    if (svd.singularValues().size() < fresh || svd.singularValues()(fresh - 1) < 1e-6) {
      throw Error(ErrorCode::ChainConstructionFailed, "cannot find independent chain heads at level " + std::to_string(j));
    }
    for (Eigen::Index f = 0; f < fresh; ++f) {
      Chain chain;
      ComplexVector head = svd.matrixU().col(f);
      std::vector<ComplexVector> down{head};
      for (Eigen::Index p = 1; p < j; ++p) down.push_back(m * down.back());
      chain.vecs.assign(down.rbegin(), down.rend());
      const double resid = (m * chain.vecs.front()).norm();
      if (resid > 10.0 * tol * out.scale * std::max(1.0, chain.vecs.front().norm())) {
        throw Error(ErrorCode::ChainConstructionFailed, "chain residual " + std::to_string(resid) + " exceeds tolerance");
      }
      heads.emplace_back(chains.size(), j);
      chains.push_back(std::move(chain));
    }
  }

  ComplexMatrix zero_part(n, out.nu);
  std::vector<Eigen::Index> rows_order, cols_order, tail_rows, tail_cols;
  Eigen::Index col = 0;
  for (const auto& chain : chains) {
    const auto len = static_cast<Eigen::Index>(chain.vecs.size());
    ComplexMatrix block(n, len);
    for (Eigen::Index r = 0; r < len; ++r) block.col(r) = chain.vecs[static_cast<std::size_t>(r)];
    normalize_last_entry(block, chain.vecs.front());
    zero_part.middleCols(col, len) = block;
    out.chain_lengths.push_back(len);
    // last row and first column of every Jordan block are zero; the ones on the
    // superdiagonal (r, r+1) move to the diagonal of the trailing block.
    rows_order.push_back(col + len - 1);
    cols_order.push_back(col);
    for (Eigen::Index r = 0; r + 1 < len; ++r) {
      tail_rows.push_back(col + r);
      tail_cols.push_back(col + r + 1);
    }
    col += len;
  }
  rows_order.insert(rows_order.end(), tail_rows.begin(), tail_rows.end());
  cols_order.insert(cols_order.end(), tail_cols.begin(), tail_cols.end());
  for (Eigen::Index i = out.nu; i < n; ++i) {
    rows_order.push_back(i);
    cols_order.push_back(i);
  }

  // Nonzero spectrum: eigenvectors when they give a well-conditioned,
  // block-diagonalizing transform; otherwise an orthonormal basis of range(M^nu).
  const Eigen::Index rest = n - out.nu;
  ComplexMatrix S(n, n);
  S.leftCols(out.nu) = zero_part;
  bool done = false;
  if (rest > 0) {
    Eigen::ComplexEigenSolver<ComplexMatrix> es(m, true);
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) {
      return std::abs(es.eigenvalues()(a)) < std::abs(es.eigenvalues()(b));
    });
    std::vector<Eigen::Index> nonzero(idx.begin() + out.nu, idx.end());
    std::sort(nonzero.begin(), nonzero.end(),
              [&](auto a, auto b) { return lex_greater(es.eigenvalues()(a), es.eigenvalues()(b)); });
    for (Eigen::Index c2 = 0; c2 < rest; ++c2) {
      ComplexMatrix v = es.eigenvectors().col(nonzero[static_cast<std::size_t>(c2)]);
      normalize_last_entry(v, v.col(0));
      S.col(out.nu + c2) = v.col(0);
    }
    if (condition_number(S) < 1e10) {
      const ComplexMatrix z = S.partialPivLu().solve(m * S);
      const double coupling = std::max(z.topRightCorner(out.nu, rest).cwiseAbs().maxCoeff(),
                                       z.bottomLeftCorner(rest, out.nu).cwiseAbs().maxCoeff());
      done = coupling <= 10.0 * tol * out.scale * std::max(1.0, norm(S));
    }
    if (!done) {
      ComplexMatrix power = identity(n);
      const ComplexMatrix scaled = m / out.scale;
      for (Eigen::Index p = 0; p < out.nu; ++p) power = scaled * power;
      Eigen::JacobiSVD<ComplexMatrix> svd(power, Eigen::ComputeFullU);
      S.rightCols(rest) = svd.matrixU().leftCols(rest);
      out.schur_completion = true;
    }
  }
  if (condition_number(S) > 1e12) {
    throw Error(ErrorCode::ChainConstructionFailed, "transform matrix is numerically singular");
  }
  out.S = S;
  out.S_inv = S.partialPivLu().inverse();
  out.P2 = Permutation(rows_order);
  out.P1 = Permutation(cols_order).inverse();
  out.transformed = out.to_canonical(m);

  const double lead = out.transformed.topLeftCorner(out.mu, out.mu).cwiseAbs().maxCoeff();
  if (lead > 10.0 * tol * out.scale * std::max(1.0, norm(S) * norm(out.S_inv))) {
    throw Error(ErrorCode::ChainConstructionFailed, "leading block not numerically zero");
  }
  return out;
}

}  // namespace jostkit
