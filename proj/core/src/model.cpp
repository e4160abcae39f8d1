#include "jostkit/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <Eigen/Eigenvalues>

#include "json.hpp"
#include "json_matrix.hpp"

namespace jostkit {

namespace {

constexpr double kSelfadjointTol = 1e-12;

bool is_selfadjoint(const ComplexMatrix& v) {
  return norm(v - v.adjoint()) <= kSelfadjointTol * norm(v);
}

double sech_star(double x) {
  const double e = std::exp(2.0 * x);
  const double d = 4.0 * e - 1.0;
  return 32.0 * e / (d * d);
}

double scalar_or(const BuiltinProfile& b, const std::string& key, double fallback) {
  auto it = b.scalars.find(key);
  return it == b.scalars.end() ? fallback : it->second;
}

// Three-point slopes on a non-uniform grid.
Complex slope(const std::vector<double>& xs, const std::vector<Complex>& ys, std::size_t i) {
  const std::size_t last = xs.size() - 1;
  if (xs.size() == 2) return (ys[1] - ys[0]) / (xs[1] - xs[0]);
  if (i == 0) return (ys[1] - ys[0]) / (xs[1] - xs[0]);
  if (i == last) return (ys[last] - ys[last - 1]) / (xs[last] - xs[last - 1]);
  const double h0 = xs[i] - xs[i - 1];
  const double h1 = xs[i + 1] - xs[i];
  const Complex d0 = (ys[i] - ys[i - 1]) / h0;
  const Complex d1 = (ys[i + 1] - ys[i]) / h1;
  return (h1 * d0 + h0 * d1) / (h0 + h1);
}

void add_grid(const GridProfile& g, double x, ComplexMatrix& out) {
  const auto& xs = g.xs;
  x = std::clamp(x, xs.front(), xs.back());
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
  if (i >= xs.size() - 1) i = xs.size() - 2;
  const double h = xs[i + 1] - xs[i];
  const double t = (x - xs[i]) / h;
  const Eigen::Index n = out.rows();
  ComplexMatrix v(n, n);
  if (g.order == 1) {
    v = (1.0 - t) * g.values[i] + t * g.values[i + 1];
  } else {
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    std::vector<Complex> ys(xs.size());
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) {
        for (std::size_t s = 0; s < xs.size(); ++s) ys[s] = g.values[s](r, c);
        v(r, c) = h00 * ys[i] + h10 * h * slope(xs, ys, i) + h01 * ys[i + 1] + h11 * h * slope(xs, ys, i + 1);
      }
    }
  }
  out += 0.5 * (v + v.adjoint());
}

void add_builtin(const BuiltinProfile& b, double x, ComplexMatrix& out) {
  if (b.name == "zero") return;
  if (b.name == "sech_star") {
    const double v = scalar_or(b, "scale", 1.0) * sech_star(x);
    out(b.row, b.col) += v;
    if (b.row != b.col) out(b.col, b.row) += v;
    return;
  }
  if (b.name == "gaussian") {
    const double z = (x - scalar_or(b, "center", 0.0)) / scalar_or(b, "width", 1.0);
    out += std::exp(-z * z) * (*b.matrix);
    return;
  }
  if (b.name == "constant") {
    out += *b.matrix;
    return;
  }
  throw Error(ErrorCode::ParseError, "unknown builtin profile '" + b.name + "'");
}

}  // namespace

PotentialModel::PotentialModel(Eigen::Index n, double x_max, std::vector<Piece> regular,
                               std::vector<PointInteraction> deltas)
    : n_(n), x_max_(x_max), regular_(std::move(regular)), deltas_(std::move(deltas)) {
  validate();
}

PotentialModel PotentialModel::free(Eigen::Index n, double x_max) { return PotentialModel(n, x_max, {}, {}); }

void PotentialModel::validate() {
  if (n_ <= 0) throw Error(ErrorCode::ParseError, "matrix size n must be positive");
  if (!(x_max_ > 0.0) || !std::isfinite(x_max_)) throw Error(ErrorCode::ParseError, "x_max must be positive and finite");

  std::sort(regular_.begin(), regular_.end(), [](const Piece& a, const Piece& b) { return a.x_lo < b.x_lo; });
  for (std::size_t i = 0; i < regular_.size(); ++i) {
    const Piece& p = regular_[i];
    if (!(p.x_lo < p.x_hi) || p.x_lo < 0.0 || p.x_hi > x_max_ * (1 + 1e-15)) {
      throw Error(ErrorCode::OverlappingPieces, "piece [" + std::to_string(p.x_lo) + ", " + std::to_string(p.x_hi) +
                                                    "] is empty or outside [0, x_max]");
    }
    if (i > 0 && p.x_lo < regular_[i - 1].x_hi) {
      throw Error(ErrorCode::OverlappingPieces, "pieces starting at " + std::to_string(regular_[i - 1].x_lo) + " and " +
                                                    std::to_string(p.x_lo) + " overlap");
    }
    if (const auto* g = std::get_if<GridProfile>(&p.profile)) {
      if (g->xs.size() < 2 || g->xs.size() != g->values.size()) {
        throw Error(ErrorCode::ParseError, "grid piece needs >= 2 samples with one matrix per abscissa");
      }
      for (std::size_t s = 0; s < g->xs.size(); ++s) {
        if (s > 0 && !(g->xs[s] > g->xs[s - 1])) throw Error(ErrorCode::ParseError, "grid abscissae must increase");
        if (g->values[s].rows() != n_ || g->values[s].cols() != n_) {
          throw Error(ErrorCode::ParseError, "grid sample has wrong dimensions");
        }
        if (!all_finite(g->values[s])) throw Error(ErrorCode::ParseError, "grid sample is not finite");
        if (!is_selfadjoint(g->values[s])) {
          throw Error(ErrorCode::NotSelfadjoint, "grid sample at x=" + std::to_string(g->xs[s]));
        }
      }
    } else {
      const auto& b = std::get<BuiltinProfile>(p.profile);
      if (b.name == "gaussian" || b.name == "constant") {
        if (!b.matrix || b.matrix->rows() != n_ || b.matrix->cols() != n_) {
          throw Error(ErrorCode::ParseError, "builtin '" + b.name + "' needs an n x n matrix parameter");
        }
        if (!is_selfadjoint(*b.matrix)) {
          throw Error(ErrorCode::NotSelfadjoint, "builtin '" + b.name + "' on [" + std::to_string(p.x_lo) + ", " +
                                                     std::to_string(p.x_hi) + "]");
        }
        if (b.name == "gaussian" && !(scalar_or(b, "width", 1.0) > 0.0)) {
          throw Error(ErrorCode::ParseError, "gaussian width must be positive");
        }
      } else if (b.name == "sech_star") {
        if (b.row < 0 || b.col < 0 || b.row >= n_ || b.col >= n_) {
          throw Error(ErrorCode::ParseError, "sech_star entry index out of range");
        }
      } else if (b.name != "zero") {
        throw Error(ErrorCode::ParseError, "unknown builtin profile '" + b.name + "'");
      }
    }
  }

  std::sort(deltas_.begin(), deltas_.end(), [](const auto& a, const auto& b) { return a.x0 < b.x0; });
  for (std::size_t i = 0; i < deltas_.size(); ++i) {
    const auto& d = deltas_[i];
    if (!(d.x0 > 0.0 && d.x0 < x_max_)) {
      throw Error(ErrorCode::ParseError, "delta location " + std::to_string(d.x0) + " outside (0, x_max)");
    }
    if (i > 0 && d.x0 == deltas_[i - 1].x0) throw Error(ErrorCode::ParseError, "duplicate delta location");
    if (d.gamma.rows() != n_ || d.gamma.cols() != n_) throw Error(ErrorCode::ParseError, "delta strength has wrong size");
    if (!all_finite(d.gamma)) throw Error(ErrorCode::ParseError, "delta strength is not finite");
    if (!is_selfadjoint(d.gamma)) {
      throw Error(ErrorCode::NotSelfadjoint, "delta at x0=" + std::to_string(d.x0));
    }
  }
}

ComplexMatrix PotentialModel::operator()(double x) const {
  ComplexMatrix out = ComplexMatrix::Zero(n_, n_);
  accumulate(x, out);
  return out;
}

void PotentialModel::accumulate(double x, ComplexMatrix& out) const {
  for (const Piece& p : regular_) {
    const bool inside = (x >= p.x_lo && x < p.x_hi) || (x == p.x_hi && p.x_hi >= x_max_);
    if (!inside) continue;
    if (const auto* g = std::get_if<GridProfile>(&p.profile)) {
      add_grid(*g, x, out);
    } else {
      add_builtin(std::get<BuiltinProfile>(p.profile), x, out);
    }
  }
}

void PotentialModel::accumulate_on_segment(double x, double seg_mid, ComplexMatrix& out) const {
  for (const Piece& p : regular_) {
    if (!(seg_mid > p.x_lo && seg_mid < p.x_hi)) continue;
    if (const auto* g = std::get_if<GridProfile>(&p.profile)) {
      add_grid(*g, x, out);
    } else {
      add_builtin(std::get<BuiltinProfile>(p.profile), x, out);
    }
  }
}

std::vector<double> PotentialModel::breakpoints() const {
  std::vector<double> pts;
  for (const Piece& p : regular_) {
    pts.push_back(p.x_lo);
    pts.push_back(p.x_hi);
  }
  for (const auto& d : deltas_) pts.push_back(d.x0);
  std::vector<double> out;
  for (double x : pts) {
    if (x > 0.0 && x < x_max_) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool PotentialModel::is_free() const {
  if (!deltas_.empty()) return false;
  for (const Piece& p : regular_) {
    const auto* b = std::get_if<BuiltinProfile>(&p.profile);
    if (!b || b->name != "zero") return false;
  }
  return true;
}

double PotentialModel::tail_estimate() const {
  const double v1 = norm((*this)(x_max_ - 1.0));
  const double v2 = norm((*this)(x_max_));
  if (v2 == 0.0) return 0.0;
  if (!(v2 < v1)) return std::numeric_limits<double>::infinity();
  const double rate = std::log(v1 / v2);
  const double X = 1.0 + x_max_;
  return v2 * (X * X / rate + 2.0 * X / (rate * rate) + 2.0 / (rate * rate * rate));
}

void PotentialModel::check_moments(double cap) {
  for (int j = 1; j <= 2; ++j) {
    const double m = moment_norm(*this, j);
    if (!std::isfinite(m) || m > cap) {
      warnings_.push_back("MomentDiverges: L1_" + std::to_string(j) + " norm estimate " + std::to_string(m) +
                          " exceeds cap " + std::to_string(cap));
    }
  }
}

// ---------------------------------------------------------------------------

BoundaryCondition BoundaryCondition::dirichlet(Eigen::Index n) {
  return validate_boundary(ComplexMatrix::Zero(n, n), identity(n));
}

BoundaryCondition BoundaryCondition::neumann(Eigen::Index n) {
  return validate_boundary(identity(n), ComplexMatrix::Zero(n, n));
}

BoundaryCondition validate_boundary(const ComplexMatrix& A, const ComplexMatrix& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
    throw Error(ErrorCode::NonSquare, "boundary matrices must be square and of equal size");
  }
  BoundaryCondition bc{A, B};
  bc.pairing_residual = norm(B.adjoint() * A - A.adjoint() * B);
  if (bc.pairing_residual > 1e-12 * (norm(A) * norm(B) + 1.0)) {
    throw Error(ErrorCode::NotSelfadjointPairing, "||B^*A - A^*B|| = " + std::to_string(bc.pairing_residual));
  }
  const ComplexMatrix gram = A.adjoint() * A + B.adjoint() * B;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (gram + gram.adjoint()), Eigen::EigenvaluesOnly);
  bc.min_eigenvalue = es.eigenvalues()(0);
  if (bc.min_eigenvalue < 1e-12) {
    throw Error(ErrorCode::NotPositive, "A^*A + B^*B has eigenvalue " + std::to_string(bc.min_eigenvalue));
  }
  return bc;
}

// ---------------------------------------------------------------------------

double moment_norm(const PotentialModel& pot, int j) {
  using boost::math::quadrature::gauss_kronrod;
  std::vector<double> edges{0.0};
  for (double b : pot.breakpoints()) edges.push_back(b);
  edges.push_back(pot.x_max());

  double total = 0.0;
  ComplexMatrix scratch(pot.n(), pot.n());
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double lo = edges[s];
    const double hi = edges[s + 1];
    const double mid = 0.5 * (lo + hi);
    auto integrand = [&](double x) {
      scratch.setZero();
      pot.accumulate_on_segment(x, mid, scratch);
      return std::pow(1.0 + x, j) * norm(scratch);
    };
    total += gauss_kronrod<double, 61>::integrate(integrand, lo, hi, 15, 1e-12);
  }
  for (const auto& d : pot.deltas()) total += std::pow(1.0 + d.x0, j) * norm(d.gamma);
  return total;
}

// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

BuiltinProfile parse_builtin(const json& piece, Eigen::Index n) {
  BuiltinProfile b;
  b.name = piece.at("name").get<std::string>();
  if (piece.contains("params")) {
    for (const auto& [key, value] : piece.at("params").items()) {
      if (key == "matrix") {
        b.matrix = detail::matrix_from_json(value, n, "params.matrix");
      } else if (key == "row") {
        b.row = value.get<int>();
      } else if (key == "col") {
        b.col = value.get<int>();
      } else if (value.is_number()) {
        b.scalars[key] = value.get<double>();
      } else {
        throw Error(ErrorCode::ParseError, "unsupported builtin parameter '" + key + "'");
      }
    }
  }
  return b;
}

}  // namespace

Problem load_problem(const std::string& document, const LoadOptions& options) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  try {
    const auto n = doc.at("n").get<Eigen::Index>();
    std::vector<PointInteraction> deltas;
    if (doc.contains("deltas")) {
      for (const auto& d : doc.at("deltas")) {
        deltas.push_back({d.at("x0").get<double>(), detail::matrix_from_json(d.at("gamma"), n, "gamma")});
      }
    }
    double x_max = 12.0;
    if (!deltas.empty()) {
      double last = 0.0;
      for (const auto& d : deltas) last = std::max(last, d.x0);
      x_max = 12.0 + last;
    }
    if (doc.contains("x_max") && !doc.at("x_max").is_null()) x_max = doc.at("x_max").get<double>();
    if (options.x_max_override) x_max = *options.x_max_override;

    std::vector<Piece> pieces;
    if (doc.contains("regular")) {
      for (const auto& p : doc.at("regular")) {
        const auto kind = p.at("kind").get<std::string>();
        Piece piece;
        if (kind == "grid") {
          GridProfile g;
          g.xs = p.at("xs").get<std::vector<double>>();
          for (const auto& v : p.at("values")) g.values.push_back(detail::matrix_from_json(v, n, "values"));
          if (p.contains("order")) g.order = p.at("order").get<int>();
          if (g.order != 1 && g.order != 3) throw Error(ErrorCode::ParseError, "grid order must be 1 or 3");
          if (g.xs.empty()) throw Error(ErrorCode::ParseError, "grid piece has no samples");
          piece.x_lo = p.value("x_lo", g.xs.front());
          piece.x_hi = p.value("x_hi", g.xs.back());
          piece.profile = std::move(g);
        } else if (kind == "builtin") {
          piece.x_lo = p.value("x_lo", 0.0);
          piece.x_hi = p.contains("x_hi") && !p.at("x_hi").is_null() ? p.at("x_hi").get<double>() : x_max;
          piece.x_hi = std::min(piece.x_hi, x_max);
          piece.profile = parse_builtin(p, n);
        } else {
          throw Error(ErrorCode::ParseError, "unknown piece kind '" + kind + "'");
        }
        pieces.push_back(std::move(piece));
      }
    }

    PotentialModel pot(n, x_max, std::move(pieces), std::move(deltas));
    pot.check_moments(options.moment_cap);

    std::optional<BoundaryCondition> bc;
    if (doc.contains("boundary")) {
      const auto& b = doc.at("boundary");
      bc = validate_boundary(detail::matrix_from_json(b.at("A"), n, "boundary.A"),
                             detail::matrix_from_json(b.at("B"), n, "boundary.B"));
    }
    return Problem{std::move(pot), std::move(bc)};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

PotentialModel load_potential(const std::string& document, const LoadOptions& options) {
  return load_problem(document, options).potential;
}

Problem load_problem_file(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_problem(ss.str(), options);
}

std::string serialize_problem(const PotentialModel& pot, const std::optional<BoundaryCondition>& bc) {
  json doc;
  doc["n"] = pot.n();
  doc["x_max"] = pot.x_max();
  json regular = json::array();
  for (const Piece& p : pot.regular()) {
    json piece;
    piece["x_lo"] = p.x_lo;
    piece["x_hi"] = p.x_hi;
    if (const auto* g = std::get_if<GridProfile>(&p.profile)) {
      piece["kind"] = "grid";
      piece["order"] = g->order;
      piece["xs"] = g->xs;
      json values = json::array();
      for (const auto& v : g->values) values.push_back(detail::matrix_to_json(v));
      piece["values"] = std::move(values);
    } else {
      const auto& b = std::get<BuiltinProfile>(p.profile);
      piece["kind"] = "builtin";
      piece["name"] = b.name;
      json params = json::object();
      for (const auto& [k, v] : b.scalars) params[k] = v;
      if (b.name == "sech_star") {
        params["row"] = b.row;
        params["col"] = b.col;
      }
      if (b.matrix) params["matrix"] = detail::matrix_to_json(*b.matrix);
      piece["params"] = std::move(params);
    }
    regular.push_back(std::move(piece));
  }
  doc["regular"] = std::move(regular);
  json deltas = json::array();
  for (const auto& d : pot.deltas()) deltas.push_back({{"x0", d.x0}, {"gamma", detail::matrix_to_json(d.gamma)}});
  doc["deltas"] = std::move(deltas);
  if (bc) doc["boundary"] = {{"A", detail::matrix_to_json(bc->A)}, {"B", detail::matrix_to_json(bc->B)}};
  return doc.dump(2) + "\n";
}

}  // namespace jostkit
