#pragma once

#include <string>

#include "json.hpp"
#include "jostkit/matrix.hpp"

namespace jostkit::detail {

// Matrices are arrays of rows; an entry is a number or a [re, im] pair.
inline ComplexMatrix matrix_from_json(const nlohmann::json& j, Eigen::Index n, const std::string& what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n) {
    throw Error(ErrorCode::ParseError, what + ": expected " + std::to_string(n) + " rows");
  }
  ComplexMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw Error(ErrorCode::NonSquare, what + ": row " + std::to_string(r) + " has wrong length");
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto& e = row[static_cast<std::size_t>(c)];
      if (e.is_number()) {
        m(r, c) = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2) {
        m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw Error(ErrorCode::ParseError, what + ": bad entry");
      }
    }
  }
  return m;
}

inline nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace jostkit::detail
