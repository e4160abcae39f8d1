#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jostkit/scattering.hpp"
#include "jostkit/smallk.hpp"
#include "jostkit/verify.hpp"

namespace jostkit {

// Effective configuration echoed at the top of every report.
struct ConfigEcho {
  std::string tool = "jostkit";
  std::string version;
  std::string potential;
  double tol = 1e-9;
  std::string tol_source = "default";
  std::optional<double> x_max;
  std::string x_max_source = "default";
  std::optional<double> a;
  std::string boundary_source = "document";
  SolverConfig solver;
};

// Shortest decimal that parses back to the same double; "nan", "inf", "-inf"
// for non-finite values.
std::string format_double(double v);

// k,re_11,im_11,...,re_nn,im_nn,unitarity_defect with one row per k; rows
// without S carry nan.
std::string s_grid_csv(const std::vector<SRow>& rows, Eigen::Index n);

// JSON report. Matrices are lists of rows of [re, im] pairs.
std::string smallk_report_json(const SmallKReport& report, const ConfigEcho& config);

std::string checks_table(const std::vector<Check>& checks);

}  // namespace jostkit
