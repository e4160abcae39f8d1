#include "jostkit/report_io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "json_matrix.hpp"

namespace jostkit {

using nlohmann::ordered_json;

namespace {

ordered_json mat(const ComplexMatrix& m) { return ordered_json(detail::matrix_to_json(m)); }

ordered_json config_json(const ConfigEcho& c) {
  ordered_json j;
  j["tool"] = c.tool;
  j["version"] = c.version;
  j["potential"] = c.potential;
  j["tol"] = c.tol;
  j["tol_source"] = c.tol_source;
  j["x_max"] = c.x_max ? ordered_json(*c.x_max) : ordered_json(nullptr);
  j["x_max_source"] = c.x_max_source;
  j["a"] = c.a ? ordered_json(*c.a) : ordered_json(nullptr);
  j["boundary_source"] = c.boundary_source;
  j["solver"] = {{"abs_tol", c.solver.abs_tol},
                 {"rel_tol", c.solver.rel_tol},
                 {"max_step", c.solver.max_step},
                 {"initial_step", c.solver.initial_step},
                 {"base_cond_cap", c.solver.base_cond_cap}};
  return j;
}

ordered_json report_json(const SmallKReport& r) {
  ordered_json j;
  j["case"] = std::string(to_string(r.case_tag));
  j["n"] = r.n;
  j["mu"] = r.mu;
  j["nu"] = r.nu;
  j["a"] = r.a;
  j["tol"] = r.tol;
  j["rank_threshold"] = r.rank_threshold;
  ordered_json sv = ordered_json::array();
  for (Eigen::Index i = 0; i < r.singular_values.size(); ++i) sv.push_back(r.singular_values(i));
  j["singular_values"] = sv;
  j["tail_bound"] = r.tail_bound;
  j["warnings"] = r.warnings;
  if (r.case_tag == CaseTag::Ambiguous) {
    ordered_json br = ordered_json::array();
    for (const auto& b : r.branches) br.push_back(report_json(b));
    j["branches"] = br;
    return j;
  }
  ordered_json c;
  c["J0"] = mat(r.J0);
  c["J0dot"] = mat(r.J0dot);
  c["Jinv_pole"] = r.Jinv_pole ? mat(*r.Jinv_pole) : ordered_json(nullptr);
  c["Jinv_const"] = mat(r.Jinv_const);
  c["Jinv_linear"] = r.Jinv_linear ? mat(*r.Jinv_linear) : ordered_json(nullptr);
  c["S0"] = mat(r.S0);
  c["S0dot"] = mat(r.S0dot);
  j["coefficients"] = c;
  if (r.intermediates) {
    const auto& x = *r.intermediates;
    ordered_json m;
    m["R"] = mat(x.R);
    m["F2"] = mat(x.F2);
    m["q1_a"] = mat(x.q1a);
    m["omega1_0"] = mat(x.omega1_0);
    m["omega1p_0"] = mat(x.omega1p_0);
    m["phi0_a"] = mat(x.phi0_a);
    m["W"] = mat(x.W);
    m["S"] = mat(x.zed.S);
    m["P1"] = mat(x.zed.P1.matrix());
    m["P2"] = mat(x.zed.P2.matrix());
    m["chain_lengths"] = x.zed.chain_lengths;
    for (auto [name, ptr] : {std::pair{"A1", &x.A1}, {"B1", &x.B1}, {"C1", &x.C1}, {"D1", &x.D1}, {"A2", &x.A2},
                             {"B2", &x.B2}, {"C2", &x.C2}, {"D2", &x.D2}, {"D0", &x.D0}, {"Y1", &x.Y1},
                             {"E2", &x.E2}, {"E3", &x.E3}, {"J0_rebuilt", &x.J0_rebuilt},
                             {"J0dot_rebuilt", &x.J0dot_rebuilt}}) {
      m[name] = mat(*ptr);
    }
    j["intermediates"] = m;
  }
  return j;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string s_grid_csv(const std::vector<SRow>& rows, Eigen::Index n) {
  std::string out = "k";
  for (Eigen::Index r = 1; r <= n; ++r) {
    for (Eigen::Index c = 1; c <= n; ++c) {
      const std::string ij = std::to_string(r) + std::to_string(c);
      out += ",re_" + ij + ",im_" + ij;
    }
  }
  out += ",unitarity_defect\n";
  for (const auto& row : rows) {
    out += format_double(row.k);
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) {
        if (row.S) {
          out += "," + format_double((*row.S)(r, c).real()) + "," + format_double((*row.S)(r, c).imag());
        } else {
          out += ",nan,nan";
        }
      }
    }
    out += "," + (row.S ? format_double(row.unitarity_defect) : std::string("nan")) + "\n";
  }
  return out;
}

std::string smallk_report_json(const SmallKReport& report, const ConfigEcho& config) {
  ordered_json j;
  j["config"] = config_json(config);
  j["report"] = report_json(report);
  return j.dump(2) + "\n";
}

std::string checks_table(const std::vector<Check>& checks) {
  std::size_t width = 4;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  std::ostringstream os;
  for (const auto& c : checks) {
    os << c.name << std::string(width + 2 - c.name.size(), ' ') << format_double(c.residual) << "  "
       << format_double(c.threshold) << "  " << (c.pass ? "PASS" : "FAIL");
    if (!c.pass && !c.detail.empty()) os << "  (" << c.detail << ")";
    os << "\n";
  }
  return os.str();
}

}  // namespace jostkit
