#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "jostkit/error.hpp"
#include "jostkit/kirchhoff.hpp"
#include "jostkit/model.hpp"
#include "jostkit/report_io.hpp"
#include "jostkit/scattering.hpp"
#include "jostkit/smallk.hpp"
#include "jostkit/verify.hpp"

using namespace jostkit;

namespace {

enum Exit : int { kOk = 0, kRowFailure = 2, kAmbiguous = 3, kUsage = 64, kDataErr = 65, kIoErr = 74 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LoadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_env_double(const char* name) {
  const char* raw = std::getenv(name);
  std::string text(raw);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || !std::isfinite(v) || v <= 0) {
    throw UsageError(std::string(name) + "='" + text + "' is not a positive number");
  }
  return v;
}

struct Common {
  std::string potential;
  std::optional<double> tol;
  std::optional<double> x_max;
};

ConfigEcho resolve(const Common& c) {
  ConfigEcho cfg;
  cfg.version = JOSTKIT_VERSION;
  cfg.potential = c.potential;
  if (c.tol) {
    cfg.tol = *c.tol;
    cfg.tol_source = "flag";
  } else if (std::getenv("JOSTKIT_TOL")) {
    cfg.tol = parse_env_double("JOSTKIT_TOL");
    cfg.tol_source = "env";
  }
  if (c.x_max) {
    cfg.x_max = c.x_max;
    cfg.x_max_source = "flag";
  } else if (std::getenv("JOSTKIT_XMAX")) {
    cfg.x_max = parse_env_double("JOSTKIT_XMAX");
    cfg.x_max_source = "env";
  }
  if (!(cfg.tol > 0)) throw UsageError("--tol must be positive");
  if (cfg.x_max && !(*cfg.x_max > 0)) throw UsageError("--x-max must be positive");
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

// Loads the document and fills in the effective x_max and boundary.
std::pair<PotentialModel, BoundaryCondition> load(ConfigEcho& cfg) {
  const std::string text = read_file(cfg.potential);
  try {
    LoadOptions lo;
    lo.x_max_override = cfg.x_max;
    Problem p = load_problem(text, lo);
    cfg.x_max = p.potential.x_max();
    BoundaryCondition bc;
    if (p.boundary) {
      bc = *p.boundary;
    } else {
      bc = BoundaryCondition::dirichlet(p.potential.n());
      cfg.boundary_source = "default-dirichlet";
    }
    return {std::move(p.potential), std::move(bc)};
  } catch (const std::exception& e) {
    throw LoadError(e.what());
  }
}

void echo_header(std::ostream& os, const ConfigEcho& c) {
  os << "# jostkit " << c.version << " potential=" << c.potential << " tol=" << format_double(c.tol) << " ("
     << c.tol_source << ") x_max=" << (c.x_max ? format_double(*c.x_max) : "auto") << " (" << c.x_max_source
     << ") boundary=" << c.boundary_source << "\n";
}

int cmd_compute_s(const Common& common, double kmin, double kmax, int nk, bool log_grid, const std::string& out) {
  if (nk <= 0) throw UsageError("--nk must be positive");
  if (!(kmin > 0) || !(kmax >= kmin)) throw UsageError("need 0 < kmin <= kmax");
  ConfigEcho cfg = resolve(common);
  auto [pot, bc] = load(cfg);
  std::vector<double> ks(static_cast<std::size_t>(nk));
  for (int i = 0; i < nk; ++i) {
    const double t = nk == 1 ? 0.0 : static_cast<double>(i) / (nk - 1);
    ks[static_cast<std::size_t>(i)] =
        log_grid ? std::exp(std::log(kmin) + t * (std::log(kmax) - std::log(kmin))) : kmin + t * (kmax - kmin);
  }
  const auto rows = s_grid(pot, bc, ks, cfg.solver);
  write_file(out, s_grid_csv(rows, pot.n()));
  echo_header(std::cout, cfg);
  double worst = 0.0;
  int failed = 0;
  for (const auto& r : rows) {
    if (r.S) {
      worst = std::max(worst, r.unitarity_defect);
    } else {
      ++failed;
      std::cerr << "k=" << format_double(r.k) << ": " << r.error << "\n";
    }
  }
  std::cout << "max unitarity defect: " << format_double(worst) << "\n";
  if (failed) {
    std::cout << failed << " of " << rows.size() << " rows failed\n";
    return kRowFailure;
  }
  return kOk;
}

int cmd_smallk(const Common& common, std::optional<double> a, const std::string& out) {
  ConfigEcho cfg = resolve(common);
  if (a) {
    if (!(*a >= 0)) throw UsageError("--a must be nonnegative");
    cfg.a = a;
    cfg.solver.base_point = a;
  }
  auto [pot, bc] = load(cfg);
  SmallKReport rep;
  try {
    rep = analyze(pot, bc, cfg.tol, cfg.solver);
  } catch (const Error& e) {
    std::cerr << "small-k analysis failed: " << e.what() << "\n";
    return kRowFailure;
  }
  write_file(out, smallk_report_json(rep, cfg));
  echo_header(std::cout, cfg);
  std::cout << "case: " << to_string(rep.case_tag) << " mu=" << rep.mu << " nu=" << rep.nu << "\n";
  for (const auto& w : rep.warnings) std::cout << "warning: " << w << "\n";
  return rep.case_tag == CaseTag::Ambiguous ? kAmbiguous : kOk;
}

int cmd_verify(const Common& common, const std::string& suite) {
  ConfigEcho cfg = resolve(common);
  auto [pot, bc] = load(cfg);
  VerifyOptions opts;
  opts.solver = cfg.solver;
  opts.rank_tol = cfg.tol;
  std::vector<Check> checks;
  try {
    checks = run_suite(suite, pot, bc, opts);
  } catch (const Error& e) {
    std::cerr << "verification aborted: " << e.what() << "\n";
    return kRowFailure;
  }
  echo_header(std::cout, cfg);
  std::cout << checks_table(checks);
  const bool ok = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  return ok ? kOk : kRowFailure;
}

int cmd_export(const std::string& gamma_text, std::optional<double> x_max, const std::string& out) {
  Fraction gamma;
  try {
    gamma = Fraction::parse(gamma_text);
  } catch (const std::exception& e) {
    throw UsageError("--gamma: " + std::string(e.what()));
  }
  const KirchhoffExample ex(gamma);
  write_file(out, ex.to_document(x_max.value_or(13.0)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jost matrices, scattering matrices and small-k expansions for matrix Schrodinger operators"};
  app.set_version_flag("--version", JOSTKIT_VERSION);
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub, bool tol) {
    sub->add_option("--potential", common.potential, "potential document (JSON)")->required();
    sub->add_option("--x-max", common.x_max, "truncation point (overrides JOSTKIT_XMAX)");
    if (tol) sub->add_option("--tol", common.tol, "rank tolerance (overrides JOSTKIT_TOL)");
  };

  double kmin = 0, kmax = 0;
  int nk = 0;
  bool log_grid = false;
  std::string out;
  auto* cs = app.add_subcommand("compute-s", "tabulate S(k) on a k grid as CSV");
  add_common(cs, false);
  cs->add_option("--kmin", kmin)->required();
  cs->add_option("--kmax", kmax)->required();
  cs->add_option("--nk", nk)->required();
  cs->add_flag("--log", log_grid, "logarithmic spacing");
  cs->add_option("--out", out, "output CSV ('-' for stdout)")->required();

  std::optional<double> a;
  auto* sk = app.add_subcommand("smallk-report", "classify J(0) and write the small-k expansion report");
  add_common(sk, true);
  sk->add_option("--a", a, "base point for the zero-energy data");
  sk->add_option("--out", out, "output JSON ('-' for stdout)")->required();

  std::string suite = "all";
  auto* vf = app.add_subcommand("verify", "run the identity and expansion checks");
  add_common(vf, true);
  vf->add_option("--suite", suite)->check(CLI::IsMember({"all", "wronskian", "identities", "expansions"}));

  std::string gamma;
  std::optional<double> ex_xmax;
  auto* ex = app.add_subcommand("export-kirchhoff", "write the three-lead star graph example as a potential document");
  ex->add_option("--gamma", gamma, "coupling, e.g. -31/77")->required();
  ex->add_option("--x-max", ex_xmax);
  ex->add_option("--out", out, "output file ('-' for stdout)")->default_val("-");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*cs) return cmd_compute_s(common, kmin, kmax, nk, log_grid, out);
    if (*sk) return cmd_smallk(common, a, out);
    if (*vf) return cmd_verify(common, suite);
    if (*ex) return cmd_export(gamma, ex_xmax, out);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const LoadError& e) {
    std::cerr << "invalid potential: " << e.what() << "\n";
    return kDataErr;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIoErr;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRowFailure;
  }
  return kUsage;
}
