// psifrac: solve / certify / bound / stability pipelines for the implicit
// psi-Caputo integro-differential initial value problem.

#include <algorithm>
#include <array>
#include <cmath>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "psifrac/analysis.hpp"
#include "psifrac/errors.hpp"
#include "psifrac/expr.hpp"
#include "psifrac/solver.hpp"
#include "psifrac/special.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;
using namespace psifrac;

namespace {

constexpr const char* kToolVersion = "0.1.0";

// Exit codes (stable contract):
//   0 success, 1 config error, 2 solver non-convergence,
//   3 not contracting / divergent B, 4 stability bound violated.
enum ExitCode {
  kOk = 0,
  kConfigError = 1,
  kNoConvergence = 2,
  kNotContracting = 3,
  kBoundViolated = 4,
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return it.key() == k;
        }) == allowed.end())
      throw ConfigError("unknown key `" + where + "." + it.key() + "`");
  }
}

double get_number(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number())
    throw ConfigError("`" + where + "." + key + "` must be a number");
  return obj[key].get<double>();
}

std::string get_string(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key) || !obj[key].is_string())
    throw ConfigError("`" + where + "." + key + "` must be a string");
  return obj[key].get<std::string>();
}

Expr parse_expr_field(const std::string& src, const std::string& field,
                      std::initializer_list<const char*> allowed_vars) {
  Expr e = [&] {
    try {
      return Expr::parse(src);
    } catch (const ParseError& pe) {
      throw ConfigError("`" + field + "` does not parse: " + pe.what());
    }
  }();
  for (const auto& v : e.free_vars()) {
    if (std::find_if(allowed_vars.begin(), allowed_vars.end(), [&](const char* a) {
          return v == a;
        }) == allowed_vars.end())
      throw ConfigError("`" + field + "` uses unknown variable `" + v + "`");
  }
  return e;
}

struct Config {
  ProblemSpec problem;
  std::size_t grid_n = 0;
  Grid::Spacing spacing = Grid::Spacing::UniformInZ;
  double tol = 1e-10;
  std::size_t max_iter = 200;

  // analysis (optional)
  bool has_analysis = false;
  std::optional<double> W1, W2, W3;
  bool estimate = false;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  SamplingBox box;
  std::optional<Expr> rho;

  // stability (optional)
  bool has_stability = false;
  std::optional<Expr> h;
  double epsilon = 0.0;
  StabilityMode mode = StabilityMode::UH;

  json echo;  // the raw config, replayed into the report
};

PsiFunction load_psi(const json& p) {
  require_keys(p, "problem.psi", {"family", "sigma", "shift", "expression"});
  const std::string family = get_string(p, "problem.psi", "family");
  if (family == "identity") return PsiFunction::identity();
  if (family == "shifted_log") {
    double c = get_number(p, "problem.psi", "shift");
    if (!(c > 0.0)) throw ConfigError("`problem.psi.shift` must be > 0");
    return PsiFunction::shifted_log(c);
  }
  if (family == "power") {
    double s = get_number(p, "problem.psi", "sigma");
    if (!(s > 0.0)) throw ConfigError("`problem.psi.sigma` must be > 0");
    return PsiFunction::power(s);
  }
  if (family == "custom") {
    return PsiFunction::custom(parse_expr_field(
        get_string(p, "problem.psi", "expression"), "problem.psi.expression", {"z"}));
  }
  throw ConfigError("`problem.psi.family` must be one of identity, shifted_log, power, custom");
}

Config load_config(const fs::path& path, std::optional<std::size_t> grid_n_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require_keys(root, "config", {"problem", "grid", "solver", "analysis", "stability"});
  if (!root.contains("problem") || !root.contains("grid") || !root.contains("solver"))
    throw ConfigError("config requires `problem`, `grid`, and `solver` sections");

  const json& p = root["problem"];
  require_keys(p, "problem", {"alpha", "b", "theta0", "psi", "F", "H"});
  const double alpha = get_number(p, "problem", "alpha");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ConfigError("`problem.alpha` must lie in (0, 1)");
  const double b = get_number(p, "problem", "b");
  if (!(b > 0.0)) throw ConfigError("`problem.b` must be > 0");
  if (!p.contains("psi") || !p["psi"].is_object())
    throw ConfigError("`problem.psi` must be an object");

  Config cfg{ProblemSpec{FractionalOrder(alpha), b,
                         get_number(p, "problem", "theta0"), load_psi(p["psi"]),
                         parse_expr_field(get_string(p, "problem", "F"),
                                          "problem.F", {"z", "theta", "w"}),
                         parse_expr_field(get_string(p, "problem", "H"),
                                          "problem.H", {"z", "tau", "g"})}};

  const json& g = root["grid"];
  require_keys(g, "grid", {"n", "spacing"});
  const double n = get_number(g, "grid", "n");
  if (n < 2 || n != std::floor(n)) throw ConfigError("`grid.n` must be an integer >= 2");
  cfg.grid_n = grid_n_override.value_or(static_cast<std::size_t>(n));
  const std::string spacing = get_string(g, "grid", "spacing");
  if (spacing == "uniform_in_z")
    cfg.spacing = Grid::Spacing::UniformInZ;
  else if (spacing == "uniform_in_psi")
    cfg.spacing = Grid::Spacing::UniformInPsi;
  else
    throw ConfigError("`grid.spacing` must be uniform_in_z or uniform_in_psi");

  const json& s = root["solver"];
  require_keys(s, "solver", {"tol", "max_iter"});
  cfg.tol = get_number(s, "solver", "tol");
  if (!(cfg.tol > 0.0)) throw ConfigError("`solver.tol` must be > 0");
  const double mi = get_number(s, "solver", "max_iter");
  if (mi < 1 || mi != std::floor(mi))
    throw ConfigError("`solver.max_iter` must be an integer >= 1");
  cfg.max_iter = static_cast<std::size_t>(mi);

  if (root.contains("analysis")) {
    cfg.has_analysis = true;
    const json& a = root["analysis"];
    require_keys(a, "analysis",
                 {"W1", "W2", "W3", "rho", "estimate", "samples", "seed", "box"});
    for (const char* k : {"W1", "W2", "W3"}) {
      if (!a.contains(k)) continue;
      double v = get_number(a, "analysis", k);
      if (v < 0.0) throw ConfigError(std::string("`analysis.") + k + "` must be >= 0");
      (k[1] == '1' ? cfg.W1 : k[1] == '2' ? cfg.W2 : cfg.W3) = v;
    }
    if (a.contains("estimate")) {
      if (!a["estimate"].is_boolean())
        throw ConfigError("`analysis.estimate` must be a boolean");
      cfg.estimate = a["estimate"].get<bool>();
    }
    if (a.contains("samples"))
      cfg.samples = static_cast<std::size_t>(get_number(a, "analysis", "samples"));
    if (a.contains("seed"))
      cfg.seed = static_cast<std::uint64_t>(get_number(a, "analysis", "seed"));
    if (a.contains("box")) {
      const json& bx = a["box"];
      require_keys(bx, "analysis.box", {"theta", "w", "g"});
      auto load_range = [&](const char* key, std::array<double, 2>& out) {
        if (!bx.contains(key)) return;
        if (!bx[key].is_array() || bx[key].size() != 2)
          throw ConfigError(std::string("`analysis.box.") + key + "` must be [lo, hi]");
        out = {bx[key][0].get<double>(), bx[key][1].get<double>()};
        if (!(out[0] < out[1]))
          throw ConfigError(std::string("`analysis.box.") + key + "` must have lo < hi");
      };
      load_range("theta", cfg.box.theta);
      load_range("w", cfg.box.w);
      load_range("g", cfg.box.g);
    }
    if (a.contains("rho"))
      cfg.rho = parse_expr_field(get_string(a, "analysis", "rho"), "analysis.rho", {"z"});
  }

  if (root.contains("stability")) {
    cfg.has_stability = true;
    const json& st = root["stability"];
    require_keys(st, "stability", {"h", "epsilon", "mode"});
    cfg.h = parse_expr_field(get_string(st, "stability", "h"), "stability.h", {"z"});
    cfg.epsilon = get_number(st, "stability", "epsilon");
    if (!(cfg.epsilon > 0.0)) throw ConfigError("`stability.epsilon` must be > 0");
    const std::string mode = get_string(st, "stability", "mode");
    if (mode == "UH") cfg.mode = StabilityMode::UH;
    else if (mode == "GUH") cfg.mode = StabilityMode::GUH;
    else if (mode == "UHR") cfg.mode = StabilityMode::UHR;
    else if (mode == "GUHR") cfg.mode = StabilityMode::GUHR;
    else throw ConfigError("`stability.mode` must be UH, GUH, UHR, or GUHR");
  }

  cfg.echo = root;
  return cfg;
}

LipschitzData resolve_lipschitz(const Config& cfg,
                                const std::shared_ptr<const Grid>& grid) {
  if (!cfg.has_analysis)
    throw ConfigError("this subcommand requires an `analysis` section");
  if (cfg.estimate)
    return estimate_lipschitz(cfg.problem, grid, cfg.box, cfg.samples, cfg.seed);
  if (!cfg.W1 || !cfg.W2)
    throw ConfigError("`analysis` must supply W1 and W2, or set `estimate: true`");
  LipschitzData lip;
  lip.W1 = *cfg.W1;
  lip.W2 = *cfg.W2;
  lip.W3 = cfg.W3.value_or(0.0);
  lip.provenance = LipschitzData::Provenance::UserSupplied;
  return lip;
}

// Shortest round-trip decimal representation.
std::string fmt_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
}

ojson base_report(const Config& cfg, const std::shared_ptr<const Grid>& grid,
                  std::chrono::steady_clock::time_point t0) {
  using namespace std::chrono;
  ojson rep;
  rep["tool"] = {{"name", "psifrac"}, {"version", kToolVersion}};
  // Volatile per-run data lives under one key so golden tests can strip it.
  rep["run"] = {
      {"timestamp",
       duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count()},
      {"elapsed_seconds",
       duration_cast<duration<double>>(steady_clock::now() - t0).count()}};
  rep["config"] = cfg.echo;
  rep["grid"] = {{"n", cfg.grid_n},
                 {"nodes", grid->node_count()},
                 {"spacing", cfg.spacing == Grid::Spacing::UniformInZ
                                 ? "uniform_in_z"
                                 : "uniform_in_psi"}};
  return rep;
}

void add_solve_section(ojson& rep, const SolutionTrace& trace, bool converged) {
  rep["solve"] = {{"converged", converged},
                  {"iterates", trace.iterates},
                  {"sup_diffs", trace.sup_diffs},
                  {"residual", trace.residual}};
}

std::string solution_csv(const SolutionTrace& trace) {
  std::string csv = "z,theta,g\n";
  const auto& grid = *trace.theta.grid;
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    csv += fmt_double(grid.nodes[i]) + "," + fmt_double(trace.theta.values[i]) +
           "," + fmt_double(trace.g.values[i]) + "\n";
  }
  return csv;
}

int cmd_solve(const Config& cfg, const fs::path& out_dir, bool quiet) {
  auto t0 = std::chrono::steady_clock::now();
  auto grid = make_grid(cfg.problem.b, cfg.grid_n, cfg.spacing, cfg.problem.psi);
  fs::create_directories(out_dir);

  try {
    SolutionTrace trace = solve_picard(cfg.problem, grid, cfg.tol, cfg.max_iter);
    write_file(out_dir / "solution.csv", solution_csv(trace));
    ojson rep = base_report(cfg, grid, t0);
    add_solve_section(rep, trace, true);
    write_file(out_dir / "report.json", rep.dump(2) + "\n");
    if (!quiet)
      std::cout << "converged in " << trace.iterates << " iterations, residual "
                << fmt_double(trace.residual) << "\n";
    return kOk;
  } catch (const NoConvergence& e) {
    ojson rep = base_report(cfg, grid, t0);
    rep["solve"] = {{"converged", false},
                    {"iterates", e.iterations},
                    {"last_sup_diff", e.last_sup_diff}};
    write_file(out_dir / "report.json", rep.dump(2) + "\n");
    std::cerr << "error: " << e.what() << "\n";
    return kNoConvergence;
  }
}

int cmd_certify(const Config& cfg, bool quiet) {
  auto grid = make_grid(cfg.problem.b, cfg.grid_n, cfg.spacing, cfg.problem.psi);
  LipschitzData lip = resolve_lipschitz(cfg, grid);
  ContractionCertificate cert = check_contraction(cfg.problem, lip);
  if (!quiet) {
    std::cout << "W1 = " << fmt_double(lip.W1) << ", W2 = " << fmt_double(lip.W2)
              << ", W3 = " << fmt_double(lip.W3) << "\n";
    std::cout << "L = " << fmt_double(cert.L) << " -> "
              << (cert.contracting ? "contracting" : "NOT contracting") << "\n";
  }
  return cert.contracting ? kOk : kNotContracting;
}

int cmd_bound(const Config& cfg, bool quiet) {
  auto grid = make_grid(cfg.problem.b, cfg.grid_n, cfg.spacing, cfg.problem.psi);
  LipschitzData lip = resolve_lipschitz(cfg, grid);
  const double bound = a_priori_bound(cfg.problem, lip);
  const double gamma = uh_gamma(cfg.problem.alpha, cfg.problem.psi, cfg.problem.b, lip);
  if (!quiet) {
    std::cout << "a_priori_bound = " << fmt_double(bound) << "\n";
    std::cout << "gamma = " << fmt_double(gamma) << "\n";
  }
  if (cfg.rho) {
    const double gq3 = check_q3(*cfg.rho, cfg.problem.alpha, grid);
    if (!quiet) std::cout << "gamma_q3 = " << fmt_double(gq3) << "\n";
    try {
      const double B = uhr_B(gq3, lip);
      if (!quiet) std::cout << "B = " << fmt_double(B) << "\n";
    } catch (const DivergentSeries& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kNotContracting;
    }
  }
  return kOk;
}

int cmd_stability(const Config& cfg, const fs::path& out_dir, bool quiet) {
  auto t0 = std::chrono::steady_clock::now();
  if (!cfg.has_stability || !cfg.h)
    throw ConfigError("this subcommand requires a `stability` section");
  auto grid = make_grid(cfg.problem.b, cfg.grid_n, cfg.spacing, cfg.problem.psi);
  LipschitzData lip = resolve_lipschitz(cfg, grid);
  fs::create_directories(out_dir);

  StabilityReport rep;
  try {
    rep = stability_experiment(cfg.problem, *cfg.h, cfg.epsilon, cfg.mode,
                               cfg.rho, grid, cfg.tol, lip, cfg.max_iter);
  } catch (const NoConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNoConvergence;
  }

  std::string csv = "z,theta,omega,deviation,bound\n";
  for (std::size_t i = 0; i < grid->node_count(); ++i) {
    csv += fmt_double(grid->nodes[i]) + "," + fmt_double(rep.theta.values[i]) +
           "," + fmt_double(rep.omega.values[i]) + "," +
           fmt_double(rep.deviation[i]) + "," + fmt_double(rep.bound[i]) + "\n";
  }
  write_file(out_dir / "stability.csv", csv);

  ojson jrep = base_report(cfg, grid, t0);
  ojson st;
  st["mode"] = cfg.mode == StabilityMode::UH    ? "UH"
               : cfg.mode == StabilityMode::GUH ? "GUH"
               : cfg.mode == StabilityMode::UHR ? "UHR"
                                                : "GUHR";
  st["epsilon"] = rep.epsilon;
  if (rep.gamma) st["gamma"] = *rep.gamma;
  if (rep.B) st["B"] = *rep.B;
  st["max_deviation"] = *std::max_element(rep.deviation.begin(), rep.deviation.end());
  st["satisfied"] = rep.satisfied;
  jrep["stability"] = st;
  write_file(out_dir / "report.json", jrep.dump(2) + "\n");

  if (!quiet)
    std::cout << "stability " << (rep.satisfied ? "satisfied" : "VIOLATED") << "\n";
  return rep.satisfied ? kOk : kBoundViolated;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"psi-fractional integro-differential solver and certifier"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::size_t grid_n_override = 0;
  bool quiet = false;
  app.add_option("--config", config_path, "path to the JSON config")->required();
  app.add_option("--out", out_dir, "output directory for CSV and report files");
  app.add_option("--grid-n", grid_n_override, "override grid.n from the config");
  app.add_flag("--quiet", quiet, "suppress normal output");

  auto* solve = app.add_subcommand("solve", "solve the problem and write solution.csv");
  auto* certify = app.add_subcommand("certify", "evaluate the contraction certificate");
  auto* bound = app.add_subcommand("bound", "print a-priori and stability bounds");
  auto* stability = app.add_subcommand("stability", "run a perturbation experiment");

  CLI11_PARSE(app, argc, argv);

  try {
    Config cfg = load_config(config_path,
                             grid_n_override ? std::optional<std::size_t>(grid_n_override)
                                             : std::nullopt);
    if (solve->parsed()) return cmd_solve(cfg, out_dir, quiet);
    if (certify->parsed()) return cmd_certify(cfg, quiet);
    if (bound->parsed()) return cmd_bound(cfg, quiet);
    if (stability->parsed()) return cmd_stability(cfg, out_dir, quiet);
    return kConfigError;
  } catch (const NoConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
}
