// Command-line front end: potential ingestion, experiment orchestration and
// machine-readable result emission.
//
// Exit codes: 0 success, 2 validation error, 3 numerical failure,
// 4 expectation mismatch.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "szq/szq.hpp"

namespace fs = std::filesystem;
using namespace szq;

namespace {

struct ExperimentConfig {
  std::optional<Potential> potential;
  double a = -5.0, b = 5.0, x0 = 0.0;
  std::optional<Vector> c0, c1;
  Complex lambda{0.0, 0.0};
  bool adjoint = false;
  double radius = 10.0;
  Window window = Window::real(-2.0, -0.01);
  double tol = 1e-10;
  unsigned seed = 1;
  double shift = 0.0;
  int n_max = 20;
  double dt = 0.01;
  int steps = 200;
  int grid = 1000;
  int draws = 50;
  std::optional<Json> test_function;
  std::string format = "json";
};

Vector vector_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + " must be an array of [re,im]");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    v(i) = detail::complex_from_json(j[i], where);
  return v;
}

Window window_from_json(const Json& j) {
  auto vals = j.get<std::vector<double>>();
  if (vals.size() == 2) return Window::real(vals[0], vals[1]);
  if (vals.size() == 4) return Window::rect(vals[0], vals[1], vals[2], vals[3]);
  throw ConfigError("window must have 2 or 4 numbers");
}

ExperimentConfig load_config(const std::string& path) {
  const Json j = load_json_file(path);
  if (!j.is_object()) throw ConfigError("config root must be an object");
  detail::reject_unknown_keys(
      j,
      {"potential", "potential_file", "interval", "x0", "c0", "c1", "lambda",
       "adjoint", "radius", "window", "tol", "seed", "shift", "n_max", "dt",
       "steps", "grid", "draws", "test_function", "format"},
      "config");
  ExperimentConfig cfg;
  if (j.contains("potential") && j.contains("potential_file"))
    throw ConfigError("give either \"potential\" or \"potential_file\", not both");
  if (j.contains("potential"))
    cfg.potential = potential_from_json(j["potential"], "potential");
  if (j.contains("potential_file")) {
    const std::string pf = j["potential_file"].get<std::string>();
    if (!fs::exists(pf)) throw ConfigError("potential_file does not exist: " + pf);
    cfg.potential = potential_from_json(load_json_file(pf), "potential_file");
  }
  if (j.contains("interval")) {
    auto iv = j["interval"].get<std::vector<double>>();
    if (iv.size() != 2 || !(iv[0] < iv[1]))
      throw ConfigError("field \"interval\" must be [a,b] with a < b");
    cfg.a = iv[0];
    cfg.b = iv[1];
  }
  if (j.contains("x0")) cfg.x0 = j["x0"].get<double>();
  if (j.contains("c0")) cfg.c0 = vector_from_json(j["c0"], "c0");
  if (j.contains("c1")) cfg.c1 = vector_from_json(j["c1"], "c1");
  if (j.contains("lambda"))
    cfg.lambda = detail::complex_from_json(j["lambda"], "lambda");
  if (j.contains("adjoint")) cfg.adjoint = j["adjoint"].get<bool>();
  if (j.contains("radius")) cfg.radius = j["radius"].get<double>();
  if (j.contains("window")) cfg.window = window_from_json(j["window"]);
  if (j.contains("tol")) cfg.tol = j["tol"].get<double>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<unsigned>();
  if (j.contains("shift")) cfg.shift = j["shift"].get<double>();
  if (j.contains("n_max")) cfg.n_max = j["n_max"].get<int>();
  if (j.contains("dt")) cfg.dt = j["dt"].get<double>();
  if (j.contains("steps")) cfg.steps = j["steps"].get<int>();
  if (j.contains("grid")) cfg.grid = j["grid"].get<int>();
  if (j.contains("draws")) cfg.draws = j["draws"].get<int>();
  if (j.contains("test_function")) cfg.test_function = j["test_function"];
  if (j.contains("format")) cfg.format = j["format"].get<std::string>();
  if (cfg.tol <= 0.0) throw ConfigError("field \"tol\" must be positive");
  if (cfg.radius <= 0.0) throw ConfigError("field \"radius\" must be positive");
  if (cfg.dt <= 0.0) throw ConfigError("field \"dt\" must be positive");
  if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "both")
    throw ConfigError("field \"format\" must be json, csv or both");
  return cfg;
}

const Potential& require_potential(const ExperimentConfig& cfg) {
  if (!cfg.potential)
    throw ConfigError("this command needs a \"potential\" (or \"potential_file\")");
  return *cfg.potential;
}

CompactTestFunction test_function_from_json(int m, const Json& j) {
  detail::reject_unknown_keys(j, {"type", "center", "width", "sigma", "direction"},
                              "test_function");
  const std::string type = j.value("type", "hat");
  const double center = j.value("center", 0.0);
  Vector dir = Vector::Zero(m);
  dir(0) = 1.0;
  if (j.contains("direction")) dir = vector_from_json(j["direction"], "direction");
  if (type == "hat")
    return hat_function(m, center, j.value("width", 1.0), dir);
  if (type == "gauss")
    return gaussian_bump(m, center, j.value("sigma", 1.0), dir);
  throw ConfigError("test_function.type must be \"hat\" or \"gauss\"");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

Tolerances make_tol(const ExperimentConfig& cfg) {
  Tolerances t;
  t.rtol = cfg.tol;
  t.atol = cfg.tol * 1e-2;
  return t;
}

// ---------------------------------------------------------------- commands

int cmd_solve(const ExperimentConfig& cfg, const fs::path& out) {
  const Potential& p = require_potential(cfg);
  const int m = p.dim();
  CauchyData data;
  data.x0 = cfg.x0;
  data.c0 = cfg.c0.value_or([m] {
    Vector v = Vector::Zero(m);
    v(0) = 1.0;
    return v;
  }());
  data.c1 = cfg.c1.value_or(Vector::Zero(m));
  const QuasiSolution sol = solve_cauchy(p, cfg.adjoint, cfg.lambda, data,
                                         cfg.a, cfg.b, make_tol(cfg));
  if (cfg.format != "json") {
    std::string csv = "x";
    for (int j = 0; j < m; ++j)
      csv += ",re_u" + std::to_string(j) + ",im_u" + std::to_string(j);
    for (int j = 0; j < m; ++j)
      csv += ",re_u1_" + std::to_string(j) + ",im_u1_" + std::to_string(j);
    csv += "\n";
    const int n = 2001;
    char buf[64];
    for (int i = 0; i < n; ++i) {
      const double x = cfg.a + (cfg.b - cfg.a) * i / (n - 1);
      const Vector y = sol.state(x);
      std::snprintf(buf, sizeof buf, "%.17g", x);
      csv += buf;
      for (Eigen::Index k = 0; k < y.size(); ++k) {
        std::snprintf(buf, sizeof buf, ",%.17g,%.17g", y(k).real(), y(k).imag());
        csv += buf;
      }
      csv += "\n";
    }
    write_text(out / "solution.csv", csv);
  }
  if (cfg.format != "csv") {
    Json j;
    j["interval"] = {cfg.a, cfg.b};
    j["lambda"] = detail::complex_to_json(cfg.lambda);
    j["adjoint"] = cfg.adjoint;
    Json ua = Json::array(), ub = Json::array();
    for (int k = 0; k < m; ++k) {
      ua.push_back(detail::complex_to_json(sol.u(cfg.a)(k)));
      ub.push_back(detail::complex_to_json(sol.u(cfg.b)(k)));
    }
    j["u_at_a"] = std::move(ua);
    j["u_at_b"] = std::move(ub);
    write_json_file((out / "solve.json").string(), j);
  }
  return 0;
}

int cmd_spectrum(const ExperimentConfig& cfg, const fs::path& out) {
  const Potential& p = require_potential(cfg);
  TruncatedProblem tp(p, cfg.radius, cfg.window);
  tp.tol = make_tol(cfg);
  SpectralReport rep = truncated_eigenvalues(tp);
  if (p.dim() == 1 && rep.eigenvalues.size() <= 5) {
    for (const auto& ev : rep.eigenvalues) {
      const OracleEstimate oe = fd_oracle_eigenvalue(tp, ev.lambda, 250);
      rep.oracle_deltas.push_back(std::abs(ev.lambda - oe.extrapolated));
    }
  }
  write_json_file((out / "spectrum.json").string(),
                  spectral_report_to_json(rep));
  if (cfg.format != "json") {
    std::string csv = "re_lambda,im_lambda,miss,multiplicity\n";
    char buf[128];
    for (const auto& ev : rep.eigenvalues) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.3g,%d\n",
                    ev.lambda.real(), ev.lambda.imag(), ev.miss,
                    ev.multiplicity);
      csv += buf;
    }
    write_text(out / "spectrum.csv", csv);
  }
  return 0;
}

int cmd_form(const ExperimentConfig& cfg, const fs::path& out) {
  const Potential& p = require_potential(cfg);
  const Json tf = cfg.test_function.value_or(
      Json{{"type", "hat"}, {"center", 0.0}, {"width", 1.0}});
  const CompactTestFunction w = test_function_from_json(p.dim(), tf);
  const FormReport f = form_value(p, w);
  Json j = form_report_to_json(f);
  j["test_function"] = tf;
  write_json_file((out / "form.json").string(), j);
  return 0;
}

int cmd_scan(const ExperimentConfig& cfg, const fs::path& out) {
  const Potential& p = require_potential(cfg);
  const ScanReport rep =
      accretivity_scan(p, default_scan_family(p, cfg.seed));
  write_json_file((out / "scan.json").string(), scan_report_to_json(rep));
  std::cout << (rep.negative_witness() ? "negative witness found"
                                       : "no negative value")
            << ": min Re = " << rep.min_real << " at " << rep.argmin_label
            << "\n";
  return 0;
}

int cmd_green_check(const ExperimentConfig& cfg, const fs::path& out) {
  const Potential& p = require_potential(cfg);
  const int m = p.dim();
  std::mt19937 rng(cfg.seed);
  std::uniform_real_distribution<double> lam(-2.0, 2.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> pos(cfg.a, cfg.b);
  Json draws = Json::array();
  double worst = 0.0;
  for (int i = 0; i < cfg.draws; ++i) {
    auto rand_data = [&] {
      CauchyData d;
      d.x0 = 0.5 * (cfg.a + cfg.b);
      d.c0 = Vector(m);
      d.c1 = Vector(m);
      for (int k = 0; k < m; ++k) {
        d.c0(k) = Complex(gauss(rng), gauss(rng));
        d.c1(k) = Complex(gauss(rng), gauss(rng));
      }
      return d;
    };
    const Complex lu(lam(rng), lam(rng)), lv(lam(rng), lam(rng));
    const QuasiSolution u =
        solve_cauchy(p, false, lu, rand_data(), cfg.a, cfg.b, make_tol(cfg));
    const QuasiSolution v =
        solve_cauchy(p, true, lv, rand_data(), cfg.a, cfg.b, make_tol(cfg));
    double x1 = pos(rng), x2 = pos(rng);
    if (x1 > x2) std::swap(x1, x2);
    const double res = green_identity_residual(u, v, x1, x2);
    worst = std::max(worst, res);
    Json dj;
    dj["lambda_u"] = detail::complex_to_json(lu);
    dj["lambda_v"] = detail::complex_to_json(lv);
    dj["interval"] = {x1, x2};
    dj["residual"] = res;
    draws.push_back(std::move(dj));
  }
  Json j;
  j["draws"] = std::move(draws);
  j["max_residual"] = worst;
  write_json_file((out / "green_check.json").string(), j);
  std::cout << "max Green residual over " << cfg.draws << " draws: " << worst
            << "\n";
  return 0;
}

int cmd_kernel_growth(const ExperimentConfig& cfg, const fs::path& out) {
  const Potential& p = require_potential(cfg);
  const KernelGrowthReport rep =
      kernel_growth_test(p, cfg.shift, cfg.n_max, cfg.seed);
  write_json_file((out / "kernel_growth.json").string(),
                  kernel_growth_report_to_json(rep));
  std::cout << (rep.all_excluded
                    ? "all directions excluded from an L2 kernel"
                    : "some direction is compatible with an L2 kernel element")
            << "\n";
  return 0;
}

int cmd_semigroup(const ExperimentConfig& cfg, const fs::path& out) {
  const Potential& p = require_potential(cfg);
  TruncatedProblem tp(p, cfg.radius, cfg.window);
  const FdMatrix fd = discretize_fd(tp, cfg.grid);
  const Eigen::Index n = fd.M.rows();
  Vector u0(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = fd.nodes[i / p.dim()];
    u0(i) = std::exp(-0.5 * x * x);
  }
  const auto norms = contraction_test(fd, u0, cfg.dt, cfg.steps);
  double max_ratio = 0.0;
  for (std::size_t k = 1; k < norms.size(); ++k)
    if (norms[k - 1] > 0.0) max_ratio = std::max(max_ratio, norms[k] / norms[k - 1]);
  Json j;
  j["dt"] = cfg.dt;
  j["steps"] = cfg.steps;
  j["grid"] = cfg.grid;
  j["max_step_ratio"] = max_ratio;
  j["nonincreasing"] = max_ratio <= 1.0 + 1e-12;
  j["warnings"] = fd.warnings;
  write_json_file((out / "semigroup.json").string(), j);
  if (cfg.format != "json") {
    std::string csv = "step,norm\n";
    char buf[64];
    for (std::size_t k = 0; k < norms.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g\n", k, norms[k]);
      csv += buf;
    }
    write_text(out / "norms.csv", csv);
  }
  std::cout << "max per-step norm ratio: " << max_ratio << "\n";
  return 0;
}

int cmd_corpus(const fs::path& out) {
  Json entries = Json::array();
  std::printf("%-18s %-18s %s\n", "name", "class", "expectations");
  for (const auto& e : corpus()) {
    Json ej;
    ej["name"] = e.name;
    ej["symmetry_class"] = to_string(e.expected_class);
    ej["negative_witness_expected"] = e.expect_negative_witness;
    Json ex = Json::array();
    std::string joined;
    for (const auto& x : e.expectations) {
      Json xj;
      xj["description"] = x.description;
      xj["provenance"] = x.provenance;
      ex.push_back(std::move(xj));
      if (!joined.empty()) joined += "; ";
      joined += x.description;
    }
    ej["expectations"] = std::move(ex);
    ej["potential"] = potential_to_json(e.potential);
    entries.push_back(std::move(ej));
    std::printf("%-18s %-18s %s\n", e.name.c_str(),
                to_string(e.expected_class), joined.c_str());
  }
  Json j;
  j["entries"] = std::move(entries);
  write_json_file((out / "corpus.json").string(), j);
  return 0;
}

int cmd_verify_all(const ExperimentConfig& cfg, const fs::path& out) {
  const VerifyReport rep = verify_all(cfg.seed);
  // comparison-scoped results: deterministic for a fixed seed
  write_json_file((out / "verify_all.results.json").string(),
                  verify_report_to_json(rep));
  Json meta;
  meta["timestamp"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count();
  meta["seed"] = cfg.seed;
  write_json_file((out / "verify_all.meta.json").string(), meta);
  for (const auto& c : rep.checks)
    std::printf("[%s] %s/%s: %s\n", c.passed ? "PASS" : "FAIL",
                c.entry.c_str(), c.check.c_str(), c.detail.c_str());
  return rep.all_passed() ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matrix Schrodinger operators with distributional potentials"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", window_flag, format_flag;
  unsigned seed_flag = 0;
  bool seed_given = false;
  double tol_flag = 0.0, radius_flag = 0.0;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", config_path, "experiment config JSON");
    if (config_required) c->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed_flag, "random seed")
        ->each([&](const std::string&) { seed_given = true; });
    sub->add_option("--tol", tol_flag, "integration tolerance");
    sub->add_option("--radius", radius_flag, "truncation radius R");
    sub->add_option("--window", window_flag,
                    "a,b (real) or a,b,c,d (complex rectangle)");
    sub->add_option("--format", format_flag, "json|csv|both");
  };

  const std::vector<std::pair<std::string, bool>> commands = {
      {"solve", true},        {"spectrum", true}, {"form", true},
      {"scan", true},         {"green-check", true}, {"kernel-growth", true},
      {"semigroup", true},    {"corpus", false},  {"verify-all", false}};
  for (const auto& [name, needs_config] : commands)
    add_common(app.add_subcommand(name), needs_config);

  CLI11_PARSE(app, argc, argv);
  const std::string cmd = app.get_subcommands().front()->get_name();

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    if (seed_given) cfg.seed = seed_flag;
    if (tol_flag > 0.0) cfg.tol = tol_flag;
    if (radius_flag > 0.0) cfg.radius = radius_flag;
    if (!window_flag.empty()) {
      std::vector<double> vals;
      std::stringstream ss(window_flag);
      std::string tok;
      while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
      cfg.window = window_from_json(Json(vals));
    }
    if (!format_flag.empty()) cfg.format = format_flag;

    fs::path out(out_dir);
    fs::create_directories(out);

    if (cmd == "solve") return cmd_solve(cfg, out);
    if (cmd == "spectrum") return cmd_spectrum(cfg, out);
    if (cmd == "form") return cmd_form(cfg, out);
    if (cmd == "scan") return cmd_scan(cfg, out);
    if (cmd == "green-check") return cmd_green_check(cfg, out);
    if (cmd == "kernel-growth") return cmd_kernel_growth(cfg, out);
    if (cmd == "semigroup") return cmd_semigroup(cfg, out);
    if (cmd == "corpus") return cmd_corpus(out);
    if (cmd == "verify-all") return cmd_verify_all(cfg, out);
    std::cerr << "unknown command\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const BlowupError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const ToleranceError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
