// Acceptance gate: one pass/fail line per criterion, each re-derived from
// scratch against closed forms or independent oracles.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "szq/szq.hpp"

using namespace szq;
using std::numbers::pi;

namespace {

struct Criterion {
  int id;
  std::string title;
  bool passed = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

Potential random_step_potential(std::mt19937& rng, int m) {
  std::uniform_real_distribution<double> coef(-1.5, 1.5);
  std::uniform_real_distribution<double> bp(-2.0, 2.0);
  auto rand_mat = [&] {
    Matrix M(m, m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) M(r, c) = Complex(coef(rng), coef(rng));
    return M;
  };
  return Potential(MatrixFunction::step(m, bp(rng), rand_mat(), rand_mat()),
                   MatrixFunction::step(m, bp(rng), rand_mat(), rand_mat()));
}

// Polarized weak pairing <l[w], v> for compactly supported w, v:
//   int (w',v') - int [(Qw',v) + (Qw,v')] + int (sw,v).
Complex weak_pairing(const Potential& p, const CompactTestFunction& w,
                     const CompactTestFunction& v) {
  const double a = std::max(w.a, v.a), b = std::min(w.b, v.b);
  if (a >= b) return {0.0, 0.0};
  std::vector<double> splits = w.kinks;
  splits.insert(splits.end(), v.kinks.begin(), v.kinks.end());
  for (double x : p.breakpoints()) splits.push_back(x);
  std::sort(splits.begin(), splits.end());
  return integrate(
             [&](double x) {
               const Vector ww = w.value(x), dw = w.deriv(x);
               const Vector vv = v.value(x), dv = v.deriv(x);
               const Matrix Q = p.Q().eval(x);
               return cinner(dw, dv) - cinner(Q * dw, vv) -
                      cinner(Q * ww, dv) + cinner(p.s().eval(x) * ww, vv);
             },
             a, b, splits, 1e-12)
      .value;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ------------------------------------------------------------- criteria

Criterion criterion_1() {
  Criterion c{1, "free-particle cosh/sinh exactness"};
  const auto t0 = std::chrono::steady_clock::now();
  const auto sol = solve_cauchy(Potential::free_particle(1), false, -1.0,
                                CauchyData::scalar(0.0, 1.0, 0.0), -5.0, 5.0);
  double worst = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double x = -5.0 + 10.0 * i / 2000;
    worst = std::max(worst, std::abs(sol.u(x)(0) - std::cosh(x)));
    worst = std::max(worst, std::abs(sol.u1(x)(0) - std::sinh(x)));
  }
  const double dt = seconds_since(t0);
  c.passed = worst <= 1e-8 && dt < 1.0;
  c.detail = fmt("max err %.2e, %.2f s", worst, dt);
  return c;
}

Criterion criterion_2() {
  Criterion c{2, "quasiderivative continuity and jump law"};
  std::mt19937 rng(42);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst_u1 = 0.0, worst_jump = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 1 + trial % 2;
    const Potential p = random_step_potential(rng, m);
    CauchyData d;
    d.x0 = 0.0;
    d.c0 = Vector(m);
    d.c1 = Vector(m);
    for (int k = 0; k < m; ++k) {
      d.c0(k) = Complex(gauss(rng), gauss(rng));
      d.c1(k) = Complex(gauss(rng), gauss(rng));
    }
    const auto sol = solve_cauchy(p, false, Complex(0.3, 0.1), d, -3.0, 3.0);
    for (double b : p.breakpoints()) {
      if (b <= -3.0 || b >= 3.0) continue;
      worst_u1 = std::max(worst_u1, (sol.u1(std::nextafter(b, 1e9)) -
                                     sol.u1(std::nextafter(b, -1e9)))
                                        .norm());
      const Vector expect = p.Q().jump(b) * sol.u(b);
      const Vector got =
          sol.u_prime(b, Side::right) - sol.u_prime(b, Side::left);
      worst_jump = std::max(worst_jump, (got - expect).norm());
    }
  }
  c.passed = worst_u1 <= 1e-8 && worst_jump <= 1e-7;
  c.detail = fmt("u1 disc %.2e, jump err %.2e", worst_u1, worst_jump);
  return c;
}

Criterion criterion_3() {
  Criterion c{3, "delta bound state -1 with FD oracle"};
  const auto t0 = std::chrono::steady_clock::now();
  const TruncatedProblem tp(Potential::scalar_delta(-2.0), 10.0,
                            Window::real(-2.0, -0.5));
  const auto rep = truncated_eigenvalues(tp);
  if (rep.eigenvalues.size() != 1) {
    c.detail = fmt("expected 1 eigenvalue, got %zu", rep.eigenvalues.size());
    return c;
  }
  const Complex lam = rep.eigenvalues[0].lambda;
  const auto oe = fd_oracle_eigenvalue(tp, lam, 200);
  const double dt = seconds_since(t0);
  const double dev = std::abs(lam - Complex(-1.0, 0.0));
  const double oracle_dev = std::abs(lam - oe.extrapolated);
  c.passed = dev <= 1e-6 && oracle_dev <= oe.error_bar && dt < 10.0;
  c.detail = fmt("lambda %.9f, |dev| %.2e, oracle dev %.2e (bar %.2e), %.1f s",
                 lam.real(), dev, oracle_dev, oe.error_bar, dt);
  return c;
}

Criterion criterion_4() {
  Criterion c{4, "free Dirichlet spectrum {1,4,9}"};
  const TruncatedProblem tp(Potential::free_particle(1), pi / 2,
                            Window::real(0.5, 9.5));
  const auto rep = truncated_eigenvalues(tp);
  if (rep.eigenvalues.size() != 3) {
    c.detail = fmt("expected 3 eigenvalues, got %zu", rep.eigenvalues.size());
    return c;
  }
  double worst = 0.0;
  for (int k = 1; k <= 3; ++k)
    worst = std::max(
        worst, std::abs(rep.eigenvalues[k - 1].lambda - Complex(k * k, 0.0)));
  c.passed = worst <= 1e-6;
  c.detail = fmt("max dev %.2e", worst);
  return c;
}

Criterion criterion_5() {
  Criterion c{5, "Green identity and adjoint pairing residuals"};
  const auto entries = corpus();
  std::mt19937 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> lam(-1.5, 1.5);
  std::uniform_real_distribution<double> pos(-2.5, 2.5);
  Tolerances tight;
  tight.rtol = 1e-12;
  tight.atol = 1e-14;
  double worst_green = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Potential& p = entries[i % entries.size()].potential;
    const int m = p.dim();
    auto rand_data = [&] {
      CauchyData d;
      d.x0 = 0.0;
      d.c0 = Vector(m);
      d.c1 = Vector(m);
      for (int k = 0; k < m; ++k) {
        d.c0(k) = Complex(gauss(rng), gauss(rng));
        d.c1(k) = Complex(gauss(rng), gauss(rng));
      }
      return d;
    };
    const auto u = solve_cauchy(p, false, Complex(lam(rng), lam(rng)),
                                rand_data(), -2.5, 2.5, tight);
    const auto v = solve_cauchy(p, true, Complex(lam(rng), lam(rng)),
                                rand_data(), -2.5, 2.5, tight);
    double a = pos(rng), b = pos(rng);
    if (a > b) std::swap(a, b);
    worst_green = std::max(worst_green, green_identity_residual(u, v, a, b));
  }
  double worst_pair = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Potential& p = entries[i % entries.size()].potential;
    const int m = p.dim();
    CauchyData d;
    d.x0 = 0.0;
    d.c0 = Vector(m);
    d.c1 = Vector(m);
    for (int k = 0; k < m; ++k) {
      d.c0(k) = Complex(gauss(rng), gauss(rng));
      d.c1(k) = Complex(gauss(rng), gauss(rng));
    }
    auto sol = std::make_shared<const QuasiSolution>(solve_cauchy(
        p, false, Complex(lam(rng), lam(rng)), d, -5.0, 5.0, tight));
    const auto w = mollify_to_domain(sol, plateau_cutoff(-3.0, 3.0));
    CauchyData dv = d;
    dv.c0 = dv.c0.reverse().eval();
    const auto v = solve_cauchy(p, true, Complex(lam(rng), lam(rng)), dv,
                                -5.0, 5.0, tight);
    worst_pair = std::max(worst_pair, adjoint_pairing_residual(p, w, v));
  }
  c.passed = worst_green <= 1e-7 && worst_pair <= 1e-7;
  c.detail = fmt("green %.2e, pairing %.2e", worst_green, worst_pair);
  return c;
}

Criterion criterion_6() {
  Criterion c{6, "form values against closed expressions"};
  double worst = 0.0;
  for (double w : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0})
    for (double alpha : {-2.0, 1.0}) {
      const auto f =
          form_value(Potential::scalar_delta(alpha), scalar_hat(0.0, w));
      worst = std::max(worst, std::abs(f.value - Complex(2.0 / w + alpha, 0.0)));
    }
  CompactTestFunction sine;
  sine.m = 1;
  sine.a = 0.0;
  sine.b = 1.0;
  sine.u = [](double x, Side) {
    return Vector(Vector::Constant(1, Complex(std::sin(pi * x), 0.0)));
  };
  sine.u_prime = [](double x, Side) {
    return Vector(Vector::Constant(1, Complex(pi * std::cos(pi * x), 0.0)));
  };
  const auto fs = form_value(Potential::free_particle(1), sine);
  const double sine_dev = std::abs(fs.value - Complex(pi * pi / 2, 0.0));
  c.passed = worst <= 1e-8 && sine_dev <= 1e-8;
  c.detail = fmt("hat dev %.2e, sine dev %.2e", worst, sine_dev);
  return c;
}

Criterion criterion_7() {
  Criterion c{7, "accretivity scan witnesses"};
  const auto pneg = Potential::scalar_delta(-2.0);
  const auto rneg = accretivity_scan(pneg, default_scan_family(pneg));
  bool wide_hat_negative = false;
  for (const auto& e : rneg.entries)
    if (!e.adjoint_op && e.label.find("hat(w=4") != std::string::npos &&
        e.real_part <= -0.5)
      wide_hat_negative = true;
  const auto ppos = Potential::scalar_delta(1.0);
  const auto rpos = accretivity_scan(ppos, default_scan_family(ppos));
  c.passed = rneg.negative_witness() && wide_hat_negative &&
             !rpos.negative_witness() && rpos.min_real >= 0.0;
  c.detail = fmt("alpha=-2 min %.3f, alpha=+1 min %.3e", rneg.min_real,
                 rpos.min_real);
  return c;
}

Criterion criterion_8() {
  Criterion c{8, "product rule in weak pairing"};
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> center(-2.0, 2.0);
  std::uniform_real_distribution<double> width(0.3, 1.2);
  double worst = 0.0;
  for (const Complex alpha : {Complex(-2.0, 0.0), Complex(0.0, 1.0)}) {
    const auto p = Potential::scalar_delta(alpha);
    auto sol = std::make_shared<const QuasiSolution>(
        solve_cauchy(p, false, Complex(0.4, -0.3),
                     CauchyData::scalar(0.0, 1.0, 0.2), -5.0, 5.0));
    const auto w = mollify_to_domain(sol, plateau_cutoff(-3.0, 3.0));
    for (int i = 0; i < 5; ++i) {
      Vector dir = Vector::Ones(1);
      const auto probe = gaussian_bump(1, center(rng), width(rng), dir);
      std::vector<double> splits = w.kinks;
      for (double x : p.breakpoints()) splits.push_back(x);
      std::sort(splits.begin(), splits.end());
      const Complex direct =
          integrate(
              [&](double x) {
                return cinner(w.l_values(x, Side::automatic), probe.value(x));
              },
              std::max(w.a, probe.a), std::min(w.b, probe.b), splits, 1e-12)
              .value;
      const Complex weak = weak_pairing(p, w, probe);
      worst = std::max(worst, std::abs(direct - weak));
    }
  }
  c.passed = worst <= 1e-8;
  c.detail = fmt("max pairing dev %.2e", worst);
  return c;
}

Criterion criterion_9() {
  Criterion c{9, "kernel growth ratios and exclusion"};
  const auto free_rep = kernel_growth_test(Potential::free_particle(1), 0.0, 20);
  double worst = 0.0;
  bool monotone = true;
  const auto& r0 = free_rep.directions[0].ratios;
  for (int n = 1; n <= 20; ++n) {
    worst = std::max(worst, std::abs(r0[n - 1] - n));
    if (n >= 2 && r0[n - 1] <= r0[n - 2]) monotone = false;
  }
  const auto delta_rep =
      kernel_growth_test(Potential::scalar_delta(-2.0), -2.0, 30);
  bool basis_excluded = true;
  for (int j = 0; j < 2; ++j)
    if (delta_rep.directions[j].verdict == DirectionVerdict::kernel_candidate)
      basis_excluded = false;
  c.passed = worst <= 1e-7 && monotone && basis_excluded;
  c.detail = fmt("r_n dev %.2e, monotone %d, delta basis excluded %d", worst,
                 monotone ? 1 : 0, basis_excluded ? 1 : 0);
  return c;
}

Criterion criterion_10() {
  Criterion c{10, "Crank-Nicolson contraction and growth rate"};
  auto gaussian_on = [](const FdMatrix& fd, int m) {
    Vector u0(fd.M.rows());
    for (Eigen::Index i = 0; i < u0.size(); ++i) {
      const double x = fd.nodes[static_cast<std::size_t>(i) / m];
      u0(i) = Complex(std::exp(-0.5 * x * x), 0.0);
    }
    return u0;
  };
  const double dt = 0.01;
  bool contractive_ok = true;
  std::string bad;
  for (const auto& e : corpus()) {
    if (e.expect_negative_witness || e.name == "rotation_delta") continue;
    const int m = e.potential.dim();
    const TruncatedProblem tp(e.potential, 8.0, Window::real(0.0, 1.0));
    const auto fd = discretize_fd(tp, m == 1 ? 300 : 160);
    const auto norms = contraction_test(fd, gaussian_on(fd, m), dt, 200);
    for (std::size_t k = 1; k < norms.size(); ++k)
      if (norms[k] > norms[k - 1] + 1e-12) {
        contractive_ok = false;
        bad = e.name;
      }
  }
  const TruncatedProblem tpn(Potential::scalar_delta(-2.0), 8.0,
                             Window::real(0.0, 1.0));
  const auto fdn = discretize_fd(tpn, 400);
  const auto norms = contraction_test(fdn, gaussian_on(fdn, 1), dt, 2000);
  const double ratio = norms[norms.size() - 1] / norms[norms.size() - 2];
  const double expect = (1.0 + dt / 2) / (1.0 - dt / 2);
  const double rate_dev = std::abs(ratio - expect);
  c.passed = contractive_ok && rate_dev <= 1e-3;
  c.detail = fmt("contractive %d%s%s, growth ratio %.6f vs %.6f",
                 contractive_ok ? 1 : 0, bad.empty() ? "" : " failing ",
                 bad.c_str(), ratio, expect);
  return c;
}

Criterion criterion_11() {
  Criterion c{11, "J-symmetry of complex_symmetric entries"};
  double worst_res = 0.0, worst_sym = 0.0;
  int checked = 0;
  for (const auto& e : corpus()) {
    if (e.expected_class != SymmetryClass::complex_symmetric) continue;
    ++checked;
    const int m = e.potential.dim();
    CauchyData d;
    d.x0 = 0.0;
    d.c0 = Vector::Ones(m);
    d.c1 = Vector::Constant(m, Complex(0.2, 0.1));
    worst_res = std::max(
        worst_res, j_symmetry_residual(e.potential, d, Complex(0.3, 0.4),
                                       -4.0, 4.0));
    const TruncatedProblem tp(e.potential, 8.0, Window::real(0.0, 1.0));
    const auto fd = discretize_fd(tp, 200);
    const Eigen::MatrixXcd M(fd.M);
    worst_sym = std::max(
        worst_sym, (M - M.transpose()).norm() / std::max(M.norm(), 1e-300));
  }
  c.passed = checked > 0 && worst_res <= 1e-8 && worst_sym <= 1e-12;
  c.detail = fmt("%d entries, residual %.2e, asym %.2e", checked, worst_res,
                 worst_sym);
  return c;
}

Criterion criterion_12() {
  Criterion c{12, "verify-all determinism"};
#ifndef SZQ_CLI_PATH
  c.detail = "CLI path not wired into the build";
  return c;
#else
  const std::string cli = SZQ_CLI_PATH;
  const std::string cmd1 =
      "\"" + cli + "\" verify-all --seed 1 --out acc_run1 > acc_run1.log 2>&1";
  const std::string cmd2 =
      "\"" + cli + "\" verify-all --seed 1 --out acc_run2 > acc_run2.log 2>&1";
  const int rc1 = std::system(cmd1.c_str());
  const int rc2 = std::system(cmd2.c_str());
  const std::string j1 = slurp("acc_run1/verify_all.results.json");
  const std::string j2 = slurp("acc_run2/verify_all.results.json");
  const bool identical = !j1.empty() && j1 == j2;
  c.passed = identical && rc1 == 0 && rc2 == 0;
  c.detail = fmt("exit codes %d/%d, %zu bytes, byte-identical %d", rc1, rc2,
                 j1.size(), identical ? 1 : 0);
  return c;
#endif
}

}  // namespace

TEST_CASE("acceptance criteria") {
  std::vector<Criterion> results;
  results.push_back(criterion_1());
  results.push_back(criterion_2());
  results.push_back(criterion_3());
  results.push_back(criterion_4());
  results.push_back(criterion_5());
  results.push_back(criterion_6());
  results.push_back(criterion_7());
  results.push_back(criterion_8());
  results.push_back(criterion_9());
  results.push_back(criterion_10());
  results.push_back(criterion_11());
  results.push_back(criterion_12());

  for (const auto& r : results) {
    std::printf("criterion %2d: %s  %s (%s)\n", r.id,
                r.passed ? "PASS" : "FAIL", r.title.c_str(), r.detail.c_str());
    std::fflush(stdout);
  }
  for (const auto& r : results) {
    INFO("criterion " << r.id << ": " << r.title << " -- " << r.detail);
    CHECK(r.passed);
  }
}
