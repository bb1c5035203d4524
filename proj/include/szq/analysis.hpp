#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "szq/cauchy.hpp"
#include "szq/potential.hpp"
#include "szq/quadrature.hpp"
#include "szq/test_function.hpp"
#include "szq/types.hpp"

namespace szq {

// (a,b)_{C^m} = sum a_i conj(b_i); Eigen's dot conjugates the first factor.
inline Complex cinner(const Vector& a, const Vector& b) { return b.dot(a); }

// Lagrange bracket [u,v](t) = (u, v^{1}) - (u^[1], v) for an (l, l+) pair.
inline Complex bracket(const QuasiSolution& u, const QuasiSolution& v,
                       double t) {
  if (u.adjoint() || !v.adjoint())
    throw std::invalid_argument(
        "bracket: u must solve l and v must solve l+ (adjoint_flag mismatch)");
  return cinner(u.u(t), v.u1(t)) - cinner(u.u1(t), v.u(t));
}

namespace detail {

inline std::vector<double> merged_breakpoints(const QuasiSolution& u,
                                              const QuasiSolution& v) {
  std::vector<double> s = u.potential().breakpoints();
  const auto& bv = v.potential().breakpoints();
  s.insert(s.end(), bv.begin(), bv.end());
  const auto& fu = u.forcing().breakpoints;
  const auto& fv = v.forcing().breakpoints;
  s.insert(s.end(), fu.begin(), fu.end());
  s.insert(s.end(), fv.begin(), fv.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

}  // namespace detail

// | int_a^b (l[u],v) - int_a^b (u,l+[v]) - [u,v](b) + [u,v](a) |
inline double green_identity_residual(const QuasiSolution& u,
                                      const QuasiSolution& v, double a,
                                      double b, double quad_tol = 1e-11) {
  if (u.adjoint() || !v.adjoint())
    throw std::invalid_argument("green_identity_residual: adjoint_flag mismatch");
  const auto splits = detail::merged_breakpoints(u, v);
  const Complex lhs =
      integrate([&](double x) { return cinner(u.l_value(x), v.u(x)); }, a, b,
                splits, quad_tol)
          .value;
  const Complex rhs =
      integrate([&](double x) { return cinner(u.u(x), v.l_value(x)); }, a, b,
                splits, quad_tol)
          .value;
  return std::abs(lhs - rhs - bracket(u, v, b) + bracket(u, v, a));
}

struct BracketTailSample {
  double r;
  Complex at_minus_r, at_plus_r;
};

// Bracket values at +-r for convergence inspection; diagnostic only.
inline std::vector<BracketTailSample> bracket_tail(
    const QuasiSolution& u, const QuasiSolution& v,
    const std::vector<double>& radii) {
  std::vector<BracketTailSample> out;
  out.reserve(radii.size());
  for (double r : radii)
    out.push_back({r, bracket(u, v, -r), bracket(u, v, r)});
  return out;
}

// | <l[w], v> - <w, l+[v]> | over supp(w); Green's identity with zero
// boundary terms, so it should vanish to quadrature accuracy.
inline double adjoint_pairing_residual(const Potential& p,
                                       const CompactTestFunction& w,
                                       const QuasiSolution& v,
                                       double quad_tol = 1e-11) {
  if (!v.adjoint())
    throw std::invalid_argument("adjoint_pairing_residual: v must solve l+");
  if (!w.l_values)
    throw std::invalid_argument("adjoint_pairing_residual: w lacks l-values");
  if (w.a < v.a() || w.b > v.b())
    throw std::invalid_argument("adjoint_pairing_residual: supp(w) not inside v's interval");
  std::vector<double> splits = w.kinks;
  for (double bp : p.breakpoints()) splits.push_back(bp);
  for (double bp : v.potential().breakpoints()) splits.push_back(bp);
  std::sort(splits.begin(), splits.end());
  const Complex lhs =
      integrate([&](double x) { return cinner(w.l_values(x, Side::automatic), v.u(x)); },
                w.a, w.b, splits, quad_tol)
          .value;
  const Complex rhs =
      integrate([&](double x) { return cinner(w.value(x), v.l_value(x)); },
                w.a, w.b, splits, quad_tol)
          .value;
  return std::abs(lhs - rhs);
}

struct FormReport {
  Complex value;
  double real_part = 0.0;
  Complex kinetic, q_term, s_term;
  double quadrature_error = 0.0;
};

// Weak quadratic form of l on a compactly supported w:
//   <l[w],w> = int (w',w') - int [(Qw',w) + (Qw,w')] + int (sw,w).
inline FormReport form_value(const Potential& p, const CompactTestFunction& w,
                             double quad_tol = 1e-11) {
  std::vector<double> splits = w.kinks;
  for (double bp : p.breakpoints()) splits.push_back(bp);
  std::sort(splits.begin(), splits.end());
  if (w.quadrature_hint > 1) {
    const double step = (w.b - w.a) / w.quadrature_hint;
    for (int i = 1; i < w.quadrature_hint; ++i) splits.push_back(w.a + i * step);
    std::sort(splits.begin(), splits.end());
  }
  auto kin = integrate(
      [&](double x) {
        const Vector d = w.deriv(x);
        return cinner(d, d);
      },
      w.a, w.b, splits, quad_tol);
  auto qt = integrate(
      [&](double x) {
        const Matrix Q = p.Q().eval(x);
        const Vector ww = w.value(x), dw = w.deriv(x);
        return -(cinner(Q * dw, ww) + cinner(Q * ww, dw));
      },
      w.a, w.b, splits, quad_tol);
  auto st = integrate(
      [&](double x) {
        const Vector ww = w.value(x);
        return cinner(p.s().eval(x) * ww, ww);
      },
      w.a, w.b, splits, quad_tol);
  FormReport r;
  r.kinetic = kin.value;
  r.q_term = qt.value;
  r.s_term = st.value;
  r.value = kin.value + qt.value + st.value;
  r.real_part = r.value.real();
  r.quadrature_error = kin.error + qt.error + st.error;
  return r;
}

struct ScanCandidate {
  std::string label;
  bool adjoint_op = false;  // evaluate the form of l+ instead of l
  CompactTestFunction w;
};

struct ScanEntry {
  std::string label;
  bool adjoint_op = false;
  Complex value;
  double real_part = 0.0;
};

struct ScanReport {
  double min_real = 0.0;
  std::string argmin_label;
  bool argmin_adjoint = false;
  std::vector<ScanEntry> entries;
  bool negative_witness() const { return min_real < 0.0; }
};

// Default family: centered hats (widths 2^k), Gaussian bumps along the
// coordinate directions, seeded random Gaussians, and cutoff-mollified
// Cauchy solutions, each paired for l and l+.
inline std::vector<ScanCandidate> default_scan_family(const Potential& p,
                                                      unsigned seed = 1) {
  const int m = p.dim();
  std::vector<ScanCandidate> out;
  for (bool adj : {false, true}) {
    const std::string op = adj ? "l+" : "l";
    for (int k = -3; k <= 6; ++k) {
      const double width = std::pow(2.0, k);
      for (int j = 0; j < m; ++j) {
        Vector e = Vector::Zero(m);
        e(j) = 1.0;
        out.push_back({op + ":hat(w=" + std::to_string(width) +
                           ",dir=" + std::to_string(j) + ")",
                       adj, hat_function(m, 0.0, width, e)});
      }
    }
    for (double sigma : {0.5, 1.0, 2.0}) {
      for (int j = 0; j < m; ++j) {
        Vector e = Vector::Zero(m);
        e(j) = 1.0;
        out.push_back({op + ":gauss(s=" + std::to_string(sigma) +
                           ",dir=" + std::to_string(j) + ")",
                       adj, gaussian_bump(m, 0.0, sigma, e)});
      }
    }
    std::mt19937 rng(seed + (adj ? 1000 : 0));
    std::uniform_real_distribution<double> center(-3.0, 3.0);
    std::uniform_real_distribution<double> scale(0.3, 3.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < 5; ++i) {
      Vector dir(m);
      for (int j = 0; j < m; ++j) dir(j) = Complex(gauss(rng), gauss(rng));
      dir.normalize();
      out.push_back({op + ":rand_gauss(" + std::to_string(i) + ")", adj,
                     gaussian_bump(m, center(rng), scale(rng), dir)});
    }
    // mollified Cauchy solutions probe the operator's natural domain
    for (Complex lam : {Complex(0.0, 0.0), Complex(-1.0, 0.0)}) {
      for (int j = 0; j < m; ++j) {
        CauchyData d;
        d.x0 = 0.0;
        d.c0 = Vector::Zero(m);
        d.c0(j) = 1.0;
        d.c1 = Vector::Zero(m);
        try {
          auto sol = std::make_shared<const QuasiSolution>(
              solve_cauchy(p, adj, lam, d, -6.0, 6.0));
          out.push_back({op + ":mollified(lambda=" +
                             std::to_string(lam.real()) +
                             ",dir=" + std::to_string(j) + ")",
                         adj,
                         mollify_to_domain(sol, plateau_cutoff(-4.0, 4.0))});
        } catch (const BlowupError&) {
          // growing solution; skip this probe
        }
      }
    }
  }
  return out;
}

inline ScanReport accretivity_scan(const Potential& p,
                                   const std::vector<ScanCandidate>& family,
                                   double quad_tol = 1e-11) {
  const Potential padj = adjoint_potential(p);
  ScanReport rep;
  bool first = true;
  for (const auto& cand : family) {
    const FormReport f =
        form_value(cand.adjoint_op ? padj : p, cand.w, quad_tol);
    rep.entries.push_back({cand.label, cand.adjoint_op, f.value, f.real_part});
    if (first || f.real_part < rep.min_real) {
      rep.min_real = f.real_part;
      rep.argmin_label = cand.label;
      rep.argmin_adjoint = cand.adjoint_op;
      first = false;
    }
  }
  return rep;
}

enum class DirectionVerdict { kernel_candidate, excluded_growth, excluded_blowup };

struct GrowthDirection {
  std::string label;
  CauchyData data;
  std::vector<double> ratios;       // r_n, n = 1..
  std::vector<double> tail_masses;  // int_{n<=|x|<=n+1} |v|^2
  bool aborted = false;
  double abort_x = 0.0;
  DirectionVerdict verdict = DirectionVerdict::kernel_candidate;
};

struct KernelGrowthReport {
  double shift = 0.0;
  int n_max = 0;
  double slope_bound = 1.875;  // C of the default cutoff family
  std::vector<GrowthDirection> directions;
  bool all_excluded = true;
};

namespace detail {

inline void judge_direction(GrowthDirection& d, double c_squared) {
  if (d.aborted) {
    d.verdict = DirectionVerdict::excluded_blowup;
    return;
  }
  // an L^2 kernel element obeys r_n <= C^2 with decaying tail mass
  bool ratio_violation = false;
  for (double r : d.ratios)
    if (r > c_squared) ratio_violation = true;
  bool tail_growth =
      d.tail_masses.size() >= 2 &&
      d.tail_masses.back() > 10.0 * (d.tail_masses.front() + 1e-300);
  d.verdict = (ratio_violation || tail_growth)
                  ? DirectionVerdict::excluded_growth
                  : DirectionVerdict::kernel_candidate;
}

}  // namespace detail

// Ratio diagnostic from the proof of the main theorem: for each basis
// direction of solutions of l+[v] = shift*v launched at 0, the sequence
//   r_n = int_{-n}^{n} |v|^2 / int_{n<=|x|<=n+1} |v|^2.
// An L^2 kernel element would keep r_n below C^2; escape to infinity is
// flagged by a growth abort (configurable, far below the integrator's own
// overflow threshold) and treated as non-L^2 evidence.
inline KernelGrowthReport kernel_growth_test(const Potential& p, double shift,
                                             int n_max, unsigned seed = 1,
                                             double growth_abort = 1e9,
                                             double quad_tol = 1e-10) {
  const int m = p.dim();
  KernelGrowthReport rep;
  rep.shift = shift;
  rep.n_max = n_max;
  rep.all_excluded = true;
  const double c_sq = rep.slope_bound * rep.slope_bound;

  std::vector<std::pair<std::string, CauchyData>> dirs;
  for (int j = 0; j < 2 * m; ++j) {
    CauchyData d;
    d.x0 = 0.0;
    d.c0 = Vector::Zero(m);
    d.c1 = Vector::Zero(m);
    if (j < m)
      d.c0(j) = 1.0;
    else
      d.c1(j - m) = 1.0;
    dirs.push_back({"basis_" + std::to_string(j), d});
  }
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < 5; ++i) {
    CauchyData d;
    d.x0 = 0.0;
    d.c0 = Vector(m);
    d.c1 = Vector(m);
    for (int j = 0; j < m; ++j) {
      d.c0(j) = Complex(gauss(rng), gauss(rng));
      d.c1(j) = Complex(gauss(rng), gauss(rng));
    }
    const double nrm = std::sqrt(d.c0.squaredNorm() + d.c1.squaredNorm());
    d.c0 /= nrm;
    d.c1 /= nrm;
    dirs.push_back({"random_" + std::to_string(i), d});
  }

  const double reach = n_max + 1.0;
  const auto splits = p.breakpoints();
  for (auto& [label, data] : dirs) {
    GrowthDirection gd;
    gd.label = label;
    gd.data = data;
    Tolerances tol;
    tol.blowup_threshold = growth_abort;
    double solved_reach = reach;
    std::unique_ptr<QuasiSolution> sol;
    for (;;) {
      try {
        sol = std::make_unique<QuasiSolution>(solve_cauchy(
            p, true, Complex(shift, 0.0), data, -solved_reach, solved_reach, tol));
        break;
      } catch (const BlowupError& e) {
        if (!gd.aborted) {
          gd.aborted = true;
          gd.abort_x = e.last_x;
        }
        solved_reach = std::max(1.0, std::floor(std::abs(e.last_x)) - 1.0);
        if (solved_reach <= 1.0) break;
      }
    }
    if (sol) {
      auto mass = [&](double lo, double hi) {
        return integrate(
                   [&](double x) {
                     const Vector v = sol->u(x);
                     return Complex(v.squaredNorm(), 0.0);
                   },
                   lo, hi, splits, quad_tol)
            .value.real();
      };
      double core = mass(-1.0, 1.0);
      const int n_reach = static_cast<int>(solved_reach) - 1;
      for (int n = 1; n <= std::min(n_max, n_reach); ++n) {
        const double tail = mass(-n - 1.0, -static_cast<double>(n)) +
                            mass(static_cast<double>(n), n + 1.0);
        gd.ratios.push_back(core / tail);
        gd.tail_masses.push_back(tail);
        core += tail;
      }
    }
    detail::judge_direction(gd, c_sq);
    if (gd.verdict == DirectionVerdict::kernel_candidate)
      rep.all_excluded = false;
    rep.directions.push_back(std::move(gd));
  }
  return rep;
}

}  // namespace szq
