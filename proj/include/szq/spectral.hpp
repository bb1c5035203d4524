#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "szq/cauchy.hpp"
#include "szq/potential.hpp"
#include "szq/types.hpp"

namespace szq {

// Real interval or complex rectangle for eigenvalue search.
struct Window {
  double re_lo = 0.0, re_hi = 0.0;
  double im_lo = 0.0, im_hi = 0.0;
  bool is_real() const { return im_lo == 0.0 && im_hi == 0.0; }
  static Window real(double lo, double hi) { return {lo, hi, 0.0, 0.0}; }
  static Window rect(double rlo, double rhi, double ilo, double ihi) {
    return {rlo, rhi, ilo, ihi};
  }
};

// Dirichlet truncation of the whole-line problem to [-R, R].
struct TruncatedProblem {
  Potential potential;
  double R = 10.0;
  Window window;
  int fd_grid = 1000;          // FD oracle base grid size
  Tolerances tol;
  double root_tol = 1e-9;      // relative |d| threshold for accepted roots

  TruncatedProblem(Potential p, double radius, Window w)
      : potential(std::move(p)), R(radius), window(w) {
    if (R <= 0.0) throw std::invalid_argument("TruncatedProblem: R must be positive");
  }
};

struct MissDistance {
  Complex value{0.0, 0.0};  // possibly rescaled determinant
  double log_scale = 0.0;   // det = value * exp(log_scale)
  bool overflow = false;
  Complex plain() const { return value * std::exp(log_scale); }
};

// Shooting determinant: launch the m Dirichlet solutions from -R
// (u(-R)=0, u^[1](-R)=e_j), propagate to R, take det of the u(R) columns.
// Columns are renormalized jointly when they grow past 1e100, with the
// log factor accumulated, so d keeps a usable sign/phase under overflow.
inline MissDistance miss_distance(const TruncatedProblem& tp, Complex lambda) {
  const int m = tp.potential.dim();
  SystemMatrix A(tp.potential, false, lambda);
  std::vector<double> cuts;
  for (double d : A.discontinuities())
    if (d > -tp.R && d < tp.R) cuts.push_back(d);
  // unit-length checkpoints bound the growth between renormalizations
  for (double x = std::ceil(-tp.R) + 1.0; x < tp.R; x += 1.0) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.push_back(tp.R);

  Eigen::MatrixXcd Y(2 * m, m);
  Y.setZero();
  for (int j = 0; j < m; ++j) Y(m + j, j) = 1.0;
  MissDistance out;
  double cur = -tp.R;
  long budget = tp.tol.max_steps;
  try {
    for (double nxt : cuts) {
      for (int j = 0; j < m; ++j) {
        Vector col = Y.col(j);
        col = detail::sweep(A, Forcing::zero(), cur, nxt, std::move(col),
                            tp.tol, budget, nullptr);
        Y.col(j) = col;
      }
      cur = nxt;
      const double mx = Y.cwiseAbs().maxCoeff();
      if (mx > 1e100) {
        Y /= mx;
        out.log_scale += m * std::log(mx);
      }
    }
  } catch (const BlowupError&) {
    out.overflow = true;
    out.value = Complex(std::numeric_limits<double>::infinity(), 0.0);
    return out;
  }
  out.value = Matrix(Y.topRows(m)).determinant();
  out.overflow = !std::isfinite(std::abs(out.value));
  return out;
}

struct EigenvalueHit {
  Complex lambda;
  double miss = 0.0;   // |d(lambda)| after polishing
  int multiplicity = 1;
};

struct SpectralReport {
  std::vector<EigenvalueHit> eigenvalues;
  std::vector<double> oracle_deltas;  // filled by cross-checks, may be empty
  std::vector<std::string> notes;
  double R = 0.0;
  double det_scale = 1.0;  // typical |d| over the search grid
};

namespace detail {

inline Complex scaled_d(const TruncatedProblem& tp, Complex lam) {
  const MissDistance d = miss_distance(tp, lam);
  if (d.overflow) return Complex(std::numeric_limits<double>::infinity(), 0.0);
  return d.value * std::exp(d.log_scale);
}

}  // namespace detail

// Dirichlet eigenvalues of the truncation inside the window.  Real windows
// with a real-valued determinant use bisection over sign changes; otherwise
// a coarse |d| grid seeds Newton iterations with deflation.
inline SpectralReport truncated_eigenvalues(const TruncatedProblem& tp) {
  SpectralReport rep;
  rep.R = tp.R;
  const Window& w = tp.window;

  if (w.is_real()) {
    const int n_grid = 201;
    std::vector<double> lam(n_grid), dre(n_grid);
    double scale = 0.0;
    bool real_det = true;
    for (int i = 0; i < n_grid; ++i) {
      lam[i] = w.re_lo + (w.re_hi - w.re_lo) * i / (n_grid - 1);
      const Complex d = detail::scaled_d(tp, Complex(lam[i], 0.0));
      dre[i] = d.real();
      scale = std::max(scale, std::abs(d));
      if (std::abs(d.imag()) > 1e-8 * std::max(1.0, std::abs(d)))
        real_det = false;
    }
    rep.det_scale = scale;
    if (real_det) {
      for (int i = 0; i + 1 < n_grid; ++i) {
        if (dre[i] == 0.0 || dre[i] * dre[i + 1] >= 0.0) continue;
        double lo = lam[i], hi = lam[i + 1], flo = dre[i];
        for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + std::abs(hi));
             ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = detail::scaled_d(tp, Complex(mid, 0.0)).real();
          if (fm == 0.0) {
            lo = hi = mid;
            break;
          }
          if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        const double root = 0.5 * (lo + hi);
        const double miss = std::abs(detail::scaled_d(tp, Complex(root, 0.0)));
        if (miss <= tp.root_tol * std::max(scale, 1e-300))
          rep.eigenvalues.push_back({Complex(root, 0.0), miss, 1});
        else
          rep.notes.push_back("sign change near " + std::to_string(root) +
                              " did not polish below tolerance");
      }
      return rep;
    }
    rep.notes.push_back("determinant not real on real window; using complex search");
  }

  // complex rectangle: coarse |d| grid, Newton from local minima, deflation
  const int n = 41;
  const double ilo = w.is_real() ? -1.0 : w.im_lo;
  const double ihi = w.is_real() ? 1.0 : w.im_hi;
  Eigen::MatrixXd mag(n, n);
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Complex lam(w.re_lo + (w.re_hi - w.re_lo) * i / (n - 1),
                        ilo + (ihi - ilo) * j / (n - 1));
      mag(i, j) = std::abs(detail::scaled_d(tp, lam));
      scale = std::max(scale, mag(i, j));
    }
  rep.det_scale = scale;
  const double span = std::max(w.re_hi - w.re_lo, ihi - ilo);
  const double dstep = 1e-6 * std::max(1.0, span);

  std::vector<Complex> found;
  auto deflated = [&](Complex lam) {
    Complex d = detail::scaled_d(tp, lam);
    for (Complex r : found) d /= (lam - r);
    return d;
  };
  std::vector<std::pair<double, Complex>> seeds;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= n || jj >= n || (di == 0 && dj == 0))
            continue;
          if (mag(ii, jj) < mag(i, j)) {
            is_min = false;
            break;
          }
        }
      if (is_min)
        seeds.push_back({mag(i, j),
                         Complex(w.re_lo + (w.re_hi - w.re_lo) * i / (n - 1),
                                 ilo + (ihi - ilo) * j / (n - 1))});
    }
  std::sort(seeds.begin(), seeds.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  for (const auto& [mag0, seed] : seeds) {
    Complex lam = seed;
    bool ok = false;
    for (int it = 0; it < 60; ++it) {
      const Complex d = deflated(lam);
      const Complex dp =
          (deflated(lam + dstep) - deflated(lam - dstep)) / (2.0 * dstep);
      if (std::abs(dp) == 0.0) break;
      const Complex step = d / dp;
      lam -= step;
      if (!std::isfinite(lam.real()) || !std::isfinite(lam.imag())) break;
      if (std::abs(step) < 1e-11 * std::max(1.0, std::abs(lam))) {
        ok = true;
        break;
      }
    }
    if (!ok) continue;
    if (lam.real() < w.re_lo - 1e-9 || lam.real() > w.re_hi + 1e-9 ||
        lam.imag() < ilo - 1e-9 || lam.imag() > ihi + 1e-9)
      continue;
    const double miss = std::abs(detail::scaled_d(tp, lam));
    if (miss > tp.root_tol * std::max(scale, 1e-300)) {
      rep.notes.push_back("Newton candidate rejected, |d| too large");
      continue;
    }
    bool dup = false;
    for (auto& hit : rep.eigenvalues)
      if (std::abs(hit.lambda - lam) < 1e-7 * std::max(1.0, std::abs(lam))) {
        hit.multiplicity++;
        dup = true;
        break;
      }
    if (!dup) rep.eigenvalues.push_back({lam, miss, 1});
    found.push_back(lam);
  }
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(),
            [](const EigenvalueHit& a, const EigenvalueHit& b) {
              return a.lambda.real() < b.lambda.real();
            });
  return rep;
}

struct FdMatrix {
  Eigen::SparseMatrix<Complex> M;
  double h = 0.0;
  std::vector<double> nodes;  // interior grid points
  std::vector<std::string> warnings;
  bool is_real = false;
};

// Central-difference discretization of l on [-R,R] with Dirichlet rows
// eliminated: -u'' -> second differences, plus the regular part of the
// potential s + Q' sampled at nodes, plus each jump of Q contributing its
// delta coupling DeltaQ/h at the nearest interior node.
inline FdMatrix discretize_fd(const TruncatedProblem& tp, int N) {
  if (N < 16) throw std::invalid_argument("discretize_fd: N >= 16 required");
  const int m = tp.potential.dim();
  const double R = tp.R, h = 2.0 * R / N;
  const int nin = N - 1;
  FdMatrix fd;
  fd.h = h;
  fd.nodes.resize(nin);
  for (int i = 0; i < nin; ++i) fd.nodes[i] = -R + (i + 1) * h;

  const MatrixFunction Qprime = tp.potential.Q().derivative();
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<std::size_t>(nin) * m * (m + 2));
  auto at = [m](int node, int comp) { return node * m + comp; };
  for (int i = 0; i < nin; ++i) {
    const double x = fd.nodes[i];
    const Matrix V = tp.potential.s().eval(x) + Qprime.eval(x);
    for (int r = 0; r < m; ++r) {
      trip.emplace_back(at(i, r), at(i, r), Complex(2.0 / (h * h), 0.0));
      if (i > 0) trip.emplace_back(at(i, r), at(i - 1, r), Complex(-1.0 / (h * h), 0.0));
      if (i + 1 < nin) trip.emplace_back(at(i, r), at(i + 1, r), Complex(-1.0 / (h * h), 0.0));
      for (int c = 0; c < m; ++c)
        if (V(r, c) != 0.0) trip.emplace_back(at(i, r), at(i, c), V(r, c));
    }
  }
  for (double xj : tp.potential.Q().jump_points()) {
    if (xj <= -R || xj >= R) continue;
    const double pos = (xj + R) / h;  // node index + 1 in grid coordinates
    int nearest = static_cast<int>(std::lround(pos)) - 1;
    nearest = std::clamp(nearest, 0, nin - 1);
    const double offset = std::abs(pos - std::lround(pos));
    if (std::abs(offset - 0.5) < 1e-12)
      fd.warnings.push_back("jump at x=" + std::to_string(xj) +
                            " equidistant between nodes; assigned to node " +
                            std::to_string(nearest));
    const Matrix dQ = tp.potential.Q().jump(xj);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c)
        if (dQ(r, c) != 0.0)
          trip.emplace_back(at(nearest, r), at(nearest, c), dQ(r, c) / h);
  }
  fd.M.resize(nin * m, nin * m);
  fd.M.setFromTriplets(trip.begin(), trip.end());
  fd.is_real = true;
  for (int k = 0; k < fd.M.outerSize() && fd.is_real; ++k)
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(fd.M, k); it; ++it)
      if (it.value().imag() != 0.0) {
        fd.is_real = false;
        break;
      }
  return fd;
}

// All eigenvalues of the FD matrix, sorted by real part.  Real symmetric
// matrices go through the self-adjoint solver; everything else through the
// dense complex solver (desk-scale sizes only).
inline std::vector<Complex> fd_eigenvalues(const FdMatrix& fd) {
  const Eigen::Index n = fd.M.rows();
  std::vector<Complex> out;
  out.reserve(n);
  if (fd.is_real) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < fd.M.outerSize(); ++k)
      for (Eigen::SparseMatrix<Complex>::InnerIterator it(fd.M, k); it; ++it)
        D(it.row(), it.col()) = it.value().real();
    if (D.isApprox(D.transpose())) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D,
                                                        Eigen::EigenvaluesOnly);
      for (Eigen::Index i = 0; i < n; ++i)
        out.push_back(Complex(es.eigenvalues()(i), 0.0));
      return out;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(D, false);
    for (Eigen::Index i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i));
  } else {
    Eigen::MatrixXcd D(fd.M);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(D, false);
    for (Eigen::Index i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i));
  }
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

struct OracleEstimate {
  Complex extrapolated{0.0, 0.0};
  double error_bar = 0.0;
  double observed_order = 0.0;
  std::vector<Complex> grid_values;  // at N, 2N, 4N
};

namespace detail {

inline Complex nearest_eigenvalue(const std::vector<Complex>& evs,
                                  Complex target) {
  Complex best = evs.front();
  for (Complex e : evs)
    if (std::abs(e - target) < std::abs(best - target)) best = e;
  return best;
}

}  // namespace detail

// Richardson-extrapolated FD estimate of the eigenvalue nearest to target,
// from grids N, 2N, 4N.  The error bar is the last grid-to-grid delta,
// conservative for any convergence order >= 1.
inline OracleEstimate fd_oracle_eigenvalue(const TruncatedProblem& tp,
                                           Complex target, int N) {
  OracleEstimate est;
  for (int k = 0; k < 3; ++k) {
    const auto evs = fd_eigenvalues(discretize_fd(tp, N << k));
    est.grid_values.push_back(detail::nearest_eigenvalue(evs, target));
  }
  const Complex d1 = est.grid_values[1] - est.grid_values[0];
  const Complex d2 = est.grid_values[2] - est.grid_values[1];
  if (std::abs(d2) > 0.0 && std::abs(d1) > std::abs(d2)) {
    est.observed_order = std::log2(std::abs(d1) / std::abs(d2));
    const double factor = std::pow(2.0, est.observed_order) - 1.0;
    est.extrapolated = est.grid_values[2] + d2 / factor;
  } else {
    est.observed_order = 0.0;
    est.extrapolated = est.grid_values[2];
  }
  est.error_bar = std::max(std::abs(d2), 1e-12);
  return est;
}

// Crank-Nicolson evolution u_{k+1} = (I + dt/2 L)^{-1} (I - dt/2 L) u_k;
// returns the discrete L^2 norms ||u_k||, k = 0..steps.
inline std::vector<double> contraction_test(const FdMatrix& fd,
                                            const Vector& u0, double dt,
                                            int steps) {
  if (dt <= 0.0) throw std::invalid_argument("contraction_test: dt must be positive");
  const Eigen::Index n = fd.M.rows();
  if (u0.size() != n)
    throw DimensionError("contraction_test: u0 does not match FD grid");
  Eigen::SparseMatrix<Complex> I(n, n);
  I.setIdentity();
  Eigen::SparseMatrix<Complex> Ap = I + (dt / 2.0) * fd.M;
  Eigen::SparseMatrix<Complex> Am = I - (dt / 2.0) * fd.M;
  Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
  lu.compute(Ap);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error(
        "contraction_test: I + dt/2 L is singular (dt*spectrum hits -2)");
  std::vector<double> norms;
  norms.reserve(steps + 1);
  const double sq = std::sqrt(fd.h);
  Vector u = u0;
  norms.push_back(sq * u.norm());
  for (int k = 0; k < steps; ++k) {
    u = lu.solve(Vector(Am * u));
    norms.push_back(sq * u.norm());
  }
  return norms;
}

// Conjugation check for symmetric potentials: solving l with (c0,c1) and
// l+ with (conj c0, conj c1) at conj(lambda) must give conjugate
// trajectories, since Q* = conj(Q) when Q = Q^T.
inline double j_symmetry_residual(const Potential& p, const CauchyData& data,
                                  Complex lambda, double a, double b,
                                  const Tolerances& tol = {},
                                  int samples = 201) {
  const SymmetryClass cls = classify_symmetry(p);
  if (cls == SymmetryClass::general)
    throw std::invalid_argument(
        "j_symmetry_residual: potential is neither selfadjoint nor complex_symmetric");
  const QuasiSolution u = solve_cauchy(p, false, lambda, data, a, b, tol);
  CauchyData cdata = data;
  cdata.c0 = data.c0.conjugate();
  cdata.c1 = data.c1.conjugate();
  const QuasiSolution v =
      solve_cauchy(p, true, std::conj(lambda), cdata, a, b, tol);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = a + (b - a) * i / (samples - 1);
    const double r = (u.u(x).conjugate() - v.u(x)).norm() +
                     (u.u1(x).conjugate() - v.u1(x)).norm();
    worst = std::max(worst, r);
  }
  return worst;
}

}  // namespace szq
