#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <set>
#include <utility>
#include <vector>

#include "szq/potential.hpp"
#include "szq/test_function.hpp"
#include "szq/types.hpp"

namespace szq {

struct CauchyData {
  double x0 = 0.0;
  Vector c0, c1;

  static CauchyData scalar(double x0, Complex c0, Complex c1) {
    CauchyData d;
    d.x0 = x0;
    d.c0 = Vector::Constant(1, c0);
    d.c1 = Vector::Constant(1, c1);
    return d;
  }
};

struct Tolerances {
  double rtol = 1e-10;
  double atol = 1e-12;
  long max_steps = 10'000'000;
  double blowup_threshold = 1e250;
};

// Right-hand side forcing f of l[u] = lambda*u + f.
struct Forcing {
  std::function<Vector(double)> f;  // empty means zero
  std::vector<double> breakpoints;

  static Forcing zero() { return {}; }
  bool is_zero() const { return !f; }
  Vector eval(double x, int m) const {
    return f ? f(x) : Vector(Vector::Zero(m));
  }
};

namespace detail {

// Dormand-Prince 5(4) coefficients.
struct Dopri5 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113,
                          a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                          a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432.0,
                          d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0,
                          d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0,
                          d7 = 69997945.0 / 29380423.0;
};

}  // namespace detail

// One accepted integrator step with its quartic dense-output polynomial.
struct DenseStep {
  double x0 = 0.0, h = 0.0;
  std::array<Vector, 5> rcont;

  double lo() const { return std::min(x0, x0 + h); }
  double hi() const { return std::max(x0, x0 + h); }

  Vector eval(double x) const {
    const double th = (x - x0) / h, th1 = 1.0 - th;
    return rcont[0] +
           th * (rcont[1] + th1 * (rcont[2] + th * (rcont[3] + th1 * rcont[4])));
  }
};

// Solved trajectory of the first-order system on [a,b] with dense output.
class QuasiSolution {
 public:
  QuasiSolution(SystemMatrix system, Forcing forcing, double a, double b,
                CauchyData data, Tolerances tol, std::vector<DenseStep> steps)
      : system_(std::move(system)),
        forcing_(std::move(forcing)),
        a_(a),
        b_(b),
        data_(std::move(data)),
        tol_(tol),
        steps_(std::move(steps)) {
    std::sort(steps_.begin(), steps_.end(),
              [](const DenseStep& p, const DenseStep& q) { return p.lo() < q.lo(); });
  }

  double a() const { return a_; }
  double b() const { return b_; }
  int dim() const { return system_.dim(); }
  bool adjoint() const { return system_.adjoint(); }
  Complex lambda() const { return system_.lambda(); }
  const Potential& potential() const { return system_.potential(); }
  const CauchyData& data() const { return data_; }
  const Tolerances& tolerances() const { return tol_; }
  const std::vector<DenseStep>& steps() const { return steps_; }

  // Full state (u, u^[1]) in C^{2m}.
  Vector state(double x) const {
    if (x < a_ - 1e-12 || x > b_ + 1e-12)
      throw std::out_of_range("QuasiSolution: x outside solution interval");
    x = std::clamp(x, a_, b_);
    if (steps_.empty()) throw std::runtime_error("QuasiSolution: empty");
    // last step with lo() <= x
    std::size_t lo = 0, hi = steps_.size();
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      if (steps_[mid].lo() <= x)
        lo = mid;
      else
        hi = mid;
    }
    // x may sit on the shared endpoint of two steps; either evaluates alike.
    return steps_[lo].eval(x);
  }

  Vector u(double x) const { return state(x).head(dim()); }
  Vector u1(double x) const { return state(x).tail(dim()); }

  // Classical derivative u' = u^[1] + Q u, one-sided at jumps of Q.
  Vector u_prime(double x, Side side = Side::automatic) const {
    const Vector y = state(x);
    const Matrix Q = system_.effective_Q(x, side);
    return y.tail(dim()) + Q * y.head(dim());
  }

  // Pointwise value of l[u] (or l+[u] for adjoint solves): lambda*u + f.
  Vector l_value(double x) const {
    return lambda() * u(x) + forcing_.eval(x, dim());
  }

  const Forcing& forcing() const { return forcing_; }
  const SystemMatrix& system() const { return system_; }

 private:
  SystemMatrix system_;
  Forcing forcing_;
  double a_, b_;
  CauchyData data_;
  Tolerances tol_;
  std::vector<DenseStep> steps_;
};

namespace detail {

using Rhs = std::function<Vector(double, const Vector&)>;

// Adaptive DOPRI5 over one smooth segment [from,to] (either direction);
// appends accepted steps with dense output.
inline Vector integrate_segment(const Rhs& rhs, double from, double to,
                                Vector y, const Tolerances& tol,
                                long& step_budget,
                                std::vector<DenseStep>* out) {
  using D = Dopri5;
  const double span = to - from;
  if (span == 0.0) return y;
  const double dir = span > 0 ? 1.0 : -1.0;
  double x = from;
  double h = span * 0.01;
  Vector k1 = rhs(x, y);
  const auto n = y.size();
  Vector k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y1(n), err(n);
  while (dir * (to - x) > 0.0) {
    if (step_budget-- <= 0)
      throw ToleranceError("solve_cauchy: step budget exhausted");
    if (dir * (x + h - to) > 0.0) h = to - x;
    k2 = rhs(x + D::c2 * h, Vector(y + h * (D::a21 * k1)));
    k3 = rhs(x + D::c3 * h, Vector(y + h * (D::a31 * k1 + D::a32 * k2)));
    k4 = rhs(x + D::c4 * h,
             Vector(y + h * (D::a41 * k1 + D::a42 * k2 + D::a43 * k3)));
    k5 = rhs(x + D::c5 * h, Vector(y + h * (D::a51 * k1 + D::a52 * k2 +
                                            D::a53 * k3 + D::a54 * k4)));
    k6 = rhs(x + h, Vector(y + h * (D::a61 * k1 + D::a62 * k2 + D::a63 * k3 +
                                    D::a64 * k4 + D::a65 * k5)));
    y1 = y + h * (D::a71 * k1 + D::a73 * k3 + D::a74 * k4 + D::a75 * k5 +
                  D::a76 * k6);
    k7 = rhs(x + h, y1);
    err = h * (D::e1 * k1 + D::e3 * k3 + D::e4 * k4 + D::e5 * k5 +
               D::e6 * k6 + D::e7 * k7);
    double errnorm = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc =
          tol.atol + tol.rtol * std::max(std::abs(y(i)), std::abs(y1(i)));
      const double e = std::abs(err(i)) / sc;
      errnorm += e * e;
    }
    errnorm = std::sqrt(errnorm / static_cast<double>(n));
    if (!std::isfinite(errnorm) || !y1.allFinite() ||
        y1.norm() > tol.blowup_threshold)
      throw BlowupError(x);
    if (errnorm <= 1.0) {
      if (out) {
        DenseStep st;
        st.x0 = x;
        st.h = h;
        const Vector dy = y1 - y;
        st.rcont[0] = y;
        st.rcont[1] = dy;
        st.rcont[2] = h * k1 - dy;
        st.rcont[3] = dy - h * k7 - st.rcont[2];
        st.rcont[4] = h * (D::d1 * k1 + D::d3 * k3 + D::d4 * k4 +
                           D::d5 * k5 + D::d6 * k6 + D::d7 * k7);
        out->push_back(std::move(st));
      }
      x += h;
      y.swap(y1);
      k1.swap(k7);
    }
    double fac = 0.9 * std::pow(std::max(errnorm, 1e-16), -0.2);
    h *= std::clamp(fac, 0.2, 10.0);
  }
  return y;
}

inline std::vector<double> restart_points(const SystemMatrix& A,
                                          const Forcing& f, double lo,
                                          double hi) {
  std::set<double> pts;
  for (double d : A.discontinuities())
    if (d > lo && d < hi) pts.insert(d);
  for (double d : f.breakpoints)
    if (d > lo && d < hi) pts.insert(d);
  return {pts.begin(), pts.end()};
}

// Integrate from x0 toward target, restarting at every discontinuity.
inline Vector sweep(const SystemMatrix& A, const Forcing& f, double x0,
                    double target, Vector y, const Tolerances& tol,
                    long& budget, std::vector<DenseStep>* out) {
  const int m = A.dim();
  const bool up = target >= x0;
  std::vector<double> cuts =
      restart_points(A, f, std::min(x0, target), std::max(x0, target));
  if (!up) std::reverse(cuts.begin(), cuts.end());
  cuts.push_back(target);
  double cur = x0;
  for (double nxt : cuts) {
    const double lo = std::min(cur, nxt), hi = std::max(cur, nxt);
    auto rhs = [&, lo, hi](double x, const Vector& yy) {
      Side side = Side::automatic;
      if (x <= lo)
        side = Side::right;
      else if (x >= hi)
        side = Side::left;
      Vector g = Vector::Zero(2 * m);
      if (!f.is_zero()) g.tail(m) = -f.f(x);
      return Vector(A(x, side) * yy + g);
    };
    y = integrate_segment(rhs, cur, nxt, std::move(y), tol, budget, out);
    cur = nxt;
  }
  return y;
}

}  // namespace detail

// Solve l[u] = lambda*u + f (or the adjoint expression when adjoint_flag is
// set) with data u(x0)=c0, u^[1](x0)=c1, on [a,b], x0 in [a,b].
inline QuasiSolution solve_cauchy(const Potential& p, bool adjoint_flag,
                                  Complex lambda, const CauchyData& data,
                                  const Forcing& f, double a, double b,
                                  const Tolerances& tol = {}) {
  const int m = p.dim();
  if (data.c0.size() != m || data.c1.size() != m)
    throw DimensionError("solve_cauchy: Cauchy data dimension mismatch");
  if (!(a <= data.x0 && data.x0 <= b))
    throw std::invalid_argument("solve_cauchy: x0 outside [a,b]");
  SystemMatrix A(p, adjoint_flag, lambda);
  Vector y0(2 * m);
  y0.head(m) = data.c0;
  y0.tail(m) = data.c1;
  long budget = tol.max_steps;
  std::vector<DenseStep> steps;
  if (data.x0 < b)
    detail::sweep(A, f, data.x0, b, y0, tol, budget, &steps);
  if (data.x0 > a)
    detail::sweep(A, f, data.x0, a, y0, tol, budget, &steps);
  if (a == b || steps.empty()) {
    // degenerate interval: a single zero-length step holding the data
    DenseStep st;
    st.x0 = data.x0;
    st.h = 1.0;
    st.rcont = {y0, Vector(Vector::Zero(2 * m)), Vector(Vector::Zero(2 * m)),
                Vector(Vector::Zero(2 * m)), Vector(Vector::Zero(2 * m))};
    steps.push_back(std::move(st));
  }
  return QuasiSolution(std::move(A), f, a, b, data, tol, std::move(steps));
}

inline QuasiSolution solve_cauchy(const Potential& p, bool adjoint_flag,
                                  Complex lambda, const CauchyData& data,
                                  double a, double b,
                                  const Tolerances& tol = {}) {
  return solve_cauchy(p, adjoint_flag, lambda, data, Forcing::zero(), a, b,
                      tol);
}

// Propagator M(x0 -> x1): columns are the states at x1 of the 2m canonical
// initial vectors at x0.
inline Matrix fundamental_matrix(const Potential& p, bool adjoint_flag,
                                 Complex lambda, double x0, double x1,
                                 const Tolerances& tol = {}) {
  const int m = p.dim();
  SystemMatrix A(p, adjoint_flag, lambda);
  Matrix M(2 * m, 2 * m);
  for (int j = 0; j < 2 * m; ++j) {
    Vector y = Vector::Zero(2 * m);
    y(j) = 1.0;
    long budget = tol.max_steps;
    M.col(j) = detail::sweep(A, Forcing::zero(), x0, x1, std::move(y), tol,
                             budget, nullptr);
  }
  return M;
}

// Pointwise quasiderivative data of a solved trajectory.  u2 is the value
// of the differential expression applied to u, i.e. lambda*u + f.
struct QuasiDerivatives {
  Vector u, u_prime, u1, u2;
};

inline QuasiDerivatives quasiderivatives(const QuasiSolution& sol, double x,
                                         Side side = Side::automatic) {
  QuasiDerivatives d;
  d.u = sol.u(x);
  d.u1 = sol.u1(x);
  d.u_prime = sol.u_prime(x, side);
  d.u2 = sol.l_value(x);
  return d;
}

// phi * u with compact support, together with the product-rule values
//   l[phi u] = phi l[u] - phi'' u - 2 phi' u'.
inline CompactTestFunction mollify_to_domain(
    const std::shared_ptr<const QuasiSolution>& sol, const ScalarCutoff& phi) {
  if (phi.a < sol->a() || phi.b > sol->b())
    throw std::invalid_argument("mollify_to_domain: supp(phi) not inside interval");
  CompactTestFunction w;
  w.m = sol->dim();
  w.a = phi.a;
  w.b = phi.b;
  w.kinks = phi.kinks;
  for (double bp : sol->potential().breakpoints())
    if (bp > phi.a && bp < phi.b) w.kinks.push_back(bp);
  std::sort(w.kinks.begin(), w.kinks.end());
  w.u = [sol, phi](double x, Side) { return Vector(phi.phi(x) * sol->u(x)); };
  w.u_prime = [sol, phi](double x, Side side) {
    return Vector(phi.dphi(x) * sol->u(x) +
                  phi.phi(x) * sol->u_prime(x, side));
  };
  w.l_values = [sol, phi](double x, Side side) {
    return Vector(phi.phi(x) * sol->l_value(x) - phi.d2phi(x) * sol->u(x) -
                  2.0 * phi.dphi(x) * sol->u_prime(x, side));
  };
  return w;
}

}  // namespace szq
