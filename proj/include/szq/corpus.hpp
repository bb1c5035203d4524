#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "szq/potential.hpp"
#include "szq/spectral.hpp"
#include "szq/types.hpp"

namespace szq {

struct BoundStateExpectation {
  Window window;
  int count = 0;
  std::optional<double> approx;  // expected real eigenvalue when known
  double tol = 1e-3;
};

// Documented expected behavior with its provenance (trivial identity or
// value derived by an independent computation).
struct Expectation {
  std::string description;
  std::string provenance;  // "trivial" or "derived: <how>"
};

struct CorpusEntry {
  std::string name;
  Potential potential;
  SymmetryClass expected_class = SymmetryClass::selfadjoint;
  bool expect_negative_witness = false;  // accretivity scan outcome
  std::optional<BoundStateExpectation> bound_state;
  double search_radius = 10.0;
  std::vector<Expectation> expectations;
};

namespace detail {

inline std::vector<Complex> poly_mul(const std::vector<Complex>& a,
                                     const std::vector<Complex>& b) {
  std::vector<Complex> c(a.size() + b.size() - 1, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

// Degree-4 interpolation of f at Chebyshev nodes of [lo,hi], monomial basis.
inline std::vector<Complex> cheb_fit(double (*f)(double), double lo, double hi) {
  constexpr int n = 5;
  Eigen::MatrixXd V(n, n);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double t = std::cos(M_PI * (2.0 * i + 1.0) / (2.0 * n));
    const double x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t;
    double p = 1.0;
    for (int k = 0; k < n; ++k) {
      V(i, k) = p;
      p *= x;
    }
    y(i) = f(x);
  }
  const Eigen::VectorXd c = V.fullPivLu().solve(y);
  std::vector<Complex> out(n);
  for (int k = 0; k < n; ++k) out[k] = Complex(c(k), 0.0);
  return out;
}

inline std::vector<Matrix> scalar_poly(const std::vector<Complex>& c) {
  std::vector<Matrix> out;
  out.reserve(c.size());
  for (Complex z : c) out.push_back(Matrix::Constant(1, 1, z));
  return out;
}

}  // namespace detail

// Piecewise-polynomial stand-in for a Miura pair Q = tanh, s = Q^2, so that
// q = Q' + Q^2 is smooth and close to the constant 1.  Degree-4 Chebyshev
// fits per unit interval on [-extent, extent], constant tails.
inline Potential miura_tanh_potential(int extent = 5) {
  std::vector<double> bps;
  for (int k = -extent; k <= extent; ++k) bps.push_back(static_cast<double>(k));
  std::vector<std::vector<Matrix>> qp, sp;
  qp.push_back(detail::scalar_poly({Complex(std::tanh(-(double)extent), 0.0)}));
  sp.push_back(detail::scalar_poly(
      {Complex(std::pow(std::tanh(-(double)extent), 2), 0.0)}));
  for (int k = -extent; k < extent; ++k) {
    auto c = detail::cheb_fit(
        +[](double x) { return std::tanh(x); }, static_cast<double>(k),
        static_cast<double>(k + 1));
    qp.push_back(detail::scalar_poly(c));
    sp.push_back(detail::scalar_poly(detail::poly_mul(c, c)));
  }
  qp.push_back(detail::scalar_poly({Complex(std::tanh((double)extent), 0.0)}));
  sp.push_back(detail::scalar_poly(
      {Complex(std::pow(std::tanh((double)extent), 2), 0.0)}));
  return Potential(MatrixFunction(1, bps, qp),
                   MatrixFunction(1, bps, sp, Extension::constant, 8));
}

// Q continuous piecewise linear, 0 left of -1 and dropping with slope -1.5
// on [-1,1]: q = Q' is a depth -1.5 square well of width 2.
inline Potential step_well_potential() {
  // piece on [-1,1]: -1.5*(x+1) = -1.5 - 1.5x
  std::vector<std::vector<Matrix>> qp;
  qp.push_back(detail::scalar_poly({Complex(0.0, 0.0)}));
  qp.push_back(detail::scalar_poly({Complex(-1.5, 0.0), Complex(-1.5, 0.0)}));
  qp.push_back(detail::scalar_poly({Complex(-3.0, 0.0)}));
  return Potential(MatrixFunction(1, {-1.0, 1.0}, qp),
                   MatrixFunction::zero(1));
}

inline std::vector<CorpusEntry> corpus() {
  std::vector<CorpusEntry> out;

  {
    CorpusEntry e{"free_m1", Potential::free_particle(1)};
    e.expected_class = SymmetryClass::selfadjoint;
    e.expect_negative_witness = false;
    e.bound_state = BoundStateExpectation{Window::real(-2.0, -0.01), 0, {}, 0.0};
    e.expectations = {
        {"accretive: kinetic term only, scan minimum >= 0", "trivial"},
        {"no eigenvalues below 0", "trivial: -u'' is nonnegative"}};
    out.push_back(std::move(e));
  }
  {
    CorpusEntry e{"free_m2", Potential::free_particle(2)};
    e.expected_class = SymmetryClass::selfadjoint;
    e.bound_state = BoundStateExpectation{Window::real(-2.0, -0.01), 0, {}, 0.0};
    e.expectations = {
        {"decoupled copy of free_m1; doubled multiplicities", "trivial"}};
    out.push_back(std::move(e));
  }
  {
    CorpusEntry e{"delta_minus2", Potential::scalar_delta(-2.0)};
    e.expected_class = SymmetryClass::selfadjoint;
    e.expect_negative_witness = true;
    e.bound_state = BoundStateExpectation{Window::real(-2.0, -0.5), 1, -1.0, 1e-6};
    e.expectations = {
        {"bound state at -1", "derived: -alpha^2/4 from the e^{-|x|} eigenfunction"},
        {"hat form value 2/w - 2, negative for w > 1",
         "derived: kinetic 2/w plus alpha*w(0)^2"}};
    out.push_back(std::move(e));
  }
  {
    CorpusEntry e{"delta_plus1", Potential::scalar_delta(1.0)};
    e.expected_class = SymmetryClass::selfadjoint;
    e.expect_negative_witness = false;
    e.bound_state = BoundStateExpectation{Window::real(-3.0, -0.01), 0, {}, 0.0};
    e.expectations = {
        {"accretivity scan nonnegative", "derived: form = 2/w + w(0)^2 > 0 for hats"},
        {"no bound states", "derived: repulsive delta"}};
    out.push_back(std::move(e));
  }
  {
    Matrix alpha = Matrix::Zero(2, 2);
    alpha(0, 0) = -2.0;
    alpha(1, 1) = 1.0;
    CorpusEntry e{"matrix_delta_diag", Potential::delta(2, alpha)};
    e.expected_class = SymmetryClass::selfadjoint;
    e.expect_negative_witness = true;
    e.bound_state = BoundStateExpectation{Window::real(-2.0, -0.5), 1, -1.0, 1e-6};
    e.expectations = {
        {"decouples into delta_minus2 and delta_plus1 channels", "trivial"},
        {"single bound state at -1 from the first channel",
         "derived: scalar delta_minus2 result"}};
    out.push_back(std::move(e));
  }
  {
    CorpusEntry e{"step_well", step_well_potential()};
    e.expected_class = SymmetryClass::selfadjoint;
    e.expect_negative_witness = true;
    e.bound_state = BoundStateExpectation{Window::real(-1.45, -0.2), 1, {}, 0.0};
    e.expectations = {
        {"one bound state of the width-2 depth-1.5 well",
         "derived: well parameter sqrt(1.5) < pi/2 admits exactly one even state"},
        {"wide hats see the negative well: scan reports a negative witness",
         "derived: form -> -3 + O(1/w) for hats of width w"}};
    out.push_back(std::move(e));
  }
  {
    CorpusEntry e{"miura_tanh", miura_tanh_potential()};
    e.expected_class = SymmetryClass::selfadjoint;
    e.expect_negative_witness = false;
    e.bound_state = BoundStateExpectation{Window::real(-2.0, 0.5), 0, {}, 0.0};
    e.search_radius = 8.0;
    e.expectations = {
        {"q = Q' + Q^2 is approximately 1: accretive, spectrum above ~1",
         "derived: sech^2 + tanh^2 = 1"}};
    out.push_back(std::move(e));
  }
  {
    CorpusEntry e{"complex_delta", Potential::scalar_delta(Complex(0.0, 1.0))};
    e.expected_class = SymmetryClass::complex_symmetric;
    e.expect_negative_witness = false;
    e.search_radius = 8.0;
    e.expectations = {
        {"J-symmetric: conjugation maps l-solutions to l+-solutions", "trivial: Q* = conj(Q)"},
        {"truncated eigenvalues leave the real axis",
         "derived: first-order perturbation i|u_n(0)|^2 of the Dirichlet modes"}};
    out.push_back(std::move(e));
  }
  {
    Matrix rot = Matrix::Zero(2, 2);
    rot(0, 1) = 1.0;
    rot(1, 0) = -1.0;
    CorpusEntry e{"rotation_delta", Potential::delta(2, rot)};
    e.expected_class = SymmetryClass::general;
    e.expect_negative_witness = false;
    e.expectations = {
        {"neither Hermitian nor symmetric", "derived: Q^T = -Q != Q and Q* = -Q != Q"}};
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace szq
