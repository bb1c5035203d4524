#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <vector>

#include "szq/types.hpp"

namespace szq {

struct QuadResult {
  Complex value{0.0, 0.0};
  double error = 0.0;
};

namespace detail {

// Gauss 7 / Kronrod 15 pair on [-1,1].
inline constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Panel {
  double a, b;
  Complex value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Complex kron = kKronrodWeights[7] * f(c);
  Complex gauss = kGaussWeights[3] * f(c);
  for (int i = 0; i < 7; ++i) {
    const Complex fl = f(c - h * kKronrodNodes[i]);
    const Complex fr = f(c + h * kKronrodNodes[i]);
    kron += kKronrodWeights[i] * (fl + fr);
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * (fl + fr);
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.value = h * kron;
  const double diff = std::abs(h * (kron - gauss));
  p.error = std::min(diff, std::pow(200.0 * diff, 1.5));
  return p;
}

}  // namespace detail

// Adaptive Gauss-Kronrod with forced panel splits at the given interior
// points (kinks and jumps of the integrand).
inline QuadResult integrate(const std::function<Complex(double)>& f, double a,
                            double b, const std::vector<double>& splits = {},
                            double abs_tol = 1e-10, int max_panels = 50000) {
  if (a == b) return {};
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::vector<double> edges{a};
  {
    std::vector<double> s(splits);
    std::sort(s.begin(), s.end());
    for (double x : s)
      if (x > edges.back() && x < b) edges.push_back(x);
  }
  edges.push_back(b);

  std::priority_queue<detail::Panel> queue;
  Complex total{0.0, 0.0};
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    auto p = detail::gk15(f, edges[i], edges[i + 1]);
    total += p.value;
    err += p.error;
    queue.push(p);
  }
  int panels = static_cast<int>(edges.size()) - 1;
  auto good = [&] { return err <= abs_tol + 1e-13 * std::abs(total); };
  while (!good() && panels < max_panels && !queue.empty()) {
    const auto worst = queue.top();
    queue.pop();
    if (worst.b - worst.a < 1e-14 * (b - a)) continue;  // cannot refine further
    total -= worst.value;
    err -= worst.error;
    const double mid = 0.5 * (worst.a + worst.b);
    for (auto& half : {detail::gk15(f, worst.a, mid), detail::gk15(f, mid, worst.b)}) {
      total += half.value;
      err += half.error;
      queue.push(half);
    }
    ++panels;
  }
  if (!good() && panels >= max_panels)
    throw ToleranceError("integrate: panel budget exhausted");
  return {sign * total, err};
}

inline QuadResult integrate_real(const std::function<double(double)>& f,
                                 double a, double b,
                                 const std::vector<double>& splits = {},
                                 double abs_tol = 1e-10,
                                 int max_panels = 50000) {
  return integrate([&f](double x) { return Complex(f(x), 0.0); }, a, b, splits,
                   abs_tol, max_panels);
}

}  // namespace szq
