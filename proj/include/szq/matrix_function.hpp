#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "szq/types.hpp"

namespace szq {

// How values continue beyond the outermost breakpoints.
enum class Extension { constant, zero };

// Piecewise-polynomial m x m complex matrix function of x.
//
// With k breakpoints there are k+1 pieces: the k-1 interior intervals plus
// the two unbounded extension pieces.  Under Extension::constant the outer
// polynomials are evaluated with the argument clamped to the adjacent
// breakpoint, so values stay frozen beyond the grid; under Extension::zero
// they vanish there.  A breakpoint-free function is a single global
// polynomial and the extension rule is moot.
class MatrixFunction {
 public:
  // pieces[i] is the coefficient list {c0, c1, ...} of c0 + c1*x + ... on
  // the i-th interval, matrices m x m.
  MatrixFunction(int m, std::vector<double> breakpoints,
                 std::vector<std::vector<Matrix>> pieces,
                 Extension ext = Extension::constant, int max_degree = 8)
      : m_(m),
        breakpoints_(std::move(breakpoints)),
        pieces_(std::move(pieces)),
        ext_(ext) {
    if (m_ <= 0) throw DimensionError("MatrixFunction: m must be positive");
    for (std::size_t i = 1; i < breakpoints_.size(); ++i)
      if (!(breakpoints_[i - 1] < breakpoints_[i]))
        throw BreakpointError("MatrixFunction: breakpoints not increasing");
    if (pieces_.size() != breakpoints_.size() + 1)
      throw BreakpointError("MatrixFunction: need #breakpoints+1 pieces");
    for (const auto& p : pieces_) {
      if (p.empty())
        throw BreakpointError("MatrixFunction: empty piece");
      if (static_cast<int>(p.size()) > max_degree + 1)
        throw BreakpointError("MatrixFunction: piece degree exceeds cap");
      for (const auto& c : p)
        if (c.rows() != m_ || c.cols() != m_)
          throw DimensionError("MatrixFunction: coefficient not m x m");
    }
  }

  static MatrixFunction constant(int m, const Matrix& value) {
    return MatrixFunction(m, {}, {{value}});
  }

  static MatrixFunction zero(int m) {
    return constant(m, Matrix::Zero(m, m));
  }

  // value_left for x < at, value_right for x > at.
  static MatrixFunction step(int m, double at, const Matrix& value_left,
                             const Matrix& value_right) {
    return MatrixFunction(m, {at}, {{value_left}, {value_right}});
  }

  int dim() const { return m_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<std::vector<Matrix>>& pieces() const { return pieces_; }
  Extension extension() const { return ext_; }

  Matrix eval(double x, Side side = Side::automatic) const {
    const std::size_t idx = piece_index(x, side);
    double arg = x;
    if (ext_ == Extension::zero && !breakpoints_.empty()) {
      if (idx == 0 && (x < breakpoints_.front() ||
                       (x == breakpoints_.front() && side == Side::left)))
        return Matrix::Zero(m_, m_);
      if (idx == pieces_.size() - 1 &&
          (x > breakpoints_.back() ||
           (x == breakpoints_.back() && side != Side::left)))
        return Matrix::Zero(m_, m_);
    }
    if (ext_ == Extension::constant && !breakpoints_.empty()) {
      if (idx == 0) arg = std::max(x, breakpoints_.front());
      if (idx == pieces_.size() - 1) arg = std::min(x, breakpoints_.back());
    }
    return eval_poly(pieces_[idx], arg);
  }

  // Right minus left one-sided values at x.
  Matrix jump(double x) const {
    return eval(x, Side::right) - eval(x, Side::left);
  }

  // Breakpoints carrying a genuine discontinuity.
  std::vector<double> jump_points() const {
    std::vector<double> out;
    for (double b : breakpoints_)
      if (jump(b).norm() > 0.0) out.push_back(b);
    return out;
  }

  // Classical piecewise derivative; jumps are dropped (they live in the
  // distributional part and are reported by jump_points()).
  MatrixFunction derivative() const {
    std::vector<std::vector<Matrix>> dp;
    dp.reserve(pieces_.size());
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const auto& p = pieces_[i];
      const bool outer = !breakpoints_.empty() &&
                         (i == 0 || i == pieces_.size() - 1);
      std::vector<Matrix> d;
      if (outer || p.size() == 1) {
        d.push_back(Matrix::Zero(m_, m_));
      } else {
        for (std::size_t k = 1; k < p.size(); ++k)
          d.push_back(static_cast<double>(k) * p[k]);
      }
      dp.push_back(std::move(d));
    }
    return MatrixFunction(m_, breakpoints_, std::move(dp), ext_);
  }

  MatrixFunction hermitian_conjugate() const {
    return map([](const Matrix& c) { return Matrix(c.adjoint()); });
  }

  MatrixFunction transpose() const {
    return map([](const Matrix& c) { return Matrix(c.transpose()); });
  }

  MatrixFunction conjugate() const {
    return map([](const Matrix& c) { return Matrix(c.conjugate()); });
  }

  // Exact coefficient-wise comparison, no tolerance.
  friend bool operator==(const MatrixFunction& a, const MatrixFunction& b) {
    if (a.m_ != b.m_ || a.breakpoints_ != b.breakpoints_ || a.ext_ != b.ext_)
      return false;
    if (a.pieces_.size() != b.pieces_.size()) return false;
    for (std::size_t i = 0; i < a.pieces_.size(); ++i) {
      const auto &pa = a.pieces_[i], &pb = b.pieces_[i];
      const std::size_t n = std::max(pa.size(), pb.size());
      for (std::size_t k = 0; k < n; ++k) {
        const Matrix ca = k < pa.size() ? pa[k] : Matrix::Zero(a.m_, a.m_);
        const Matrix cb = k < pb.size() ? pb[k] : Matrix::Zero(a.m_, a.m_);
        if (ca != cb) return false;
      }
    }
    return true;
  }

 private:
  template <class F>
  MatrixFunction map(F&& f) const {
    std::vector<std::vector<Matrix>> out;
    out.reserve(pieces_.size());
    for (const auto& p : pieces_) {
      std::vector<Matrix> q;
      q.reserve(p.size());
      for (const auto& c : p) q.push_back(f(c));
      out.push_back(std::move(q));
    }
    return MatrixFunction(m_, breakpoints_, std::move(out), ext_);
  }

  std::size_t piece_index(double x, Side side) const {
    // number of breakpoints strictly below x
    auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
    std::size_t idx = static_cast<std::size_t>(it - breakpoints_.begin());
    if (it != breakpoints_.end() && *it == x && side != Side::left) ++idx;
    return idx;
  }

  static Matrix eval_poly(const std::vector<Matrix>& coeffs, double x) {
    Matrix v = coeffs.back();
    for (std::size_t k = coeffs.size() - 1; k-- > 0;) v = coeffs[k] + x * v;
    return v;
  }

  int m_;
  std::vector<double> breakpoints_;
  std::vector<std::vector<Matrix>> pieces_;
  Extension ext_;
};

inline MatrixFunction make_matrix_function(
    int m, std::vector<double> breakpoints,
    std::vector<std::vector<Matrix>> pieces,
    Extension ext = Extension::constant, int max_degree = 8) {
  return MatrixFunction(m, std::move(breakpoints), std::move(pieces), ext,
                        max_degree);
}

}  // namespace szq
