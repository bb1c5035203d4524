#pragma once

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "szq/matrix_function.hpp"
#include "szq/types.hpp"

namespace szq {

// Distributional matrix potential q = Q' + s with Q piecewise polynomial
// (jumps of Q contribute delta terms to q) and s piecewise polynomial.
class Potential {
 public:
  Potential(MatrixFunction Q, MatrixFunction s)
      : Q_(std::move(Q)), s_(std::move(s)) {
    if (Q_.dim() != s_.dim())
      throw DimensionError("Potential: Q and s dimensions differ");
    classify();
  }

  static Potential free_particle(int m) {
    return Potential(MatrixFunction::zero(m), MatrixFunction::zero(m));
  }

  // q = alpha * delta at x = at, i.e. Q = alpha * H(x - at), s = 0.
  static Potential delta(int m, const Matrix& alpha, double at = 0.0) {
    return Potential(
        MatrixFunction::step(m, at, Matrix::Zero(m, m), alpha),
        MatrixFunction::zero(m));
  }

  static Potential scalar_delta(Complex alpha, double at = 0.0) {
    Matrix a(1, 1);
    a(0, 0) = alpha;
    return delta(1, a, at);
  }

  int dim() const { return Q_.dim(); }
  const MatrixFunction& Q() const { return Q_; }
  const MatrixFunction& s() const { return s_; }
  SymmetryClass symmetry_class() const { return symmetry_class_; }

  // Breakpoints of either component, merged and deduplicated.
  std::vector<double> breakpoints() const {
    std::set<double> b(Q_.breakpoints().begin(), Q_.breakpoints().end());
    b.insert(s_.breakpoints().begin(), s_.breakpoints().end());
    return {b.begin(), b.end()};
  }

  friend bool operator==(const Potential& a, const Potential& b) {
    return a.Q_ == b.Q_ && a.s_ == b.s_;
  }

 private:
  void classify() {
    if (Q_ == Q_.hermitian_conjugate() && s_ == s_.hermitian_conjugate())
      symmetry_class_ = SymmetryClass::selfadjoint;
    else if (Q_ == Q_.transpose() && s_ == s_.transpose())
      symmetry_class_ = SymmetryClass::complex_symmetric;
    else
      symmetry_class_ = SymmetryClass::general;
  }

  MatrixFunction Q_;
  MatrixFunction s_;
  SymmetryClass symmetry_class_;
};

// Lagrange adjoint data (Q*, s*), pointwise Hermitian conjugates.
inline Potential adjoint_potential(const Potential& p) {
  return Potential(p.Q().hermitian_conjugate(), p.s().hermitian_conjugate());
}

inline SymmetryClass classify_symmetry(const Potential& p) {
  return p.symmetry_class();
}

// The 2m x 2m first-order coefficient matrix
//   A(x) = [ Q      I  ]
//          [ -Q^2+s -Q ]
// optionally with the bottom-left block shifted by -lambda*I (spectral
// parameter) and built from the adjoint data (Q*, s*).
class SystemMatrix {
 public:
  explicit SystemMatrix(Potential p, bool adjoint = false,
                        Complex lambda = 0.0)
      : p_(std::move(p)), adjoint_(adjoint), lambda_(lambda) {}

  int dim() const { return p_.dim(); }
  bool adjoint() const { return adjoint_; }
  Complex lambda() const { return lambda_; }
  const Potential& potential() const { return p_; }

  // Effective Q entering the quasiderivative (Q or Q*).
  Matrix effective_Q(double x, Side side = Side::automatic) const {
    Matrix Q = p_.Q().eval(x, side);
    return adjoint_ ? Matrix(Q.adjoint()) : Q;
  }

  Matrix operator()(double x, Side side = Side::automatic) const {
    const int m = p_.dim();
    Matrix Q = effective_Q(x, side);
    Matrix s = p_.s().eval(x, side);
    if (adjoint_) s = s.adjoint().eval();
    Matrix A(2 * m, 2 * m);
    A.topLeftCorner(m, m) = Q;
    A.topRightCorner(m, m) = Matrix::Identity(m, m);
    A.bottomLeftCorner(m, m) =
        -(Q * Q) + s - lambda_ * Matrix::Identity(m, m);
    A.bottomRightCorner(m, m) = -Q;
    return A;
  }

  std::vector<double> discontinuities() const { return p_.breakpoints(); }

 private:
  Potential p_;
  bool adjoint_;
  Complex lambda_;
};

inline SystemMatrix shin_zettl(const Potential& p) {
  return SystemMatrix(p);
}

}  // namespace szq
