#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace szq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Which one-sided limit to take at a discontinuity point.
enum class Side { left, right, automatic };

enum class SymmetryClass { selfadjoint, complex_symmetric, general };

inline const char* to_string(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::selfadjoint: return "selfadjoint";
    case SymmetryClass::complex_symmetric: return "complex_symmetric";
    default: return "general";
  }
}

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct BreakpointError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Trajectory escaped the finite range during integration.
struct BlowupError : std::runtime_error {
  double last_x;
  explicit BlowupError(double x)
      : std::runtime_error("solution blow-up at x = " + std::to_string(x)),
        last_x(x) {}
};

struct ToleranceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace szq
