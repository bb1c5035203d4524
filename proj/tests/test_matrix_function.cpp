#include <catch2/catch_amalgamated.hpp>

#include "szq/matrix_function.hpp"

using namespace szq;

namespace {
Matrix scalar(Complex z) { return Matrix::Constant(1, 1, z); }
}  // namespace

TEST_CASE("zero function") {
  const auto f = MatrixFunction::zero(1);
  CHECK(f.eval(0.0)(0, 0) == 0.0);
  CHECK(f.eval(123.4)(0, 0) == 0.0);
  CHECK(f.jump_points().empty());
}

TEST_CASE("Heaviside step -2 H(x)") {
  const auto f = MatrixFunction::step(1, 0.0, scalar(0.0), scalar(-2.0));
  CHECK(f.eval(-1.0)(0, 0) == 0.0);
  CHECK(f.eval(1.0)(0, 0) == Complex(-2.0, 0.0));
  CHECK(f.eval(0.0, Side::left)(0, 0) == 0.0);
  CHECK(f.eval(0.0, Side::right)(0, 0) == Complex(-2.0, 0.0));
  CHECK(f.eval(0.0)(0, 0) == Complex(-2.0, 0.0));  // auto = right
  REQUIRE(f.jump_points() == std::vector<double>{0.0});
  CHECK(f.jump(0.0)(0, 0) == Complex(-2.0, 0.0));
}

TEST_CASE("constant identity, m = 2") {
  const auto f = MatrixFunction::constant(2, Matrix::Identity(2, 2));
  for (double x : {-7.5, 0.0, 3.0})
    CHECK(f.eval(x) == Matrix::Identity(2, 2));
}

TEST_CASE("validation errors") {
  CHECK_THROWS_AS(MatrixFunction(1, {1.0, 0.0}, {{scalar(0)}, {scalar(0)}, {scalar(0)}}),
                  BreakpointError);
  CHECK_THROWS_AS(MatrixFunction(1, {0.0}, {{scalar(0)}}), BreakpointError);
  CHECK_THROWS_AS(MatrixFunction(2, {}, {{scalar(0)}}), DimensionError);
  CHECK_THROWS_AS(MatrixFunction(1, {}, {std::vector<Matrix>{}}), BreakpointError);
  CHECK_THROWS_AS(MatrixFunction(0, {}, {{Matrix::Zero(0, 0)}}), DimensionError);
}

TEST_CASE("polynomial pieces and one-sided evaluation") {
  // 0 for x < -1; -1.5(x+1) on (-1,1); -3 beyond
  MatrixFunction f(1, {-1.0, 1.0},
                   {{scalar(0.0)},
                    {scalar(-1.5), scalar(-1.5)},
                    {scalar(-3.0)}});
  CHECK(f.eval(-2.0)(0, 0) == 0.0);
  CHECK(f.eval(0.0)(0, 0) == Complex(-1.5, 0.0));
  CHECK(std::abs(f.eval(0.5)(0, 0) - Complex(-2.25, 0.0)) < 1e-15);
  CHECK(f.eval(5.0)(0, 0) == Complex(-3.0, 0.0));
  // continuous joints carry no jump
  CHECK(f.jump_points().empty());
}

TEST_CASE("constant extension clamps outer evaluation") {
  // outer right piece is the polynomial x, frozen at its breakpoint value
  MatrixFunction f(1, {2.0}, {{scalar(0.0)}, {scalar(0.0), scalar(1.0)}});
  CHECK(f.eval(3.0)(0, 0) == Complex(2.0, 0.0));
  CHECK(f.eval(100.0)(0, 0) == Complex(2.0, 0.0));
}

TEST_CASE("zero extension vanishes outside the grid") {
  MatrixFunction f(1, {-1.0, 1.0},
                   {{scalar(9.0)}, {scalar(5.0)}, {scalar(9.0)}},
                   Extension::zero);
  CHECK(f.eval(-2.0)(0, 0) == 0.0);
  CHECK(f.eval(0.0)(0, 0) == Complex(5.0, 0.0));
  CHECK(f.eval(2.0)(0, 0) == 0.0);
}

TEST_CASE("derivative of piecewise linear ramp") {
  MatrixFunction f(1, {-1.0, 1.0},
                   {{scalar(0.0)},
                    {scalar(-1.5), scalar(-1.5)},
                    {scalar(-3.0)}});
  const auto d = f.derivative();
  CHECK(d.eval(-2.0)(0, 0) == 0.0);
  CHECK(d.eval(0.0)(0, 0) == Complex(-1.5, 0.0));
  CHECK(d.eval(2.0)(0, 0) == 0.0);
}

TEST_CASE("conjugation maps") {
  Matrix q(2, 2);
  q << Complex(0, 1), Complex(1, 0), Complex(0, 0), Complex(2, -3);
  const auto f = MatrixFunction::constant(2, q);
  CHECK(f.hermitian_conjugate().eval(0.0) == Matrix(q.adjoint()));
  CHECK(f.transpose().eval(0.0) == Matrix(q.transpose()));
  CHECK(f.hermitian_conjugate().hermitian_conjugate() == f);
}
