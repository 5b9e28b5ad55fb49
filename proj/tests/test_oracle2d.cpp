#include <doctest.h>

#include <cmath>

#include "models.hpp"
#include "support/hessian2d.hpp"

using namespace krf;

// The symmetric ansatz reduces the volume form to e^{-2 rho} F' F''.  The
// 2D finite-difference complex Hessian determinant must reproduce that for
// the closed-form initial potential before anything downstream is trusted.
TEST_CASE("2D complex Hessian determinant matches the 1D reduction at t = 0") {
  CalabiModel m;
  m.a = 1.0;
  m.b = 4.0;
  auto F = [&](double rho) { return m.F0(rho); };
  for (int k = 0; k < 20; ++k) {
    const double rho = -4.75 + 0.5 * k;
    const double det2d = krf_test::complex_hessian_det(F, rho);
    const double det1d = std::exp(-2.0 * rho) * m.F0p(rho) * m.F0pp(rho);
    CHECK(std::abs(det2d - det1d) <= 1e-6 * std::abs(det1d));
  }
}

TEST_CASE("2D oracle also validates the background potential at later times") {
  CalabiModel m;
  m.a = 1.0;
  m.b = 4.0;
  const double t = 0.3;
  auto F = [&](double rho) { return m.chi(t, rho); };
  for (int k = 0; k < 10; ++k) {
    const double rho = -4.5 + k;
    const double det2d = krf_test::complex_hessian_det(F, rho);
    const double det1d = std::exp(-2.0 * rho) * m.chip(t, rho) * m.chipp(t, rho);
    CHECK(std::abs(det2d - det1d) <= 1e-6 * std::abs(det1d));
  }
}

TEST_CASE("local polynomial interpolation is exact on polynomials") {
  std::vector<double> xs, ys;
  for (int i = 0; i < 32; ++i) {
    const double x = -1.0 + i * 0.07;
    xs.push_back(x);
    ys.push_back(1.0 + x * (0.5 + x * (-2.0 + x * 0.25)));
  }
  krf_test::LocalPoly p(xs, ys, 0.13);
  const double x = 0.11;
  CHECK(p.value(x) == doctest::Approx(1.0 + x * (0.5 + x * (-2.0 + x * 0.25))).epsilon(1e-12));
  CHECK(p.d1(x) == doctest::Approx(0.5 + x * (-4.0 + x * 0.75)).epsilon(1e-10));
  CHECK(p.d2(x) == doctest::Approx(-4.0 + 1.5 * x).epsilon(1e-8));
}
