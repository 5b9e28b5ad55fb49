#pragma once

// Independent 2D oracle for the symmetric-ansatz volume form: computes the
// complex Hessian determinant of Phi(z1, z2) = F(log(|z1|^2 + |z2|^2)) by
// real central finite differences (with one Richardson step) on a coordinate
// patch, for comparison against the 1D formula e^{-2 rho} F'(rho) F''(rho).
// Test-only code: independent of the library's metric-field path.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace krf_test {

using Potential = std::function<double(double)>;  // F(rho)

inline double phi(const Potential& F, double x1, double y1, double x2, double y2) {
  return F(std::log(x1 * x1 + y1 * y1 + x2 * x2 + y2 * y2));
}

// det of the 2x2 complex Hessian at z = (e^{rho/2}, 0) with coordinate step
// h (absolute).
inline double complex_hessian_det_fd(const Potential& F, double rho, double h) {
  const double r = std::exp(0.5 * rho);
  const double c[4] = {r, 0.0, 0.0, 0.0};

  auto at = [&](int i, double di, int j, double dj) {
    double x[4] = {c[0], c[1], c[2], c[3]};
    x[i] += di;
    x[j] += dj;
    return phi(F, x[0], x[1], x[2], x[3]);
  };
  const double f0 = phi(F, c[0], c[1], c[2], c[3]);
  auto d2 = [&](int i) { return (at(i, h, i, 0.0) - 2.0 * f0 + at(i, -h, i, 0.0)) / (h * h); };
  auto dmix = [&](int i, int j) {
    return (at(i, h, j, h) - at(i, h, j, -h) - at(i, -h, j, h) + at(i, -h, j, -h)) /
           (4.0 * h * h);
  };

  // Wirtinger second derivatives from real partials.
  const double g11 = 0.25 * (d2(0) + d2(1));
  const double g22 = 0.25 * (d2(2) + d2(3));
  const std::complex<double> g12(0.25 * (dmix(0, 2) + dmix(1, 3)),
                                 0.25 * (dmix(0, 3) - dmix(1, 2)));
  return g11 * g22 - std::norm(g12);
}

// Richardson-extrapolated determinant; base step scales with the radius.
inline double complex_hessian_det(const Potential& F, double rho, double h_rel = 1e-3) {
  const double r = std::exp(0.5 * rho);
  const double h = h_rel * r;
  const double d1 = complex_hessian_det_fd(F, rho, h);
  const double d2 = complex_hessian_det_fd(F, rho, 0.5 * h);
  return (4.0 * d2 - d1) / 3.0;
}

// Local polynomial through `m` grid samples nearest to center (Newton form);
// evaluates value and first two derivatives.
class LocalPoly {
 public:
  LocalPoly(const std::vector<double>& xs, const std::vector<double>& ys, double center,
            int m = 8) {
    const int n = static_cast<int>(xs.size());
    int lo = 0;
    while (lo + 1 < n && xs[static_cast<std::size_t>(lo + 1)] < center) ++lo;
    lo -= m / 2 - 1;
    lo = std::max(0, std::min(lo, n - m));
    x_.assign(xs.begin() + lo, xs.begin() + lo + m);
    c_.assign(ys.begin() + lo, ys.begin() + lo + m);
    for (int k = 1; k < m; ++k)
      for (int i = m - 1; i >= k; --i)
        c_[static_cast<std::size_t>(i)] =
            (c_[static_cast<std::size_t>(i)] - c_[static_cast<std::size_t>(i - 1)]) /
            (x_[static_cast<std::size_t>(i)] - x_[static_cast<std::size_t>(i - k)]);
  }

  double value(double x) const {
    double v = 0.0;
    for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i)
      v = v * (x - x_[static_cast<std::size_t>(i)]) + c_[static_cast<std::size_t>(i)];
    return v;
  }

  double d1(double x) const {
    double v = 0.0, dv = 0.0;
    for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i) {
      const double dx = x - x_[static_cast<std::size_t>(i)];
      dv = dv * dx + v;
      v = v * dx + c_[static_cast<std::size_t>(i)];
    }
    return dv;
  }

  double d2(double x) const {
    double v = 0.0, dv = 0.0, ddv = 0.0;
    for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i) {
      const double dx = x - x_[static_cast<std::size_t>(i)];
      ddv = ddv * dx + 2.0 * dv;
      dv = dv * dx + v;
      v = v * dx + c_[static_cast<std::size_t>(i)];
    }
    return ddv;
  }

 private:
  std::vector<double> x_;
  std::vector<double> c_;  // Newton coefficients
};

}  // namespace krf_test
