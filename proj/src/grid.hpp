#pragma once

// Uniform 1D grid in the fiber coordinate rho with the difference operators
// used by the solver (second order, Neumann mirror ends) and by the
// diagnostics (fourth order, one-sided at the ends).

#include <cmath>
#include <span>
#include <vector>

#include "error.hpp"

namespace krf {

struct Grid {
  double L = 15.0;
  int N = 2048;
  double h = 0.0;

  Grid() : h(2.0 * L / (N - 1)) {}
  Grid(double half_width, int points) : L(half_width), N(points) {
    if (!(L > 0.0)) throw InvalidArgument("grid half-width must be > 0");
    if (N < 3) throw InvalidArgument("grid needs at least 3 points");
    h = 2.0 * L / (N - 1);
  }

  double rho(int i) const { return -L + h * i; }
  bool same_as(const Grid& o) const { return N == o.N && L == o.L; }
};

// Second-order centered derivatives with Neumann mirror ghosts
// (u(-1) := u(1), u(N) := u(N-2)), matching the solver discretization.
inline void d1_centered(const Grid& g, std::span<const double> u, std::span<double> out) {
  const int N = g.N;
  const double inv2h = 1.0 / (2.0 * g.h);
  out[0] = 0.0;
  out[N - 1] = 0.0;
  for (int i = 1; i + 1 < N; ++i) out[i] = (u[i + 1] - u[i - 1]) * inv2h;
}

inline void d2_centered(const Grid& g, std::span<const double> u, std::span<double> out) {
  const int N = g.N;
  const double invh2 = 1.0 / (g.h * g.h);
  out[0] = 2.0 * (u[1] - u[0]) * invh2;
  out[N - 1] = 2.0 * (u[N - 2] - u[N - 1]) * invh2;
  for (int i = 1; i + 1 < N; ++i) out[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * invh2;
}

// Fourth-order first derivative: centered in the interior, one-sided
// (Fornberg coefficients) at the two points near each end.
inline void d1_fourth(const Grid& g, std::span<const double> u, std::span<double> out) {
  const int N = g.N;
  const double h = g.h;
  out[0] = (-25.0 * u[0] + 48.0 * u[1] - 36.0 * u[2] + 16.0 * u[3] - 3.0 * u[4]) / (12.0 * h);
  out[1] = (-3.0 * u[0] - 10.0 * u[1] + 18.0 * u[2] - 6.0 * u[3] + u[4]) / (12.0 * h);
  for (int i = 2; i + 2 < N; ++i)
    out[i] = (u[i - 2] - 8.0 * u[i - 1] + 8.0 * u[i + 1] - u[i + 2]) / (12.0 * h);
  out[N - 2] = (3.0 * u[N - 1] + 10.0 * u[N - 2] - 18.0 * u[N - 3] + 6.0 * u[N - 4] - u[N - 5]) /
               (12.0 * h);
  out[N - 1] = (25.0 * u[N - 1] - 48.0 * u[N - 2] + 36.0 * u[N - 3] - 16.0 * u[N - 4] +
                3.0 * u[N - 5]) /
               (12.0 * h);
}

// Fourth-order second derivative, same layout.
inline void d2_fourth(const Grid& g, std::span<const double> u, std::span<double> out) {
  const int N = g.N;
  const double invh2 = 1.0 / (g.h * g.h);
  out[0] = (45.0 / 4.0 * u[0] - 77.0 / 2.0 * u[1] + 107.0 / 2.0 * u[2] - 39.0 * u[3] +
            61.0 / 4.0 * u[4] - 5.0 / 2.0 * u[5]) /
           3.0 * invh2;
  out[1] = (5.0 / 6.0 * u[0] - 5.0 / 4.0 * u[1] - 1.0 / 3.0 * u[2] + 7.0 / 6.0 * u[3] -
            1.0 / 2.0 * u[4] + 1.0 / 12.0 * u[5]) *
           invh2;
  for (int i = 2; i + 2 < N; ++i)
    out[i] = (-u[i - 2] + 16.0 * u[i - 1] - 30.0 * u[i] + 16.0 * u[i + 1] - u[i + 2]) / 12.0 *
             invh2;
  out[N - 2] = (5.0 / 6.0 * u[N - 1] - 5.0 / 4.0 * u[N - 2] - 1.0 / 3.0 * u[N - 3] +
                7.0 / 6.0 * u[N - 4] - 1.0 / 2.0 * u[N - 5] + 1.0 / 12.0 * u[N - 6]) *
               invh2;
  out[N - 1] = (45.0 / 4.0 * u[N - 1] - 77.0 / 2.0 * u[N - 2] + 107.0 / 2.0 * u[N - 3] -
                39.0 * u[N - 4] + 61.0 / 4.0 * u[N - 5] - 5.0 / 2.0 * u[N - 6]) /
               3.0 * invh2;
}

inline double trapezoid(const Grid& g, std::span<const double> f) {
  double s = 0.5 * (f[0] + f[g.N - 1]);
  for (int i = 1; i + 1 < g.N; ++i) s += f[i];
  return s * g.h;
}

}  // namespace krf
