#pragma once

// Thomas algorithm for tridiagonal systems.  The Newton Jacobians assembled
// by the stepper are strictly diagonally dominant, so no pivoting is needed.

#include <span>
#include <vector>

#include "error.hpp"

namespace krf {

// Solves (lower, diag, upper) x = rhs in place; lower[0] and upper[N-1] are
// ignored.  Scratch vectors are reused between calls by the owner.
inline void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                              std::span<const double> upper, std::span<double> rhs,
                              std::vector<double>& scratch) {
  const std::size_t n = diag.size();
  scratch.resize(n);
  double piv = diag[0];
  if (piv == 0.0) throw Error(Status::Internal, "tridiagonal solve: zero pivot");
  scratch[0] = upper[0] / piv;
  rhs[0] /= piv;
  for (std::size_t i = 1; i < n; ++i) {
    piv = diag[i] - lower[i] * scratch[i - 1];
    if (piv == 0.0) throw Error(Status::Internal, "tridiagonal solve: zero pivot");
    scratch[i] = upper[i] / piv;
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / piv;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i] * rhs[i + 1];
}

}  // namespace krf
