#pragma once

// Catalog of symmetric model geometries.
//
// ProductModel: products of fixed unit-volume Einstein curve factors
// (Ric(eta_i) = kappa_i eta_i), on which the flow reduces per factor to the
// exactly solvable ODE  cdot_i = -kappa_i - c_i.
//
// CalabiModel: rotation-invariant reduction on the one-point blow-up of the
// plane.  Potentials are functions F(rho), rho = log|z|^2, with the metric
// determined by (F', F''); the class bH - aE corresponds to the asymptotic
// slope pair F'(-inf) = a, F'(+inf) = b.

#include <memory>
#include <utility>
#include <vector>

#include "cohomology.hpp"
#include "grid.hpp"

namespace krf {

enum class FactorKind { P1, Torus, Genus2 };

double factor_kappa(FactorKind kind);  // 2, 0, -2
const char* factor_kind_name(FactorKind kind);

struct Factor {
  FactorKind kind = FactorKind::P1;
  double c0 = 1.0;  // initial coefficient, > 0
  double kappa() const { return factor_kappa(kind); }
};

struct ProductModel {
  std::vector<Factor> factors;

  int dim() const { return static_cast<int>(factors.size()); }
  void validate() const;
  // Product-of-curves setup: basis eta_i, intersection n! on distinct
  // indices, positive-orthant cone, c1 = (kappa_i), omega0 = (c0_i).
  CohomologySetup setup() const;
};

struct ProductState {
  double t = 0.0;
  std::vector<double> kappa;
  std::vector<double> c;  // coefficients c_i(t), all > 0
};

// First time some coefficient vanishes: log((c0+kappa)/kappa) over factors
// with kappa > 0, +inf if none.
double factor_vanishing_time(const Factor& f);
double product_vanishing_time(const ProductModel& m);

// c_i(t) = (c0_i + kappa_i) e^{-t} - kappa_i.  Evaluation at or after the
// vanishing time is rejected (the error message reports that time).
ProductState product_exact_state(const ProductModel& m, double t);

struct RicciEigs {
  double min = 0.0;
  double max = 0.0;
  double trace_max = 0.0;  // sup of the complex trace of g^{-1} Ric
};

// Ricci endomorphism eigenvalue on factor i is kappa_i / c_i(t).
RicciEigs product_ricci_eigs(const ProductModel& m, double t);

// Spatially constant potential u(t) solving udot = v(t) - u, u(0) = 0,
// where v(t) = sum_i log(c_i(t)/c0_i) is the log volume-form ratio.  Both
// are evaluated in closed form.
double product_log_volume_ratio(const ProductModel& m, double t);
double product_potential(const ProductModel& m, double t);

struct CalabiModel {
  double a = 1.0;  // 0 < a < b
  double b = 4.0;
  double L = 15.0;  // grid half-width
  int N = 2048;     // grid points

  void validate() const;
  // Blow-up surface setup: basis (H, E) with H^2 = 1, E^2 = -1, H.E = 0,
  // facets pairing with the curve classes E and H - E, c1 = 3H - E,
  // omega0 = bH - aE.
  CohomologySetup setup() const;
  Grid grid() const { return Grid(L, N); }

  // Initial potential F0(rho) = a rho + (b-a) log(1+e^rho) and derivatives.
  double F0(double rho) const;
  double F0p(double rho) const;
  double F0pp(double rho) const;
  double F0ppp(double rho) const;

  // Potential of -Ric(omega0): P = log(F0' F0'') - 2 rho, and derivatives.
  double P(double rho) const;
  double Pp(double rho) const;
  double Ppp(double rho) const;

  // Background potential chi_t = (1 - e^{-t}) P + e^{-t} F0 and derivatives.
  double chi(double t, double rho) const;
  double chip(double t, double rho) const;
  double chipp(double t, double rho) const;

  // Asymptotic slope pair (a_t, b_t) of chi_t; matches the class coordinates
  // (b_t, -a_t) of class_at(t).
  std::pair<double, double> slope_pair(double t) const;
};

// Flow state of the Calabi reduction: u(rho, t) on the grid, with the total
// potential F = chi_t + u required to satisfy F' > 0 and F'' > 0.
struct CalabiProfile {
  double t = 0.0;
  Grid grid;
  std::vector<double> u;
};

CalabiProfile calabi_initial_profile(const CalabiModel& m);  // u = 0 at t = 0

// F0 sampled on the model grid.
std::vector<double> calabi_initial_potential(const CalabiModel& m);

// Metric derivative fields of a profile: F' = chi' + D1 u, F'' = chi'' + D2 u
// (solver-consistent second-order operators with Neumann mirror ends).
void calabi_metric_fields(const CalabiModel& m, const CalabiProfile& p,
                          std::vector<double>& Fp, std::vector<double>& Fpp);

// Pointwise volume-form ratio (F' F'')/(F0' F0'') on the grid.  Throws
// KaehlerViolation (with location) if F' or F'' is not positive.
std::vector<double> calabi_ma_ratio(const CalabiModel& m, const CalabiProfile& p);

}  // namespace krf
