#pragma once

// Curvature, potential and volume monitors, exponent fitting, and the
// automated consistency verdicts relating singularity type, collapse
// exponent and Ricci bounds.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cohomology.hpp"
#include "models.hpp"
#include "solver.hpp"

namespace krf {

// Per-sample scalar monitors.  `cls` are the class coordinates at t;
// volume_coh is [omega_t]^n, volume_num the measured (grid or product)
// volume; lambda_* are Ricci endomorphism eigenvalue extremes and trace_max
// the sup of the complex trace of g^{-1} Ric; udot_u is the log volume-form
// ratio d(u)/dt + u.
struct DiagnosticsRecord {
  double t = 0.0;
  double s = 0.0;
  std::vector<double> cls;
  double volume_coh = 0.0;
  double volume_num = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double trace_max = 0.0;
  double sup_u = 0.0;
  double inf_u = 0.0;
  double sup_udot_u = 0.0;
  double inf_udot_u = 0.0;
  double metric_ratio_min = 0.0;
  double metric_ratio_max = 0.0;
  std::vector<std::pair<double, double>> alpha_integrals;  // (alpha, value)
};

// Grid metric data used by the Calabi-side monitors.  Derivatives of u enter
// through fourth-order stencils (one-sided at the ends); the background and
// reference parts are analytic.
struct MetricFields {
  Grid grid;
  std::vector<double> Fp, Fpp;    // metric potential derivatives
  std::vector<double> F0p, F0pp;  // reference density factors
};

MetricFields calabi_fields(const CalabiModel& m, const CalabiProfile& p);

// Eigenvalue fields of the Ricci endomorphism under the symmetric ansatz:
// with R = 2 rho - log(F' F''), the two fields are e1 = R'/F' and
// e2 = R''/F''; derivatives of R by centered differences (one-sided at the
// ends).
void ricci_eig_fields(const MetricFields& f, std::vector<double>& e1, std::vector<double>& e2);

// Extremes of the eigenvalue fields, scanned over the resolved region
// F'' >= floor * max(F'').
RicciEigs ricci_eigs_calabi(const MetricFields& f, double resolution_floor = 1e-3);

// Extremes over the grid of F'/F0' and F''/F0''.
std::pair<double, double> metric_comparison(const MetricFields& f);

// integral of e^{alpha (v - inf v)} F0' F0'' drho with v the log volume-form
// ratio; requires 0 < alpha <= 1.
double alpha_integral_calabi(const MetricFields& f, double alpha);

DiagnosticsRecord record_calabi(const CalabiModel& m, const CohomologySetup& setup,
                                const CalabiProfile& p, std::span<const double> alphas);
DiagnosticsRecord record_product(const ProductModel& m, const CohomologySetup& setup, double t,
                                 std::span<const double> alphas);

// Sup-norm gap of the discrete volume-form identity
// log[(F'F'')/(F0'F0'')] = du/dt + u (backward-difference du/dt), using the
// solver-consistent second-order fields.
double volume_form_identity_gap(const CalabiModel& m, const TrajectorySample& s);

struct FitWindow {
  double t_lo = 0.0;
  double t_hi = 0.0;
  int n = 0;
  std::string kind;
};

struct FitReport {
  // Slope of log V against log(T-t) (finite T) or -slope against t
  // (infinite T), over the final decade of the fit window where the power
  // law has set in.  K_fit_full_window is the same fit over the whole
  // window [T-0.1, T-delta_stop] and is reported for reference.
  double K_fit = 0.0;
  double K_fit_full_window = 0.0;
  double efolding_slope = 0.0;  // d log V / dt, infinite-time runs only
  double beta_fit = 0.0;        // metric lower-bound exponent
  double voll_slope = 0.0;      // slope of inf(du/dt+u) vs log(T-t) (or vs t)
  std::vector<std::pair<double, double>> lambda_blowup;  // (delta, lambda_min(T-delta))
  bool blowup_declared = false;
  FitWindow window;
  double residual_rms = 0.0;
  bool skipped = false;
  std::string skipped_reason;
  bool finite_T = true;
};

// Least-squares exponent fits over the trajectory monitors.  `T` may be
// +inf; `lambda_floor` is the negative floor of the blow-up declaration.
FitReport fit_exponents(std::span<const DiagnosticsRecord> records, double T, double delta_stop,
                        double t_end, double lambda_floor);

struct Implication {
  bool applicable = false;
  bool holds = true;
};

struct VerdictSet {
  double d_threshold = 0.0;
  bool finite_T = false;
  bool noncollapsed = false;      // K == 0
  bool ricci_bounded = false;     // lambda_min >= -d_threshold throughout
  bool nef_restriction = false;   // [omega0] + c1 nef
  bool c1_top_zero = false;
  bool singular_at_infinity = false;
  double lambda_min_overall = 0.0;
  // finite T + noncollapsed forbids a uniform Ricci lower bound
  Implication finite_noncollapsed_ricci_unbounded;
  // immortal singular flow with Ric >= -metric forces c1^n = 0 and
  // [omega0] + c1 nef
  Implication infinite_singular_unit_bound_topology;
  bool consistent = true;
};

struct CohomologySummary {
  SingularityTime sing;
  CollapseExponent collapse;
  double c1_top = 0.0;
  NefCheck nef_omega0_plus_c1;
  bool singular_at_infinity = false;
  std::string regime;
};

// Cohomology-only classification of a setup (no PDE).
CohomologySummary classify(const CohomologySetup& setup);

VerdictSet verdicts(std::span<const DiagnosticsRecord> records, const CohomologySummary& coh,
                    double d_threshold, double tol);

}  // namespace krf
