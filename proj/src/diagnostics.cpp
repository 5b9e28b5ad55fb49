#include "diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace krf {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

struct Slope {
  double value = 0.0;
  double rms = 0.0;
  int n = 0;
};

Slope least_squares_slope(std::span<const double> x, std::span<const double> y) {
  Slope s;
  s.n = static_cast<int>(x.size());
  if (s.n < 2) return s;
  double xm = 0.0, ym = 0.0;
  for (int i = 0; i < s.n; ++i) {
    xm += x[static_cast<std::size_t>(i)];
    ym += y[static_cast<std::size_t>(i)];
  }
  xm /= s.n;
  ym /= s.n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < s.n; ++i) {
    const double dx = x[static_cast<std::size_t>(i)] - xm;
    sxx += dx * dx;
    sxy += dx * (y[static_cast<std::size_t>(i)] - ym);
  }
  if (sxx == 0.0) return s;
  s.value = sxy / sxx;
  double r2 = 0.0;
  for (int i = 0; i < s.n; ++i) {
    const double f = ym + s.value * (x[static_cast<std::size_t>(i)] - xm);
    const double r = y[static_cast<std::size_t>(i)] - f;
    r2 += r * r;
  }
  s.rms = std::sqrt(r2 / s.n);
  return s;
}

}  // namespace

MetricFields calabi_fields(const CalabiModel& m, const CalabiProfile& p) {
  MetricFields f;
  f.grid = p.grid;
  const std::size_t N = static_cast<std::size_t>(p.grid.N);
  f.Fp.resize(N);
  f.Fpp.resize(N);
  f.F0p.resize(N);
  f.F0pp.resize(N);
  std::vector<double> d1(N), d2(N);
  d1_fourth(p.grid, p.u, d1);
  d2_fourth(p.grid, p.u, d2);
  for (int i = 0; i < p.grid.N; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    const double rho = p.grid.rho(i);
    f.Fp[k] = m.chip(p.t, rho) + d1[k];
    f.Fpp[k] = m.chipp(p.t, rho) + d2[k];
    f.F0p[k] = m.F0p(rho);
    f.F0pp[k] = m.F0pp(rho);
    if (!(f.Fp[k] > 0.0)) throw KaehlerViolation(p.t, i, rho, "F'");
    if (!(f.Fpp[k] > 0.0)) throw KaehlerViolation(p.t, i, rho, "F''");
  }
  return f;
}

void ricci_eig_fields(const MetricFields& f, std::vector<double>& e1, std::vector<double>& e2) {
  const Grid& g = f.grid;
  const std::size_t N = static_cast<std::size_t>(g.N);
  std::vector<double> R(N), Rp(N), Rpp(N);
  for (int i = 0; i < g.N; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    R[k] = 2.0 * g.rho(i) - std::log(f.Fp[k] * f.Fpp[k]);
  }
  d1_fourth(g, R, Rp);
  d2_fourth(g, R, Rpp);
  e1.resize(N);
  e2.resize(N);
  for (std::size_t k = 0; k < N; ++k) {
    e1[k] = Rp[k] / f.Fp[k];
    e2[k] = Rpp[k] / f.Fpp[k];
  }
}

RicciEigs ricci_eigs_calabi(const MetricFields& f, double resolution_floor) {
  std::vector<double> e1, e2;
  ricci_eig_fields(f, e1, e2);
  double fpp_max = 0.0;
  for (double v : f.Fpp) fpp_max = std::max(fpp_max, v);
  // Differencing R amplifies rounding of log F'' by 1/h^2, so the eigenvalue
  // fields are only meaningful where F'' is numerically resolved; the scan
  // skips points below a relative floor (the fields approach constants in
  // the excluded tail regions anyway).
  const double cut = resolution_floor * fpp_max;
  RicciEigs out;
  out.min = kInf;
  out.max = -kInf;
  out.trace_max = -kInf;
  for (int pass = 0; pass < 2 && out.min == kInf; ++pass) {
    for (std::size_t k = 0; k < f.Fpp.size(); ++k) {
      if (pass == 0 && f.Fpp[k] < cut) continue;
      out.min = std::min(out.min, std::min(e1[k], e2[k]));
      out.max = std::max(out.max, std::max(e1[k], e2[k]));
      out.trace_max = std::max(out.trace_max, e1[k] + e2[k]);
    }
  }
  return out;
}

std::pair<double, double> metric_comparison(const MetricFields& f) {
  double lo = kInf, hi = -kInf;
  for (std::size_t k = 0; k < f.Fp.size(); ++k) {
    const double r1 = f.Fp[k] / f.F0p[k];
    const double r2 = f.Fpp[k] / f.F0pp[k];
    lo = std::min(lo, std::min(r1, r2));
    hi = std::max(hi, std::max(r1, r2));
  }
  return {lo, hi};
}

double alpha_integral_calabi(const MetricFields& f, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw InvalidArgument("alpha must lie in (0, 1], got " + std::to_string(alpha));
  const std::size_t N = f.Fp.size();
  std::vector<double> v(N), w(N);
  double vmin = kInf;
  for (std::size_t k = 0; k < N; ++k) {
    v[k] = std::log((f.Fp[k] * f.Fpp[k]) / (f.F0p[k] * f.F0pp[k]));
    vmin = std::min(vmin, v[k]);
  }
  for (std::size_t k = 0; k < N; ++k)
    w[k] = std::exp(alpha * (v[k] - vmin)) * f.F0p[k] * f.F0pp[k];
  return trapezoid(f.grid, w);
}

DiagnosticsRecord record_calabi(const CalabiModel& m, const CohomologySetup& setup,
                                const CalabiProfile& p, std::span<const double> alphas) {
  DiagnosticsRecord r;
  r.t = p.t;
  r.s = time_to_unnormalized(p.t);
  r.cls = class_at(setup, p.t);
  r.volume_coh = volume_poly(setup, p.t);

  const MetricFields f = calabi_fields(m, p);
  const std::size_t N = f.Fp.size();
  std::vector<double> dens(N);
  for (std::size_t k = 0; k < N; ++k) dens[k] = f.Fp[k] * f.Fpp[k];
  r.volume_num = trapezoid(f.grid, dens);

  const RicciEigs eig = ricci_eigs_calabi(f);
  r.lambda_min = eig.min;
  r.lambda_max = eig.max;
  r.trace_max = eig.trace_max;

  r.sup_u = *std::max_element(p.u.begin(), p.u.end());
  r.inf_u = *std::min_element(p.u.begin(), p.u.end());

  double vlo = kInf, vhi = -kInf;
  for (std::size_t k = 0; k < N; ++k) {
    const double v = std::log(dens[k] / (f.F0p[k] * f.F0pp[k]));
    vlo = std::min(vlo, v);
    vhi = std::max(vhi, v);
  }
  r.inf_udot_u = vlo;
  r.sup_udot_u = vhi;

  std::tie(r.metric_ratio_min, r.metric_ratio_max) = metric_comparison(f);
  for (double a : alphas) r.alpha_integrals.emplace_back(a, alpha_integral_calabi(f, a));
  return r;
}

DiagnosticsRecord record_product(const ProductModel& m, const CohomologySetup& setup, double t,
                                 std::span<const double> alphas) {
  DiagnosticsRecord r;
  const ProductState st = product_exact_state(m, t);
  r.t = t;
  r.s = time_to_unnormalized(t);
  r.cls = st.c;
  r.volume_coh = volume_poly(setup, t);

  const int n = m.dim();
  double vol = factorial(n);
  for (double c : st.c) vol *= c;
  r.volume_num = vol;

  const RicciEigs eig = product_ricci_eigs(m, t);
  r.lambda_min = eig.min;
  r.lambda_max = eig.max;
  r.trace_max = eig.trace_max;

  const double u = product_potential(m, t);
  r.sup_u = r.inf_u = u;
  const double v = product_log_volume_ratio(m, t);
  r.sup_udot_u = r.inf_udot_u = v;

  double rlo = kInf, rhi = -kInf;
  for (std::size_t i = 0; i < st.c.size(); ++i) {
    const double ratio = st.c[i] / m.factors[i].c0;
    rlo = std::min(rlo, ratio);
    rhi = std::max(rhi, ratio);
  }
  r.metric_ratio_min = rlo;
  r.metric_ratio_max = rhi;

  double vol0 = factorial(n);
  for (const Factor& f : m.factors) vol0 *= f.c0;
  for (double a : alphas) {
    if (!(a > 0.0 && a <= 1.0))
      throw InvalidArgument("alpha must lie in (0, 1], got " + std::to_string(a));
    // v is spatially constant on products, so the exponent vanishes.
    r.alpha_integrals.emplace_back(a, vol0);
  }
  return r;
}

double volume_form_identity_gap(const CalabiModel& m, const TrajectorySample& s) {
  CalabiProfile p;
  p.t = s.t;
  p.grid = m.grid();
  p.u = s.u;
  std::vector<double> Fp, Fpp;
  calabi_metric_fields(m, p, Fp, Fpp);
  double gap = 0.0;
  for (int i = 0; i < p.grid.N; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    const double rho = p.grid.rho(i);
    const double v = std::log((Fp[k] * Fpp[k]) / (m.F0p(rho) * m.F0pp(rho)));
    gap = std::max(gap, std::abs(v - (s.udot_back[k] + s.u[k])));
  }
  return gap;
}

FitReport fit_exponents(std::span<const DiagnosticsRecord> records, double T, double delta_stop,
                        double t_end, double lambda_floor) {
  FitReport rep;
  rep.finite_T = (T != kInf);

  auto collect = [&](double lo, double hi, auto&& xf, auto&& yf, std::vector<double>& xs,
                     std::vector<double>& ys) {
    xs.clear();
    ys.clear();
    for (const DiagnosticsRecord& r : records) {
      if (r.t < lo - 1e-12 || r.t > hi + 1e-12) continue;
      const double y = yf(r);
      if (!std::isfinite(y)) continue;
      xs.push_back(xf(r));
      ys.push_back(y);
    }
  };

  std::vector<double> xs, ys;
  if (rep.finite_T) {
    const double hi = T - delta_stop;
    const double lo_full = T - 0.1;
    // The power law sets in only close to the singular time; fit the final
    // decade and keep the full-window slope for reference.
    const double lo_decade = T - std::min(0.1, 10.0 * delta_stop);

    auto log_delta = [&](const DiagnosticsRecord& r) { return std::log(T - r.t); };
    auto log_vol = [](const DiagnosticsRecord& r) { return std::log(r.volume_num); };

    collect(lo_decade, hi, log_delta, log_vol, xs, ys);
    if (static_cast<int>(xs.size()) < 2) {
      rep.skipped = true;
      rep.skipped_reason = "fit window [T-" + std::to_string(std::min(0.1, 10.0 * delta_stop)) +
                           ", T-delta_stop] contains fewer than 2 samples";
      return rep;
    }
    Slope s = least_squares_slope(xs, ys);
    rep.K_fit = s.value;
    rep.residual_rms = s.rms;
    rep.window = {lo_decade, hi, s.n, "finite-last-decade"};

    collect(lo_full, hi, log_delta, log_vol, xs, ys);
    rep.K_fit_full_window = least_squares_slope(xs, ys).value;

    collect(lo_decade, hi, log_delta,
            [](const DiagnosticsRecord& r) { return std::log(r.metric_ratio_min); }, xs, ys);
    rep.beta_fit = least_squares_slope(xs, ys).value;

    collect(lo_decade, hi, log_delta,
            [](const DiagnosticsRecord& r) { return r.inf_udot_u; }, xs, ys);
    rep.voll_slope = least_squares_slope(xs, ys).value;

    for (int j = 1; j <= 8; ++j) {
      const double delta = std::pow(10.0, -j);
      if (delta < delta_stop * (1.0 - 1e-9)) break;
      const double target = T - delta;
      for (const DiagnosticsRecord& r : records) {
        if (std::abs(r.t - target) <= 1e-9) {
          rep.lambda_blowup.emplace_back(delta, r.lambda_min);
          break;
        }
      }
    }
    double lam2 = 0.0, lam3 = 0.0;
    bool have2 = false, have3 = false;
    for (const auto& [delta, lam] : rep.lambda_blowup) {
      if (std::abs(delta - 1e-2) < 1e-12) {
        lam2 = lam;
        have2 = true;
      }
      if (std::abs(delta - 1e-3) < 1e-12) {
        lam3 = lam;
        have3 = true;
      }
    }
    rep.blowup_declared = have2 && have3 && lam3 <= 2.0 * lam2 && lam3 <= lambda_floor;
  } else {
    const double lo = 0.5 * t_end;
    const double hi = t_end;
    auto time = [](const DiagnosticsRecord& r) { return r.t; };

    collect(lo, hi, time, [](const DiagnosticsRecord& r) { return std::log(r.volume_num); }, xs,
            ys);
    if (static_cast<int>(xs.size()) < 2) {
      rep.skipped = true;
      rep.skipped_reason = "last-half fit window contains fewer than 2 samples";
      return rep;
    }
    Slope s = least_squares_slope(xs, ys);
    rep.efolding_slope = s.value;
    rep.K_fit = -s.value;
    rep.residual_rms = s.rms;
    rep.window = {lo, hi, s.n, "infinite-last-half"};

    collect(lo, hi, time, [](const DiagnosticsRecord& r) { return std::log(r.metric_ratio_min); },
            xs, ys);
    rep.beta_fit = -least_squares_slope(xs, ys).value;

    collect(lo, hi, time, [](const DiagnosticsRecord& r) { return r.inf_udot_u; }, xs, ys);
    rep.voll_slope = least_squares_slope(xs, ys).value;
  }
  return rep;
}

CohomologySummary classify(const CohomologySetup& setup) {
  CohomologySummary out;
  out.sing = singularity_time(setup);
  out.collapse = collapse_exponent(setup, out.sing.limit);
  std::vector<CohClass> c1s(static_cast<std::size_t>(setup.n), setup.c1);
  out.c1_top = setup.tensor.evaluate(c1s);
  out.nef_omega0_plus_c1 = nef_check(setup, class_add(setup.omega0, setup.c1));

  if (out.sing.finite()) {
    out.singular_at_infinity = false;
    out.regime = out.collapse.K == 0 ? "finite-noncollapsed" : "finite-collapsed";
  } else {
    // -c1 strictly inside the cone (ample canonical direction) or c1 = 0
    // both give convergent flows; a nonzero boundary limit is an infinite
    // time singularity.
    const bool c1_zero = class_max_abs(setup.c1) <= setup.tol;
    const NefCheck lim = nef_check(setup, out.sing.limit);
    const bool interior = lim.margin > setup.tol;
    out.singular_at_infinity = !c1_zero && !interior;
    out.regime = out.singular_at_infinity ? "infinite-singular" : "convergent";
  }
  return out;
}

VerdictSet verdicts(std::span<const DiagnosticsRecord> records, const CohomologySummary& coh,
                    double d_threshold, double tol) {
  VerdictSet v;
  v.d_threshold = d_threshold;
  v.finite_T = coh.sing.finite();
  v.noncollapsed = (coh.collapse.K == 0);
  v.nef_restriction = coh.nef_omega0_plus_c1.nef;
  v.c1_top_zero = std::abs(coh.c1_top) <= tol;
  v.singular_at_infinity = coh.singular_at_infinity;

  double lmin = kInf;
  for (const DiagnosticsRecord& r : records) lmin = std::min(lmin, r.lambda_min);
  v.lambda_min_overall = lmin;
  v.ricci_bounded = lmin >= -d_threshold;

  v.finite_noncollapsed_ricci_unbounded.applicable = v.finite_T && v.noncollapsed;
  v.finite_noncollapsed_ricci_unbounded.holds =
      !(v.finite_T && v.noncollapsed && v.ricci_bounded);

  const bool unit_bound = lmin >= -1.0 - 1e-9;
  v.infinite_singular_unit_bound_topology.applicable =
      !v.finite_T && v.singular_at_infinity && unit_bound;
  v.infinite_singular_unit_bound_topology.holds =
      !v.infinite_singular_unit_bound_topology.applicable ||
      (v.c1_top_zero && v.nef_restriction);

  v.consistent = v.finite_noncollapsed_ricci_unbounded.holds &&
                 v.infinite_singular_unit_bound_topology.holds;
  return v;
}

}  // namespace krf
