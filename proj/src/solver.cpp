#include "solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tridiag.hpp"

namespace krf {

void SolverConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("solver.dt", "must be > 0");
  if (!(delta_stop > 0.0)) throw ConfigError("solver.delta_stop", "must be > 0");
  if (!(t_end > 0.0)) throw ConfigError("solver.t_end", "must be > 0");
  if (!(newton_tol > 0.0)) throw ConfigError("solver.newton_tol", "must be > 0");
  if (newton_max_iters < 1) throw ConfigError("solver.newton_max_iters", "must be >= 1");
  if (!(kaehler_floor > 0.0)) throw ConfigError("solver.kaehler_floor", "must be > 0");
}

void CalabiBackground::chi_fields(double t, const Grid& g, std::span<double> chip,
                                  std::span<double> chipp) const {
  for (int i = 0; i < g.N; ++i) {
    const double rho = g.rho(i);
    chip[static_cast<std::size_t>(i)] = m_.chip(t, rho);
    chipp[static_cast<std::size_t>(i)] = m_.chipp(t, rho);
  }
}

void CalabiBackground::reference_fields(const Grid& g, std::span<double> f0p,
                                        std::span<double> f0pp) const {
  for (int i = 0; i < g.N; ++i) {
    const double rho = g.rho(i);
    f0p[static_cast<std::size_t>(i)] = m_.F0p(rho);
    f0pp[static_cast<std::size_t>(i)] = m_.F0pp(rho);
  }
}

namespace {

// Workspace for one Newton solve; all vectors sized N.
struct StepWork {
  std::vector<double> chip, chipp, logref;
  std::vector<double> fp, fpp;          // metric fields of the current iterate
  std::vector<double> res;              // Newton residual
  std::vector<double> lo, di, up, rhs;  // tridiagonal system
  std::vector<double> cand, scratch;
};

// F' = chi' + D1 u, F'' = chi'' + D2 u with Neumann mirror ends.  Returns the
// index of the first floor violation, or -1.
int metric_fields(const Grid& g, std::span<const double> chip, std::span<const double> chipp,
                  std::span<const double> u, double floor, std::vector<double>& fp,
                  std::vector<double>& fpp, std::string* which) {
  const int N = g.N;
  fp.resize(static_cast<std::size_t>(N));
  fpp.resize(static_cast<std::size_t>(N));
  const double inv2h = 1.0 / (2.0 * g.h);
  const double invh2 = 1.0 / (g.h * g.h);
  for (int i = 0; i < N; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    double d1, d2;
    if (i == 0) {
      d1 = 0.0;
      d2 = 2.0 * (u[1] - u[0]) * invh2;
    } else if (i == N - 1) {
      d1 = 0.0;
      d2 = 2.0 * (u[k - 1] - u[k]) * invh2;
    } else {
      d1 = (u[k + 1] - u[k - 1]) * inv2h;
      d2 = (u[k + 1] - 2.0 * u[k] + u[k - 1]) * invh2;
    }
    fp[k] = chip[k] + d1;
    fpp[k] = chipp[k] + d2;
    if (!(fp[k] >= floor)) {
      if (which) *which = "F'";
      return i;
    }
    if (!(fpp[k] >= floor)) {
      if (which) *which = "F''";
      return i;
    }
  }
  return -1;
}

// Single backward-Euler attempt at the given dt; returns false on Newton
// non-convergence (caller halves dt).  Kaehler violations escape as throws.
//
// The update is damped by a fraction-to-the-boundary rule: no Newton
// iteration may reduce F' or F'' anywhere by more than a fixed fraction or
// push it below the floor.  The log operator makes the near-boundary values
// of F'' extremely small, and an undamped step routinely overshoots them.
bool try_implicit_step(const Grid& g, const SolverConfig& cfg, StepWork& w,
                       std::span<const double> u_prev, double dt, double t_next,
                       std::vector<double>& u_out, StepStats* stats) {
  const int N = g.N;
  const std::size_t n = static_cast<std::size_t>(N);
  const double inv2h = 1.0 / (2.0 * g.h);
  const double invh2 = 1.0 / (g.h * g.h);
  constexpr double kKeepFraction = 0.05;  // retain at least 5% of each field value

  std::vector<double>& u = u_out;
  u.assign(u_prev.begin(), u_prev.end());

  std::string which;
  int bad = metric_fields(g, w.chip, w.chipp, u, cfg.kaehler_floor, w.fp, w.fpp, &which);
  if (bad >= 0) throw KaehlerViolation(t_next, bad, g.rho(bad), which);

  auto residual = [&](std::span<const double> uu, std::vector<double>& out) {
    double rmax = 0.0;
    for (int i = 0; i < N; ++i) {
      const std::size_t k = static_cast<std::size_t>(i);
      const double lr = std::log(w.fp[k] * w.fpp[k]) - w.logref[k];
      out[k] = uu[k] - u_prev[k] - dt * (lr - uu[k]);
      rmax = std::max(rmax, std::abs(out[k]));
    }
    return rmax;
  };

  // The residual cannot be driven below its floating-point granularity: the
  // second difference entering log F'' is formed from O(|u|)-sized values,
  // so near-boundary residual entries move in quanta of roughly
  // dt * eps * |u| * (2/h^2) / F''.  Converge to newton_tol or to that
  // floor, whichever is larger.
  auto effective_tol = [&](std::span<const double> uu) {
    double umax = 1.0, fpp_min = kInf;
    for (std::size_t k = 0; k < n; ++k) {
      umax = std::max(umax, std::abs(uu[k]));
      fpp_min = std::min(fpp_min, w.fpp[k]);
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double granularity = eps * umax * (2.0 * invh2) / fpp_min;
    return std::max(cfg.newton_tol, 8.0 * dt * granularity);
  };

  w.res.resize(n);
  w.cand.resize(n);
  double rmax = residual(u, w.res);

  for (int iter = 0; iter < cfg.newton_max_iters; ++iter) {
    if (rmax <= effective_tol(u)) return true;

    // J = (1+dt) I - dt [ diag(1/F'') D2 + diag(1/F') D1 ].
    w.lo.assign(n, 0.0);
    w.di.assign(n, 0.0);
    w.up.assign(n, 0.0);
    w.rhs.resize(n);
    for (int i = 0; i < N; ++i) {
      const std::size_t k = static_cast<std::size_t>(i);
      const double ap = dt / w.fp[k];
      const double app = dt / w.fpp[k];
      if (i == 0) {
        w.di[k] = 1.0 + dt + 2.0 * app * invh2;
        w.up[k] = -2.0 * app * invh2;
      } else if (i == N - 1) {
        w.di[k] = 1.0 + dt + 2.0 * app * invh2;
        w.lo[k] = -2.0 * app * invh2;
      } else {
        w.lo[k] = -app * invh2 + ap * inv2h;
        w.di[k] = 1.0 + dt + 2.0 * app * invh2;
        w.up[k] = -app * invh2 - ap * inv2h;
      }
      w.rhs[k] = w.res[k];
    }
    solve_tridiagonal(w.lo, w.di, w.up, w.rhs, w.scratch);  // rhs <- Newton step

    // Field changes induced by the full step (same stencils as the residual).
    double lambda = 1.0;
    int limiter = -1;
    for (int i = 0; i < N; ++i) {
      const std::size_t k = static_cast<std::size_t>(i);
      double d1, d2;
      if (i == 0) {
        d1 = 0.0;
        d2 = 2.0 * (w.rhs[1] - w.rhs[0]) * invh2;
      } else if (i == N - 1) {
        d1 = 0.0;
        d2 = 2.0 * (w.rhs[k - 1] - w.rhs[k]) * invh2;
      } else {
        d1 = (w.rhs[k + 1] - w.rhs[k - 1]) * inv2h;
        d2 = (w.rhs[k + 1] - 2.0 * w.rhs[k] + w.rhs[k - 1]) * invh2;
      }
      // u <- u - lambda * step, so the field decrease at lambda = 1 is +d.
      auto limit = [&](double decrease, double f) {
        const double cap = f - std::max(kKeepFraction * f, cfg.kaehler_floor);
        if (decrease > 0.0 && decrease > cap) {
          const double lam = cap / decrease;
          if (lam < lambda) {
            lambda = lam;
            limiter = i;
          }
        }
      };
      limit(d1, w.fp[k]);
      limit(d2, w.fpp[k]);
    }
    if (lambda < 1e-12)
      throw KaehlerViolation(t_next, limiter, g.rho(std::max(limiter, 0)),
                             "no admissible Newton step");

    // Accept the damped candidate; retreat further only if the residual
    // explodes (rare, the damping above already controls the log terms).
    bool accepted = false;
    for (int back = 0; back < 8; ++back) {
      for (std::size_t k = 0; k < n; ++k) w.cand[k] = u[k] - lambda * w.rhs[k];
      bad = metric_fields(g, w.chip, w.chipp, w.cand, cfg.kaehler_floor, w.fp, w.fpp, &which);
      if (bad < 0) {
        const double rnew = residual(w.cand, w.res);
        if (rnew <= 10.0 * rmax || lambda < 1e-8) {
          rmax = rnew;
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!accepted)
      throw KaehlerViolation(t_next, bad >= 0 ? bad : limiter,
                             g.rho(std::max(bad >= 0 ? bad : limiter, 0)), which);
    u.swap(w.cand);
    if (stats) ++stats->newton_iters;
  }
  return rmax <= effective_tol(u);
}

void explicit_step(const Grid& g, const SolverConfig& cfg, StepWork& w,
                   std::span<const double> u_prev, double dt, double t_next,
                   std::vector<double>& u_out) {
  const int N = g.N;
  std::string which;
  // Forward Euler with the background at the departure time (chi fields in
  // `w` are filled accordingly by the caller).
  std::vector<double> u(u_prev.begin(), u_prev.end());
  int bad = metric_fields(g, w.chip, w.chipp, u, cfg.kaehler_floor, w.fp, w.fpp, &which);
  if (bad >= 0) throw KaehlerViolation(t_next - dt, bad, g.rho(bad), which);
  u_out.resize(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    const double lr = std::log(w.fp[k] * w.fpp[k]) - w.logref[k];
    u_out[k] = u_prev[k] + dt * (lr - u_prev[k]);
  }
}

void fill_background(const Background& bg, const Grid& g, double t, StepWork& w) {
  const std::size_t n = static_cast<std::size_t>(g.N);
  w.chip.resize(n);
  w.chipp.resize(n);
  bg.chi_fields(t, g, w.chip, w.chipp);
}

void fill_reference(const Background& bg, const Grid& g, StepWork& w) {
  const std::size_t n = static_cast<std::size_t>(g.N);
  std::vector<double> f0p(n), f0pp(n);
  bg.reference_fields(g, f0p, f0pp);
  w.logref.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(f0p[k] > 0.0 && f0pp[k] > 0.0))
      throw InvalidArgument("reference density must be positive");
    w.logref[k] = std::log(f0p[k] * f0pp[k]);
  }
}

// Advances to t_next, halving the (sub)step on Newton failure.
void advance_to(const Background& bg, const Grid& g, const SolverConfig& cfg, StepWork& w,
                std::vector<double>& u, double t_from, double t_next, StepStats* stats) {
  double t = t_from;
  double dt = t_next - t;
  int halvings = 0;
  std::vector<double> u_new;
  while (t < t_next - 1e-15) {
    const double target = std::min(t + dt, t_next);
    fill_background(bg, g, target, w);
    if (stats) ++stats->substeps;
    if (try_implicit_step(g, cfg, w, u, target - t, target, u_new, stats)) {
      u.swap(u_new);
      t = target;
    } else {
      if (++halvings > 10)
        throw SolverFailure(t, "Newton did not converge after 10 step halvings");
      if (stats) ++stats->dt_halvings;
      dt *= 0.5;
    }
  }
}

}  // namespace krf::(anonymous)

std::vector<double> step(const Background& bg, const Grid& g, const SolverConfig& cfg,
                         std::span<const double> u, double dt, double t_next,
                         StepStats* stats) {
  cfg.validate();
  if (!(dt > 0.0)) throw InvalidArgument("step: dt must be > 0");
  if (static_cast<int>(u.size()) != g.N) throw InvalidArgument("step: field size mismatch");
  StepWork w;
  fill_reference(bg, g, w);
  std::vector<double> out(u.begin(), u.end());
  if (cfg.scheme == SolverConfig::Scheme::Explicit) {
    fill_background(bg, g, t_next - dt, w);
    std::vector<double> res;
    explicit_step(g, cfg, w, out, dt, t_next, res);
    return res;
  }
  StepStats local;
  advance_to(bg, g, cfg, w, out, t_next - dt, t_next, stats ? stats : &local);
  return out;
}

Trajectory run_flow(const Background& bg, const Grid& g, const SolverConfig& cfg,
                    std::span<const double> sample_times) {
  cfg.validate();
  for (std::size_t i = 0; i + 1 < sample_times.size(); ++i)
    if (!(sample_times[i] < sample_times[i + 1]))
      throw InvalidArgument("sample times must be strictly increasing");
  if (!sample_times.empty() && sample_times.front() < 0.0)
    throw InvalidArgument("sample times must be >= 0");

  Trajectory traj;
  traj.grid = g;
  const std::size_t n = static_cast<std::size_t>(g.N);
  StepWork w;
  fill_reference(bg, g, w);

  std::vector<double> u(n, 0.0);
  std::vector<double> udot(n, 0.0);
  double t = 0.0;

  auto emit = [&](double ts) {
    TrajectorySample s;
    s.t = ts;
    s.u = u;
    s.udot_back = udot;
    traj.samples.push_back(std::move(s));
  };

  std::size_t si = 0;
  if (si < sample_times.size() && sample_times[si] == 0.0) {
    emit(0.0);
    ++si;
  }

  try {
    for (; si < sample_times.size(); ++si) {
      const double target = sample_times[si];
      while (t < target - 1e-15) {
        const double t_next = std::min(t + cfg.dt, target);
        const double dt = t_next - t;
        StepStats stats;
        std::vector<double> u_prev = u;
        if (cfg.scheme == SolverConfig::Scheme::Explicit) {
          fill_background(bg, g, t, w);
          std::vector<double> res;
          explicit_step(g, cfg, w, u, dt, t_next, res);
          u.swap(res);
        } else {
          advance_to(bg, g, cfg, w, u, t, t_next, &stats);
        }
        for (std::size_t k = 0; k < n; ++k) udot[k] = (u[k] - u_prev[k]) / dt;
        t = t_next;
        ++traj.total_steps;
        traj.total_newton_iters += stats.newton_iters;
      }
      emit(target);
    }
    traj.t_stop = t;
  } catch (const KaehlerViolation& e) {
    traj.t_stop = t;
    traj.failure = RunFailure{e.what(), e.t(), e.index(), e.rho(), Status::Kaehler};
  } catch (const SolverFailure& e) {
    traj.t_stop = t;
    traj.failure = RunFailure{e.what(), e.t(), -1, 0.0, Status::Internal};
  }
  return traj;
}

RefinementReport time_step_audit(const Trajectory& coarse, const Trajectory& fine) {
  if (coarse.samples.size() != fine.samples.size())
    throw InvalidArgument("time_step_audit: sample schedules differ");
  const bool same_grid = fine.grid.N == coarse.grid.N;
  if (!same_grid && fine.grid.N != 2 * coarse.grid.N - 1)
    throw InvalidArgument("time_step_audit: refined grid must contain the coarse points "
                          "(N_fine = 2 N_coarse - 1)");
  if (std::abs(fine.grid.L - coarse.grid.L) > 1e-14)
    throw InvalidArgument("time_step_audit: grids cover different intervals");

  RefinementReport rep;
  const int stride = same_grid ? 1 : 2;
  for (std::size_t s = 0; s < coarse.samples.size(); ++s) {
    const auto& a = coarse.samples[s];
    const auto& b = fine.samples[s];
    if (std::abs(a.t - b.t) > 1e-12)
      throw InvalidArgument("time_step_audit: sample times differ");
    double d = 0.0;
    for (int i = 0; i < coarse.grid.N; ++i)
      d = std::max(d, std::abs(a.u[static_cast<std::size_t>(i)] -
                               b.u[static_cast<std::size_t>(i * stride)]));
    rep.times.push_back(a.t);
    rep.sup_diff.push_back(d);
    rep.max_diff = std::max(rep.max_diff, d);
  }
  return rep;
}

}  // namespace krf
