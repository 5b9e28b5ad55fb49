#include <doctest.h>

#include <cmath>
#include <cstring>

#include "diagnostics.hpp"
#include "models.hpp"
#include "solver.hpp"

using namespace krf;

namespace {

CalabiModel small_model(int N = 512) {
  CalabiModel m;
  m.a = 1.0;
  m.b = 4.0;
  m.N = N;
  return m;
}

// Background chi_t = e^{q(t)/2} F0 collapses the log-ratio to the spatially
// constant q(t), so the step must reproduce the scalar ODE udot = q(t) - u.
class ScalarOdeBackground final : public Background {
 public:
  explicit ScalarOdeBackground(const CalabiModel& m) : m_(m) {}
  void chi_fields(double t, const Grid& g, std::span<double> chip,
                  std::span<double> chipp) const override {
    const double s = std::exp(0.5 * q(t));
    for (int i = 0; i < g.N; ++i) {
      chip[static_cast<std::size_t>(i)] = s * m_.F0p(g.rho(i));
      chipp[static_cast<std::size_t>(i)] = s * m_.F0pp(g.rho(i));
    }
  }
  void reference_fields(const Grid& g, std::span<double> f0p,
                        std::span<double> f0pp) const override {
    for (int i = 0; i < g.N; ++i) {
      f0p[static_cast<std::size_t>(i)] = m_.F0p(g.rho(i));
      f0pp[static_cast<std::size_t>(i)] = m_.F0pp(g.rho(i));
    }
  }
  static double q(double t) { return std::sin(3.0 * t); }

 private:
  CalabiModel m_;
};

}  // namespace

TEST_CASE("first step from the initial profile is O(dt^2)") {
  const CalabiModel m = small_model();
  CalabiBackground bg(m);
  const Grid g = m.grid();
  SolverConfig cfg;

  auto sup_after_one_step = [&](double dt) {
    std::vector<double> u0(static_cast<std::size_t>(g.N), 0.0);
    const std::vector<double> u1 = step(bg, g, cfg, u0, dt, dt);
    double s = 0.0;
    for (double v : u1) s = std::max(s, std::abs(v));
    return s;
  };
  const double e1 = sup_after_one_step(1e-3);
  const double e2 = sup_after_one_step(5e-4);
  CHECK(e1 < 1e-4);                  // far below the O(dt) scale
  CHECK(e1 / e2 > 3.0);              // quadratic, not linear, in dt
  CHECK(e1 / e2 < 5.0);
}

TEST_CASE("constant-coefficient reduction reproduces the scalar ODE") {
  const CalabiModel m = small_model(128);
  ScalarOdeBackground bg(m);
  const Grid g = m.grid();
  SolverConfig cfg;

  const double dt = 0.05;
  std::vector<double> u(static_cast<std::size_t>(g.N), 0.3);
  double scalar = 0.3;
  for (int k = 1; k <= 8; ++k) {
    const double t_next = dt * k;
    u = step(bg, g, cfg, u, dt, t_next);
    scalar = (scalar + dt * ScalarOdeBackground::q(t_next)) / (1.0 + dt);
    for (double v : u) CHECK(std::abs(v - scalar) <= 10.0 * cfg.newton_tol);
  }
  // and the discrete solution converges to the exact ODE flow as dt -> 0
  const double T = 0.4;
  auto run_to = [&](double step_dt) {
    std::vector<double> uu(static_cast<std::size_t>(g.N), 0.3);
    const int n = static_cast<int>(std::lround(T / step_dt));
    for (int k = 1; k <= n; ++k) uu = step(bg, g, cfg, uu, step_dt, step_dt * k);
    return uu[0];
  };
  const double exact = [&] {
    // integrating factor solution of udot = q - u with u(0) = 0.3
    double s = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      const double tau = T * (i + 0.5) / n;
      s += std::exp(tau) * ScalarOdeBackground::q(tau) * (T / n);
    }
    return std::exp(-T) * (0.3 + s);
  }();
  CHECK(std::abs(run_to(0.01) - exact) < 5e-3);
  CHECK(std::abs(run_to(0.005) - exact) / std::abs(run_to(0.01) - exact) < 0.6);
}

TEST_CASE("boundary slopes track the class coordinates") {
  const CalabiModel m = small_model(1024);
  CalabiBackground bg(m);
  SolverConfig cfg;
  std::vector<double> samples{0.05, 0.1};
  Trajectory traj = run_flow(bg, m.grid(), cfg, samples);
  REQUIRE(!traj.failure);
  for (const TrajectorySample& s : traj.samples) {
    CalabiProfile p{s.t, traj.grid, s.u};
    const MetricFields f = calabi_fields(m, p);
    const auto [at, bt] = m.slope_pair(s.t);
    CHECK(std::abs(f.Fp.front() - at) < 1e-3);
    CHECK(std::abs(f.Fp.back() - bt) < 1e-3);
  }
}

TEST_CASE("refinement audit") {
  const double t_probe = 0.3;
  auto run_at = [&](int N, double dt) {
    CalabiModel m = small_model(N);
    CalabiBackground bg(m);
    SolverConfig cfg;
    cfg.dt = dt;
    std::vector<double> samples{0.15, t_probe};
    return run_flow(bg, m.grid(), cfg, samples);
  };
  const Trajectory coarse = run_at(512, 4e-3);
  const Trajectory mid = run_at(1023, 2e-3);
  const Trajectory fine = run_at(2045, 1e-3);

  SUBCASE("identical trajectories have zero difference") {
    const RefinementReport r = time_step_audit(coarse, coarse);
    CHECK(r.max_diff == 0.0);
  }
  SUBCASE("difference shrinks by at least 1.8x under (2N, dt/2)") {
    const RefinementReport r1 = time_step_audit(coarse, mid);
    const RefinementReport r2 = time_step_audit(mid, fine);
    REQUIRE(r1.sup_diff.size() == 2);
    CHECK(r1.max_diff > 0.0);
    CHECK(r1.max_diff / r2.max_diff >= 1.8);
  }
  SUBCASE("mismatched sample schedules rejected") {
    CalabiModel m = small_model(512);
    CalabiBackground bg(m);
    SolverConfig cfg;
    cfg.dt = 4e-3;
    std::vector<double> other{0.1, 0.3};
    const Trajectory odd = run_flow(bg, m.grid(), cfg, other);
    CHECK_THROWS_AS(time_step_audit(coarse, odd), InvalidArgument);
  }
  SUBCASE("incompatible grids rejected") {
    const Trajectory wrong = run_at(700, 4e-3);
    CHECK_THROWS_AS(time_step_audit(coarse, wrong), InvalidArgument);
  }
}

TEST_CASE("explicit scheme at practical dt is unstable and detected") {
  CalabiModel m = small_model(256);
  CalabiBackground bg(m);
  SolverConfig cfg;
  cfg.scheme = SolverConfig::Scheme::Explicit;
  std::vector<double> samples{0.05};
  const Trajectory traj = run_flow(bg, m.grid(), cfg, samples);
  REQUIRE(traj.failure.has_value());
  CHECK(traj.failure->status == Status::Kaehler);
  CHECK(traj.t_stop < 0.05);  // it never reaches the sample
}

TEST_CASE("runs are deterministic") {
  CalabiModel m = small_model(512);
  CalabiBackground bg(m);
  SolverConfig cfg;
  cfg.dt = 2e-3;
  std::vector<double> samples{0.1, 0.2};
  const Trajectory a = run_flow(bg, m.grid(), cfg, samples);
  const Trajectory b = run_flow(bg, m.grid(), cfg, samples);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t s = 0; s < a.samples.size(); ++s)
    CHECK(std::memcmp(a.samples[s].u.data(), b.samples[s].u.data(),
                      a.samples[s].u.size() * sizeof(double)) == 0);
}

TEST_CASE("discrete volume-form identity holds along the run") {
  CalabiModel m = small_model(512);
  CalabiBackground bg(m);
  SolverConfig cfg;
  cfg.dt = 2e-3;
  const double T = std::log(2.0);
  std::vector<double> samples{0.1, 0.3, 0.5, T - 0.05};
  const Trajectory traj = run_flow(bg, m.grid(), cfg, samples);
  REQUIRE(!traj.failure);
  for (const TrajectorySample& s : traj.samples) {
    if (s.t == 0.0) continue;
    if (s.t > 0.99 * (T - cfg.delta_stop)) continue;  // skip the final stretch
    CHECK(volume_form_identity_gap(m, s) <= 10.0 * cfg.dt);
  }
}

TEST_CASE("solver config validation") {
  SolverConfig cfg;
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SolverConfig{};
  cfg.kaehler_floor = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SolverConfig{};
  cfg.newton_max_iters = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
