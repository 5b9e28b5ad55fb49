#pragma once

// Implicit time-stepper for the Calabi-reduced scalar flow
//
//   du/dt = log[ (chi' + u')(chi'' + u'') / (F0' F0'') ] - u,
//   u'(+-L) = 0,   u(., 0) = 0,
//
// discretized with backward Euler in time (background evaluated at the target
// time) and second-order centered differences in space; the Newton Jacobian
// is tridiagonal.  The linearized diffusivity 1/F'' grows like e^{L} toward
// the grid ends, so explicit stepping is unstable at any practical dt; the
// explicit scheme is kept only to demonstrate that.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grid.hpp"
#include "models.hpp"

namespace krf {

struct SolverConfig {
  double dt = 1e-3;
  double delta_stop = 1e-3;  // distance to the singular time at which to stop
  double t_end = 10.0;       // horizon used when the flow lives forever
  double newton_tol = 1e-10;
  int newton_max_iters = 30;
  double kaehler_floor = 1e-12;
  enum class Scheme { Implicit, Explicit } scheme = Scheme::Implicit;

  void validate() const;
};

// Supplies the background derivative fields chi_t', chi_t'' and the fixed
// reference density F0' F0'' on a grid.  The flow model implements this; the
// tests also use synthetic backgrounds that reduce the step to a scalar ODE.
class Background {
 public:
  virtual ~Background() = default;
  virtual void chi_fields(double t, const Grid& g, std::span<double> chip,
                          std::span<double> chipp) const = 0;
  virtual void reference_fields(const Grid& g, std::span<double> f0p,
                                std::span<double> f0pp) const = 0;
};

class CalabiBackground final : public Background {
 public:
  explicit CalabiBackground(const CalabiModel& m) : m_(m) {}
  void chi_fields(double t, const Grid& g, std::span<double> chip,
                  std::span<double> chipp) const override;
  void reference_fields(const Grid& g, std::span<double> f0p,
                        std::span<double> f0pp) const override;
  const CalabiModel& model() const { return m_; }

 private:
  CalabiModel m_;
};

struct StepStats {
  int newton_iters = 0;
  int dt_halvings = 0;
  int substeps = 0;
};

// Advances u from (t_next - dt) to t_next.  Backward Euler: solves
//   u+ - u - dt (log-ratio(u+; chi_{t_next}) - u+) = 0
// by Newton iteration with a tridiagonal Jacobian, to residual sup-norm
// <= newton_tol.  Newton failures retry with halved dt (internal substeps,
// up to 10 halvings, then SolverFailure); a step that cannot keep
// F', F'' >= kaehler_floor even with a damped update throws
// KaehlerViolation with the offending location.
std::vector<double> step(const Background& bg, const Grid& g, const SolverConfig& cfg,
                         std::span<const double> u, double dt, double t_next,
                         StepStats* stats = nullptr);

// Sampled run output.  `udot_back` is the backward time difference of u over
// the step that landed on the sample, for the discrete volume-form identity;
// it is zero at t = 0.
struct TrajectorySample {
  double t = 0.0;
  std::vector<double> u;
  std::vector<double> udot_back;
};

struct RunFailure {
  std::string what;
  double t = 0.0;     // violation time (empirical singularity detection)
  int grid_index = -1;
  double rho = 0.0;
  Status status = Status::Internal;
};

struct Trajectory {
  Grid grid;
  std::vector<TrajectorySample> samples;
  std::optional<RunFailure> failure;
  double t_stop = 0.0;
  long total_steps = 0;
  long total_newton_iters = 0;
};

// Advances from t = 0 through the strictly increasing sample times (the step
// size shrinks to land on each sample exactly).  On Kaehler violation or
// solver failure the partial trajectory is returned with failure metadata.
Trajectory run_flow(const Background& bg, const Grid& g, const SolverConfig& cfg,
                    std::span<const double> sample_times);

// Sup-norm differences of u at common sample times between a coarse and a
// refined trajectory.  The refined grid must contain the coarse points
// (N_fine = 2 N_coarse - 1) and both runs must share sample times.
struct RefinementReport {
  std::vector<double> times;
  std::vector<double> sup_diff;
  double max_diff = 0.0;
};

RefinementReport time_step_audit(const Trajectory& coarse, const Trajectory& fine);

}  // namespace krf
