#pragma once

// Time integration of the perturbation equations around the rest state:
//
//   div v = 0
//   rho (dv/dt + (v.grad) v) = -grad p + div(2 mu D)
//   rho cv (dtheta/dt + (v.grad) theta) + rho cv (v.grad) theta_hat
//       = div(kappa grad theta) + 2 mu D:D
//
// with no-slip walls and zero temperature perturbation on the walls.
// Explicit Euler predictor, Chorin projection, explicit temperature update.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "nsfstab/grid.hpp"
#include "nsfstab/steady.hpp"
#include "nsfstab/thermo.hpp"

namespace nsfstab {

struct PerturbationState {
  double t = 0.0;
  VectorField v_tilde;
  ScalarField theta_tilde;
  ScalarField p_tilde;

  explicit PerturbationState(const Grid& grid)
      : v_tilde(grid), theta_tilde(grid), p_tilde(grid) {}

  const Grid& grid() const noexcept { return theta_tilde.grid(); }
};

struct StepControl {
  double cfl_safety = 0.4;
  double dt_max = 1e30;
  double projection_tol = 1e-10;  // max |div v| after projection, s^-1
  // Lets cfl_safety >= 1 through validation; only for stress tests of the
  // blow-up and positivity guards.
  bool allow_unstable = false;

  void validate() const;
};

struct StreamMode {
  int k = 1;
  int l = 1;
  double amplitude = 0.0;  // m^2 s^-1
};

struct TemperatureBump {
  double x = 0.5;          // center, fraction of Lx
  double y = 0.5;          // center, fraction of Ly
  double width = 0.1;      // standard deviation, fraction of min(Lx, Ly)
  double amplitude = 0.0;  // K
};

// Initial perturbation. Streamfunction modes are
//   psi_kl = A_kl sin(k pi x/Lx) sin(pi x/Lx) sin(l pi y/Ly) sin(pi y/Ly),
// which vanish together with their normal derivative on the walls, so the
// velocity is no-slip and divergence-free. Temperature bumps are Gaussians
// tapered by sin(pi x/Lx) sin(pi y/Ly). Random parts are drawn from
// mt19937_64 with a portable uniform mapping.
struct InitialPerturbation {
  std::vector<StreamMode> modes;
  double peak_speed = 0.0;          // if > 0, rescale velocity so max |v| equals this
  std::vector<TemperatureBump> bumps;

  int random_velocity_modes = 0;    // K: random amplitudes for k, l <= K
  double random_velocity_peak = 0.0;
  int random_temperature_modes = 0;
  double random_temperature_peak = 0.0;  // K, max |theta| of the random part
  std::uint64_t seed = 1;
};

// Fixed portable stream of uniforms in [0, 1) from mt19937_64.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed);
  double next();
  double symmetric() { return 2.0 * next() - 1.0; }  // in [-1, 1)

 private:
  std::mt19937_64 engine_;
};

// Builds the initial state; throws Error(kInput) if 1 + theta/theta_hat
// drops below 10 * kPositivityFloor anywhere.
PerturbationState make_initial_state(const Grid& grid, const SteadyState& steady,
                                     const InitialPerturbation& init);

// Corner streamfunction values for the given modes.
std::vector<double> streamfunction_corners(const Grid& grid, const std::vector<StreamMode>& modes);

double stable_dt(const PerturbationState& state, const SteadyState& steady, const Material& mat,
                 const StepControl& ctrl);

struct StepStats {
  int pressure_iterations = 0;
  double max_divergence = 0.0;
};

// One projection step. Throws Error(kBlowup) on NaN/Inf, Error(kPositivity)
// if 1 + theta/theta_hat < kPositivityFloor, Error(kSolver) if the pressure
// solve fails.
PerturbationState step(const PerturbationState& state, const SteadyState& steady,
                       const Material& mat, const StepControl& ctrl, double dt,
                       StepStats* stats = nullptr);

// 2 mu D:D is applied by callers; this is D:D of the velocity.
ScalarField strain_rate_sq(const VectorField& v);

double kinetic_energy(const PerturbationState& state, const Material& mat);
double dissipation(const PerturbationState& state, const Material& mat);

// Cell-centered (v.grad) f from face products averaged to the centers.
ScalarField advective_derivative(const VectorField& v, const ScalarField& f);

struct RunOptions {
  double t_end = 0.0;
  double sample_interval = 0.0;
};

struct RunResult {
  PerturbationState final_state;
  long steps = 0;
  long pressure_iterations = 0;
  double max_divergence = 0.0;
  double max_cell_reynolds = 0.0;
  double max_cell_peclet = 0.0;
};

// Called at t = 0 and every sample_interval (time steps are clipped to land
// exactly on sample times).
using Sampler = std::function<void(const PerturbationState&)>;

RunResult run(PerturbationState initial, const SteadyState& steady, const Material& mat,
              const StepControl& ctrl, const RunOptions& options, const Sampler& sampler);

}  // namespace nsfstab
