#include "nsfstab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nsfstab/cg.hpp"
#include "nsfstab/error.hpp"

namespace nsfstab {

namespace {

constexpr double kPi = std::numbers::pi;

// -L_N on raw cell vectors (homogeneous Neumann walls).
void apply_neg_neumann(const Grid& g, const std::vector<double>& x, std::vector<double>& out) {
  const int nx = g.nx(), ny = g.ny();
  const double ihx2 = 1.0 / (g.hx() * g.hx());
  const double ihy2 = 1.0 / (g.hy() * g.hy());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * nx + i;
      const double c = x[k];
      double acc = 0.0;
      if (i > 0) acc += (x[k - 1] - c) * ihx2;
      if (i < nx - 1) acc += (x[k + 1] - c) * ihx2;
      if (j > 0) acc += (x[k - nx] - c) * ihy2;
      if (j < ny - 1) acc += (x[k + nx] - c) * ihy2;
      out[k] = -acc;
    }
  }
}

// Momentum tendency -div(v v) + nu Lap v on interior faces; boundary faces stay 0.
VectorField momentum_rhs(const VectorField& v, double nu) {
  const Grid& g = v.grid();
  const int nx = g.nx(), ny = g.ny();
  const double hx = g.hx(), hy = g.hy();
  const double ihx2 = 1.0 / (hx * hx), ihy2 = 1.0 / (hy * hy);
  VectorField out(g);

  // Corner flux u v; zero on the walls where the normal component vanishes.
  std::vector<double> uv(static_cast<std::size_t>(nx + 1) * (ny + 1), 0.0);
  auto uv_at = [&](int i, int j) -> double& { return uv[static_cast<std::size_t>(j) * (nx + 1) + i]; };
  for (int j = 1; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) {
      const double ub = 0.5 * (v.u(i, j - 1) + v.u(i, j));
      const double vb = 0.5 * (v.v(i - 1, j) + v.v(i, j));
      uv_at(i, j) = ub * vb;
    }
  }

  for (int j = 0; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) {
      const double ur = 0.5 * (v.u(i, j) + v.u(i + 1, j));
      const double ul = 0.5 * (v.u(i - 1, j) + v.u(i, j));
      const double adv = (ur * ur - ul * ul) / hx + (uv_at(i, j + 1) - uv_at(i, j)) / hy;
      const double c = v.u(i, j);
      const double s = j > 0 ? v.u(i, j - 1) : -c;
      const double n = j < ny - 1 ? v.u(i, j + 1) : -c;
      const double lap = (v.u(i + 1, j) - 2.0 * c + v.u(i - 1, j)) * ihx2 + (n - 2.0 * c + s) * ihy2;
      out.u(i, j) = -adv + nu * lap;
    }
  }
  for (int j = 1; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double vt = 0.5 * (v.v(i, j) + v.v(i, j + 1));
      const double vbm = 0.5 * (v.v(i, j - 1) + v.v(i, j));
      const double adv = (uv_at(i + 1, j) - uv_at(i, j)) / hx + (vt * vt - vbm * vbm) / hy;
      const double c = v.v(i, j);
      const double w = i > 0 ? v.v(i - 1, j) : -c;
      const double e = i < nx - 1 ? v.v(i + 1, j) : -c;
      const double lap = (e - 2.0 * c + w) * ihx2 + (v.v(i, j + 1) - 2.0 * c + v.v(i, j - 1)) * ihy2;
      out.v(i, j) = -adv + nu * lap;
    }
  }
  return out;
}

std::string cell_location(const Grid& g, std::size_t k) {
  const int i = static_cast<int>(k % static_cast<std::size_t>(g.nx()));
  const int j = static_cast<int>(k / static_cast<std::size_t>(g.nx()));
  std::ostringstream os;
  os << "cell (" << i << ", " << j << ") at x = " << g.xc(i) << ", y = " << g.yc(j);
  return os.str();
}

void scale_to_peak(VectorField& v, double peak) {
  const double m = v.max_abs();
  if (m > 0.0) v *= peak / m;
}

void scale_to_peak(ScalarField& f, double peak) {
  const double m = f.max_abs();
  if (m > 0.0) f *= peak / m;
}

}  // namespace

void StepControl::validate() const {
  if (!(cfl_safety > 0.0)) fail(ErrorCategory::kInput, "cfl_safety must be positive");
  if (!(cfl_safety < 1.0) && !allow_unstable)
    fail(ErrorCategory::kInput, "cfl_safety must be below 1 (set allow_unstable to override)");
  if (!(dt_max > 0.0)) fail(ErrorCategory::kInput, "dt_max must be positive");
  if (!(projection_tol > 0.0)) fail(ErrorCategory::kInput, "projection_tol must be positive");
}

UniformStream::UniformStream(std::uint64_t seed) : engine_(seed) {}

double UniformStream::next() {
  // Top 53 bits; std::uniform_real_distribution is not portable across libraries.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::vector<double> streamfunction_corners(const Grid& g, const std::vector<StreamMode>& modes) {
  const int nx = g.nx(), ny = g.ny();
  std::vector<double> psi(static_cast<std::size_t>(nx + 1) * (ny + 1), 0.0);
  for (const StreamMode& mode : modes) {
    if (mode.k < 1 || mode.l < 1) fail(ErrorCategory::kInput, "streamfunction mode indices must be >= 1");
    for (int j = 0; j <= ny; ++j) {
      const double y = g.yf(j) / g.ly();
      const double sy = std::sin(mode.l * kPi * y) * std::sin(kPi * y);
      for (int i = 0; i <= nx; ++i) {
        const double x = g.xf(i) / g.lx();
        const double sx = std::sin(mode.k * kPi * x) * std::sin(kPi * x);
        psi[static_cast<std::size_t>(j) * (nx + 1) + i] += mode.amplitude * sx * sy;
      }
    }
  }
  // sin(pi) is not exactly zero; pin the wall values.
  for (int i = 0; i <= nx; ++i) {
    psi[i] = 0.0;
    psi[static_cast<std::size_t>(ny) * (nx + 1) + i] = 0.0;
  }
  for (int j = 0; j <= ny; ++j) {
    psi[static_cast<std::size_t>(j) * (nx + 1)] = 0.0;
    psi[static_cast<std::size_t>(j) * (nx + 1) + nx] = 0.0;
  }
  return psi;
}

PerturbationState make_initial_state(const Grid& grid, const SteadyState& steady,
                                     const InitialPerturbation& init) {
  if (!(steady.grid() == grid)) fail(ErrorCategory::kInput, "initial state: grid mismatch with steady state");
  PerturbationState s(grid);
  UniformStream rng(init.seed);

  s.v_tilde = curl_of_streamfunction(grid, streamfunction_corners(grid, init.modes));
  if (init.peak_speed > 0.0) scale_to_peak(s.v_tilde, init.peak_speed);
  if (init.random_velocity_modes > 0 && init.random_velocity_peak > 0.0) {
    std::vector<StreamMode> random;
    for (int l = 1; l <= init.random_velocity_modes; ++l)
      for (int k = 1; k <= init.random_velocity_modes; ++k)
        random.push_back({k, l, rng.symmetric() / (k * k + l * l)});
    VectorField extra = curl_of_streamfunction(grid, streamfunction_corners(grid, random));
    scale_to_peak(extra, init.random_velocity_peak);
    s.v_tilde += extra;
  }

  const double lmin = std::min(grid.lx(), grid.ly());
  for (const TemperatureBump& b : init.bumps) {
    if (!(b.width > 0.0)) fail(ErrorCategory::kInput, "temperature bump width must be positive");
    const double cx = b.x * grid.lx(), cy = b.y * grid.ly(), w = b.width * lmin;
    s.theta_tilde += ScalarField::from_function(grid, [&](double x, double y) {
      const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
      return b.amplitude * std::exp(-r2 / (2.0 * w * w)) * std::sin(kPi * x / grid.lx()) *
             std::sin(kPi * y / grid.ly());
    });
  }
  if (init.random_temperature_modes > 0 && init.random_temperature_peak > 0.0) {
    ScalarField extra(grid);
    for (int l = 1; l <= init.random_temperature_modes; ++l) {
      for (int k = 1; k <= init.random_temperature_modes; ++k) {
        const double a = rng.symmetric() / (k * k + l * l);
        extra += ScalarField::from_function(grid, [&](double x, double y) {
          return a * std::sin(k * kPi * x / grid.lx()) * std::sin(l * kPi * y / grid.ly());
        });
      }
    }
    scale_to_peak(extra, init.random_temperature_peak);
    s.theta_tilde += extra;
  }

  if (!s.v_tilde.all_finite() || !s.theta_tilde.all_finite())
    fail(ErrorCategory::kInput, "initial perturbation is not finite");
  const auto& th = s.theta_tilde.values();
  const auto& hat = steady.theta_hat().values();
  for (std::size_t k = 0; k < th.size(); ++k) {
    if (1.0 + th[k] / hat[k] < 10.0 * kPositivityFloor) {
      fail(ErrorCategory::kInput,
           "initial perturbation makes the temperature non-positive at " + cell_location(grid, k));
    }
  }
  return s;
}

double stable_dt(const PerturbationState& state, const SteadyState& steady, const Material& mat,
                 const StepControl& ctrl) {
  (void)steady;
  const Grid& g = state.grid();
  const double h = g.h_min();
  const double nu = mat.kinematic_viscosity();
  const double alpha = mat.thermal_diffusivity();
  const double vmax = state.v_tilde.max_abs();
  double dt = std::min({h * h / (4.0 * nu), h * h / (4.0 * alpha), ctrl.dt_max});
  if (vmax > 0.0) {
    dt = std::min(dt, h / vmax);
    // Forward Euler with centered advection also needs dt < 2 D / |v|^2.
    dt = std::min(dt, 2.0 * std::min(nu, alpha) / (vmax * vmax));
  }
  return ctrl.cfl_safety * dt;
}

ScalarField strain_rate_sq(const VectorField& v) { return double_dot(sym_grad(v)); }

double kinetic_energy(const PerturbationState& state, const Material& mat) {
  return 0.5 * mat.rho * inner(state.v_tilde, state.v_tilde);
}

double dissipation(const PerturbationState& state, const Material& mat) {
  return 2.0 * mat.mu * integrate(strain_rate_sq(state.v_tilde));
}

ScalarField advective_derivative(const VectorField& v, const ScalarField& f) {
  const Grid& g = v.grid();
  const int nx = g.nx(), ny = g.ny();
  ScalarField out(g);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double c = f(i, j);
      double acc = 0.0;
      if (i > 0) acc += v.u(i, j) * (c - f(i - 1, j));
      if (i < nx - 1) acc += v.u(i + 1, j) * (f(i + 1, j) - c);
      double acc_y = 0.0;
      if (j > 0) acc_y += v.v(i, j) * (c - f(i, j - 1));
      if (j < ny - 1) acc_y += v.v(i, j + 1) * (f(i, j + 1) - c);
      out(i, j) = 0.5 * acc / g.hx() + 0.5 * acc_y / g.hy();
    }
  }
  return out;
}

PerturbationState step(const PerturbationState& state, const SteadyState& steady,
                       const Material& mat, const StepControl& ctrl, double dt,
                       StepStats* stats) {
  const Grid& g = state.grid();
  if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorCategory::kInput, "time step must be positive");
  const double nu = mat.kinematic_viscosity();
  const double alpha = mat.thermal_diffusivity();

  // Viscous heating from the old velocity.
  const ScalarField dd = strain_rate_sq(state.v_tilde);

  VectorField vstar = state.v_tilde;
  {
    VectorField rhs = momentum_rhs(state.v_tilde, nu);
    rhs *= dt;
    vstar += rhs;
  }

  // Projection: -L_N p = -(rho/dt) div v*, warm-started from the old pressure.
  PerturbationState next(g);
  next.t = state.t + dt;
  next.p_tilde = state.p_tilde;
  ScalarField b = divergence(vstar);
  b *= -mat.rho / dt;
  const double scale = dt / mat.rho;
  const int cap = 10 * static_cast<int>(g.cell_count());
  const CgResult cg = conjugate_gradient(
      [&](const std::vector<double>& x, std::vector<double>& out) { apply_neg_neumann(g, x, out); },
      b.values(), next.p_tilde.values(), cap,
      [&](const std::vector<double>& r, int) {
        double m = 0.0;
        for (double x : r) m = std::max(m, std::abs(x));
        return scale * m <= ctrl.projection_tol;
      },
      remove_mean);
  if (!next.p_tilde.all_finite() || !vstar.all_finite())
    fail(ErrorCategory::kBlowup, "non-finite values in the velocity predictor at t = " + std::to_string(state.t));
  if (!cg.converged) {
    std::ostringstream os;
    os << "pressure projection did not reach " << ctrl.projection_tol << " in " << cap
       << " iterations at t = " << state.t;
    fail(ErrorCategory::kSolver, os.str());
  }

  VectorField corr = gradient(next.p_tilde);
  corr *= scale;
  next.v_tilde = vstar - corr;

  // Temperature: (v.grad) of the total temperature with the projected velocity.
  ScalarField total = steady.theta_hat() + state.theta_tilde;
  const ScalarField adv = advective_derivative(next.v_tilde, total);
  const ScalarField lap = laplacian_dirichlet(state.theta_tilde, DirichletData::zeros(g));
  const double heat = 2.0 * mat.mu / (mat.rho * mat.cv_ref);
  next.theta_tilde = state.theta_tilde;
  auto& th = next.theta_tilde.values();
  for (std::size_t k = 0; k < th.size(); ++k)
    th[k] += dt * (-adv.values()[k] + alpha * lap.values()[k] + heat * dd.values()[k]);

  if (!next.v_tilde.all_finite() || !next.theta_tilde.all_finite())
    fail(ErrorCategory::kBlowup, "non-finite values after step at t = " + std::to_string(next.t));
  const auto& hat = steady.theta_hat().values();
  for (std::size_t k = 0; k < th.size(); ++k) {
    if (1.0 + th[k] / hat[k] < kPositivityFloor) {
      std::ostringstream os;
      os << "temperature ratio 1 + theta/theta_hat = " << 1.0 + th[k] / hat[k] << " at "
         << cell_location(g, k) << ", t = " << next.t;
      fail(ErrorCategory::kPositivity, os.str());
    }
  }

  if (stats) {
    stats->pressure_iterations = cg.iterations;
    stats->max_divergence = divergence(next.v_tilde).max_abs();
  }
  return next;
}

RunResult run(PerturbationState initial, const SteadyState& steady, const Material& mat,
              const StepControl& ctrl, const RunOptions& options, const Sampler& sampler) {
  mat.validate();
  ctrl.validate();
  if (!(options.t_end > 0.0)) fail(ErrorCategory::kInput, "t_end must be positive");
  if (!(options.sample_interval > 0.0) || options.sample_interval > options.t_end)
    fail(ErrorCategory::kInput, "sample_interval must lie in (0, t_end]");

  const Grid& g = initial.grid();
  const double nu = mat.kinematic_viscosity();
  const double alpha = mat.thermal_diffusivity();
  RunResult result{std::move(initial)};
  PerturbationState& s = result.final_state;
  auto track = [&] {
    const double vh = s.v_tilde.max_abs() * g.h_min();
    result.max_cell_reynolds = std::max(result.max_cell_reynolds, vh / nu);
    result.max_cell_peclet = std::max(result.max_cell_peclet, vh / alpha);
  };
  track();
  if (sampler) sampler(s);

  const long samples = std::lround(options.t_end / options.sample_interval);
  for (long n = 1; n <= samples; ++n) {
    const double target = std::min(options.t_end, n * options.sample_interval);
    while (s.t < target) {
      double dt = stable_dt(s, steady, mat, ctrl);
      const double remaining = target - s.t;
      // Avoid a sliver step at the end of each sample window.
      if (dt >= remaining || remaining - dt < 1e-9 * dt) {
        dt = remaining;
      } else if (remaining < 2.0 * dt) {
        dt = 0.5 * remaining;
      }
      StepStats st;
      PerturbationState next = step(s, steady, mat, ctrl, dt, &st);
      if (dt == remaining) next.t = target;
      s = std::move(next);
      ++result.steps;
      result.pressure_iterations += st.pressure_iterations;
      result.max_divergence = std::max(result.max_divergence, st.max_divergence);
      track();
    }
    if (sampler) sampler(s);
  }
  return result;
}

}  // namespace nsfstab
