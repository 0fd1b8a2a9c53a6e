#pragma once

// Non-equilibrium steady state: the fluid at rest with the temperature
// solving the steady heat equation under Dirichlet wall data, plus the
// domain constants entering the decay rates.

#include <string>
#include <vector>

#include "nsfstab/grid.hpp"
#include "nsfstab/thermo.hpp"

namespace nsfstab {

// Wall temperature theta_b. Presets are evaluated at wall-face midpoints.
struct BoundaryProfile {
  enum class Kind {
    kConstant,      // base
    kLinearX,       // base + amplitude * x / Lx on every wall
    kSinusoidalArc, // base + amplitude * sin(pi * s), s = normalized arclength from (0,0), counterclockwise
    kTwoWall,       // left wall base + amplitude (hot), right wall base (cold), step at x = Lx/2 on top/bottom
    kTabulated,     // explicit per-face values
  };

  Kind kind = Kind::kConstant;
  double base = 300.0;
  double amplitude = 0.0;
  DirichletData table;  // used only by kTabulated

  static BoundaryProfile constant(double value);
  static BoundaryProfile linear_x(double base, double amplitude);
  static BoundaryProfile sinusoidal_arc(double base, double amplitude);
  static BoundaryProfile two_wall(double cold, double hot_minus_cold);
  static BoundaryProfile tabulated(DirichletData values);

  // Wall-face values; throws Error(kInput) if any value is not positive.
  DirichletData evaluate(const Grid& grid) const;

  static Kind parse_kind(const std::string& name);
  static std::string kind_name(Kind kind);
};

// Immutable after construction.
class SteadyState {
 public:
  SteadyState(ScalarField theta_hat, DirichletData wall, double relative_residual, int iterations);

  const Grid& grid() const noexcept { return theta_hat_.grid(); }
  const ScalarField& theta_hat() const noexcept { return theta_hat_; }
  const DirichletData& wall() const noexcept { return wall_; }
  double theta_hat_min() const noexcept { return min_; }
  double theta_hat_max() const noexcept { return max_; }
  double grad_theta_hat_max() const noexcept { return grad_max_; }
  double poincare_constant() const noexcept { return poincare_; }
  double relative_residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

  // Face gradient of theta_hat with the wall ghosts; cached.
  const VectorField& grad_theta_hat() const noexcept { return grad_; }

 private:
  ScalarField theta_hat_;
  DirichletData wall_;
  VectorField grad_;
  double min_;
  double max_;
  double grad_max_;
  double poincare_;
  double residual_;
  int iterations_;
};

// C_P = 1 / (pi^2 (1/Lx^2 + 1/Ly^2)), convention ||f||^2 <= C_P ||grad f||^2.
double poincare_constant(const Grid& grid);

// Conjugate gradient on the Dirichlet Laplacian. tol is the relative
// residual, in (0, 1e-4]. Throws Error(kSolver) with the residual history if
// the iteration cap 10 * nx * ny is reached.
SteadyState solve_steady_heat(const Grid& grid, const Material& mat,
                              const BoundaryProfile& boundary, double tol = 1e-10);

// Solves -Lap_h u = f with homogeneous Dirichlet data (same operator as the
// steady solve). Used by the Poincare cross-checks.
ScalarField solve_dirichlet_poisson(const ScalarField& f, double tol);

}  // namespace nsfstab
