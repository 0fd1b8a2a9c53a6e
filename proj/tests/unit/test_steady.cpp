#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nsfstab/error.hpp"
#include "nsfstab/evolution.hpp"
#include "nsfstab/steady.hpp"

using namespace nsfstab;
using std::numbers::pi;

TEST_CASE("constant wall data gives a constant steady state") {
  const Grid g(24, 24, 1.0, 1.0);
  const SteadyState s = solve_steady_heat(g, Material{}, BoundaryProfile::constant(300.0));
  CHECK(s.theta_hat_min() == doctest::Approx(300.0).epsilon(1e-14));
  CHECK(s.theta_hat_max() == doctest::Approx(300.0).epsilon(1e-14));
  CHECK(s.grad_theta_hat_max() < 1e-9);
}

TEST_CASE("linear wall data is reproduced to round-off") {
  const Grid g(40, 32, 1.0, 0.8);
  const SteadyState s = solve_steady_heat(g, Material{}, BoundaryProfile::linear_x(300.0, 20.0), 1e-14);
  double err = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) err = std::max(err, std::abs(s.theta_hat()(i, j) - (300.0 + 20.0 * g.xc(i))));
  CHECK(err <= 1e-12);
  CHECK(s.grad_theta_hat_max() == doctest::Approx(20.0).epsilon(1e-10));
}

TEST_CASE("hot-left cold-right: residual and maximum principle") {
  const Grid g(32, 32, 1.0, 1.0);
  const double tol = 1e-9;
  const SteadyState s = solve_steady_heat(g, Material{}, BoundaryProfile::two_wall(290.0, 30.0), tol);
  CHECK(s.relative_residual() <= tol);
  CHECK(s.theta_hat_min() >= s.wall().min());
  CHECK(s.theta_hat_max() <= s.wall().max());
  CHECK(s.theta_hat_min() == s.theta_hat().min());
  CHECK(s.theta_hat_max() == s.theta_hat().max());
}

TEST_CASE("input validation") {
  const Grid g(8, 8, 1.0, 1.0);
  CHECK_THROWS_AS(solve_steady_heat(g, Material{}, BoundaryProfile::constant(-5.0)), Error);
  CHECK_THROWS_AS(solve_steady_heat(g, Material{}, BoundaryProfile::two_wall(100.0, -150.0)), Error);
  CHECK_THROWS_AS(solve_steady_heat(g, Material{}, BoundaryProfile::constant(300.0), 1e-3), Error);
  CHECK_THROWS_AS(BoundaryProfile::parse_kind("parabolic"), Error);
  DirichletData short_table = DirichletData::constant(Grid(4, 4, 1.0, 1.0), 300.0);
  CHECK_THROWS_AS(BoundaryProfile::tabulated(short_table).evaluate(g), Error);
}

TEST_CASE("Poincare constant: closed form, monotonicity, inverse iteration") {
  CHECK(poincare_constant(Grid(8, 8, 1.0, 1.0)) == doctest::Approx(1.0 / (2.0 * pi * pi)));
  CHECK(poincare_constant(Grid(8, 8, 2.0, 1.0)) > poincare_constant(Grid(8, 8, 1.0, 1.0)));

  // Inverse power iteration on the discrete Dirichlet Laplacian.
  const Grid g(64, 64, 1.0, 1.0);
  ScalarField x = ScalarField::from_function(g, [](double a, double b) { return a * (1 - a) * b * (1 - b) + 0.1 * a; });
  double lambda = 0.0;
  for (int it = 0; it < 30; ++it) {
    const double norm = std::sqrt(integrate(hadamard(x, x)));
    x *= 1.0 / norm;
    const ScalarField y = solve_dirichlet_poisson(x, 1e-12);
    lambda = 1.0 / integrate(hadamard(x, y));
    x = y;
  }
  CHECK(std::abs(1.0 / lambda - poincare_constant(g)) / poincare_constant(g) < 0.01);
}

TEST_CASE("discrete Poincare inequality on random zero-boundary fields") {
  const Grid g(32, 32, 1.0, 1.0);
  const double cp = poincare_constant(g), h2 = g.hx() * g.hx();
  UniformStream rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    ScalarField f(g);
    if (trial % 2) {
      for (double& v : f.values()) v = rng.symmetric();
    } else {
      const double a = rng.symmetric(), b = rng.symmetric();
      f = ScalarField::from_function(g, [a, b](double x, double y) {
        return std::sin(pi * x) * std::sin(pi * y) + a * std::sin(2 * pi * x) * std::sin(pi * y) +
               b * std::sin(3 * pi * x) * std::sin(2 * pi * y);
      });
    }
    const VectorField gr = gradient(f, DirichletData::zeros(g));
    CHECK(integrate(hadamard(f, f)) <= cp * inner(gr, gr) * (1.0 + 5.0 * h2));
  }
}

TEST_CASE("the steady state is a fixed point of the stepper") {
  const Grid g(24, 24, 1.0, 1.0);
  Material mat;
  mat.mu = 0.1;
  mat.kappa_ref = 418.0;
  const SteadyState s = solve_steady_heat(g, mat, BoundaryProfile::sinusoidal_arc(300.0, 20.0));
  PerturbationState st(g);
  const StepControl ctrl;
  const double dt = stable_dt(st, s, mat, ctrl);
  for (int k = 0; k < 100; ++k) st = step(st, s, mat, ctrl, dt);
  CHECK(st.theta_tilde.max_abs() < 1e-12);
  CHECK(st.v_tilde.max_abs() < 1e-12);
}
