#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nsfstab/evolution.hpp"
#include "nsfstab/grid.hpp"
#include "nsfstab/harness.hpp"

using namespace nsfstab;
using std::numbers::pi;

namespace {

double trig(double x, double y) { return std::sin(pi * x) * std::sin(pi * y); }

double interior_max(const VectorField& a, const VectorField& b) {
  const Grid& g = a.grid();
  double e = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i) e = std::max(e, std::abs(a.u(i, j) - b.u(i, j)));
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) e = std::max(e, std::abs(a.v(i, j) - b.v(i, j)));
  return e;
}

VectorField random_no_slip(const Grid& g, std::uint64_t seed) {
  UniformStream rng(seed);
  std::vector<StreamMode> modes;
  for (int k = 1; k <= 3; ++k)
    for (int l = 1; l <= 3; ++l) modes.push_back({k, l, rng.symmetric()});
  return curl_of_streamfunction(g, streamfunction_corners(g, modes));
}

ScalarField random_scalar(const Grid& g, std::uint64_t seed) {
  UniformStream rng(seed);
  ScalarField f(g);
  for (double& x : f.values()) x = rng.symmetric();
  return f;
}

}  // namespace

TEST_CASE("grid rejects degenerate geometry") {
  CHECK_THROWS_AS(Grid(3, 8, 1.0, 1.0), Error);
  CHECK_THROWS_AS(Grid(8, 8, 0.0, 1.0), Error);
  const Grid g(8, 16, 2.0, 1.0);
  CHECK(g.hx() == doctest::Approx(0.25));
  CHECK(g.hy() == doctest::Approx(1.0 / 16));
  CHECK(ScalarField(g).size() == 128);
}

TEST_CASE("gradient of a constant with matching wall data vanishes") {
  const Grid g(12, 10, 1.0, 2.0);
  const ScalarField f(g, 7.5);
  const VectorField gr = gradient(f, DirichletData::constant(g, 7.5));
  CHECK(gr.max_abs() == 0.0);
}

TEST_CASE("gradient of a linear field is exact including wall faces") {
  const Grid g(16, 12, 1.5, 1.0);
  const double a = 3.25;
  const auto lin = [a](double x, double) { return a * x; };
  const VectorField gr = gradient(ScalarField::from_function(g, lin), DirichletData::from_function(g, lin));
  for (double u : gr.u_values()) CHECK(u == doctest::Approx(a).epsilon(1e-12));
  for (double v : gr.v_values()) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("gradient of sin sin converges at second order") {
  double err[2];
  for (int k = 0; k < 2; ++k) {
    const Grid g(32 << k, 32 << k, 1.0, 1.0);
    const VectorField num = gradient(ScalarField::from_function(g, trig), DirichletData::zeros(g));
    const VectorField ref = VectorField::from_functions(
        g, [](double x, double y) { return pi * std::cos(pi * x) * std::sin(pi * y); },
        [](double x, double y) { return pi * std::sin(pi * x) * std::cos(pi * y); });
    err[k] = interior_max(num, ref);
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("divergence: zero field, discrete curl, linear field") {
  const Grid g(16, 20, 1.0, 1.3);
  CHECK(divergence(VectorField(g)).max_abs() == 0.0);
  CHECK(divergence(random_no_slip(g, 3)).max_abs() < 1e-12);
  const VectorField lin = VectorField::from_functions(g, [](double x, double) { return x; },
                                                      [](double, double) { return 0.0; });
  for (double d : divergence(lin).values()) CHECK(d == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sym_grad of a pure shear and double_dot") {
  const Grid g(10, 10, 1.0, 1.0);
  const double gamma = 0.8;
  const VectorField v = VectorField::from_functions(g, [gamma](double, double y) { return gamma * y; },
                                                    [](double, double) { return 0.0; });
  const SymGradField d = sym_grad(v);
  CHECK(d.d11().max_abs() < 1e-14);
  CHECK(d.d22().max_abs() < 1e-14);
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) CHECK(d.d12(i, j) == doctest::Approx(gamma / 2));
  const ScalarField dd = double_dot(d);
  for (int j = 1; j < g.ny() - 1; ++j)
    for (int i = 0; i < g.nx(); ++i) CHECK(dd(i, j) == doctest::Approx(gamma * gamma / 2));
  CHECK(double_dot(sym_grad(VectorField(g))).max_abs() == 0.0);
  CHECK(double_dot(sym_grad(random_no_slip(g, 5))).min() >= 0.0);
}

TEST_CASE("sym_grad of a manufactured field: second order inside, first order on wall corners") {
  // u = sin(pi x) sin(pi y)^2, v = -sin(pi x)^2 sin(pi y): vanishes on all walls.
  // The reflection ghost gives 2u/h at the wall, which is one-sided.
  double inner_err[2], wall_err[2];
  for (int k = 0; k < 2; ++k) {
    const Grid g(32 << k, 32 << k, 1.0, 1.0);
    const VectorField v = VectorField::from_functions(
        g, [](double x, double y) { return std::sin(pi * x) * std::pow(std::sin(pi * y), 2); },
        [](double x, double y) { return -std::pow(std::sin(pi * x), 2) * std::sin(pi * y); });
    const SymGradField d = sym_grad(v);
    double e = 0.0, w = 0.0;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const double x = g.xc(i), y = g.yc(j);
        e = std::max(e, std::abs(d.d11()(i, j) - pi * std::cos(pi * x) * std::pow(std::sin(pi * y), 2)));
      }
    for (int j = 0; j <= g.ny(); ++j)
      for (int i = 0; i <= g.nx(); ++i) {
        const double x = g.xf(i), y = g.yf(j);
        const double uy = 2 * pi * std::sin(pi * x) * std::sin(pi * y) * std::cos(pi * y);
        const double vx = -2 * pi * std::sin(pi * x) * std::cos(pi * x) * std::sin(pi * y);
        const double err = std::abs(d.d12(i, j) - 0.5 * (uy + vx));
        const bool wall = i == 0 || j == 0 || i == g.nx() || j == g.ny();
        (wall ? w : e) = std::max(wall ? w : e, err);
      }
    inner_err[k] = e;
    wall_err[k] = w;
  }
  CHECK(inner_err[0] / inner_err[1] == doctest::Approx(4.0).epsilon(0.15));
  CHECK(wall_err[0] / wall_err[1] == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("integrate: constants and the sin sin integral") {
  const Grid g(8, 8, 2.0, 3.0);
  CHECK(integrate(ScalarField(Grid(8, 8, 1.0, 1.0), 1.0)) == doctest::Approx(1.0));
  CHECK(integrate(ScalarField(g, 2.5)) == doctest::Approx(15.0));
  double err[2];
  for (int k = 0; k < 2; ++k) {
    const Grid gk(16 << k, 16 << k, 1.0, 1.0);
    err[k] = std::abs(integrate(ScalarField::from_function(gk, trig)) - 4.0 / (pi * pi));
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("face_dot integrates to the face inner product") {
  const Grid g(12, 9, 1.0, 0.75);
  const VectorField a = random_no_slip(g, 11), b = random_no_slip(g, 12);
  CHECK(integrate(face_dot(a, b)) == doctest::Approx(inner(a, b)).epsilon(1e-13));
}

TEST_CASE("Dirichlet Laplacian: harmonic data and trig convergence") {
  const Grid g(16, 16, 1.0, 1.0);
  const auto lin = [](double x, double y) { return 2.0 + 3.0 * x - 1.5 * y; };
  CHECK(laplacian_dirichlet(ScalarField::from_function(g, lin), DirichletData::from_function(g, lin)).max_abs() <
        1e-10);
  CHECK(laplacian_dirichlet(ScalarField(g, 4.0), DirichletData::constant(g, 4.0)).max_abs() < 1e-10);
  double err[2];
  for (int k = 0; k < 2; ++k) {
    const Grid gk(32 << k, 32 << k, 1.0, 1.0);
    const ScalarField lap = laplacian_dirichlet(ScalarField::from_function(gk, trig), DirichletData::zeros(gk));
    const ScalarField ref = ScalarField::from_function(gk, [](double x, double y) { return -2 * pi * pi * trig(x, y); });
    err[k] = (lap - ref).max_abs();
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("summation by parts: int f div v = -<grad f, v>") {
  const Grid g(14, 11, 1.0, 0.8);
  const ScalarField f = random_scalar(g, 21);
  const VectorField v = random_no_slip(g, 22) + VectorField::from_functions(
                                                    g, [](double x, double y) { return std::sin(pi * x) * y; },
                                                    [](double x, double y) { return x * std::sin(pi * y / 0.8); });
  const double lhs = integrate(hadamard(f, divergence(v)));
  const double rhs = -inner(gradient(f, DirichletData::zeros(g)), v);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("operators are linear") {
  const Grid g(10, 12, 1.0, 1.0);
  const ScalarField f = random_scalar(g, 1), h = random_scalar(g, 2);
  const DirichletData z = DirichletData::zeros(g);
  const double a = 1.7, b = -0.3;
  CHECK((laplacian_dirichlet(a * f + b * h, z) - (a * laplacian_dirichlet(f, z) + b * laplacian_dirichlet(h, z)))
            .max_abs() < 1e-9);
  const VectorField v = random_no_slip(g, 3), w = random_no_slip(g, 4);
  CHECK((divergence(a * v + b * w) - (a * divergence(v) + b * divergence(w))).max_abs() < 1e-10);
  CHECK((gradient(a * f + b * h, z) - (a * gradient(f, z) + b * gradient(h, z))).max_abs() < 1e-10);
}

TEST_CASE("discrete Korn equality converges at second order") {
  const KornResult k = korn_check(32, 5);
  CHECK(k.coarse < 0.05);
  CHECK(k.ratio == doctest::Approx(4.0).epsilon(0.2));
}
