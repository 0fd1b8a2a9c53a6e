#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nsfstab/error.hpp"
#include "nsfstab/functionals.hpp"

using namespace nsfstab;
using std::numbers::pi;

namespace {

Material desk_material() {
  Material mat;
  mat.mu = 0.1;
  mat.kappa_ref = 418.0;
  return mat;
}

PerturbationState perturbed(const Grid& g, const SteadyState& s, double peak, double bump) {
  InitialPerturbation ip;
  ip.modes = {{1, 1, 1.0}};
  ip.peak_speed = peak;
  if (bump != 0.0) ip.bumps = {{0.5, 0.5, 0.2, bump}};
  return make_initial_state(g, s, ip);
}

FunctionalTrace sampled_run(int n, double dt_scale, double t_end, double every) {
  const Grid g(n, n, 1.0, 1.0);
  const Material mat = desk_material();
  const SteadyState s = solve_steady_heat(g, mat, BoundaryProfile::sinusoidal_arc(300.0, 20.0));
  const ExponentPair pair(0.6, 0.9);
  FunctionalTrace tr;
  tr.pair = pair;
  tr.l_values = {3.0};
  tr.k = k_mn(s, mat, pair);
  tr.quad_eps = quadrature_epsilon(s, mat);
  tr.sample_interval = every;
  tr.rho_cv = mat.rho * mat.cv_ref;
  StepControl c;
  c.cfl_safety *= dt_scale;
  (void)run(perturbed(g, s, 0.01, 20.0), s, mat, c, RunOptions{t_end, every},
            [&](const PerturbationState& st) { tr.append(sample_functionals(st, s, mat, pair, tr.l_values)); });
  return tr;
}

}  // namespace

TEST_CASE("all functionals vanish on the steady state") {
  const Grid g(16, 16, 1.0, 1.0);
  const Material mat = desk_material();
  const SteadyState s = solve_steady_heat(g, mat, BoundaryProfile::sinusoidal_arc(300.0, 20.0));
  const PerturbationState z(g);
  const ExponentPair pair(0.6, 0.9);
  CHECK(v_meq(z, s, mat) == 0.0);
  CHECK(v_meq_theta_m(z, s, mat, 0.6) == 0.0);
  CHECK(y_mn(z, s, mat, pair) == 0.0);
  CHECK(h_mn(z, s, mat, pair) == 0.0);
  CHECK(rel_entropy_norm(z, s, mat, 3.0) == 0.0);
  CHECK(v_meq_dot_rhs(z, s, mat).total() == 0.0);
  const FunctionalSample fs = sample_functionals(z, s, mat, pair, {3.0, 4.0});
  CHECK(fs.min_ratio == 1.0);
  REQUIRE(fs.rel_entropy.size() == 2);
  CHECK(fs.rel_entropy[1] == 0.0);
}

TEST_CASE("V at theta_tilde = theta_hat equals int rho cv theta_hat (1 - ln 2)") {
  const Grid g(20, 20, 1.0, 1.0);
  const Material mat = desk_material();
  const SteadyState s = solve_steady_heat(g, mat, BoundaryProfile::two_wall(280.0, 40.0));
  PerturbationState st(g);
  st.theta_tilde = s.theta_hat();
  const double expected = mat.rho * mat.cv_ref * integrate(s.theta_hat()) * (1.0 - std::log(2.0));
  CHECK(v_meq(st, s, mat) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(rel_entropy_norm(st, s, mat, 3.0) ==
        doctest::Approx(mat.rho * mat.cv_ref * integrate(s.theta_hat()) * std::pow(std::log(2.0), 3)).epsilon(1e-13));
}

TEST_CASE("V_m tends to V as m -> 0, and Y = V_m - V_n") {
  const Grid g(24, 24, 1.0, 1.0);
  const Material mat = desk_material();
  const SteadyState s = solve_steady_heat(g, mat, BoundaryProfile::sinusoidal_arc(300.0, 20.0));
  const PerturbationState st = perturbed(g, s, 0.01, 40.0);
  const double v = v_meq(st, s, mat);
  CHECK(std::abs(v_meq_theta_m(st, s, mat, 1e-7) - v) / v < 1e-5);
  for (auto [m, n] : {std::pair{0.6, 0.9}, std::pair{0.3, 0.5}, std::pair{0.45, 0.85}}) {
    const ExponentPair pair(m, n);
    const double direct = y_mn(st, s, mat, pair);
    CHECK(direct > 0.0);
    CHECK(std::abs(direct - y_mn_by_subtraction(st, s, mat, pair)) <= 1e-9 * v_meq(st, s, mat));
  }
}

TEST_CASE("Y does not depend on the velocity") {
  const Grid g(16, 16, 1.0, 1.0);
  const Material mat = desk_material();
  const SteadyState s = solve_steady_heat(g, mat, BoundaryProfile::constant(300.0));
  const PerturbationState slow = perturbed(g, s, 0.001, 10.0);
  const PerturbationState fast = perturbed(g, s, 0.05, 10.0);
  const ExponentPair pair(0.6, 0.9);
  CHECK(y_mn(slow, s, mat, pair) == y_mn(fast, s, mat, pair));
  CHECK(v_meq(fast, s, mat) > v_meq(slow, s, mat));
}

TEST_CASE("coupling vanishes for uniform theta_hat; both forms agree by summation by parts") {
  {
    const Grid g(16, 16, 1.0, 1.0);
    const Material mat = desk_material();
    const SteadyState s = solve_steady_heat(g, mat, BoundaryProfile::constant(300.0));
    const PerturbationState st = perturbed(g, s, 0.01, 20.0);
    CHECK(coupling_forms(st, s, mat).by_parts == 0.0);
    CHECK(v_meq_dot_rhs(st, s, mat).coupling == 0.0);
    CHECK(v_meq_theta_m_dot_rhs(st, s, mat, 0.6).coupling == 0.0);
  }
  // Off-center data; the centered bump under a (1,1) roll integrates to zero.
  for (int n : {16, 32, 64}) {
    const Grid g(n, n, 1.0, 1.0);
    const Material mat = desk_material();
    const SteadyState s = solve_steady_heat(g, mat, BoundaryProfile::sinusoidal_arc(300.0, 20.0));
    InitialPerturbation ip;
    ip.modes = {{1, 1, 1.0}, {2, 1, 0.5}};
    ip.peak_speed = 0.01;
    ip.bumps = {{0.3, 0.6, 0.2, 20.0}};
    const CouplingForms cf = coupling_forms(make_initial_state(g, s, ip), s, mat);
    CHECK(std::abs(cf.by_parts) > 100.0);
    CHECK(cf.transport == doctest::Approx(cf.by_parts).epsilon(1e-10));
  }
}

TEST_CASE("derivative contributions have the expected signs") {
  const Grid g(24, 24, 1.0, 1.0);
  const Material mat = desk_material();
  const SteadyState s = solve_steady_heat(g, mat, BoundaryProfile::sinusoidal_arc(300.0, 20.0));
  const PerturbationState st = perturbed(g, s, 0.01, 20.0);
  const VmeqRates r = v_meq_dot_rhs(st, s, mat);
  CHECK(r.diffusive < 0.0);
  CHECK(r.dissipative < 0.0);
  const VmeqThetaRates rm = v_meq_theta_m_dot_rhs(st, s, mat, 0.6);
  CHECK(rm.grad_term < 0.0);
  CHECK(rm.weighted_dissipation < 0.0);
  const ExponentPair pair(0.6, 0.9);
  const HTerms h = h_terms(st, s, mat, pair);
  CHECK(h.grad_n_with_m >= 0.0);
  CHECK(h.abs_coupling_m >= 0.0);
  CHECK(h.total() == doctest::Approx(h_mn(st, s, mat, pair)));
  CHECK(h.weighted_dissipation_m == doctest::Approx(-rm.weighted_dissipation));
}

TEST_CASE("decay constant scalings") {
  const Grid g(16, 16, 1.0, 1.0);
  Material mat = desk_material();
  const ExponentPair pair(0.6, 0.9);
  const SteadyState flat = solve_steady_heat(g, mat, BoundaryProfile::constant(300.0));
  const KConstant k = k_mn(flat, mat, pair);
  const double cp = 1.0 / (2.0 * pi * pi);
  CHECK(k.literal == doctest::Approx(4.0 * 0.9 * 0.4 * mat.kappa_ref / (0.36 * cp)));
  CHECK(k.rate == doctest::Approx(k.literal / (mat.rho * mat.cv_ref)));

  Material hot = mat;
  hot.kappa_ref *= 2.0;
  CHECK(k_mn(flat, hot, pair).rate == doctest::Approx(2.0 * k.rate));

  const SteadyState tilted = solve_steady_heat(g, mat, BoundaryProfile::two_wall(200.0, 200.0));
  CHECK(k_mn(tilted, mat, pair).rate ==
        doctest::Approx(k.rate * tilted.theta_hat_min() / tilted.theta_hat_max()));

  const Grid wide(16, 16, 2.0, 1.0);
  const SteadyState ws = solve_steady_heat(wide, mat, BoundaryProfile::constant(300.0));
  CHECK(k_mn(ws, mat, pair).rate < k.rate);
  CHECK(quadrature_epsilon(flat, mat) == doctest::Approx(1e-12 * mat.rho * mat.cv_ref * 300.0));
}

TEST_CASE("trace bookkeeping") {
  FunctionalTrace tr;
  FunctionalSample a;
  a.t = 0.0;
  a.dissipation = 2.0;
  a.h_mn = 1.0;
  tr.append(a);
  FunctionalSample b = a;
  b.t = 1.0;
  b.dissipation = 4.0;
  tr.append(b);
  CHECK(tr.samples.back().cumulative_dissipation == doctest::Approx(3.0));
  CHECK(tr.samples.back().cumulative_h == doctest::Approx(1.0));
  CHECK(tr.times() == std::vector<double>{0.0, 1.0});
  CHECK_THROWS_AS(tr.append(b), Error);
}

TEST_CASE("pointwise identities vanish between zero states") {
  const Grid g(16, 16, 1.0, 1.0);
  const Material mat = desk_material();
  const SteadyState s = solve_steady_heat(g, mat, BoundaryProfile::sinusoidal_arc(300.0, 20.0));
  PerturbationState z0(g), z1(g);
  z1.t = 1.0;
  for (PointwiseForm form : {PointwiseForm::kLog, PointwiseForm::kPower}) {
    const PointwiseResidual r = pointwise_residual_check(z0, z1, s, mat, form, 0.6);
    CHECK(r.residual.max_abs() == 0.0);
  }
}

TEST_CASE("trajectory diagnostics on a short run") {
  const FunctionalTrace tr = sampled_run(24, 1.0, 40.0, 0.5);
  REQUIRE(tr.samples.size() == 81);
  for (const auto& fs : tr.samples) {
    CHECK(fs.y_mn >= -tr.quad_eps);
    CHECK(fs.h_mn >= 0.0);
    CHECK(fs.min_ratio > 0.0);
  }
  CHECK(tr.samples.back().v_meq < tr.samples.front().v_meq);
  const InequalityReport ir = differential_inequality_check(tr);
  CHECK(ir.checked == 79);
  CHECK(ir.violations == 0);
  CHECK(ir.companion_violations == 0);

  // The balance with the 1/2 and the minus sign on the coupling closes up to
  // time discretization; the other form does not.
  const EnergyMethodReport em = energy_method_diagnostic(tr);
  CHECK(em.corrected_residual < 0.1 * em.literal_residual);
}

TEST_CASE("corrected energy balance converges with the step size") {
  const EnergyMethodReport a = energy_method_diagnostic(sampled_run(16, 1.0, 4.0, 0.5));
  const EnergyMethodReport b = energy_method_diagnostic(sampled_run(16, 0.5, 4.0, 0.5));
  CHECK(b.corrected_residual < a.corrected_residual);
}
