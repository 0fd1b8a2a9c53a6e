#pragma once

// Lyapunov-type functionals of the perturbation, their time-derivative
// formulas, and trajectory diagnostics.
//
// Notation: x = theta_tilde / theta_hat (cellwise), s_diff = cv ln(1 + x),
// d_m = (1 + x)^(m/2) - 1.
//
//   V       = int rho cv theta_hat (x - ln(1+x)) + KE
//   V_m     = int rho cv theta_hat (x - ((1+x)^m - 1)/m) + KE
//   Y_mn    = V_m - V_n = int rho cv theta_hat f6(x; m, n)
//
// All functionals share the stepper's discrete calculus: D:D from
// strain_rate_sq, face gradients with Dirichlet wall data, and
// advective_derivative for v.grad(theta_hat).

#include <string>
#include <vector>

#include "nsfstab/evolution.hpp"
#include "nsfstab/grid.hpp"
#include "nsfstab/steady.hpp"
#include "nsfstab/thermo.hpp"

namespace nsfstab {

// 1e-12 * rho cv max(theta_hat) |Omega|.
double quadrature_epsilon(const SteadyState& steady, const Material& mat);

double v_meq(const PerturbationState& s, const SteadyState& steady, const Material& mat);
double v_meq_theta_m(const PerturbationState& s, const SteadyState& steady, const Material& mat,
                     double m);
// Direct thermal integral.
double y_mn(const PerturbationState& s, const SteadyState& steady, const Material& mat,
            const ExponentPair& pair);
// V_m - V_n, used as a cross-check of the direct form.
double y_mn_by_subtraction(const PerturbationState& s, const SteadyState& steady,
                           const Material& mat, const ExponentPair& pair);

// Contributions to dV/dt; total() is the predicted derivative.
struct VmeqRates {
  double diffusive = 0.0;    // -int kappa theta_hat |grad ln(1+x)|^2
  double dissipative = 0.0;  // -int 2 mu D:D / (1+x)
  double coupling = 0.0;     // -int rho (grad theta_hat . v) s_diff
  double total() const { return diffusive + dissipative + coupling; }
};
VmeqRates v_meq_dot_rhs(const PerturbationState& s, const SteadyState& steady, const Material& mat);

// Contributions to dV_m/dt.
struct VmeqThetaRates {
  double grad_term = 0.0;             // -4 (1-m)/m^2 int kappa theta_hat |grad d_m|^2
  double weighted_dissipation = 0.0;  // -int 2 mu D:D (1+x)^(m-1)
  double coupling = 0.0;              // -int rho cv (grad theta_hat . v) (1-m)/m ((1+x)^m - 1)
  double total() const { return grad_term + weighted_dissipation + coupling; }
};
VmeqThetaRates v_meq_theta_m_dot_rhs(const PerturbationState& s, const SteadyState& steady,
                                     const Material& mat, double m);

// The coupling integral written before and after integration by parts:
// int rho theta_hat (v . grad s_diff) and -int rho (grad theta_hat . v) s_diff.
// They agree to O(h^2).
struct CouplingForms {
  double transport = 0.0;
  double by_parts = 0.0;
};
CouplingForms coupling_forms(const PerturbationState& s, const SteadyState& steady,
                             const Material& mat);

// Decay rate constant. `rate` is normalized against Y in joules, i.e.
// 4 n (1-m) kappa / (m^2 C_P rho cv) * min/max theta_hat. `literal` omits the
// rho cv division.
struct KConstant {
  double rate = 0.0;     // s^-1
  double literal = 0.0;  // kappa/C_P units, without rho cv
};
KConstant k_mn(const SteadyState& steady, const Material& mat, const ExponentPair& pair);

// Positive parts entering H_mn.
struct HTerms {
  double grad_n_with_m = 0.0;  // 4 (1-m)/m^2 int kappa theta_hat |grad d_n|^2
  double grad_n_with_n = 0.0;  // 4 (1-n)/n^2 int kappa theta_hat |grad d_n|^2
  double weighted_dissipation_m = 0.0;
  double weighted_dissipation_n = 0.0;
  double abs_coupling_m = 0.0;
  double abs_coupling_n = 0.0;
  double total() const {
    return grad_n_with_m + grad_n_with_n + weighted_dissipation_m + weighted_dissipation_n +
           abs_coupling_m + abs_coupling_n;
  }
};
HTerms h_terms(const PerturbationState& s, const SteadyState& steady, const Material& mat,
               const ExponentPair& pair);
double h_mn(const PerturbationState& s, const SteadyState& steady, const Material& mat,
            const ExponentPair& pair);

// int rho cv theta_hat |s_diff / cv|^l
double rel_entropy_norm(const PerturbationState& s, const SteadyState& steady, const Material& mat,
                        double l);

struct FunctionalSample {
  double t = 0.0;
  double v_meq = 0.0;
  double v_meq_theta_m = 0.0;
  double v_meq_theta_n = 0.0;
  double y_mn = 0.0;
  double ke = 0.0;
  double dissipation = 0.0;
  double weighted_dissipation_m = 0.0;  // int 2 mu D:D (1+x)^(m-1), >= 0
  double weighted_dissipation_n = 0.0;
  double grad_dthm_term = 0.0;          // 4 (1-m)/m^2 int kappa theta_hat |grad d_m|^2, >= 0
  double grad_dthn_term = 0.0;
  double coupling_term_m = 0.0;         // signed contribution to dV_m/dt
  double coupling_term_n = 0.0;
  double h_mn = 0.0;
  double sdiff_l2 = 0.0;                // (int s_diff^2)^(1/2)
  std::vector<double> rel_entropy;      // one per configured l

  // Extra columns for the identity checks.
  double v_meq_rate_diffusive = 0.0;
  double v_meq_rate_dissipative = 0.0;
  double v_meq_rate_coupling = 0.0;
  double v_l2 = 0.0;                    // int |v|^2
  double theta_l2 = 0.0;                // int theta^2
  double theta_grad_l2 = 0.0;           // int kappa |grad theta|^2
  double heating_moment = 0.0;          // int 2 mu D:D theta
  double coupling_moment = 0.0;         // int rho cv (v . grad theta_hat) theta
  double min_ratio = 1.0;               // min of 1 + x
  double cumulative_dissipation = 0.0;  // trapezoid int_0^t int 2 mu D:D
  double cumulative_h = 0.0;            // trapezoid int_0^t H
};

FunctionalSample sample_functionals(const PerturbationState& s, const SteadyState& steady,
                                    const Material& mat, const ExponentPair& pair,
                                    const std::vector<double>& l_values);

struct FunctionalTrace {
  std::vector<FunctionalSample> samples;
  ExponentPair pair{0.6, 0.9};
  std::vector<double> l_values;
  KConstant k;
  double quad_eps = 0.0;
  double sample_interval = 0.0;
  double rho_cv = 0.0;

  // Appends and fills the cumulative columns. Throws if t does not increase.
  void append(FunctionalSample sample);

  std::vector<double> column(double FunctionalSample::*field) const;
  std::vector<double> times() const { return column(&FunctionalSample::t); }
};

// dY/dt <= -K Y + H checked with central differences at interior samples.
struct InequalityReport {
  int checked = 0;
  int violations = 0;                  // beyond the local tolerance
  double violation_fraction = 0.0;
  double max_normalized_violation = 0.0;  // signed max of (dY/dt - rhs) / (|K Y| + H + eps)
  int companion_violations = 0;        // dY/dt <= K Y + H
  int literal_violations = 0;          // with the K that omits the rho cv division
  double literal_violation_fraction = 0.0;
  double budget_max_violation = 0.0;   // integrated form over all pairs s < t, normalized by Y(0)
};
InequalityReport differential_inequality_check(const FunctionalTrace& trace);

// Pointwise thermal identity between two consecutive states.
//   time:  rho cv theta_hat (F(x1) - F(x0)) / dt + rho div(v1 cv theta_hat F(x0))
//   space: div(kappa grad(theta_hat F)) - G + 2 mu D:D F'(x) - rho cv Phi(x) v1 . grad theta_hat
// with F = x - ln(1+x) (log) or x - ((1+x)^m - 1)/m (power). Returns time - space.
enum class PointwiseForm { kLog, kPower };
struct PointwiseResidual {
  ScalarField residual;
  ScalarField time_term;
  double scale = 0.0;  // max |time term| or |space term|
};
PointwiseResidual pointwise_residual_check(const PerturbationState& s0, const PerturbationState& s1,
                                           const SteadyState& steady, const Material& mat,
                                           PointwiseForm form, double m = 0.5);

// Energy balance of int theta^2, checked in two forms:
//   literal:   rho cv d/dt int theta^2     = -int kappa |grad theta|^2 + int 2 mu D:D theta + C
//   corrected: rho cv/2 d/dt int theta^2   = -int kappa |grad theta|^2 + int 2 mu D:D theta - C
// with C = int rho cv (v . grad theta_hat) theta.
struct EnergyMethodReport {
  double literal_residual = 0.0;    // max over interior samples, normalized
  double corrected_residual = 0.0;
  double scale = 0.0;
};
EnergyMethodReport energy_method_diagnostic(const FunctionalTrace& trace);

}  // namespace nsfstab
