#include "nsfstab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsfstab/error.hpp"

namespace nsfstab {

namespace {

// Cellwise ratio 1 + theta_tilde / theta_hat; throws on non-positive values.
std::vector<double> ratio_field(const PerturbationState& s, const SteadyState& steady) {
  if (!(s.grid() == steady.grid())) fail(ErrorCategory::kInput, "functional: grid mismatch");
  const auto& th = s.theta_tilde.values();
  const auto& hat = steady.theta_hat().values();
  std::vector<double> r(th.size());
  for (std::size_t k = 0; k < th.size(); ++k) {
    r[k] = 1.0 + th[k] / hat[k];
    if (!(r[k] > 0.0)) {
      std::ostringstream os;
      os << "functional evaluation: 1 + theta/theta_hat = " << r[k] << " in cell " << k;
      fail(ErrorCategory::kPositivity, os.str());
    }
  }
  return r;
}

void check_exponent(double m) {
  if (!(m > 0.0 && m < 1.0)) fail(ErrorCategory::kDomain, "exponent must lie in (0, 1)");
}

ScalarField map_ratio(const Grid& g, const std::vector<double>& r, double (*fn)(double, double),
                      double p) {
  ScalarField out(g);
  auto& o = out.values();
  for (std::size_t k = 0; k < r.size(); ++k) o[k] = fn(r[k], p);
  return out;
}

double log_of(double r, double) { return std::log(r); }
// (1+x)^p - 1 without cancellation for small x.
double pow_minus_one(double r, double p) { return std::expm1(p * std::log(r)); }

// int kappa theta_hat |grad q|^2 for q vanishing on the walls.
double weighted_grad_sq(const ScalarField& q, const SteadyState& steady, const Material& mat) {
  const VectorField g = gradient(q, DirichletData::zeros(q.grid()));
  return mat.kappa_ref * integrate(face_dot_weighted(g, g, steady.theta_hat(), steady.wall()));
}

// Thermal integrand rho cv theta_hat phi(r), integrated.
template <class Phi>
double thermal_integral(const std::vector<double>& r, const SteadyState& steady,
                        const Material& mat, Phi phi) {
  const auto& hat = steady.theta_hat().values();
  double sum = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) sum += hat[k] * phi(r[k]);
  return mat.rho * mat.cv_ref * sum * steady.grid().cell_area();
}

// x - ln(1+x), accurate near 0.
double log_gap(double r) {
  const double x = r - 1.0;
  if (std::abs(x) < 1e-3) {
    // x^2/2 - x^3/3 + x^4/4 - x^5/5
    return x * x * (0.5 - x * (1.0 / 3.0 - x * (0.25 - x * 0.2)));
  }
  return x - std::log(r);
}

// x - ((1+x)^m - 1)/m, accurate near 0.
double power_gap(double r, double m) {
  const double x = r - 1.0;
  if (std::abs(x) < 1e-3) {
    // series: (1-m)/2 x^2 - (1-m)(2-m)/6 x^3 + (1-m)(2-m)(3-m)/24 x^4
    const double a = 0.5 * (1.0 - m);
    const double b = a * (2.0 - m) / 3.0;
    const double c = b * (3.0 - m) / 4.0;
    const double d = c * (4.0 - m) / 5.0;
    return x * x * (a - x * (b - x * (c - x * d)));
  }
  return x - std::expm1(m * std::log(r)) / m;
}

// f6 in the ratio variable: (r^n - 1)/n - (r^m - 1)/m, with the small-x series.
double f6_ratio(double r, double m, double n) { return power_gap(r, m) - power_gap(r, n); }

struct Prepared {
  std::vector<double> r;
  ScalarField dd;        // D:D
  ScalarField vgrad_hat; // v . grad theta_hat
};

Prepared prepare(const PerturbationState& s, const SteadyState& steady) {
  return {ratio_field(s, steady), strain_rate_sq(s.v_tilde),
          advective_derivative(s.v_tilde, steady.theta_hat())};
}

double weighted_dissipation(const Prepared& p, const Material& mat, double m) {
  const auto& dd = p.dd.values();
  double sum = 0.0;
  for (std::size_t k = 0; k < dd.size(); ++k) sum += dd[k] * std::pow(p.r[k], m - 1.0);
  return 2.0 * mat.mu * sum * p.dd.grid().cell_area();
}

// int rho cv (v . grad theta_hat) (1-m)/m (r^m - 1)
double power_coupling(const Prepared& p, const Material& mat, double m) {
  const auto& vg = p.vgrad_hat.values();
  double sum = 0.0;
  for (std::size_t k = 0; k < vg.size(); ++k) sum += vg[k] * pow_minus_one(p.r[k], m);
  return mat.rho * mat.cv_ref * (1.0 - m) / m * sum * p.dd.grid().cell_area();
}

double grad_d_term(const Prepared& p, const SteadyState& steady, const Material& mat, double m) {
  const ScalarField d = map_ratio(steady.grid(), p.r, pow_minus_one, 0.5 * m);
  return weighted_grad_sq(d, steady, mat);
}

}  // namespace

double quadrature_epsilon(const SteadyState& steady, const Material& mat) {
  return 1e-12 * mat.rho * mat.cv_ref * steady.theta_hat_max() * steady.grid().area();
}

double v_meq(const PerturbationState& s, const SteadyState& steady, const Material& mat) {
  const auto r = ratio_field(s, steady);
  return thermal_integral(r, steady, mat, log_gap) + kinetic_energy(s, mat);
}

double v_meq_theta_m(const PerturbationState& s, const SteadyState& steady, const Material& mat,
                     double m) {
  check_exponent(m);
  const auto r = ratio_field(s, steady);
  return thermal_integral(r, steady, mat, [m](double q) { return power_gap(q, m); }) +
         kinetic_energy(s, mat);
}

double y_mn(const PerturbationState& s, const SteadyState& steady, const Material& mat,
            const ExponentPair& pair) {
  const auto r = ratio_field(s, steady);
  return thermal_integral(r, steady, mat,
                          [&](double q) { return f6_ratio(q, pair.m(), pair.n()); });
}

double y_mn_by_subtraction(const PerturbationState& s, const SteadyState& steady,
                           const Material& mat, const ExponentPair& pair) {
  return v_meq_theta_m(s, steady, mat, pair.m()) - v_meq_theta_m(s, steady, mat, pair.n());
}

VmeqRates v_meq_dot_rhs(const PerturbationState& s, const SteadyState& steady, const Material& mat) {
  const Prepared p = prepare(s, steady);
  const Grid& g = s.grid();
  VmeqRates out;
  const ScalarField lr = map_ratio(g, p.r, log_of, 0.0);
  out.diffusive = -weighted_grad_sq(lr, steady, mat);
  const auto& dd = p.dd.values();
  const auto& vg = p.vgrad_hat.values();
  double diss = 0.0, coup = 0.0;
  for (std::size_t k = 0; k < dd.size(); ++k) {
    diss += dd[k] / p.r[k];
    coup += vg[k] * lr.values()[k];
  }
  out.dissipative = -2.0 * mat.mu * diss * g.cell_area();
  out.coupling = -mat.rho * mat.cv_ref * coup * g.cell_area();
  return out;
}

VmeqThetaRates v_meq_theta_m_dot_rhs(const PerturbationState& s, const SteadyState& steady,
                                     const Material& mat, double m) {
  check_exponent(m);
  const Prepared p = prepare(s, steady);
  VmeqThetaRates out;
  out.grad_term = -4.0 * (1.0 - m) / (m * m) * grad_d_term(p, steady, mat, m);
  out.weighted_dissipation = -weighted_dissipation(p, mat, m);
  out.coupling = -power_coupling(p, mat, m);
  return out;
}

CouplingForms coupling_forms(const PerturbationState& s, const SteadyState& steady,
                             const Material& mat) {
  const auto r = ratio_field(s, steady);
  const Grid& g = s.grid();
  const ScalarField sd = map_ratio(g, r, log_of, 0.0);
  CouplingForms out;
  // v . grad s_diff on faces (s_diff = 0 on walls), weighted by theta_hat.
  const VectorField gs = gradient(sd, DirichletData::zeros(g));
  out.transport = mat.rho * mat.cv_ref *
                  integrate(face_dot_weighted(s.v_tilde, gs, steady.theta_hat(), steady.wall()));
  const ScalarField vg = advective_derivative(s.v_tilde, steady.theta_hat());
  out.by_parts = -mat.rho * mat.cv_ref * integrate(hadamard(vg, sd));
  return out;
}

KConstant k_mn(const SteadyState& steady, const Material& mat, const ExponentPair& pair) {
  const double m = pair.m(), n = pair.n();
  KConstant k;
  k.literal = 4.0 * n * (1.0 - m) * mat.kappa_ref / (m * m * steady.poincare_constant()) *
              (steady.theta_hat_min() / steady.theta_hat_max());
  k.rate = k.literal / (mat.rho * mat.cv_ref);
  return k;
}

HTerms h_terms(const PerturbationState& s, const SteadyState& steady, const Material& mat,
               const ExponentPair& pair) {
  const double m = pair.m(), n = pair.n();
  const Prepared p = prepare(s, steady);
  const double gn = grad_d_term(p, steady, mat, n);
  HTerms h;
  h.grad_n_with_m = 4.0 * (1.0 - m) / (m * m) * gn;
  h.grad_n_with_n = 4.0 * (1.0 - n) / (n * n) * gn;
  h.weighted_dissipation_m = weighted_dissipation(p, mat, m);
  h.weighted_dissipation_n = weighted_dissipation(p, mat, n);
  h.abs_coupling_m = std::abs(power_coupling(p, mat, m));
  h.abs_coupling_n = std::abs(power_coupling(p, mat, n));
  return h;
}

double h_mn(const PerturbationState& s, const SteadyState& steady, const Material& mat,
            const ExponentPair& pair) {
  return h_terms(s, steady, mat, pair).total();
}

double rel_entropy_norm(const PerturbationState& s, const SteadyState& steady, const Material& mat,
                        double l) {
  if (!(l >= 3.0)) fail(ErrorCategory::kDomain, "relative entropy norm needs l >= 3");
  const auto r = ratio_field(s, steady);
  return thermal_integral(r, steady, mat, [l](double q) { return std::pow(std::abs(std::log(q)), l); });
}

FunctionalSample sample_functionals(const PerturbationState& s, const SteadyState& steady,
                                    const Material& mat, const ExponentPair& pair,
                                    const std::vector<double>& l_values) {
  const double m = pair.m(), n = pair.n();
  const Grid& g = s.grid();
  const Prepared p = prepare(s, steady);
  const double area = g.cell_area();
  const double rc = mat.rho * mat.cv_ref;

  FunctionalSample out;
  out.t = s.t;
  out.ke = kinetic_energy(s, mat);
  out.v_l2 = inner(s.v_tilde, s.v_tilde);
  out.dissipation = 2.0 * mat.mu * integrate(p.dd);

  const double th_log = thermal_integral(p.r, steady, mat, log_gap);
  const double th_m = thermal_integral(p.r, steady, mat, [m](double q) { return power_gap(q, m); });
  const double th_n = thermal_integral(p.r, steady, mat, [n](double q) { return power_gap(q, n); });
  out.v_meq = th_log + out.ke;
  out.v_meq_theta_m = th_m + out.ke;
  out.v_meq_theta_n = th_n + out.ke;
  out.y_mn = thermal_integral(p.r, steady, mat, [&](double q) { return f6_ratio(q, m, n); });

  out.weighted_dissipation_m = weighted_dissipation(p, mat, m);
  out.weighted_dissipation_n = weighted_dissipation(p, mat, n);
  const double gm = grad_d_term(p, steady, mat, m);
  const double gn = grad_d_term(p, steady, mat, n);
  out.grad_dthm_term = 4.0 * (1.0 - m) / (m * m) * gm;
  out.grad_dthn_term = 4.0 * (1.0 - n) / (n * n) * gn;
  const double cm = power_coupling(p, mat, m);
  const double cn = power_coupling(p, mat, n);
  out.coupling_term_m = -cm;
  out.coupling_term_n = -cn;
  out.h_mn = 4.0 * (1.0 - m) / (m * m) * gn + out.grad_dthn_term + out.weighted_dissipation_m +
             out.weighted_dissipation_n + std::abs(cm) + std::abs(cn);

  const ScalarField lr = map_ratio(g, p.r, log_of, 0.0);
  double s2 = 0.0, diss = 0.0, coup = 0.0;
  const auto& dd = p.dd.values();
  const auto& vg = p.vgrad_hat.values();
  const auto& th = s.theta_tilde.values();
  double heat = 0.0, cmom = 0.0, t2 = 0.0;
  out.min_ratio = p.r.empty() ? 1.0 : p.r[0];
  for (std::size_t k = 0; k < p.r.size(); ++k) {
    const double sd = mat.cv_ref * lr.values()[k];
    s2 += sd * sd;
    diss += dd[k] / p.r[k];
    coup += vg[k] * lr.values()[k];
    heat += dd[k] * th[k];
    cmom += vg[k] * th[k];
    t2 += th[k] * th[k];
    out.min_ratio = std::min(out.min_ratio, p.r[k]);
  }
  out.sdiff_l2 = std::sqrt(s2 * area);
  out.v_meq_rate_diffusive = -weighted_grad_sq(lr, steady, mat);
  out.v_meq_rate_dissipative = -2.0 * mat.mu * diss * area;
  out.v_meq_rate_coupling = -rc * coup * area;
  out.theta_l2 = t2 * area;
  const VectorField gt = gradient(s.theta_tilde, DirichletData::zeros(g));
  out.theta_grad_l2 = mat.kappa_ref * inner(gt, gt);
  out.heating_moment = 2.0 * mat.mu * heat * area;
  out.coupling_moment = rc * cmom * area;

  for (double l : l_values) {
    out.rel_entropy.push_back(
        thermal_integral(p.r, steady, mat, [l](double q) { return std::pow(std::abs(std::log(q)), l); }));
  }
  return out;
}

void FunctionalTrace::append(FunctionalSample sample) {
  if (!samples.empty()) {
    const FunctionalSample& prev = samples.back();
    if (!(sample.t > prev.t)) fail(ErrorCategory::kInput, "trace samples must have increasing time");
    const double dt = sample.t - prev.t;
    sample.cumulative_dissipation =
        prev.cumulative_dissipation + 0.5 * dt * (prev.dissipation + sample.dissipation);
    sample.cumulative_h = prev.cumulative_h + 0.5 * dt * (prev.h_mn + sample.h_mn);
  }
  samples.push_back(std::move(sample));
}

std::vector<double> FunctionalTrace::column(double FunctionalSample::*field) const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.*field);
  return out;
}

InequalityReport differential_inequality_check(const FunctionalTrace& trace) {
  InequalityReport rep;
  const auto& S = trace.samples;
  const std::size_t n = S.size();
  if (n < 3) return rep;
  const double eps = trace.quad_eps;
  const double K = trace.k.rate;
  const double Kl = trace.k.literal;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double h1 = S[k].t - S[k - 1].t, h2 = S[k + 1].t - S[k].t;
    // Three-point derivative on a possibly non-uniform grid.
    const double dy = (S[k + 1].y_mn - S[k].y_mn) * h1 / (h2 * (h1 + h2)) +
                      (S[k].y_mn - S[k - 1].y_mn) * h2 / (h1 * (h1 + h2));
    const double Y = S[k].y_mn, H = S[k].h_mn;
    const double norm = std::abs(K * Y) + H + eps;
    // Local truncation indicator from the second difference.
    const double curv = std::abs(S[k + 1].y_mn - 2.0 * S[k].y_mn + S[k - 1].y_mn) /
                        (0.5 * (h1 + h2));
    const double tol = std::max(1e-3 * norm, curv) + eps;
    const double viol = dy - (-K * Y + H);
    ++rep.checked;
    if (viol > tol) ++rep.violations;
    if (dy - (K * Y + H) > tol) ++rep.companion_violations;
    if (dy - (-Kl * Y + H) > tol) ++rep.literal_violations;
    const double nv = viol / norm;
    if (rep.checked == 1 || nv > rep.max_normalized_violation) rep.max_normalized_violation = nv;
  }
  rep.violation_fraction = static_cast<double>(rep.violations) / rep.checked;
  rep.literal_violation_fraction = static_cast<double>(rep.literal_violations) / rep.checked;

  // Integrated form: Y(t) <= Y(s) - K int_s^t Y + int_s^t H.
  std::vector<double> cy(n, 0.0);
  for (std::size_t k = 1; k < n; ++k)
    cy[k] = cy[k - 1] + 0.5 * (S[k].t - S[k - 1].t) * (S[k].y_mn + S[k - 1].y_mn);
  const double y0 = std::max(S[0].y_mn, eps);
  double worst = -1e300;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double bound = S[a].y_mn - K * (cy[b] - cy[a]) + (S[b].cumulative_h - S[a].cumulative_h);
      worst = std::max(worst, (S[b].y_mn - bound) / y0);
    }
  }
  rep.budget_max_violation = worst;
  return rep;
}

PointwiseResidual pointwise_residual_check(const PerturbationState& s0, const PerturbationState& s1,
                                           const SteadyState& steady, const Material& mat,
                                           PointwiseForm form, double m) {
  if (form == PointwiseForm::kPower) check_exponent(m);
  const Grid& g = s0.grid();
  const double dt = s1.t - s0.t;
  if (!(dt > 0.0)) fail(ErrorCategory::kInput, "pointwise check needs increasing times");
  const auto r0 = ratio_field(s0, steady);
  const auto r1 = ratio_field(s1, steady);
  const bool log_form = form == PointwiseForm::kLog;
  auto F = [&](double r) { return log_form ? log_gap(r) : power_gap(r, m); };
  auto dF = [&](double r) { return log_form ? 1.0 - 1.0 / r : -std::expm1((m - 1.0) * std::log(r)); };
  // Phi = F'(x)(1+x) - F(x)
  auto Phi = [&](double r) { return log_form ? std::log(r) : (1.0 - m) / m * std::expm1(m * std::log(r)); };

  const ScalarField& hat = steady.theta_hat();
  const double rc = mat.rho * mat.cv_ref;
  ScalarField q(g);           // theta_hat F(x0)
  ScalarField lead(g);        // q for the gradient term G
  for (std::size_t k = 0; k < r0.size(); ++k) {
    q.values()[k] = hat.values()[k] * F(r0[k]);
    lead.values()[k] = log_form ? std::log(r0[k]) : std::expm1(0.5 * m * std::log(r0[k]));
  }
  double g_coef = log_form ? 1.0 : 4.0 * (1.0 - m) / (m * m);

  // Weighted |grad lead|^2 at centers.
  const VectorField gl = gradient(lead, DirichletData::zeros(g));
  const ScalarField G = face_dot_weighted(gl, gl, hat, steady.wall());
  const ScalarField lap = laplacian_dirichlet(q, DirichletData::zeros(g));
  const ScalarField dd = strain_rate_sq(s0.v_tilde);
  const ScalarField vg = advective_derivative(s1.v_tilde, hat);
  const ScalarField qadv = advective_derivative(s1.v_tilde, q);
  const ScalarField div1 = divergence(s1.v_tilde);

  PointwiseResidual out{ScalarField(g), ScalarField(g), 0.0};
  for (std::size_t k = 0; k < r0.size(); ++k) {
    const double time = rc * hat.values()[k] * (F(r1[k]) - F(r0[k])) / dt +
                        rc * (qadv.values()[k] + q.values()[k] * div1.values()[k]);
    const double space = mat.kappa_ref * lap.values()[k] - g_coef * mat.kappa_ref * G.values()[k] +
                         2.0 * mat.mu * dd.values()[k] * dF(r0[k]) -
                         rc * Phi(r0[k]) * vg.values()[k];
    out.time_term.values()[k] = time;
    out.residual.values()[k] = time - space;
    out.scale = std::max({out.scale, std::abs(time), std::abs(space)});
  }
  return out;
}

EnergyMethodReport energy_method_diagnostic(const FunctionalTrace& trace) {
  EnergyMethodReport rep;
  const auto& S = trace.samples;
  if (S.size() < 3) return rep;
  double lit = 0.0, cor = 0.0, scale = 0.0;
  for (std::size_t k = 1; k + 1 < S.size(); ++k) {
    const double dI = (S[k + 1].theta_l2 - S[k - 1].theta_l2) / (S[k + 1].t - S[k - 1].t);
    const double A = -S[k].theta_grad_l2, B = S[k].heating_moment, C = S[k].coupling_moment;
    const double rc_dI = trace.rho_cv * dI;
    lit = std::max(lit, std::abs(rc_dI - (A + B + C)));
    cor = std::max(cor, std::abs(0.5 * rc_dI - (A + B - C)));
    scale = std::max({scale, std::abs(0.5 * rc_dI), std::abs(A), std::abs(B), std::abs(C)});
  }
  rep.scale = scale;
  rep.literal_residual = scale > 0.0 ? lit / scale : 0.0;
  rep.corrected_residual = scale > 0.0 ? cor / scale : 0.0;
  return rep;
}

}  // namespace nsfstab
