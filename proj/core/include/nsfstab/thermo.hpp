#pragma once

// Thermodynamics of the incompressible Navier-Stokes-Fourier fluid and the
// alternative temperature scale vartheta / vartheta_ref = (theta / theta_ref)^(1-m).

#include "nsfstab/grid.hpp"

namespace nsfstab {

// Lower bound on 1 + theta_tilde / theta_hat. Anything below is reported as a
// positivity violation.
inline constexpr double kPositivityFloor = 1e-10;

struct Material {
  double rho = 1000.0;         // kg m^-3
  double mu = 1e-3;            // Pa s
  double cv_ref = 4180.0;      // J kg^-1 K^-1
  double kappa_ref = 0.6;      // W m^-1 K^-1
  double theta_ref = 300.0;    // K
  double vartheta_ref = 300.0; // reference on the alternative scale

  // Throws Error(kInput) naming the first non-positive coefficient.
  void validate() const;

  double thermal_diffusivity() const noexcept { return kappa_ref / (rho * cv_ref); }
  double kinematic_viscosity() const noexcept { return mu / rho; }
};

// Exponents (m, n) with 0 < m < n < 1 and m > n / 2.
class ExponentPair {
 public:
  ExponentPair(double m, double n);

  double m() const noexcept { return m_; }
  double n() const noexcept { return n_; }

  // Returns an empty string for an admissible pair, otherwise the violated condition.
  static const char* violation(double m, double n) noexcept;

 private:
  double m_;
  double n_;
};

double helmholtz(double theta, const Material& mat);
double entropy(double theta, const Material& mat);
double internal_energy(double theta, const Material& mat);

// s_diff = cv_ref ln(1 + theta_tilde / theta_hat), per cell.
ScalarField relative_entropy(const ScalarField& theta_tilde, const ScalarField& theta_hat,
                             const Material& mat);

double alt_scale(double theta, double m, const Material& mat);
double alt_scale_inverse(double vartheta, double m, const Material& mat);

// Effective conductivity and specific heat on the alternative scale.
double alt_kappa(double vartheta, double m, const Material& mat);
double alt_cv(double vartheta, double m, const Material& mat);

double alt_helmholtz(double vartheta, double m, const Material& mat);
double alt_entropy(double vartheta, double m, const Material& mat);
double alt_internal_energy(double vartheta, double m, const Material& mat);

}  // namespace nsfstab
