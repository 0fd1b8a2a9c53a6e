#include "nsfstab/thermo.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "nsfstab/error.hpp"

namespace nsfstab {

namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream os;
    os << what << " must be positive and finite, got " << x;
    fail(ErrorCategory::kDomain, os.str());
  }
}

void require_unit_exponent(double m) {
  if (!(m > 0.0 && m < 1.0)) {
    std::ostringstream os;
    os << "exponent m must lie in (0, 1), got " << m;
    fail(ErrorCategory::kDomain, os.str());
  }
}

}  // namespace

void Material::validate() const {
  const struct {
    const char* name;
    double value;
  } fields[] = {{"rho", rho},           {"mu", mu},
                {"cv_ref", cv_ref},     {"kappa_ref", kappa_ref},
                {"theta_ref", theta_ref}, {"vartheta_ref", vartheta_ref}};
  for (const auto& f : fields) {
    if (!(f.value > 0.0) || !std::isfinite(f.value)) {
      std::ostringstream os;
      os << "material constant " << f.name << " must be positive, got " << f.value;
      fail(ErrorCategory::kInput, os.str());
    }
  }
}

const char* ExponentPair::violation(double m, double n) noexcept {
  if (!(m > 0.0)) return "m > 0 violated";
  if (!(n < 1.0)) return "n < 1 violated";
  if (!(n > m)) return "n > m violated";
  if (!(m > 0.5 * n)) return "m > n/2 violated";
  return "";
}

ExponentPair::ExponentPair(double m, double n) : m_(m), n_(n) {
  const std::string why = violation(m, n);
  if (!why.empty()) {
    std::ostringstream os;
    os << "invalid exponent pair (m=" << m << ", n=" << n << "): " << why;
    fail(ErrorCategory::kInput, os.str());
  }
}

double helmholtz(double theta, const Material& mat) {
  require_positive(theta, "temperature");
  return -mat.cv_ref * theta * (std::log(theta / mat.theta_ref) - 1.0);
}

double entropy(double theta, const Material& mat) {
  require_positive(theta, "temperature");
  return mat.cv_ref * std::log(theta / mat.theta_ref);
}

double internal_energy(double theta, const Material& mat) {
  require_positive(theta, "temperature");
  return mat.cv_ref * theta;
}

ScalarField relative_entropy(const ScalarField& theta_tilde, const ScalarField& theta_hat,
                             const Material& mat) {
  const Grid& g = theta_tilde.grid();
  ScalarField out(g);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double x = theta_tilde(i, j) / theta_hat(i, j);
      if (!(1.0 + x > kPositivityFloor)) {
        std::ostringstream os;
        os << "1 + theta_tilde/theta_hat = " << 1.0 + x << " at cell (" << i << ", " << j << ")";
        fail(ErrorCategory::kPositivity, os.str());
      }
      out(i, j) = mat.cv_ref * std::log1p(x);
    }
  }
  return out;
}

double alt_scale(double theta, double m, const Material& mat) {
  require_positive(theta, "temperature");
  require_unit_exponent(m);
  // Extended precision keeps the round trip through the alternative scale
  // within a few ulps; the inverse exponent 1/(1-m) amplifies any error.
  using ld = long double;
  return static_cast<double>(ld(mat.vartheta_ref) * std::pow(ld(theta) / ld(mat.theta_ref), 1.0L - ld(m)));
}

double alt_scale_inverse(double vartheta, double m, const Material& mat) {
  require_positive(vartheta, "alternative temperature");
  require_unit_exponent(m);
  using ld = long double;
  return static_cast<double>(ld(mat.theta_ref) *
                             std::pow(ld(vartheta) / ld(mat.vartheta_ref), 1.0L / (1.0L - ld(m))));
}

double alt_kappa(double vartheta, double m, const Material& mat) {
  require_positive(vartheta, "alternative temperature");
  require_unit_exponent(m);
  return mat.kappa_ref / (1.0 - m) * (mat.theta_ref / mat.vartheta_ref) *
         std::pow(vartheta / mat.vartheta_ref, m / (1.0 - m));
}

double alt_cv(double vartheta, double m, const Material& mat) {
  require_positive(vartheta, "alternative temperature");
  require_unit_exponent(m);
  return mat.cv_ref / (1.0 - m) * (mat.theta_ref / mat.vartheta_ref) *
         std::pow(vartheta / mat.vartheta_ref, m / (1.0 - m));
}

double alt_helmholtz(double vartheta, double m, const Material& mat) {
  require_positive(vartheta, "alternative temperature");
  require_unit_exponent(m);
  const double r = vartheta / mat.vartheta_ref;
  return -mat.cv_ref * mat.theta_ref / m * ((1.0 - m) * std::pow(r, 1.0 / (1.0 - m)) - r);
}

double alt_entropy(double vartheta, double m, const Material& mat) {
  require_positive(vartheta, "alternative temperature");
  require_unit_exponent(m);
  const double r = vartheta / mat.vartheta_ref;
  return mat.cv_ref * (mat.theta_ref / mat.vartheta_ref) / m *
         (std::pow(r, m / (1.0 - m)) - 1.0);
}

double alt_internal_energy(double vartheta, double m, const Material& mat) {
  require_positive(vartheta, "alternative temperature");
  require_unit_exponent(m);
  using ld = long double;
  return static_cast<double>(ld(mat.cv_ref) * ld(mat.theta_ref) *
                             std::pow(ld(vartheta) / ld(mat.vartheta_ref), 1.0L / (1.0L - ld(m))));
}

}  // namespace nsfstab
