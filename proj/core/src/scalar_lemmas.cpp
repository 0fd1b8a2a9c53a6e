#include "nsfstab/scalar_lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsfstab/error.hpp"

namespace nsfstab {

namespace {

void check_pair(double m, double n) {
  if (!(m > 0.0 && n < 1.0 && m < n)) {
    std::ostringstream os;
    os << "exponents must satisfy 0 < m < n < 1, got m = " << m << ", n = " << n;
    fail(ErrorCategory::kDomain, os.str());
  }
}

void check_strict_pair(double m, double n) {
  check_pair(m, n);
  if (!(m > 0.5 * n)) fail(ErrorCategory::kDomain, "m > n/2 violated");
}

// 2 (expm1(n L/2) - (n/m) expm1(m L/2)); the linear terms cancel, so small L
// goes through the series.
double beta_minus_alpha(double L, double m, double n) {
  if (std::abs(L) < 0.05) {
    const double a = 0.5 * m, b = 0.5 * n;
    double sum = 0.0, pa = a, pb = b, fact = 1.0, pl = L;
    for (int k = 2; k <= 12; ++k) {
      pa *= a;
      pb *= b;
      fact *= k;
      pl *= L;
      sum += pl / fact * (pb - (n / m) * pa);
    }
    return 2.0 * sum;
  }
  return 2.0 * (std::expm1(0.5 * n * L) - (n / m) * std::expm1(0.5 * m * L));
}

double eq125_difference(double x) {
  const double l = std::log1p(x);
  return l * l - (x - l);
}

}  // namespace

double f_lemma6(double x, double m, double n) {
  check_pair(m, n);
  if (!(x > -1.0)) fail(ErrorCategory::kDomain, "f_lemma6 requires x > -1");
  return f_entropy(std::log1p(x), m, n);
}

double f_entropy(double s, double m, double n) {
  if (std::abs(s) < 0.05) {
    // sum_k (n^(k-1) - m^(k-1)) s^k / k!, k >= 2
    double sum = 0.0, pn = 1.0, pm = 1.0, fact = 1.0, ps = s;
    for (int k = 2; k <= 14; ++k) {
      pn *= n;
      pm *= m;
      fact *= k;
      ps *= s;
      sum += (pn - pm) * ps / fact;
    }
    return sum;
  }
  return std::expm1(n * s) / n - std::expm1(m * s) / m;
}

double g_lemma7(double x, double m, double n) {
  check_strict_pair(m, n);
  if (!(x > -1.0)) fail(ErrorCategory::kDomain, "g_lemma7 requires x > -1");
  return g_lemma7_log(std::log1p(x), m, n);
}

double g_lemma7_log(double L, double m, double n) {
  check_pair(m, n);
  if (std::isinf(L) && L < 0.0) return -3.0 + n / m;
  // With a = (1+x)^(m/2) = 1 + alpha, b = (1+x)^(n/2) = 1 + beta:
  // g = -(1 + n/m) alpha^2 - 2 (n/m) alpha + 2 beta.
  const double alpha = std::expm1(0.5 * m * L);
  return -(1.0 + n / m) * alpha * alpha + beta_minus_alpha(L, m, n);
}

double xcrit_eq125() {
  double lo = 1.0, hi = 10.0;
  double flo = eq125_difference(lo);
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    const double fm = eq125_difference(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Lemma9Result lemma9_constant(double m, double n, int l, double x_crit, double tol) {
  check_pair(m, n);
  if (l < 3) fail(ErrorCategory::kDomain, "lemma 9 needs l >= 3");
  if (!(x_crit < 0.0)) fail(ErrorCategory::kDomain, "lemma 9 needs x_crit < 0");
  if (!(tol > 0.0)) fail(ErrorCategory::kDomain, "lemma 9 tolerance must be positive");

  double fact = 1.0;
  for (int k = 2; k <= l; ++k) fact *= k;
  const double c = (std::pow(n, l - 1) - std::pow(m, l - 1)) / fact;
  auto diff = [&](double s) { return f_entropy(s, m, n) - c * std::pow(std::abs(s), l); };

  // diff > 0 just left of 0; walk outwards on a geometric grid so that an
  // intersection close to the origin is not skipped when x_crit is far out.
  double a = 0.0, b = 0.0;
  bool found = false;
  const double far = 1e8 * std::max(1.0, std::abs(x_crit));
  for (double prev_x = -1e-3, x = prev_x * 1.01; -x < far; prev_x = x, x *= 1.01) {
    if (diff(x) < 0.0) {
      a = x;
      b = prev_x;
      found = true;
      break;
    }
  }
  if (!found) {
    std::ostringstream os;
    os << "lemma 9: no intersection bracketed on [" << -far << ", -1e-3]";
    fail(ErrorCategory::kRootFinding, os.str());
  }

  // Bisection: diff(a) < 0 <= diff(b) with a < b < 0.
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    const double mid = 0.5 * (a + b);
    if (diff(mid) < 0.0) a = mid; else b = mid;
  }
  Lemma9Result res;
  res.h_coefficient = c;
  res.x_int = 0.5 * (a + b);
  if (res.x_int <= x_crit) {
    res.branch = Lemma9Branch::kDirect;
    res.inv_L = c;
  } else {
    res.branch = Lemma9Branch::kFlattened;
    res.inv_L = f_entropy(res.x_int, m, n) / std::pow(std::abs(x_crit), l);
  }
  return res;
}

Lemma1Report lemma1_check(const std::vector<double>& t, const std::vector<double>& y,
                          const std::vector<double>& h, const std::function<double(double)>& f,
                          double tolerance) {
  Lemma1Report rep;
  const std::size_t n = t.size();
  if (n < 2 || y.size() != n || h.size() != n) return rep;

  std::vector<double> cy(n, 0.0), ch(n, 0.0), cf(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double dt = t[k] - t[k - 1];
    cy[k] = cy[k - 1] + 0.5 * dt * (y[k] + y[k - 1]);
    ch[k] = ch[k - 1] + 0.5 * dt * (h[k] + h[k - 1]);
    cf[k] = cf[k - 1] + 0.5 * dt * (f(y[k]) + f(y[k - 1]));
  }
  rep.integral_y = cy.back();
  rep.integral_h = ch.back();

  // Final 10% window.
  const double t_tail = t.back() - 0.1 * (t.back() - t.front());
  std::size_t k0 = 0;
  while (k0 + 1 < n && t[k0] < t_tail) ++k0;
  rep.tail_growth_y = rep.integral_y > 0.0 ? (cy.back() - cy[k0]) / rep.integral_y : 0.0;
  rep.tail_growth_h = rep.integral_h > 0.0 ? (ch.back() - ch[k0]) / rep.integral_h : 0.0;
  rep.y_plateau = rep.tail_growth_y < 1e-3;
  rep.h_plateau = rep.tail_growth_h < 1e-3;

  double worst = -1e300;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      worst = std::max(worst, y[b] - y[a] - (cf[b] - cf[a]) - (ch[b] - ch[a]));
  rep.max_violation = worst;
  rep.violation_scale = *std::max_element(y.begin(), y.end());
  rep.inequality_holds = worst <= tolerance;

  for (std::size_t k = k0; k < n; ++k) rep.tail_max_y = std::max(rep.tail_max_y, y[k]);
  rep.tail_ratio = y.front() > 0.0 ? rep.tail_max_y / y.front() : 0.0;
  return rep;
}

}  // namespace nsfstab
