#pragma once

// Scalar inequalities behind the decay theorem.
//
//   f6(x; m, n) = (1+x)^n/n - (1+x)^m/m + (n-m)/(mn)                   >= 0
//   g7(x; m, n) = -(((1+x)^(m/2) - 1)^2 + ((1+x)^(n/2) - 1)^2) + n f6   <= 0
//
// for 0 < m < n < 1 and n/2 < m (the latter for g7 only).

#include <functional>
#include <string>
#include <vector>

namespace nsfstab {

double f_lemma6(double x, double m, double n);
double g_lemma7(double x, double m, double n);

// g7 as a function of L = ln(1+x); lets sampling reach 1 + x ~ 1e300.
// Only 0 < m < n < 1 is enforced, so pairs with m <= n/2 can be probed.
double g_lemma7_log(double L, double m, double n);

// Positive root of (ln(1+x))^2 = x - ln(1+x), by bisection on [1, 10].
double xcrit_eq125();

// e^(n s)/n - e^(m s)/m + (n-m)/(mn), i.e. f6 with 1 + x = e^s.
double f_entropy(double s, double m, double n);

enum class Lemma9Branch { kDirect, kFlattened };

struct Lemma9Result {
  double x_int = 0.0;   // first negative intersection of f_entropy and h
  double inv_L = 0.0;   // 1/L
  Lemma9Branch branch = Lemma9Branch::kFlattened;
  double h_coefficient = 0.0;  // (n^(l-1) - m^(l-1)) / l!
};

// |s|^l / L <= f_entropy(s) on [x_crit, inf). x_crit < 0, integer l >= 3.
// `tol` is the absolute bisection tolerance on x_int.
Lemma9Result lemma9_constant(double m, double n, int l, double x_crit, double tol = 1e-14);

struct Lemma1Report {
  double integral_y = 0.0;
  double integral_h = 0.0;
  double tail_growth_y = 0.0;    // share of int y accumulated over the final 10%
  double tail_growth_h = 0.0;
  bool y_plateau = false;        // tail_growth_y < 1e-3
  bool h_plateau = false;
  double max_violation = 0.0;    // max over s < t of y(t) - y(s) - int f(y) - int h
  double violation_scale = 0.0;  // max y, for normalization
  bool inequality_holds = false;
  double tail_max_y = 0.0;       // max y over the final 10%
  double tail_ratio = 0.0;       // tail_max_y / y(0)
};

// Samples on a uniform time grid; trapezoid integrals.
Lemma1Report lemma1_check(const std::vector<double>& t, const std::vector<double>& y,
                          const std::vector<double>& h, const std::function<double(double)>& f,
                          double tolerance = 0.0);

}  // namespace nsfstab
