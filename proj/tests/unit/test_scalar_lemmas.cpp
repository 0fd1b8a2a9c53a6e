#include <cmath>
#include <vector>

#include "doctest.h"
#include "nsfstab/error.hpp"
#include "nsfstab/evolution.hpp"
#include "nsfstab/scalar_lemmas.hpp"

using namespace nsfstab;

namespace {

// Direct evaluation of both lemma functions from their definitions.
double f6_direct(double x, double m, double n) {
  return std::pow(1 + x, n) / n - std::pow(1 + x, m) / m + (n - m) / (m * n);
}
double g7_direct(double x, double m, double n) {
  const double a = std::pow(1 + x, m / 2) - 1, b = std::pow(1 + x, n / 2) - 1;
  return -(a * a + b * b) + n * f6_direct(x, m, n);
}

}  // namespace

TEST_CASE("both lemma functions vanish at the origin") {
  for (auto [m, n] : {std::pair{0.6, 0.9}, std::pair{0.3, 0.5}, std::pair{0.51, 0.99}}) {
    CHECK(f_lemma6(0.0, m, n) == 0.0);
    CHECK(g_lemma7(0.0, m, n) == 0.0);
    CHECK(g_lemma7_log(0.0, m, n) == 0.0);
  }
}

TEST_CASE("agreement with the defining formulas away from cancellation") {
  for (double x : {-0.9, -0.5, 0.3, 2.0, 40.0}) {
    CHECK(f_lemma6(x, 0.6, 0.9) == doctest::Approx(f6_direct(x, 0.6, 0.9)).epsilon(1e-12));
    CHECK(g_lemma7(x, 0.6, 0.9) == doctest::Approx(g7_direct(x, 0.6, 0.9)).epsilon(1e-10));
  }
  // Close to the origin the direct form cancels; the series keeps full precision.
  const double x = 1e-6;
  CHECK(f_lemma6(x, 0.6, 0.9) == doctest::Approx(0.5 * (0.9 - 0.6) * x * x).epsilon(1e-5));
}

TEST_CASE("sign properties on sample points") {
  const std::vector<double> xs{-0.999, -0.9, -0.5, -1e-3, 1e-3, 0.5, 1.0, 10.0, 1e3, 1e6};
  for (auto [m, n] : {std::pair{0.6, 0.9}, std::pair{0.3, 0.5}, std::pair{0.7, 0.75}}) {
    for (double x : xs) {
      CHECK(f_lemma6(x, m, n) > 0.0);
      CHECK(g_lemma7(x, m, n) <= 0.0);
    }
  }
  // f6' = (1+x)^(n-1) - (1+x)^(m-1): negative for x < 0, positive for x > 0.
  CHECK(f_lemma6(-0.5, 0.6, 0.9) > f_lemma6(-0.4, 0.6, 0.9));
  CHECK(f_lemma6(0.5, 0.6, 0.9) < f_lemma6(0.6, 0.6, 0.9));
}

TEST_CASE("g7 near x = -1") {
  const double x = -1 + 1e-12;
  CHECK(g_lemma7(x, 0.6, 0.9) == doctest::Approx(g7_direct(x, 0.6, 0.9)).epsilon(1e-9));
  // With small exponents (1+x)^(m/2) is far from 0 at the literal point.
  const double m = 0.06, n = 0.1;
  CHECK(g_lemma7(x, m, n) == doctest::Approx(g7_direct(x, m, n)).epsilon(1e-9));
  CHECK(std::abs(g_lemma7(x, m, n) - (-3 + n / m)) > 0.5);
  CHECK(g_lemma7_log(-40.0 / m, m, n) == doctest::Approx(-3 + n / m).epsilon(1e-7));
  CHECK(g_lemma7_log(-INFINITY, m, n) == -3 + n / m);
}

TEST_CASE("constraint violations are domain errors") {
  CHECK_THROWS_AS(f_lemma6(-1.0, 0.6, 0.9), Error);
  CHECK_THROWS_AS(f_lemma6(0.5, 0.9, 0.6), Error);
  CHECK_THROWS_AS(g_lemma7(0.5, 0.3, 0.8), Error);
  CHECK_NOTHROW(g_lemma7_log(0.5, 0.3, 0.8));
  try {
    (void)g_lemma7(0.5, 0.3, 0.8);
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::kDomain);
    CHECK(std::string(e.what()).find("m > n/2 violated") != std::string::npos);
  }
  // With m < n/2 the sign of g7 flips at large x.
  CHECK(g_lemma7_log(30.0, 0.2, 0.8) > 0.0);
}

TEST_CASE("x_crit is a genuine root") {
  const double xc = xcrit_eq125();
  const auto d = [](double x) {
    const double l = std::log1p(x);
    return l * l - (x - l);
  };
  CHECK(xc == doctest::Approx(5.00914).epsilon(2e-5));
  CHECK(std::abs(d(xc)) < 1e-9);
  CHECK(d(xc - 0.01) * d(xc + 0.01) < 0.0);
  // The squared log exceeds x - ln(1+x) below the root and falls under it above.
  CHECK(d(2.0) > 0.0);
  CHECK(d(20.0) < 0.0);
}

TEST_CASE("lemma 9 constant: branches and the pointwise bound") {
  for (int l : {3, 4, 5}) {
    const Lemma9Result r = lemma9_constant(3.0 / 8.0, 0.5, l, -5.0);
    CHECK(r.x_int < 0.0);
    CHECK(r.inv_L > 0.0);
    CHECK(r.inv_L <= r.h_coefficient * (1 + 1e-12));
    if (r.branch == Lemma9Branch::kDirect) {
      CHECK(r.x_int <= -5.0);
      CHECK(r.inv_L == r.h_coefficient);
    } else {
      CHECK(r.x_int > -5.0);
      CHECK(r.inv_L == doctest::Approx(f_entropy(r.x_int, 3.0 / 8.0, 0.5) / std::pow(5.0, l)));
    }
    for (int k = 0; k <= 2000; ++k) {
      const double s = -5.0 + 55.0 * k / 2000.0;
      CHECK(r.inv_L * std::pow(std::abs(s), l) <= f_entropy(s, 3.0 / 8.0, 0.5) * (1 + 1e-12) + 1e-300);
    }
  }
  // Intersection beyond x_crit selects the direct branch; a far x_crit flattens.
  const Lemma9Result near = lemma9_constant(3.0 / 8.0, 0.5, 3, -1.0);
  CHECK(near.branch == Lemma9Branch::kDirect);
  CHECK(near.inv_L == near.h_coefficient);
  const Lemma9Result far = lemma9_constant(3.0 / 8.0, 0.5, 3, -1e3);
  CHECK(far.branch == Lemma9Branch::kFlattened);
  CHECK(far.x_int == doctest::Approx(near.x_int).epsilon(1e-12));

  // Branch choice is stable under a tenfold tighter bisection.
  for (int l : {3, 4}) {
    const Lemma9Result loose = lemma9_constant(3.0 / 8.0, 0.5, l, -5.0, 1e-13);
    const Lemma9Result tight = lemma9_constant(3.0 / 8.0, 0.5, l, -5.0, 1e-14);
    CHECK(loose.branch == tight.branch);
    CHECK(std::abs(loose.x_int - tight.x_int) <= 2e-13);
    CHECK((tight.branch == Lemma9Branch::kDirect) == (tight.x_int <= -5.0));
  }
  CHECK_THROWS_AS(lemma9_constant(3.0 / 8.0, 0.5, 2, -5.0), Error);
  CHECK_THROWS_AS(lemma9_constant(3.0 / 8.0, 0.5, 3, 1.0), Error);
  CHECK_THROWS_AS(lemma9_constant(0.5, 0.5, 3, -5.0), Error);
}

TEST_CASE("lemma 1 hypotheses on exponential and algebraic decay") {
  std::vector<double> t, ye, yr, h;
  for (int k = 0; k <= 2000; ++k) {
    t.push_back(0.01 * k);
    ye.push_back(std::exp(-t.back()));
    yr.push_back(1.0 / (1.0 + t.back()));
    h.push_back(0.0);
  }
  const Lemma1Report e = lemma1_check(t, ye, h, [](double y) { return y; }, 1e-12);
  CHECK(e.integral_y == doctest::Approx(1.0 - std::exp(-20.0)).epsilon(1e-4));
  CHECK(e.y_plateau);
  CHECK(e.h_plateau);  // h = 0 accumulates nothing
  CHECK(e.inequality_holds);
  CHECK(e.tail_ratio < 1e-7);

  const Lemma1Report r = lemma1_check(t, yr, h, [](double y) { return y * y; }, 1e-12);
  CHECK(r.integral_y == doctest::Approx(std::log(21.0)).epsilon(1e-4));
  CHECK_FALSE(r.y_plateau);
  CHECK(r.inequality_holds);

  // Growth not paid for by f or h breaks the integral inequality.
  std::vector<double> up(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) up[k] = 1.0 + t[k];
  const Lemma1Report u = lemma1_check(t, up, h, [](double) { return 0.0; });
  CHECK_FALSE(u.inequality_holds);
  CHECK(u.max_violation == doctest::Approx(20.0));

  CHECK(lemma1_check({0.0}, {1.0}, {0.0}, [](double y) { return y; }).integral_y == 0.0);
}

TEST_CASE("sampling the lemmas with the shared random stream") {
  UniformStream rng(5);
  for (int k = 0; k < 200; ++k) {
    const double n = 0.1 + 0.89 * rng.next();
    const double m = n / 2 + (n / 2) * (0.01 + 0.98 * rng.next());
    const double x = -1 + std::pow(10.0, -6 + 12 * rng.next());
    CHECK(f_lemma6(x, m, n) >= 0.0);
    CHECK(g_lemma7(x, m, n) <= 1e-15);
  }
}
