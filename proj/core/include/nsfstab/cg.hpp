#pragma once

// Matrix-free conjugate gradient for symmetric positive (semi)definite
// operators. Summation order is fixed, so results are bit-reproducible.

#include <cmath>
#include <cstddef>
#include <vector>

namespace nsfstab {

struct CgResult {
  bool converged = false;
  int iterations = 0;
  double residual_norm = 0.0;          // final 2-norm of the recursive residual
  std::vector<double> history;         // residual 2-norm per iteration
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// Solves A x = b starting from the given x. `apply(p, out)` writes A p into
// out. `done(r, iteration)` decides convergence from the current residual.
// `project`, when non-trivial, removes a nullspace component (e.g. the mean
// for a pure Neumann operator) from residuals and iterates.
template <class Apply, class Done, class Project>
CgResult conjugate_gradient(Apply&& apply, const std::vector<double>& b, std::vector<double>& x,
                            int max_iterations, Done&& done, Project&& project) {
  CgResult res;
  const std::size_t n = b.size();
  std::vector<double> r(n), p(n), ap(n);
  apply(x, ap);
  for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - ap[k];
  project(r);
  res.residual_norm = std::sqrt(dot(r, r));
  if (done(r, 0)) {
    res.converged = true;
    return res;
  }
  p = r;
  double rr = dot(r, r);
  for (int it = 1; it <= max_iterations; ++it) {
    apply(p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) break;
    const double alpha = rr / pap;
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * ap[k];
    }
    project(r);
    const double rr_new = dot(r, r);
    res.iterations = it;
    res.residual_norm = std::sqrt(rr_new);
    res.history.push_back(res.residual_norm);
    if (done(r, it)) {
      res.converged = true;
      break;
    }
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
  }
  project(x);
  return res;
}

inline void no_projection(std::vector<double>&) {}

inline void remove_mean(std::vector<double>& v) {
  if (v.empty()) return;
  double s = 0.0;
  for (double x : v) s += x;
  const double mean = s / static_cast<double>(v.size());
  for (double& x : v) x -= mean;
}

}  // namespace nsfstab
