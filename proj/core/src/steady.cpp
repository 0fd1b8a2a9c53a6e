#include "nsfstab/steady.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nsfstab/cg.hpp"
#include "nsfstab/error.hpp"

namespace nsfstab {

namespace {

double arclength_fraction(const Grid& g, double x, double y, int wall) {
  const double perimeter = 2.0 * (g.lx() + g.ly());
  double s = 0.0;
  switch (wall) {
    case 0: s = x; break;                                  // bottom, left to right
    case 1: s = g.lx() + y; break;                         // right, bottom to top
    case 2: s = g.lx() + g.ly() + (g.lx() - x); break;     // top, right to left
    default: s = 2.0 * g.lx() + g.ly() + (g.ly() - y); break;  // left, top to bottom
  }
  return s / perimeter;
}

// -Lap_h with homogeneous Dirichlet ghosts, on raw cell vectors.
void apply_neg_dirichlet_laplacian(const Grid& g, const std::vector<double>& x,
                                   std::vector<double>& out) {
  const int nx = g.nx(), ny = g.ny();
  const double ihx2 = 1.0 / (g.hx() * g.hx());
  const double ihy2 = 1.0 / (g.hy() * g.hy());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * nx + i;
      const double c = x[k];
      const double w = i > 0 ? x[k - 1] : -c;
      const double e = i < nx - 1 ? x[k + 1] : -c;
      const double s = j > 0 ? x[k - nx] : -c;
      const double n = j < ny - 1 ? x[k + nx] : -c;
      out[k] = -((e - 2.0 * c + w) * ihx2 + (n - 2.0 * c + s) * ihy2);
    }
  }
}

std::string history_tail(const CgResult& r) {
  std::ostringstream os;
  const std::size_t start = r.history.size() > 5 ? r.history.size() - 5 : 0;
  os << "[";
  for (std::size_t k = start; k < r.history.size(); ++k) {
    if (k > start) os << ", ";
    os << r.history[k];
  }
  os << "]";
  return os.str();
}

}  // namespace

BoundaryProfile BoundaryProfile::constant(double value) {
  BoundaryProfile p;
  p.kind = Kind::kConstant;
  p.base = value;
  return p;
}

BoundaryProfile BoundaryProfile::linear_x(double base, double amplitude) {
  BoundaryProfile p;
  p.kind = Kind::kLinearX;
  p.base = base;
  p.amplitude = amplitude;
  return p;
}

BoundaryProfile BoundaryProfile::sinusoidal_arc(double base, double amplitude) {
  BoundaryProfile p;
  p.kind = Kind::kSinusoidalArc;
  p.base = base;
  p.amplitude = amplitude;
  return p;
}

BoundaryProfile BoundaryProfile::two_wall(double cold, double hot_minus_cold) {
  BoundaryProfile p;
  p.kind = Kind::kTwoWall;
  p.base = cold;
  p.amplitude = hot_minus_cold;
  return p;
}

BoundaryProfile BoundaryProfile::tabulated(DirichletData values) {
  BoundaryProfile p;
  p.kind = Kind::kTabulated;
  p.table = std::move(values);
  return p;
}

DirichletData BoundaryProfile::evaluate(const Grid& g) const {
  DirichletData d;
  switch (kind) {
    case Kind::kConstant:
      d = DirichletData::constant(g, base);
      break;
    case Kind::kLinearX:
      d = DirichletData::from_function(
          g, [&](double x, double) { return base + amplitude * x / g.lx(); });
      break;
    case Kind::kSinusoidalArc: {
      d = DirichletData::zeros(g);
      auto val = [&](double x, double y, int wall) {
        return base + amplitude * std::sin(std::numbers::pi * arclength_fraction(g, x, y, wall));
      };
      for (int i = 0; i < g.nx(); ++i) {
        d.bottom[i] = val(g.xc(i), 0.0, 0);
        d.top[i] = val(g.xc(i), g.ly(), 2);
      }
      for (int j = 0; j < g.ny(); ++j) {
        d.right[j] = val(g.lx(), g.yc(j), 1);
        d.left[j] = val(0.0, g.yc(j), 3);
      }
      break;
    }
    case Kind::kTwoWall:
      d = DirichletData::from_function(g, [&](double x, double) {
        return x < 0.5 * g.lx() ? base + amplitude : base;
      });
      break;
    case Kind::kTabulated:
      if (!table.matches(g)) fail(ErrorCategory::kInput, "tabulated boundary data does not match grid");
      d = table;
      break;
  }
  for (const auto* w : {&d.left, &d.right, &d.bottom, &d.top}) {
    for (double t : *w) {
      if (!(t > 0.0) || !std::isfinite(t)) {
        std::ostringstream os;
        os << "boundary temperature must be positive, got " << t;
        fail(ErrorCategory::kInput, os.str());
      }
    }
  }
  return d;
}

BoundaryProfile::Kind BoundaryProfile::parse_kind(const std::string& name) {
  if (name == "constant") return Kind::kConstant;
  if (name == "linear_x") return Kind::kLinearX;
  if (name == "sinusoidal_arc") return Kind::kSinusoidalArc;
  if (name == "two_wall") return Kind::kTwoWall;
  if (name == "tabulated") return Kind::kTabulated;
  fail(ErrorCategory::kInput, "unknown boundary preset '" + name + "'");
}

std::string BoundaryProfile::kind_name(Kind kind) {
  switch (kind) {
    case Kind::kConstant: return "constant";
    case Kind::kLinearX: return "linear_x";
    case Kind::kSinusoidalArc: return "sinusoidal_arc";
    case Kind::kTwoWall: return "two_wall";
    case Kind::kTabulated: return "tabulated";
  }
  return "unknown";
}

SteadyState::SteadyState(ScalarField theta_hat, DirichletData wall, double relative_residual,
                         int iterations)
    : theta_hat_(std::move(theta_hat)),
      wall_(std::move(wall)),
      grad_(gradient(theta_hat_, wall_)),
      min_(theta_hat_.min()),
      max_(theta_hat_.max()),
      grad_max_(grad_.max_abs()),
      poincare_(nsfstab::poincare_constant(theta_hat_.grid())),
      residual_(relative_residual),
      iterations_(iterations) {
  if (!(min_ > 0.0)) fail(ErrorCategory::kInput, "steady temperature must be positive");
}

double poincare_constant(const Grid& g) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return 1.0 / (pi2 * (1.0 / (g.lx() * g.lx()) + 1.0 / (g.ly() * g.ly())));
}

SteadyState solve_steady_heat(const Grid& grid, const Material& mat,
                              const BoundaryProfile& boundary, double tol) {
  mat.validate();
  if (!(tol > 0.0 && tol <= 1e-4)) fail(ErrorCategory::kInput, "steady tolerance must lie in (0, 1e-4]");
  const DirichletData wall = boundary.evaluate(grid);

  // Solve for the deviation from the mean wall temperature; this keeps the
  // residual floor well below the requested tolerance.
  double shift = 0.0;
  std::size_t count = 0;
  for (const auto* w : {&wall.left, &wall.right, &wall.bottom, &wall.top}) {
    for (double t : *w) shift += t;
    count += w->size();
  }
  shift /= static_cast<double>(count);
  DirichletData shifted = wall;
  for (auto* w : {&shifted.left, &shifted.right, &shifted.bottom, &shifted.top})
    for (double& t : *w) t -= shift;

  // -L0 phi = B(g - shift), with B the ghost contribution of the wall data.
  const ScalarField rhs = laplacian_dirichlet(ScalarField(grid), shifted);
  const std::vector<double>& b = rhs.values();
  const double bnorm = std::sqrt(dot(b, b));

  ScalarField phi(grid);
  CgResult cg;
  if (bnorm > 0.0) {
    const int cap = 10 * grid.nx() * grid.ny();
    cg = conjugate_gradient(
        [&](const std::vector<double>& x, std::vector<double>& out) {
          apply_neg_dirichlet_laplacian(grid, x, out);
        },
        b, phi.values(), cap,
        [&](const std::vector<double>& r, int) { return std::sqrt(dot(r, r)) <= tol * bnorm; },
        no_projection);
    if (!cg.converged) {
      std::ostringstream os;
      os << "steady heat solve did not converge in " << cap
         << " iterations; last residuals " << history_tail(cg);
      fail(ErrorCategory::kSolver, os.str());
    }
  }

  ScalarField theta_hat = phi;
  for (double& t : theta_hat.values()) t += shift;

  const ScalarField res = laplacian_dirichlet(phi, shifted);
  const double true_residual =
      bnorm > 0.0 ? std::sqrt(dot(res.values(), res.values())) / bnorm : 0.0;
  return SteadyState(std::move(theta_hat), wall, true_residual, cg.iterations);
}

ScalarField solve_dirichlet_poisson(const ScalarField& f, double tol) {
  const Grid& grid = f.grid();
  ScalarField u(grid);
  const double bnorm = std::sqrt(dot(f.values(), f.values()));
  if (bnorm == 0.0) return u;
  const int cap = 10 * grid.nx() * grid.ny();
  const CgResult cg = conjugate_gradient(
      [&](const std::vector<double>& x, std::vector<double>& out) {
        apply_neg_dirichlet_laplacian(grid, x, out);
      },
      f.values(), u.values(), cap,
      [&](const std::vector<double>& r, int) { return std::sqrt(dot(r, r)) <= tol * bnorm; },
      no_projection);
  if (!cg.converged) {
    fail(ErrorCategory::kSolver, "Dirichlet Poisson solve did not converge; last residuals " +
                                     history_tail(cg));
  }
  return u;
}

}  // namespace nsfstab
