#include "nsfstab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsfstab/error.hpp"

namespace nsfstab {

namespace {

void require_same_grid(const Grid& a, const Grid& b, const char* op) {
  if (!(a == b)) fail(ErrorCategory::kInput, std::string(op) + ": grid mismatch");
}

// Tangential derivative du/dy at corner (i, j) with no-slip ghosts.
double du_dy_corner(const VectorField& v, int i, int j) {
  const Grid& g = v.grid();
  if (j == 0) return 2.0 * v.u(i, 0) / g.hy();
  if (j == g.ny()) return -2.0 * v.u(i, g.ny() - 1) / g.hy();
  return (v.u(i, j) - v.u(i, j - 1)) / g.hy();
}

double dv_dx_corner(const VectorField& v, int i, int j) {
  const Grid& g = v.grid();
  if (i == 0) return 2.0 * v.v(0, j) / g.hx();
  if (i == g.nx()) return -2.0 * v.v(g.nx() - 1, j) / g.hx();
  return (v.v(i, j) - v.v(i - 1, j)) / g.hx();
}

}  // namespace

Grid::Grid(int nx, int ny, double lx, double ly)
    : nx_(nx), ny_(ny), lx_(lx), ly_(ly), hx_(0.0), hy_(0.0) {
  if (nx < 4 || ny < 4) {
    std::ostringstream os;
    os << "grid needs at least 4 cells per direction, got " << nx << "x" << ny;
    fail(ErrorCategory::kInput, os.str());
  }
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
    fail(ErrorCategory::kInput, "domain lengths must be positive and finite");
  }
  hx_ = lx / nx;
  hy_ = ly / ny;
}

// --- ScalarField -----------------------------------------------------------

ScalarField::ScalarField(const Grid& grid, double value)
    : grid_(grid), data_(grid.cell_count(), value) {}

double ScalarField::min() const { return *std::min_element(data_.begin(), data_.end()); }
double ScalarField::max() const { return *std::max_element(data_.begin(), data_.end()); }

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

bool ScalarField::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "ScalarField +=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "ScalarField -=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double a) {
  for (double& x : data_) x *= a;
  return *this;
}

ScalarField ScalarField::from_function(const Grid& grid,
                                       const std::function<double(double, double)>& f) {
  ScalarField out(grid);
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) out(i, j) = f(grid.xc(i), grid.yc(j));
  return out;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double a, ScalarField f) { return f *= a; }

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "hadamard");
  ScalarField out(a.grid());
  for (std::size_t k = 0; k < out.size(); ++k) out.values()[k] = a.values()[k] * b.values()[k];
  return out;
}

// --- VectorField -----------------------------------------------------------

VectorField::VectorField(const Grid& grid)
    : grid_(grid),
      u_(static_cast<std::size_t>(grid.nx() + 1) * grid.ny(), 0.0),
      v_(static_cast<std::size_t>(grid.nx()) * (grid.ny() + 1), 0.0) {}

double VectorField::max_abs() const {
  double m = 0.0;
  for (double x : u_) m = std::max(m, std::abs(x));
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

bool VectorField::all_finite() const {
  auto finite = [](double x) { return std::isfinite(x); };
  return std::all_of(u_.begin(), u_.end(), finite) && std::all_of(v_.begin(), v_.end(), finite);
}

double VectorField::boundary_max_abs() const {
  double m = 0.0;
  for (int j = 0; j < grid_.ny(); ++j) {
    m = std::max(m, std::abs(u(0, j)));
    m = std::max(m, std::abs(u(grid_.nx(), j)));
  }
  for (int i = 0; i < grid_.nx(); ++i) {
    m = std::max(m, std::abs(v(i, 0)));
    m = std::max(m, std::abs(v(i, grid_.ny())));
  }
  return m;
}

void VectorField::zero_boundary() {
  for (int j = 0; j < grid_.ny(); ++j) {
    u(0, j) = 0.0;
    u(grid_.nx(), j) = 0.0;
  }
  for (int i = 0; i < grid_.nx(); ++i) {
    v(i, 0) = 0.0;
    v(i, grid_.ny()) = 0.0;
  }
}

VectorField& VectorField::operator+=(const VectorField& o) {
  require_same_grid(grid_, o.grid_, "VectorField +=");
  for (std::size_t k = 0; k < u_.size(); ++k) u_[k] += o.u_[k];
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  require_same_grid(grid_, o.grid_, "VectorField -=");
  for (std::size_t k = 0; k < u_.size(); ++k) u_[k] -= o.u_[k];
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
  return *this;
}

VectorField& VectorField::operator*=(double a) {
  for (double& x : u_) x *= a;
  for (double& x : v_) x *= a;
  return *this;
}

VectorField VectorField::from_functions(const Grid& grid,
                                        const std::function<double(double, double)>& fu,
                                        const std::function<double(double, double)>& fv) {
  VectorField out(grid);
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i <= grid.nx(); ++i) out.u(i, j) = fu(grid.xf(i), grid.yc(j));
  for (int j = 0; j <= grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) out.v(i, j) = fv(grid.xc(i), grid.yf(j));
  return out;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double a, VectorField f) { return f *= a; }

// --- SymGradField ----------------------------------------------------------

SymGradField::SymGradField(const Grid& grid)
    : d11_(grid), d22_(grid), d12_(static_cast<std::size_t>(grid.nx() + 1) * (grid.ny() + 1), 0.0) {}

// --- DirichletData ---------------------------------------------------------

DirichletData DirichletData::zeros(const Grid& grid) { return constant(grid, 0.0); }

DirichletData DirichletData::constant(const Grid& grid, double value) {
  DirichletData d;
  d.left.assign(grid.ny(), value);
  d.right.assign(grid.ny(), value);
  d.bottom.assign(grid.nx(), value);
  d.top.assign(grid.nx(), value);
  return d;
}

DirichletData DirichletData::from_function(const Grid& grid,
                                           const std::function<double(double, double)>& g) {
  DirichletData d;
  d.left.resize(grid.ny());
  d.right.resize(grid.ny());
  d.bottom.resize(grid.nx());
  d.top.resize(grid.nx());
  for (int j = 0; j < grid.ny(); ++j) {
    d.left[j] = g(0.0, grid.yc(j));
    d.right[j] = g(grid.lx(), grid.yc(j));
  }
  for (int i = 0; i < grid.nx(); ++i) {
    d.bottom[i] = g(grid.xc(i), 0.0);
    d.top[i] = g(grid.xc(i), grid.ly());
  }
  return d;
}

double DirichletData::min() const {
  double m = left.empty() ? 0.0 : left.front();
  for (const auto* w : {&left, &right, &bottom, &top})
    for (double x : *w) m = std::min(m, x);
  return m;
}

double DirichletData::max() const {
  double m = left.empty() ? 0.0 : left.front();
  for (const auto* w : {&left, &right, &bottom, &top})
    for (double x : *w) m = std::max(m, x);
  return m;
}

bool DirichletData::matches(const Grid& grid) const noexcept {
  return left.size() == static_cast<std::size_t>(grid.ny()) &&
         right.size() == static_cast<std::size_t>(grid.ny()) &&
         bottom.size() == static_cast<std::size_t>(grid.nx()) &&
         top.size() == static_cast<std::size_t>(grid.nx());
}

// --- Operators -------------------------------------------------------------

VectorField gradient(const ScalarField& f) {
  const Grid& g = f.grid();
  VectorField out(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i) out.u(i, j) = (f(i, j) - f(i - 1, j)) / g.hx();
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) out.v(i, j) = (f(i, j) - f(i, j - 1)) / g.hy();
  return out;
}

VectorField gradient(const ScalarField& f, const DirichletData& wall) {
  const Grid& g = f.grid();
  if (!wall.matches(g)) fail(ErrorCategory::kInput, "gradient: Dirichlet data size mismatch");
  VectorField out = gradient(f);
  // Ghost 2 g - f gives (f - ghost) / h = 2 (f - g) / h at the wall.
  for (int j = 0; j < g.ny(); ++j) {
    out.u(0, j) = 2.0 * (f(0, j) - wall.left[j]) / g.hx();
    out.u(g.nx(), j) = 2.0 * (wall.right[j] - f(g.nx() - 1, j)) / g.hx();
  }
  for (int i = 0; i < g.nx(); ++i) {
    out.v(i, 0) = 2.0 * (f(i, 0) - wall.bottom[i]) / g.hy();
    out.v(i, g.ny()) = 2.0 * (wall.top[i] - f(i, g.ny() - 1)) / g.hy();
  }
  return out;
}

ScalarField divergence(const VectorField& v) {
  const Grid& g = v.grid();
  ScalarField out(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      out(i, j) = (v.u(i + 1, j) - v.u(i, j)) / g.hx() + (v.v(i, j + 1) - v.v(i, j)) / g.hy();
  return out;
}

SymGradField sym_grad(const VectorField& v) {
  const Grid& g = v.grid();
  SymGradField d(g);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      d.d11()(i, j) = (v.u(i + 1, j) - v.u(i, j)) / g.hx();
      d.d22()(i, j) = (v.v(i, j + 1) - v.v(i, j)) / g.hy();
    }
  }
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i)
      d.d12(i, j) = 0.5 * (du_dy_corner(v, i, j) + dv_dx_corner(v, i, j));
  return d;
}

ScalarField double_dot(const SymGradField& d) {
  const Grid& g = d.grid();
  ScalarField out(g);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double a = d.d12(i, j), b = d.d12(i + 1, j), c = d.d12(i, j + 1),
                   e = d.d12(i + 1, j + 1);
      const double off = 0.25 * (a * a + b * b + c * c + e * e);
      const double d11 = d.d11()(i, j), d22 = d.d22()(i, j);
      out(i, j) = d11 * d11 + d22 * d22 + 2.0 * off;
    }
  }
  return out;
}

double integrate(const ScalarField& f) {
  double s = 0.0;
  for (double x : f.values()) s += x;
  return s * f.grid().cell_area();
}

ScalarField face_dot(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid(), b.grid(), "face_dot");
  const Grid& g = a.grid();
  ScalarField out(g);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      out(i, j) = 0.5 * (a.u(i, j) * b.u(i, j) + a.u(i + 1, j) * b.u(i + 1, j)) +
                  0.5 * (a.v(i, j) * b.v(i, j) + a.v(i, j + 1) * b.v(i, j + 1));
    }
  }
  return out;
}

ScalarField face_dot_weighted(const VectorField& a, const VectorField& b,
                              const ScalarField& w, const DirichletData& wall) {
  require_same_grid(a.grid(), b.grid(), "face_dot_weighted");
  require_same_grid(a.grid(), w.grid(), "face_dot_weighted");
  const Grid& g = a.grid();
  if (!wall.matches(g)) fail(ErrorCategory::kInput, "face_dot_weighted: wall data size mismatch");
  auto wu = [&](int i, int j) {
    if (i == 0) return wall.left[j];
    if (i == g.nx()) return wall.right[j];
    return 0.5 * (w(i - 1, j) + w(i, j));
  };
  auto wv = [&](int i, int j) {
    if (j == 0) return wall.bottom[i];
    if (j == g.ny()) return wall.top[i];
    return 0.5 * (w(i, j - 1) + w(i, j));
  };
  ScalarField out(g);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      out(i, j) = 0.5 * (wu(i, j) * a.u(i, j) * b.u(i, j) +
                         wu(i + 1, j) * a.u(i + 1, j) * b.u(i + 1, j)) +
                  0.5 * (wv(i, j) * a.v(i, j) * b.v(i, j) +
                         wv(i, j + 1) * a.v(i, j + 1) * b.v(i, j + 1));
    }
  }
  return out;
}

double inner(const VectorField& a, const VectorField& b) {
  return integrate(face_dot(a, b));
}

ScalarField laplacian_dirichlet(const ScalarField& f, const DirichletData& wall) {
  const Grid& g = f.grid();
  if (!wall.matches(g)) fail(ErrorCategory::kInput, "laplacian: Dirichlet data size mismatch");
  const double ihx2 = 1.0 / (g.hx() * g.hx());
  const double ihy2 = 1.0 / (g.hy() * g.hy());
  const int nx = g.nx(), ny = g.ny();
  ScalarField out(g);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double c = f(i, j);
      const double w = i > 0 ? f(i - 1, j) : 2.0 * wall.left[j] - c;
      const double e = i < nx - 1 ? f(i + 1, j) : 2.0 * wall.right[j] - c;
      const double s = j > 0 ? f(i, j - 1) : 2.0 * wall.bottom[i] - c;
      const double n = j < ny - 1 ? f(i, j + 1) : 2.0 * wall.top[i] - c;
      out(i, j) = (e - 2.0 * c + w) * ihx2 + (n - 2.0 * c + s) * ihy2;
    }
  }
  return out;
}

ScalarField laplacian_neumann(const ScalarField& f) {
  const Grid& g = f.grid();
  const double ihx2 = 1.0 / (g.hx() * g.hx());
  const double ihy2 = 1.0 / (g.hy() * g.hy());
  const int nx = g.nx(), ny = g.ny();
  ScalarField out(g);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double c = f(i, j);
      double acc = 0.0;
      if (i > 0) acc += (f(i - 1, j) - c) * ihx2;
      if (i < nx - 1) acc += (f(i + 1, j) - c) * ihx2;
      if (j > 0) acc += (f(i, j - 1) - c) * ihy2;
      if (j < ny - 1) acc += (f(i, j + 1) - c) * ihy2;
      out(i, j) = acc;
    }
  }
  return out;
}

ScalarField grad_norm_sq(const VectorField& v) {
  const Grid& g = v.grid();
  ScalarField out(g);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double ux = (v.u(i + 1, j) - v.u(i, j)) / g.hx();
      const double vy = (v.v(i, j + 1) - v.v(i, j)) / g.hy();
      const double uy = 0.25 * (du_dy_corner(v, i, j) + du_dy_corner(v, i + 1, j) +
                                du_dy_corner(v, i, j + 1) + du_dy_corner(v, i + 1, j + 1));
      const double vx = 0.25 * (dv_dx_corner(v, i, j) + dv_dx_corner(v, i + 1, j) +
                                dv_dx_corner(v, i, j + 1) + dv_dx_corner(v, i + 1, j + 1));
      out(i, j) = ux * ux + uy * uy + vx * vx + vy * vy;
    }
  }
  return out;
}

VectorField curl_of_streamfunction(const Grid& g, const std::vector<double>& psi) {
  const std::size_t stride = static_cast<std::size_t>(g.nx() + 1);
  if (psi.size() != stride * static_cast<std::size_t>(g.ny() + 1))
    fail(ErrorCategory::kInput, "streamfunction must have (nx+1)*(ny+1) corner values");
  auto at = [&](int i, int j) { return psi[static_cast<std::size_t>(j) * stride + i]; };
  VectorField out(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) out.u(i, j) = (at(i, j + 1) - at(i, j)) / g.hy();
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) out.v(i, j) = -(at(i + 1, j) - at(i, j)) / g.hx();
  return out;
}

}  // namespace nsfstab
