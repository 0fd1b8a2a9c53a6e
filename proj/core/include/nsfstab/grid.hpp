#pragma once

// Rectangular MAC (marker-and-cell) grid on [0, Lx] x [0, Ly].
//
// Layout:
//   scalars         cell centers   (i + 1/2) hx, (j + 1/2) hy     nx * ny
//   u (x-velocity)  vertical faces  i hx,        (j + 1/2) hy     (nx + 1) * ny
//   v (y-velocity)  horizontal faces (i + 1/2) hx, j hy            nx * (ny + 1)
//   D12             cell corners    i hx, j hy                     (nx + 1) * (ny + 1)
//
// Storage is x-fastest. Quadrature weights are hx*hy for cells and interior
// faces and hx*hy/2 for boundary faces, so face sums agree with
// face-to-center averaged cell sums.

#include <cstddef>
#include <functional>
#include <vector>

namespace nsfstab {

class Grid {
 public:
  Grid(int nx, int ny, double lx, double ly);

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  double lx() const noexcept { return lx_; }
  double ly() const noexcept { return ly_; }
  double hx() const noexcept { return hx_; }
  double hy() const noexcept { return hy_; }
  double h_min() const noexcept { return hx_ < hy_ ? hx_ : hy_; }
  double cell_area() const noexcept { return hx_ * hy_; }
  double area() const noexcept { return lx_ * ly_; }
  std::size_t cell_count() const noexcept {
    return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_);
  }

  double xc(int i) const noexcept { return (i + 0.5) * hx_; }
  double yc(int j) const noexcept { return (j + 0.5) * hy_; }
  double xf(int i) const noexcept { return i * hx_; }
  double yf(int j) const noexcept { return j * hy_; }

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.nx_ == b.nx_ && a.ny_ == b.ny_ && a.lx_ == b.lx_ && a.ly_ == b.ly_;
  }

 private:
  int nx_;
  int ny_;
  double lx_;
  double ly_;
  double hx_;
  double hy_;
};

class ScalarField {
 public:
  explicit ScalarField(const Grid& grid, double value = 0.0);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(int i, int j) { return data_[index(i, j)]; }
  double operator()(int i, int j) const { return data_[index(i, j)]; }

  std::vector<double>& values() noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  double min() const;
  double max() const;
  double max_abs() const;
  bool all_finite() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double a);

  static ScalarField from_function(const Grid& grid,
                                   const std::function<double(double, double)>& f);

 private:
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(grid_.nx()) +
           static_cast<std::size_t>(i);
  }

  Grid grid_;
  std::vector<double> data_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double a, ScalarField f);
// Pointwise product.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

class VectorField {
 public:
  explicit VectorField(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }

  double& u(int i, int j) { return u_[u_index(i, j)]; }
  double u(int i, int j) const { return u_[u_index(i, j)]; }
  double& v(int i, int j) { return v_[v_index(i, j)]; }
  double v(int i, int j) const { return v_[v_index(i, j)]; }

  std::vector<double>& u_values() noexcept { return u_; }
  const std::vector<double>& u_values() const noexcept { return u_; }
  std::vector<double>& v_values() noexcept { return v_; }
  const std::vector<double>& v_values() const noexcept { return v_; }

  double max_abs() const;
  bool all_finite() const;
  // Largest magnitude on the boundary faces (x = 0, Lx for u; y = 0, Ly for v).
  double boundary_max_abs() const;
  void zero_boundary();

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double a);

  // Samples component functions at face midpoints.
  static VectorField from_functions(const Grid& grid,
                                    const std::function<double(double, double)>& fu,
                                    const std::function<double(double, double)>& fv);

 private:
  std::size_t u_index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(grid_.nx() + 1) +
           static_cast<std::size_t>(i);
  }
  std::size_t v_index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(grid_.nx()) +
           static_cast<std::size_t>(i);
  }

  Grid grid_;
  std::vector<double> u_;
  std::vector<double> v_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double a, VectorField f);

// Symmetric velocity gradient: diagonal at centers, off-diagonal at corners.
class SymGradField {
 public:
  explicit SymGradField(const Grid& grid);

  const Grid& grid() const noexcept { return d11_.grid(); }

  ScalarField& d11() noexcept { return d11_; }
  const ScalarField& d11() const noexcept { return d11_; }
  ScalarField& d22() noexcept { return d22_; }
  const ScalarField& d22() const noexcept { return d22_; }

  double& d12(int i, int j) { return d12_[corner_index(i, j)]; }
  double d12(int i, int j) const { return d12_[corner_index(i, j)]; }
  const std::vector<double>& d12_values() const noexcept { return d12_; }

 private:
  std::size_t corner_index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(d11_.grid().nx() + 1) +
           static_cast<std::size_t>(i);
  }

  ScalarField d11_;
  ScalarField d22_;
  std::vector<double> d12_;
};

// Dirichlet data at wall-face midpoints.
struct DirichletData {
  std::vector<double> left;    // x = 0,  ny values
  std::vector<double> right;   // x = Lx, ny values
  std::vector<double> bottom;  // y = 0,  nx values
  std::vector<double> top;     // y = Ly, nx values

  static DirichletData zeros(const Grid& grid);
  static DirichletData constant(const Grid& grid, double value);
  static DirichletData from_function(const Grid& grid,
                                     const std::function<double(double, double)>& g);

  double min() const;
  double max() const;
  bool matches(const Grid& grid) const noexcept;
};

// Centered differences on interior faces. Boundary faces are set to zero
// (homogeneous Neumann convention, used for the pressure).
VectorField gradient(const ScalarField& f);

// As above, but boundary faces use the ghost value 2 g - f_interior.
VectorField gradient(const ScalarField& f, const DirichletData& g);

ScalarField divergence(const VectorField& v);

// No-slip ghost reflection for the tangential derivatives at the walls.
SymGradField sym_grad(const VectorField& v);

// D:D per cell: D11^2 + D22^2 + 2 <D12^2>, where <.> averages the four corners.
ScalarField double_dot(const SymGradField& d);

// Midpoint rule.
double integrate(const ScalarField& f);

// Weighted face inner product (boundary faces at half weight).
double inner(const VectorField& a, const VectorField& b);

// Cell-centered a.b built from face products averaged to centers; its
// integral equals inner(a, b).
ScalarField face_dot(const VectorField& a, const VectorField& b);

// Like face_dot, with the face products weighted by a face coefficient
// interpolated from a cell field plus its Dirichlet wall values.
ScalarField face_dot_weighted(const VectorField& a, const VectorField& b,
                              const ScalarField& weight, const DirichletData& wall);

// Five-point Laplacian with Dirichlet ghosts 2 g - f.
ScalarField laplacian_dirichlet(const ScalarField& f, const DirichletData& g);

// Five-point Laplacian with homogeneous Neumann walls (pressure operator,
// equal to divergence(gradient(f))).
ScalarField laplacian_neumann(const ScalarField& f);

// |grad v|^2 at cell centers from center-interpolated derivatives. This is
// an independent discretization used to check the Korn equality.
ScalarField grad_norm_sq(const VectorField& v);

// Discrete curl of a corner streamfunction psi, (nx+1)*(ny+1) values:
// u = d psi / dy, v = -d psi / dx. Divergence-free to round-off.
VectorField curl_of_streamfunction(const Grid& grid, const std::vector<double>& psi_corners);

}  // namespace nsfstab
