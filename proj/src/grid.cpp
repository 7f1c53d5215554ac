#include "tomo/grid.hpp"

#include <cmath>

#include "tomo/quadrature.hpp"

namespace tomo {

RayGrid RayGrid::make(double x_max, int n_x, int n_theta) {
  if (!(x_max > 0.0)) throw ValidationError("RayGrid: x_max must be positive");
  if (n_x < 3 || n_x % 2 == 0)
    throw ValidationError("RayGrid: n_x must be odd and >= 3 (X = 0 on-grid)");
  if (n_theta < 2) throw ValidationError("RayGrid: n_theta must be >= 2");
  RayGrid g;
  g.x_max = x_max;
  g.n_x = n_x;
  g.n_theta = n_theta;
  const double h = 2.0 * x_max / (n_x - 1);
  g.x_nodes.resize(n_x);
  for (int i = 0; i < n_x; ++i) g.x_nodes[i] = -x_max + h * i;
  g.x_weights = trapezoid_weights(n_x, h);
  g.theta_nodes.resize(n_theta);
  for (int j = 0; j < n_theta; ++j) g.theta_nodes[j] = kPi * j / n_theta;
  g.theta_weight = kPi / n_theta;
  return g;
}

RadialRule RadialRule::make(double k_max, int n_half, double window_fraction) {
  if (!(k_max > 0.0)) throw ValidationError("RadialRule: k_max must be positive");
  if (n_half < 8) throw ValidationError("RadialRule: need at least 8 radial nodes");
  if (window_fraction < 0.0 || window_fraction > 0.9)
    throw ValidationError("RadialRule: window fraction outside [0, 0.9]");
  RadialRule r;
  r.k_max = k_max;
  r.n_half = n_half;
  r.window_fraction = window_fraction;
  Quadrature gl = gauss_legendre(n_half, 0.0, k_max);
  r.k_nodes = gl.nodes;
  r.weights_raw = gl.weights;
  r.weights_windowed.resize(n_half);
  const double edge = 1.0 - window_fraction;
  for (int i = 0; i < n_half; ++i) {
    double t = r.k_nodes[i] / k_max, w = 1.0;
    if (window_fraction > 0.0 && t > edge) {
      double c = std::cos(0.5 * kPi * (t - edge) / window_fraction);
      w = c * c;
    }
    r.weights_windowed[i] = gl.weights[i] * w;
  }
  return r;
}

void GridFunctionBase::reduce_to_circle(double X, double mu, double nu,
                                        double* x_unit, double* theta,
                                        double* amplitude) {
  const double r = std::hypot(mu, nu);
  if (!(r > 0.0))
    throw ValidationError("grid evaluate: (mu, nu) = (0, 0) does not define a ray");
  double x = X / r;
  double th = std::atan2(nu, mu);
  if (th < 0.0) {  // parity fold T(X, −μ, −ν) = T(−X, μ, ν)
    th += kPi;
    x = -x;
  }
  if (th >= kPi) {  // atan2 returns exactly π for (μ < 0, ν = 0)
    th -= kPi;
    x = -x;
  }
  *x_unit = x;
  *theta = th;
  *amplitude = 1.0 / r;
}

namespace {

// Catmull–Rom segment through f0 (t = 0) and f1 (t = 1).
template <typename T>
T catmull_rom(T fm1, T f0, T f1, T f2, double t) {
  return 0.5 * ((2.0 * f0) + (-fm1 + f1) * t +
                (2.0 * fm1 - 5.0 * f0 + 4.0 * f1 - f2) * (t * t) +
                (-fm1 + 3.0 * f0 - 3.0 * f1 + f2) * (t * t * t));
}

// Cubic X-interpolation along one stored ray; values outside the stored
// window are treated as zero (tomograms and symbols decay in X).
template <typename Array>
auto interp_x(const RayGrid& g, const Array& values, int row, double x,
              bool mirror) -> typename Array::Scalar {
  using Scalar = typename Array::Scalar;
  if (mirror) x = -x;
  const double h = g.dx();
  const double s = (x + g.x_max) / h;
  const int i0 = static_cast<int>(std::floor(s));
  const double t = s - i0;
  auto at = [&](int i) -> Scalar {
    if (i < 0 || i >= g.n_x) return Scalar(0);
    return values(row, i);
  };
  return catmull_rom<Scalar>(at(i0 - 1), at(i0), at(i0 + 1), at(i0 + 2), t);
}

// Cubic interpolation over θ with the periodic-parity wrap: row n_θ is row 0
// with X mirrored.
template <typename Array>
auto interp_circle(const RayGrid& g, const Array& values, double x, double theta)
    -> typename Array::Scalar {
  using Scalar = typename Array::Scalar;
  const double s = theta / g.theta_weight;  // node spacing equals the weight
  int j0 = static_cast<int>(std::floor(s));
  const double t = s - j0;
  auto row_value = [&](int j) -> Scalar {
    bool mirror = false;
    int jj = j;
    while (jj < 0) {
      jj += g.n_theta;
      mirror = !mirror;
    }
    while (jj >= g.n_theta) {
      jj -= g.n_theta;
      mirror = !mirror;
    }
    return interp_x(g, values, jj, x, mirror);
  };
  return catmull_rom<Scalar>(row_value(j0 - 1), row_value(j0), row_value(j0 + 1),
                             row_value(j0 + 2), t);
}

}  // namespace

TomogramGrid TomogramGrid::from_values(RayGrid grid, Eigen::ArrayXXd values,
                                       bool density, std::string provenance,
                                       const Tolerances& tol) {
  if (values.rows() != grid.n_theta || values.cols() != grid.n_x)
    throw ValidationError("TomogramGrid: value table does not match the grid");
  if (values.minCoeff() < tol.tomogram_negativity)
    throw ValidationError(
        "TomogramGrid: negative probability beyond the round-off floor");
  TomogramGrid t;
  t.init_base(std::move(grid), std::move(provenance));
  t.values_ = std::move(values);
  t.density_ = density;
  if (!density && t.max_norm_residual() > tol.norm_error)
    throw ValidationError(
        "TomogramGrid: per-ray normalization drift above 1e-4; "
        "enlarge x_max or refine n_x");
  return t;
}

double TomogramGrid::ray_norm(int j) const {
  if (j < 0 || j >= grid_.n_theta)
    throw ValidationError("TomogramGrid: ray index out of range");
  double s = 0.0;
  for (int i = 0; i < grid_.n_x; ++i) s += grid_.x_weights[i] * values_(j, i);
  return s;
}

double TomogramGrid::max_norm_residual() const {
  double m = 0.0;
  for (int j = 0; j < grid_.n_theta; ++j)
    m = std::max(m, std::abs(ray_norm(j) - 1.0));
  return m;
}

double TomogramGrid::evaluate(double X, double mu, double nu) const {
  double x, theta, amp;
  reduce_to_circle(X, mu, nu, &x, &theta, &amp);
  return amp * interp_circle(grid_, values_, x, theta);
}

SymbolGrid SymbolGrid::from_values(RayGrid grid, Eigen::ArrayXXcd values,
                                   bool generalized, std::string provenance) {
  if (values.rows() != grid.n_theta || values.cols() != grid.n_x)
    throw ValidationError("SymbolGrid: value table does not match the grid");
  SymbolGrid s;
  s.init_base(std::move(grid), std::move(provenance));
  s.values_ = std::move(values);
  s.generalized_ = generalized;
  return s;
}

Complex SymbolGrid::evaluate(double X, double mu, double nu) const {
  double x, theta, amp;
  reduce_to_circle(X, mu, nu, &x, &theta, &amp);
  return amp * interp_circle(grid_, values_, x, theta);
}

}  // namespace tomo
