#pragma once
// Ray-grid storage for tomograms and operator symbols.  A function of
// x⃗ = (X, μ, ν) that is homogeneous of degree −1, T(λX, λμ, λν) = |λ|⁻¹ T,
// is fully determined by its values on the unit circle μ = cosθ, ν = sinθ,
// θ ∈ [0, π): negative angles fold back via T(X, −μ, −ν) = T(−X, μ, ν).
// Stored data is therefore a (n_θ × n_X) table over that circle.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "tomo/common.hpp"

namespace tomo {

struct RayGrid {
  double x_max = 8.0;
  int n_x = 257;      // odd, uniform on [−x_max, x_max]
  int n_theta = 64;   // θ_j = jπ/n_θ

  std::vector<double> x_nodes;
  std::vector<double> x_weights;   // trapezoid
  std::vector<double> theta_nodes;
  double theta_weight = 0.0;       // π/n_θ, exact for the periodic rule

  static RayGrid make(double x_max, int n_x, int n_theta);
  double dx() const { return 2.0 * x_max / (n_x - 1); }
  bool operator==(const RayGrid& o) const {
    return x_max == o.x_max && n_x == o.n_x && n_theta == o.n_theta;
  }
};

// Radial rule for the reconstruction-type integrals ∫dk |k| (…): a
// Gauss–Legendre rule on [0, k_max] applied at both signs of k, with a
// cos² taper over the last `window_fraction` of the cutoff folded into the
// windowed weights (raw weights kept for the exact pairing integrals).
struct RadialRule {
  double k_max = 12.0;
  int n_half = 160;
  double window_fraction = 0.15;

  std::vector<double> k_nodes;            // positive half-axis
  std::vector<double> weights_windowed;   // GL weight × taper
  std::vector<double> weights_raw;        // GL weight

  static RadialRule make(double k_max, int n_half, double window_fraction = 0.15);
  bool operator==(const RadialRule& o) const {
    return k_max == o.k_max && n_half == o.n_half &&
           window_fraction == o.window_fraction;
  }
};

// Common storage/evaluation for the two grid types below.
class GridFunctionBase {
 public:
  const RayGrid& grid() const { return grid_; }
  const std::string& provenance() const { return provenance_; }

 protected:
  GridFunctionBase() = default;
  void init_base(RayGrid g, std::string prov) {
    grid_ = std::move(g);
    provenance_ = std::move(prov);
  }

  // Homogeneity reduction: (X, μ, ν) → (X/r, θ) with r = |(μ,ν)| plus the
  // 1/r amplitude factor; θ < 0 folds by parity.  Exact up to rounding —
  // no quadrature enters.
  static void reduce_to_circle(double X, double mu, double nu, double* x_unit,
                               double* theta, double* amplitude);

  RayGrid grid_;
  std::string provenance_;
};

// A tomographic probability table.  `density` marks selective-channel
// outputs, which are unnormalized joint densities over (outcome, X).
class TomogramGrid : public GridFunctionBase {
 public:
  static TomogramGrid from_values(RayGrid grid, Eigen::ArrayXXd values,
                                  bool density, std::string provenance,
                                  const Tolerances& tol = default_tolerances());

  const Eigen::ArrayXXd& values() const { return values_; }
  Eigen::ArrayXXd& mutable_values() { return values_; }
  bool is_density() const { return density_; }

  // Σ_X w_X T(X, θ_j): 1 for normalized tomograms, outcome mass otherwise.
  double ray_norm(int j) const;
  double max_norm_residual() const;  // max_j |ray_norm − 1| (normalized only)

  // Homogeneity-reduced evaluation with cubic interpolation on the circle;
  // (μ, ν) = (0, 0) is not a ray and throws.
  double evaluate(double X, double mu, double nu) const;

 private:
  Eigen::ArrayXXd values_;  // (n_theta, n_x)
  bool density_ = false;
};

// A (generally complex) operator-symbol table.  `generalized` marks symbols
// of distribution-valued objects, whose stored table is only the truncated
// regular part: pairing such a table pointwise is refused downstream.
class SymbolGrid : public GridFunctionBase {
 public:
  static SymbolGrid from_values(RayGrid grid, Eigen::ArrayXXcd values,
                                bool generalized, std::string provenance);

  const Eigen::ArrayXXcd& values() const { return values_; }
  bool generalized() const { return generalized_; }

  Complex evaluate(double X, double mu, double nu) const;

 private:
  Eigen::ArrayXXcd values_;
  bool generalized_ = false;
};

}  // namespace tomo
