#pragma once
// Truncated oscillator Hilbert space: number basis |0..N−1⟩, oscillator
// eigenfunctions ψ_n, and matrix elements of the displacement-type operator
// e^{−iμq̂−iνp̂} in closed Laguerre form.  These are the only special
// functions the whole engine needs.

#include <Eigen/Dense>
#include <vector>

#include "tomo/common.hpp"

namespace tomo {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct HilbertSpec {
  int dim = 16;

  explicit HilbertSpec(int d) : dim(d) {
    if (d < 2) throw ValidationError("HilbertSpec: dimension must be >= 2");
    if (d > 256) throw ValidationError("HilbertSpec: dimension above 256 unsupported");
  }
  bool operator==(const HilbertSpec& o) const { return dim == o.dim; }
};

// Normalized oscillator eigenfunction ψ_n(q), computed by the stable
// upward recurrence ψ_n = √(2/n) q ψ_{n−1} − √((n−1)/n) ψ_{n−2}.
double hermite_function(int n, double q);

// ψ_0(q)..ψ_{n_max}(q) in one recurrence pass.
std::vector<double> hermite_function_column(int n_max, double q);

// ⟨n| e^{−iμq̂−iνp̂} |m⟩.  Equals ⟨n|D(α)|m⟩ with α = (ν − iμ)/√2, via the
// associated-Laguerre closed form; stable for dim ≤ 64 and μ²+ν² ≲ 300.
Complex displacement_element(int n, int m, double mu, double nu);

// Full dim×dim matrix of the above, filled diagonal-by-diagonal so the
// Laguerre recurrence is shared.
Matrix displacement_matrix(int dim, double mu, double nu);

// Ladder and quadrature operators on the truncated space.
Matrix lowering_operator(int dim);                 // a
Matrix position_operator(int dim);                 // q = (a + a†)/√2
Matrix momentum_operator(int dim);                 // p = (a − a†)/(i√2)
Matrix number_operator(int dim);                   // a†a

// A density matrix validated on construction: Hermitian within tol,
// unit trace within tol, eigenvalues ≥ psd_floor.
class DensityMatrix {
 public:
  DensityMatrix(Matrix rho, const Tolerances& tol = default_tolerances());

  const Matrix& matrix() const { return rho_; }
  int dim() const { return static_cast<int>(rho_.rows()); }
  HilbertSpec spec() const { return HilbertSpec(dim()); }
  double purity() const;           // Tr ρ²
  double mean_number() const;      // Tr ρ a†a

 private:
  Matrix rho_;
};

// Uhlmann fidelity F(ρ,σ) = (Tr √(√ρ σ √ρ))².
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

// max_ij |A_ij − B_ij|
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace tomo
