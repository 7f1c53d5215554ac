#pragma once
// The tomographic transform pair and the symbol calculus.
//
// Dequantizer (singular, factorized on the unit circle):
//   𝒰_nm(X, θ) = ψ_n(X) ψ_m(X) e^{i(n−m)θ}
// Quantizer:
//   𝒟_nm(X, μ, ν) = (1/2π) e^{iX} ⟨n|e^{−iμq̂−iνp̂}|m⟩
// Forward map:  T(X, θ) = Σ_{mn} ρ_{mn} 𝒰_nm(X, θ)
// Inverse map:  ρ_{nm} = ∫ dx⃗ T(x⃗) 𝒟_nm(x⃗), evaluated in polar form
//   ρ_{nm} = (1/2π) ∫₀^π dθ ∫_ℝ dk |k| F(θ, k) ⟨n|e^{−ikq̂_θ}|m⟩,
// with F(θ, k) = ∫ dX T(X, θ) e^{ikX} the per-ray Fourier transform and
// q̂_θ = q̂cosθ + p̂sinθ.  The same radial machinery yields the pairing
//   (f_A, f_B) = (1/2π) ∫ dθ dk |k| χ_A*(k e_θ) χ_B(k e_θ) = Tr{A†B},
// where χ_A(k e_θ) = ∫ f_A(X, θ) e^{−ikX} dX.

#include <memory>
#include <string>
#include <vector>

#include "tomo/grid.hpp"
#include "tomo/hilbert.hpp"

namespace tomo {

Complex dequantizer_element(int n, int m, double X, double theta);
// General-argument form: homogeneity reduction (X, μ, ν) → (X/r, θ) with the
// 1/r amplitude, exact up to rounding.  (μ, ν) = (0, 0) is not a ray.
Complex dequantizer_element_general(int n, int m, double X, double mu, double nu);
Complex quantizer_element(int n, int m, double X, double mu, double nu);

// Precomputed tables tying a Hilbert space to a ray grid and a radial rule:
// ψ_n at the X nodes, displacement matrices at the radial nodes, and the
// phase tables used by the factorized forward/inverse maps.  Construction
// is deterministic: identical inputs give bitwise-identical tables.
class QuantizerCache {
 public:
  static QuantizerCache make(HilbertSpec spec, RayGrid grid, RadialRule radial);

  const HilbertSpec& spec() const { return spec_; }
  const RayGrid& grid() const { return grid_; }
  const RadialRule& radial() const { return radial_; }

  double psi(int n, int ix) const { return psi_(n, ix); }
  // ⟨n|e^{−ikq̂}|m⟩ at radial node ik (θ = 0 displacement matrix)
  const Matrix& displacement_at_node(int ik) const { return g_[ik]; }

  // Forward map: (n_θ × n_X) table of Σ_{mn} M_{mn} ψ_n ψ_m e^{i(n−m)θ}.
  Eigen::ArrayXXcd symbol_values(const Matrix& op) const;

  // Inverse map applied to raw grid values; no Hermitization, no trace fix.
  Matrix reconstruct_raw(const Eigen::ArrayXXcd& values) const;
  Matrix reconstruct_raw(const Eigen::ArrayXXd& values) const;

  // Per-ray Fourier table F^s(θ_j, k_i) = Σ_X w_X V(θ_j, X) e^{s·i k_i X}
  // at the radial nodes; sign s = ±1.
  Eigen::ArrayXXcd ray_fourier_table(const Eigen::ArrayXXcd& values, int sign) const;

 private:
  HilbertSpec spec_{2};
  RayGrid grid_;
  RadialRule radial_;
  Eigen::MatrixXd psi_;                    // (dim, n_x)
  std::vector<Matrix> g_;                  // per radial node, θ = 0
  Eigen::MatrixXcd theta_phase_;           // (2·dim−1, n_θ): e^{i d θ_j}
  Eigen::MatrixXcd x_phase_;               // (n_half, n_x): e^{i k X}
};

struct ReconstructionReport {
  double asymmetry = 0.0;         // max |ρ_raw − ρ_raw†| before Hermitization
  double trace_correction = 0.0;  // |Tr ρ − 1| removed by renormalization
  double reality_residue = 0.0;   // max |Im| dropped from a tomogram table
};

// ρ → T.  Errors: per-ray normalization drift beyond the grid-resolution
// tolerance, or imaginary residue above the reality tolerance.
TomogramGrid tomogram_from_density(const DensityMatrix& rho, const QuantizerCache& cache);

// T → ρ with Hermitization and trace renormalization, both reported.
// Asymmetry beyond tolerance throws ConvergenceError.
DensityMatrix density_from_tomogram(const TomogramGrid& t, const QuantizerCache& cache,
                                    ReconstructionReport* report = nullptr);

SymbolGrid symbol_from_operator(const Matrix& op, const QuantizerCache& cache,
                                bool generalized = false, std::string tag = "");
Matrix operator_from_symbol(const SymbolGrid& f, const QuantizerCache& cache);

// f_A ⋆ f_B = symbol of (op(f_A) · op(f_B)); refuses generalized inputs.
SymbolGrid star_product(const SymbolGrid& a, const SymbolGrid& b,
                        const QuantizerCache& cache);

// (f_A, f_B) with the 1/2π normalization above; equals Tr{A†B}.  Uses the
// un-windowed radial weights (the pairing is an exact identity, not a
// regularized reconstruction).  Refuses generalized inputs.
Complex scalar_product(const SymbolGrid& a, const SymbolGrid& b,
                       const RadialRule& radial);
Complex scalar_product(const TomogramGrid& a, const TomogramGrid& b,
                       const RadialRule& radial);

// α_k = (T, T_k) for a tomogram against reference tomograms; real within
// 1e−8 by Hermiticity, returned as doubles.
std::vector<double> decomposition_coefficients(const TomogramGrid& t,
                                               const std::vector<TomogramGrid>& basis,
                                               const RadialRule& radial);

}  // namespace tomo
