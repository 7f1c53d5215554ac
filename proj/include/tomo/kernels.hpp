#pragma once
// Process kernels: the ray-space representation of operator-sum channels.
//
// A channel ρ′ = Σ_a w_a A_a ρ A_a† acts on ray data through the kernel
//   K(x̄⃗, x⃗) = Σ_a w_a Σ_{ijkl} A_{a,ij} A*_{a,lk} 𝒟_jk(x̄⃗) 𝒰_li(x⃗),
// where the x̄⃗-integral against 𝒟_jk is exactly the reconstruction
// functional.  The kernel is therefore stored as the coefficient tensor
//   M[(j,k),(l,i)] = Σ_a w_a A_{a,ij} A*_{a,lk}
// (row j·N+k: input moment; column l·N+i: output pair, ρ′_il = Σ M ρ_jk).
// The tensor form is exact; singular parts (the identity component of a
// unitary branch, for instance) live in it with no grid discretization.
// A dense grid view exists only for kernels flagged regular.

#include <memory>
#include <string>
#include <vector>

#include "tomo/grid.hpp"
#include "tomo/hilbert.hpp"
#include "tomo/kraus.hpp"
#include "tomo/transforms.hpp"

namespace tomo {

struct PhaseSpacePoint {
  double X = 0.0;
  double mu = 0.0;
  double nu = 0.0;
};

// Single-outcome slice of a process: tensor w·A_ij A*_lk plus its label.
struct PartialKernel {
  HilbertSpec spec{2};
  Matrix coefficients;  // (N², N²) in the index convention above
  std::string label;
  double weight = 1.0;
  bool generalized = false;
  std::shared_ptr<const QuantizerCache> cache;  // evaluation grids
  double completeness_residual = 0.0;           // of w·A†A against identity
  bool complete = false;
  double identity_weight = 0.0;  // Hilbert–Schmidt weight of the identity map
};

struct ProcessKernel {
  HilbertSpec spec{2};
  Matrix coefficients;
  std::vector<std::string> labels;
  bool generalized = false;
  std::shared_ptr<const QuantizerCache> cache;
  double completeness_residual = 0.0;  // of Σ w A†A against identity
  bool complete = false;               // incomplete kernels are allowed and
                                       // flagged; their outputs are outcome
                                       // densities, not normalized tomograms
  double identity_weight = 0.0;
};

// Symbols of the operators of a family, tagged by the family labels.
std::vector<SymbolGrid> kraus_symbols(const KrausSet& k, const QuantizerCache& cache);

PartialKernel partial_kernel(const Matrix& a, double weight, std::string label,
                             std::shared_ptr<const QuantizerCache> cache);

// Sum of the partial tensors of the family.  Incomplete families are
// accepted and flagged, never rejected: a partial family is the natural
// description of a selective measurement.
ProcessKernel total_kernel(const KrausSet& k,
                           std::shared_ptr<const QuantizerCache> cache);

// Structured application: reconstruction moments of the input, contracted
// with the coefficient tensor, re-evaluated on the output grid.  Complete
// kernels yield normalized tomograms; incomplete ones yield outcome
// densities (per-ray mass = outcome probability).
TomogramGrid apply_kernel(const TomogramGrid& t, const ProcessKernel& k);
TomogramGrid apply_kernel(const TomogramGrid& t, const PartialKernel& k);

// Brute-force validation route: the x̄⃗-integral is done as an explicit
// three-dimensional quadrature in polar form (ray angles and X nodes of the
// input grid, an independent Simpson radial rule, direct matrix-element
// evaluation).  Cost is cubic in the grid size, so the grid is budget-guarded
// to n_x ≤ 65, n_θ ≤ 16.  Output carries the quadrature noise floor and is
// flagged as a density (its normalization is quadrature-limited).
TomogramGrid apply_kernel_quadrature(const TomogramGrid& t, const ProcessKernel& k,
                                     double k_cut = 10.0, int n_radial = 201);

// Dense grid view Σ M[(j,k),(l,i)] 𝒟_jk(x̄⃗) 𝒰_li(x⃗) of a regular kernel.
// O(N⁴) per point — meant for closed-form cross-checks and coarse exports.
Complex kernel_value(const ProcessKernel& k, PhaseSpacePoint xbar, PhaseSpacePoint x);
Complex kernel_value(const PartialKernel& k, PhaseSpacePoint xbar, PhaseSpacePoint x);

// The completeness condition on a weighted symbol family, evaluated from the
// symbol tables alone.  Two residuals are reported:
//  - smeared: the double phase-space functional
//      L(μ̄,ν̄) = (1/2π)² Σ_a w_a ∫ χ_a(μ,ν) χ_a*(μ+μ̄, ν+ν̄)
//                 e^{i(μ̄ν−μν̄)/2} dμ dν,   χ_a(μ,ν) = ∫ f_a(X,μ,ν) e^{iX} dX,
//    integrated against a normalized Gaussian test function of width `width`
//    in (μ̄,ν̄) and compared against the same functional of the identity
//    family at this dimension (the exact reference for Σ w A†A = 1).
//  - scalar: Σ_a w_a (f_a, f_a) against the trace of the identity, dim.
struct CompletenessReport {
  double smeared_value = 0.0;
  double smeared_reference = 0.0;
  double smeared_residual = 0.0;  // |value − reference| / |reference|
  double scalar_value = 0.0;
  double scalar_target = 0.0;  // dim
  double scalar_residual = 0.0;
  bool complete = false;
};
CompletenessReport completeness_check(const std::vector<SymbolGrid>& symbols,
                                      const std::vector<double>& weights,
                                      const QuantizerCache& cache,
                                      double width = 0.2, double tol = 1e-4);

// Closed form of Tr{𝒟(x⃗₁)𝒟(x̄⃗)𝒟(x⃗₂)𝒰(x⃗)}: a phase prefactor carried on a
// linear delta constraint.  Structural object — the prefactor is meaningful
// only where the constraint vanishes, and no fake finite number is produced
// off the surface.
struct TripleTraceValue {
  Complex prefactor;  // (2π)^{−3} · phase
  // coefficients of the constraint (μ̄+μ₁+μ₂)ν − (ν̄+ν₁+ν₂)μ as a linear
  // form in each argument
  double c_mubar = 0, c_nubar = 0;
  double c_mu1 = 0, c_nu1 = 0;
  double c_mu2 = 0, c_nu2 = 0;
  double c_mu = 0, c_nu = 0;
  double constraint_value = 0.0;
  bool on_constraint(double tol = 1e-12) const {
    return std::abs(constraint_value) <= tol;
  }
};
// Arguments follow the trace order: x₁, x̄, x₂ are quantizer points, x the
// dequantizer point.  The X-dependent phase term X(ν̄+ν₁+ν₂)/ν needs ν ≠ 0
// unless X = 0; querying ν = 0 with X ≠ 0 is a validation error.
TripleTraceValue triple_trace(PhaseSpacePoint x1, PhaseSpacePoint xbar,
                              PhaseSpacePoint x2, PhaseSpacePoint x);

// The symbol of the dequantizer-at-x̄⃗ as an operator is a generalized object:
// pointwise values diverge, but its X-integral against e^{−iX} is the regular
// form δ(μ̄ν − μν̄) e^{−iX̄μ/μ̄}.  This struct exposes the regularized pieces
// and refuses pointwise evaluation.
struct DequantizerSymbolForm {
  double Xbar = 0.0, mubar = 0.0, nubar = 0.0;

  // always throws GeneralizedObjectError
  Complex evaluate(double X, double mu, double nu) const;

  double ray_constraint(double mu, double nu) const {
    return mubar * nu - mu * nubar;
  }
  // phase carried on the constraint surface; structural zero off it
  Complex x_integrated_phase(double mu, double nu, double tol = 1e-9) const;

  // analytic smearing over unit-circle directions against a normalized
  // Gaussian window g centred at theta0: g(θ̄)·e^{−iX̄/k̄}/|k̄| with
  // (k̄, θ̄) the folded polar form of (μ̄, ν̄)
  Complex smeared_over_directions(double theta0, double sigma_theta) const;

  // pairing with a regular symbol: (f_{𝒰(x̄⃗)}, f_B) = f_B(x̄⃗)
  Complex pair_with(const SymbolGrid& fb) const;
};
DequantizerSymbolForm postprocess_dequantizer_symbol(double Xbar, double mubar,
                                                     double nubar);

}  // namespace tomo
