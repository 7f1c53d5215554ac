#pragma once
// Ready-made measurement and decoherence channels with their operator-sum
// definitions and, where closed forms exist, independent evaluators used as
// cross-checks: a pointer-coupling (von Neumann) measurement seen from the
// system and from the pointer, sharp and Gaussian-fuzzy projections in the
// coordinate and in the level basis, and the standard qubit processes.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tomo/grid.hpp"
#include "tomo/hilbert.hpp"
#include "tomo/kernels.hpp"
#include "tomo/kraus.hpp"
#include "tomo/transforms.hpp"

namespace tomo {

// Impulsive coupling of a system observable A (given by its eigenvalues) to a
// Gaussian pointer of width parameter kappa; g is the coupling strength and
// amplitudes are the system components in the A eigenbasis used on the
// pointer side.
struct VonNeumannModel {
  std::vector<double> eigenvalues;   // a_i of the measured observable
  std::vector<Complex> amplitudes;   // c_i, Σ|c_i|² = 1
  double coupling = 1.0;             // g
  double kappa = 1.0;                // pointer width parameter, > 0
  int pointer_dim = 16;              // truncation of the pointer ladder basis
  std::vector<double> outcome_grid;  // pointer readings Q (empty: built)

  // validates and fills the outcome grid (span all g·a_i ± 8/√κ, step
  // 1/(3√κ)) unless one was supplied
  static VonNeumannModel make(std::vector<double> eigenvalues,
                              std::vector<Complex> amplitudes, double coupling,
                              double kappa, int pointer_dim = 16,
                              std::vector<double> outcome_grid = {});
};

// System-side family M_Q = (κ/2π)^{1/4} e^{−κ(Q−gA)²/4}, diagonal in the A
// eigenbasis, one operator per outcome-grid node, trapezoid outcome weights.
// The supplied grid must span every g·a_i ± 6/√κ.
KrausSet von_neumann_kraus(const VonNeumannModel& model);

// Pointer-side family L_j = c_j e^{−i g a_j p̂} on the truncated pointer
// ladder, one operator per system eigenvalue.
KrausSet von_neumann_pointer_kraus(const VonNeumannModel& model);
ProcessKernel von_neumann_pointer_channel(const VonNeumannModel& model,
                                          std::shared_ptr<const QuantizerCache> cache);

// Exact pointer-side action: T′(X, μ, ν) = Σ_j |c_j|² T(X − μ g a_j, μ, ν),
// realized by cubic interpolation along each ray.  Shifts are exact where the
// kernel form carries a ray-preserving delta, so no grid kernel is involved.
// Throws if a shift exceeds the grid span.
TomogramGrid apply_pointer_shifts(const TomogramGrid& t, const VonNeumannModel& model);

// --- projections in the level basis ------------------------------------

KrausSet basis_projector_kraus(HilbertSpec spec);
PartialKernel basis_projector_partial(int m,
                                      std::shared_ptr<const QuantizerCache> cache);
ProcessKernel basis_projector_channel(std::shared_ptr<const QuantizerCache> cache);

// Fuzzy level projector Π_a = N⁻¹ Σ_n e^{−κ²(n−a)²/4} |n⟩⟨n| with N² = √(2π)/κ
// fixed by ∫ Π_a†Π_a da = 1; outcome grid built to cover all levels unless
// supplied.  The non-selective channel suppresses off-diagonals by
// e^{−κ²(n−m)²/8}.
KrausSet gaussian_basis_projector_kraus(double kappa, HilbertSpec spec,
                                        std::vector<double> outcome_grid = {});
ProcessKernel gaussian_basis_projector_channel(
    double kappa, std::shared_ptr<const QuantizerCache> cache);

// --- Gaussian projection of the coordinate -----------------------------

// Coordinate projector family of width κ: Π_a = (πκ²)^{−1/4} ∫ e^{−(q−a)²/2κ²}
// |q⟩⟨q| dq, truncated to the ladder basis.  A continuous-outcome family with
// ∫ Π_a†Π_a da = 1.
struct GaussianProjectorCV {
  double kappa = 1.0;                // projector width, > 0
  std::vector<double> outcome_grid;  // outcomes a (empty: built for the spec)

  static GaussianProjectorCV make(double kappa, HilbertSpec spec,
                                  std::vector<double> outcome_grid = {});
};

// Truncated matrix of a single projector Π_a.
Matrix gaussian_position_projector_matrix(double kappa, double a, HilbertSpec spec);

KrausSet gaussian_position_kraus(const GaussianProjectorCV& proj, HilbertSpec spec);
PartialKernel gaussian_position_partial(const GaussianProjectorCV& proj, double a,
                                        std::shared_ptr<const QuantizerCache> cache);
ProcessKernel gaussian_position_channel(const GaussianProjectorCV& proj,
                                        std::shared_ptr<const QuantizerCache> cache);

struct BlurReport {
  double max_sigma = 0.0;  // largest per-ray blur deviation |ν|/(κ√2)
  double grid_step = 0.0;
  bool warned = false;  // blur below grid resolution: output ≈ input
};

// Non-selective coordinate measurement acting directly on the tomogram: each
// ray is convolved in X with a Gaussian of deviation |ν|/(κ√2), applied as a
// spectral multiplier so sub-grid widths stay exact; the θ = 0 ray is the
// natural no-blur limit.
TomogramGrid apply_gaussian_position_blur(const TomogramGrid& t, double kappa,
                                          BlurReport* report = nullptr);

// Independent route: ρ′(q,q′) = ρ(q,q′) e^{−(q−q′)²/4κ²} evaluated on a dense
// coordinate grid and projected back to the ladder basis.
DensityMatrix coordinate_decoherence_oracle(const DensityMatrix& rho, double kappa);

// --- qubit processes ----------------------------------------------------

enum class QubitChannelKind { phase_flip, amplitude_damping };

struct QubitChannel {
  QubitChannelKind kind = QubitChannelKind::phase_flip;
  double parameter = 1.0;  // p (keep probability) or γ (decay probability)

  static QubitChannel make(QubitChannelKind kind, double parameter);
};

KrausSet qubit_kraus(const QubitChannel& ch);
ProcessKernel qubit_channel(const QubitChannel& ch,
                            std::shared_ptr<const QuantizerCache> cache);

// Closed form of a qubit kernel: delta_weight·δ(x̄⃗−x⃗) plus the regular part
// Σ_{nm} c[n][m] 𝒯_n(x⃗) 𝒟_mm(x̄⃗), where 𝒯_n are the basis-state tomograms.
struct QubitClosedForm {
  double delta_weight = 0.0;
  double c[2][2] = {{0.0, 0.0}, {0.0, 0.0}};

  // regular part at a point pair
  Complex regular_value(const PhaseSpacePoint& xbar, const PhaseSpacePoint& x) const;
  // full kernel value with the delta represented by the two-level identity
  // tensor (exact at this truncation)
  Complex value(const PhaseSpacePoint& xbar, const PhaseSpacePoint& x) const;
};

// Per-branch closed forms (one per Kraus operator, same order as
// qubit_kraus) and their sum.
std::vector<QubitClosedForm> qubit_branch_closed_forms(const QubitChannel& ch);
QubitClosedForm qubit_closed_form(const QubitChannel& ch);

// Applies the closed form to a tomogram: delta_weight·T plus rank-one terms
// built from the level moments of T.
TomogramGrid apply_qubit_closed_form(const TomogramGrid& t, const QubitClosedForm& form,
                                     const QuantizerCache& cache);

// --- registry for the command-line surface ------------------------------

struct ChannelBuild {
  std::string name;
  KrausSet kraus;
  ProcessKernel kernel;
  std::string summary;
};

// Channel names with their required parameters.
std::vector<std::string> channel_registry();

// Builds a named channel on the cache's space.  Parameters (all optional
// unless noted): phase-flip/amp-damp take "p"/"gamma"; gauss-basis and
// gauss-pos take "kappa"; von-neumann takes "kappa" and "g" (observable =
// level number, uniform amplitudes).  Unknown names or missing required
// parameters are validation errors.
ChannelBuild build_channel(const std::string& name,
                           const std::map<std::string, double>& params,
                           std::shared_ptr<const QuantizerCache> cache);

}  // namespace tomo
