#pragma once
// Operator-sum description of a channel: ρ′ = Σ_a w_a A_a ρ A_a†.
// Discrete outcome families carry unit weights; continuous families carry
// the outcome-grid quadrature weights, so completeness means
// Σ_a w_a A_a†A_a = 1 in both cases.

#include <string>
#include <vector>

#include "tomo/hilbert.hpp"

namespace tomo {

struct KrausSet {
  std::vector<Matrix> ops;
  std::vector<double> weights;          // 1.0 for discrete outcomes
  std::vector<std::string> labels;      // outcome identifiers
  std::vector<double> outcome_values;   // numeric outcome where meaningful
  bool continuous = false;
  double completeness_residual = 0.0;   // max-abs of Σ w A†A − 1
  bool complete = true;                 // residual within tolerance at build

  int dim() const { return ops.empty() ? 0 : static_cast<int>(ops.front().rows()); }
  Matrix completeness_sum() const;

  // Validates shapes, fills the residual, and flags completeness against
  // `tol` (callers pass the quadrature tolerance for discretized families).
  static KrausSet make(std::vector<Matrix> ops,
                       std::vector<double> weights = {},
                       std::vector<std::string> labels = {},
                       double tol = default_tolerances().kraus_completeness);
};

struct ChannelApplyInfo {
  double trace_drift = 0.0;   // |Tr ρ′ − 1|
  bool flagged = false;       // drift above 10× the completeness tolerance
};

// ρ′ = Σ w A ρ A†, never renormalized; drift is reported, not hidden.
DensityMatrix apply_channel_oracle(const DensityMatrix& rho, const KrausSet& k,
                                   ChannelApplyInfo* info = nullptr);
Matrix apply_channel_matrix(const Matrix& rho, const KrausSet& k);

// Kraus family of "couple to an environment, evolve jointly, trace out":
// A_{mn} = √p_n ⟨m|U|n⟩ (environment bra/kets), with U on dim_s·dim_e and
// index convention row = i_s·dim_e + j_e.  U must be unitary within 1e−10
// and the environment populations must sum to 1.
KrausSet joint_unitary_kraus(const Matrix& u, const std::vector<double>& env_probs,
                             int dim_s, int dim_e);

}  // namespace tomo
