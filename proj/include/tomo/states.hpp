#pragma once
// Reference states on the truncated space.  Families that live naturally in
// infinite dimension (coherent, thermal) are renormalized after truncation
// and report how much weight the cut discarded.

#include <vector>

#include "tomo/hilbert.hpp"

namespace tomo {

struct StateBuildReport {
  double leakage = 0.0;   // weight outside the truncated space, before renorm
  bool warned = false;    // leakage above the warning threshold
};

DensityMatrix fock_state(HilbertSpec spec, int n);

// |α⟩ truncated and renormalized; leakage = 1 − Σ_{n<N} |c_n|².
DensityMatrix coherent_state(HilbertSpec spec, Complex alpha,
                             StateBuildReport* report = nullptr);

// Thermal state of mean occupation n̄, truncated and renormalized;
// leakage = (n̄/(1+n̄))^N.
DensityMatrix thermal_state(HilbertSpec spec, double nbar,
                            StateBuildReport* report = nullptr);

// Σ w_i ρ_i with w_i ≥ 0 and Σ w_i = 1 within 1e−10.
DensityMatrix mixture(const std::vector<double>& weights,
                      const std::vector<DensityMatrix>& states);

DensityMatrix pure_state(const Vector& amplitudes);

}  // namespace tomo
