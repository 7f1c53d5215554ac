#include "tomo/states.hpp"

#include <cmath>

namespace tomo {

namespace {
constexpr double kLeakageWarn = 1e-6;
}

DensityMatrix fock_state(HilbertSpec spec, int n) {
  if (n < 0 || n >= spec.dim)
    throw ValidationError("fock_state: level outside the truncated space");
  Matrix rho = Matrix::Zero(spec.dim, spec.dim);
  rho(n, n) = 1.0;
  return DensityMatrix(std::move(rho));
}

DensityMatrix coherent_state(HilbertSpec spec, Complex alpha, StateBuildReport* report) {
  Vector c(spec.dim);
  // c_n = e^{−|α|²/2} αⁿ/√(n!), built multiplicatively for stability
  Complex amp = std::exp(-0.5 * std::norm(alpha));
  double kept = 0.0;
  for (int n = 0; n < spec.dim; ++n) {
    if (n > 0) amp *= alpha / std::sqrt(static_cast<double>(n));
    c(n) = amp;
    kept += std::norm(amp);
  }
  if (kept <= 0.0)
    throw ValidationError("coherent_state: amplitude too large for this truncation");
  if (report) {
    report->leakage = 1.0 - kept;
    report->warned = report->leakage > kLeakageWarn;
  }
  c /= std::sqrt(kept);
  return pure_state(c);
}

DensityMatrix thermal_state(HilbertSpec spec, double nbar, StateBuildReport* report) {
  if (nbar < 0.0) throw ValidationError("thermal_state: mean occupation must be >= 0");
  Matrix rho = Matrix::Zero(spec.dim, spec.dim);
  if (nbar == 0.0) {
    rho(0, 0) = 1.0;
  } else {
    const double r = nbar / (1.0 + nbar);
    double p = 1.0 / (1.0 + nbar), kept = 0.0;
    for (int n = 0; n < spec.dim; ++n) {
      rho(n, n) = p;
      kept += p;
      p *= r;
    }
    if (report) {
      report->leakage = 1.0 - kept;
      report->warned = report->leakage > kLeakageWarn;
    }
    rho /= kept;
  }
  if (report && nbar == 0.0) *report = {};
  return DensityMatrix(std::move(rho));
}

DensityMatrix mixture(const std::vector<double>& weights,
                      const std::vector<DensityMatrix>& states) {
  if (weights.empty() || weights.size() != states.size())
    throw ValidationError("mixture: need matching nonempty weights and states");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw ValidationError("mixture: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-10)
    throw ValidationError("mixture: weights must sum to 1 within 1e-10");
  const int dim = states.front().dim();
  Matrix rho = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].dim() != dim) throw ValidationError("mixture: dimension mismatch");
    rho += weights[i] * states[i].matrix();
  }
  return DensityMatrix(std::move(rho));
}

DensityMatrix pure_state(const Vector& amplitudes) {
  double n2 = amplitudes.squaredNorm();
  if (n2 <= 0.0) throw ValidationError("pure_state: zero vector");
  Vector c = amplitudes / std::sqrt(n2);
  Matrix rho = c * c.adjoint();
  return DensityMatrix(std::move(rho));
}

}  // namespace tomo
