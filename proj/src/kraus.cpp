#include "tomo/kraus.hpp"

#include <cmath>
#include <cstdio>

namespace tomo {

Matrix KrausSet::completeness_sum() const {
  if (ops.empty()) throw ValidationError("KrausSet: empty operator list");
  const int d = dim();
  Matrix s = Matrix::Zero(d, d);
  for (std::size_t a = 0; a < ops.size(); ++a)
    s += weights[a] * (ops[a].adjoint() * ops[a]);
  return s;
}

KrausSet KrausSet::make(std::vector<Matrix> ops, std::vector<double> weights,
                        std::vector<std::string> labels, double tol) {
  if (ops.empty()) throw ValidationError("KrausSet: empty operator list");
  const int d = static_cast<int>(ops.front().rows());
  for (const Matrix& a : ops)
    if (a.rows() != d || a.cols() != d)
      throw ValidationError("KrausSet: operators must share a square shape");
  if (weights.empty()) weights.assign(ops.size(), 1.0);
  if (weights.size() != ops.size())
    throw ValidationError("KrausSet: weights/operators length mismatch");
  for (double w : weights)
    if (!(w > 0.0)) throw ValidationError("KrausSet: weights must be positive");
  if (labels.empty()) {
    labels.resize(ops.size());
    for (std::size_t a = 0; a < ops.size(); ++a) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "k%zu", a);
      labels[a] = buf;
    }
  }
  if (labels.size() != ops.size())
    throw ValidationError("KrausSet: labels/operators length mismatch");

  KrausSet k;
  k.ops = std::move(ops);
  k.weights = std::move(weights);
  k.labels = std::move(labels);
  k.completeness_residual =
      (k.completeness_sum() - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  k.complete = k.completeness_residual <= tol;
  return k;
}

DensityMatrix apply_channel_oracle(const DensityMatrix& rho, const KrausSet& k,
                                   ChannelApplyInfo* info) {
  Matrix out = apply_channel_matrix(rho.matrix(), k);
  double drift = std::abs(out.trace() - Complex(1.0));
  if (info) {
    info->trace_drift = drift;
    info->flagged = drift > 10.0 * default_tolerances().kraus_completeness_quadrature;
  }
  // Validation is relaxed on trace: an honestly incomplete family is allowed
  // to lose weight, and the drift is what the caller inspects.
  Tolerances tol = default_tolerances();
  tol.trace = std::max(tol.trace, drift * (1.0 + 1e-3) + 1e-15);
  return DensityMatrix(std::move(out), tol);
}

Matrix apply_channel_matrix(const Matrix& rho, const KrausSet& k) {
  if (rho.rows() != k.dim())
    throw ValidationError("apply_channel: dimension mismatch");
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (std::size_t a = 0; a < k.ops.size(); ++a)
    out += k.weights[a] * (k.ops[a] * rho * k.ops[a].adjoint());
  return out;
}

KrausSet joint_unitary_kraus(const Matrix& u, const std::vector<double>& env_probs,
                             int dim_s, int dim_e) {
  if (u.rows() != dim_s * dim_e || u.cols() != dim_s * dim_e)
    throw ValidationError("joint_unitary_kraus: U shape does not match dims");
  double unit_err = (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()))
                        .cwiseAbs()
                        .maxCoeff();
  if (unit_err > 1e-10)
    throw ValidationError("joint_unitary_kraus: U is not unitary within 1e-10");
  if (static_cast<int>(env_probs.size()) != dim_e)
    throw ValidationError("joint_unitary_kraus: environment population length mismatch");
  double psum = 0.0;
  for (double p : env_probs) {
    if (p < 0.0) throw ValidationError("joint_unitary_kraus: negative population");
    psum += p;
  }
  if (std::abs(psum - 1.0) > 1e-10)
    throw ValidationError("joint_unitary_kraus: populations must sum to 1");

  std::vector<Matrix> ops;
  std::vector<std::string> labels;
  for (int m = 0; m < dim_e; ++m) {
    for (int n = 0; n < dim_e; ++n) {
      if (env_probs[n] == 0.0) continue;
      Matrix a(dim_s, dim_s);
      for (int i = 0; i < dim_s; ++i)
        for (int j = 0; j < dim_s; ++j)
          a(i, j) = u(i * dim_e + m, j * dim_e + n);
      a *= std::sqrt(env_probs[n]);
      char buf[48];
      std::snprintf(buf, sizeof(buf), "env%d<-%d", m, n);
      ops.push_back(std::move(a));
      labels.emplace_back(buf);
    }
  }
  return KrausSet::make(std::move(ops), {}, std::move(labels));
}

}  // namespace tomo
