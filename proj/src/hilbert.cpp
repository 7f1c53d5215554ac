#include "tomo/hilbert.hpp"

#include <cmath>

namespace tomo {

namespace {
const double kQuarterRootPi = std::pow(kPi, -0.25);
}

double hermite_function(int n, double q) {
  if (n < 0) throw ValidationError("hermite_function: negative index");
  double psi0 = kQuarterRootPi * std::exp(-0.5 * q * q);
  if (n == 0) return psi0;
  double psi1 = std::sqrt(2.0) * q * psi0;
  if (n == 1) return psi1;
  double prev = psi0, cur = psi1;
  for (int k = 2; k <= n; ++k) {
    double next = std::sqrt(2.0 / k) * q * cur - std::sqrt((k - 1.0) / k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> hermite_function_column(int n_max, double q) {
  if (n_max < 0) throw ValidationError("hermite_function_column: negative index");
  std::vector<double> psi(n_max + 1);
  psi[0] = kQuarterRootPi * std::exp(-0.5 * q * q);
  if (n_max == 0) return psi;
  psi[1] = std::sqrt(2.0) * q * psi[0];
  for (int k = 2; k <= n_max; ++k)
    psi[k] = std::sqrt(2.0 / k) * q * psi[k - 1] - std::sqrt((k - 1.0) / k) * psi[k - 2];
  return psi;
}

namespace {

// ⟨m+d|D(α)|m⟩ for the whole diagonal d ≥ 0 at x = |α|²:
//   t_m · L_m^{(d)}(x) · e^{−x/2},  t_m = √(m!/(m+d)!) α^d,
// with t_m and the Laguerre values advanced by their recurrences.
void fill_diagonal(Matrix& D, int d, Complex alpha, double x, bool lower) {
  const int dim = static_cast<int>(D.rows());
  const double ex = std::exp(-0.5 * x);
  Complex t = 1.0;
  for (int k = 1; k <= d; ++k) t *= alpha / std::sqrt(static_cast<double>(k));
  double L_prev = 0.0, L_cur = 1.0;  // L_{−1}, L_0
  for (int m = 0; m + d < dim; ++m) {
    if (m > 0) {
      t *= std::sqrt(m / (m + static_cast<double>(d)));
      double L_next = ((2.0 * m - 1.0 + d - x) * L_cur - (m - 1.0 + d) * L_prev) / m;
      L_prev = L_cur;
      L_cur = L_next;
    }
    Complex val = t * L_cur * ex;
    if (lower) {
      // ⟨m|D|m+d⟩ = conj(⟨m+d|D(−α)|m⟩); the caller passes −α already, so
      // conjugate and mirror.
      D(m, m + d) = std::conj(val);
    } else {
      D(m + d, m) = val;
    }
  }
}

}  // namespace

Complex displacement_element(int n, int m, double mu, double nu) {
  if (n < 0 || m < 0) throw ValidationError("displacement_element: negative index");
  const Complex alpha = Complex(nu, -mu) / std::sqrt(2.0);
  const double x = std::norm(alpha);
  const double ex = std::exp(-0.5 * x);
  const int lo = std::min(n, m), d = std::abs(n - m);
  // prefactor √(lo!/(lo+d)!) β^d with β = α (n>m) or −α* (n<m)
  const Complex beta = (n >= m) ? alpha : -std::conj(alpha);
  Complex t = 1.0;
  for (int k = 1; k <= d; ++k) t *= beta / std::sqrt(static_cast<double>(k));
  double L_prev = 0.0, L_cur = 1.0;
  for (int j = 1; j <= lo; ++j) {
    t *= std::sqrt(j / (j + static_cast<double>(d)));
    double L_next = ((2.0 * j - 1.0 + d - x) * L_cur - (j - 1.0 + d) * L_prev) / j;
    L_prev = L_cur;
    L_cur = L_next;
  }
  return t * L_cur * ex;
}

Matrix displacement_matrix(int dim, double mu, double nu) {
  if (dim < 1) throw ValidationError("displacement_matrix: empty space");
  const Complex alpha = Complex(nu, -mu) / std::sqrt(2.0);
  const double x = std::norm(alpha);
  Matrix D(dim, dim);
  for (int d = 0; d < dim; ++d) {
    fill_diagonal(D, d, alpha, x, /*lower=*/false);
    if (d > 0) fill_diagonal(D, d, -alpha, x, /*lower=*/true);
  }
  return D;
}

Matrix lowering_operator(int dim) {
  Matrix a = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Matrix position_operator(int dim) {
  Matrix a = lowering_operator(dim);
  return (a + a.adjoint()) / std::sqrt(2.0);
}

Matrix momentum_operator(int dim) {
  Matrix a = lowering_operator(dim);
  return (a.adjoint() - a) * (kI / std::sqrt(2.0));
}

Matrix number_operator(int dim) {
  Matrix n = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = k;
  return n;
}

DensityMatrix::DensityMatrix(Matrix rho, const Tolerances& tol) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() < 2)
    throw ValidationError("DensityMatrix: need a square matrix of dim >= 2");
  double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol.hermiticity)
    throw ValidationError("DensityMatrix: not Hermitian within tolerance");
  double tr_err = std::abs(rho_.trace() - Complex(1.0));
  if (tr_err > tol.trace)
    throw ValidationError("DensityMatrix: trace differs from 1 beyond tolerance");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho_ + rho_.adjoint()));
  if (es.eigenvalues().minCoeff() < tol.psd_floor)
    throw ValidationError("DensityMatrix: negative eigenvalue beyond round-off floor");
}

double DensityMatrix::purity() const {
  return real_checked((rho_ * rho_).trace(), 1e-10, "purity");
}

double DensityMatrix::mean_number() const {
  double s = 0.0;
  for (int n = 0; n < dim(); ++n) s += n * rho_(n, n).real();
  return s;
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw ValidationError("fidelity: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix());
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  Matrix sqrt_a = es.eigenvectors() * lam.cwiseSqrt().asDiagonal() *
                  es.eigenvectors().adjoint();
  Matrix m = sqrt_a * b.matrix() * sqrt_a;
  Eigen::SelfAdjointEigenSolver<Matrix> es2(0.5 * (m + m.adjoint()));
  double s = 0.0;
  for (int i = 0; i < es2.eigenvalues().size(); ++i)
    s += std::sqrt(std::max(0.0, es2.eigenvalues()(i)));
  return s * s;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ValidationError("max_abs_diff: shape mismatch");
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace tomo
