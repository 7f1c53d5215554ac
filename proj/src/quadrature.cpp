#include "tomo/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "tomo/common.hpp"

namespace tomo {

namespace {

// Nodes = eigenvalues of the Jacobi matrix, weights = μ₀ · (first eigenvector
// component)².  β holds the off-diagonal entries; the diagonal is zero for
// both Legendre and Hermite (symmetric weights).
Quadrature golub_welsch(const std::vector<double>& beta, double mu0) {
  const int n = static_cast<int>(beta.size()) + 1;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n - 1; ++k) {
    J(k, k + 1) = beta[k];
    J(k + 1, k) = beta[k];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    q.nodes[i] = es.eigenvalues()(i);
    double v0 = es.eigenvectors()(0, i);
    q.weights[i] = mu0 * v0 * v0;
  }
  return q;
}

}  // namespace

Quadrature gauss_legendre(int n, double a, double b) {
  if (n < 1) throw ValidationError("gauss_legendre: need at least one node");
  if (!(b > a)) throw ValidationError("gauss_legendre: empty interval");
  std::vector<double> beta(n - 1);
  for (int k = 1; k < n; ++k)
    beta[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  Quadrature q = golub_welsch(beta, 2.0);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    q.nodes[i] = mid + half * q.nodes[i];
    q.weights[i] *= half;
  }
  return q;
}

Quadrature gauss_hermite(int n) {
  if (n < 1) throw ValidationError("gauss_hermite: need at least one node");
  std::vector<double> beta(n - 1);
  for (int k = 1; k < n; ++k) beta[k - 1] = std::sqrt(0.5 * k);
  return golub_welsch(beta, std::sqrt(kPi));
}

std::vector<double> trapezoid_weights(int n, double h) {
  if (n < 2) throw ValidationError("trapezoid_weights: need at least 2 nodes");
  std::vector<double> w(n, h);
  w.front() = 0.5 * h;
  w.back() = 0.5 * h;
  return w;
}

std::vector<double> simpson_weights(int n, double h) {
  if (n < 3 || n % 2 == 0)
    throw ValidationError("simpson_weights: need an odd node count >= 3");
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i)
    w[i] = (i == 0 || i == n - 1) ? h / 3.0 : (i % 2 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
  return w;
}

}  // namespace tomo
