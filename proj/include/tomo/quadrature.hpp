#pragma once
// Gaussian quadrature rules built by the Golub–Welsch method (symmetric
// tridiagonal eigenproblem of the orthogonal-polynomial recurrence), plus
// the composite rules used for stored grids.  All rules are deterministic:
// the same request yields bitwise-identical nodes and weights.

#include <vector>

namespace tomo {

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// ∫_a^b f(x) dx ≈ Σ w_i f(x_i)
Quadrature gauss_legendre(int n, double a, double b);

// ∫ f(x) e^{−x²} dx ≈ Σ w_i f(x_i)
Quadrature gauss_hermite(int n);

// Uniform composite trapezoid weights on n nodes with spacing h.
std::vector<double> trapezoid_weights(int n, double h);

// Uniform composite Simpson weights (n odd) with spacing h.
std::vector<double> simpson_weights(int n, double h);

}  // namespace tomo
