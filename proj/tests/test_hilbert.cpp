#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "tomo/hilbert.hpp"
#include "tomo/quadrature.hpp"
#include "tomo/states.hpp"

using namespace tomo;

TEST_CASE("gauss rules integrate reference integrands") {
  // ∫_0^2 x³ dx = 4, exact for a 2-node rule already
  Quadrature gl = gauss_legendre(8, 0.0, 2.0);
  double s = 0.0;
  for (int i = 0; i < 8; ++i) s += gl.weights[i] * std::pow(gl.nodes[i], 3);
  CHECK(s == doctest::Approx(4.0).epsilon(1e-13));

  // ∫ x² e^{−x²} dx = √π/2
  Quadrature gh = gauss_hermite(16);
  s = 0.0;
  for (int i = 0; i < 16; ++i) s += gh.weights[i] * gh.nodes[i] * gh.nodes[i];
  CHECK(s == doctest::Approx(std::sqrt(kPi) / 2.0).epsilon(1e-13));

  CHECK_THROWS_AS(gauss_legendre(0, 0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(simpson_weights(4, 0.1), ValidationError);
}

TEST_CASE("hermite_function ground and first excited values") {
  CHECK(hermite_function(0, 0.0) == doctest::Approx(std::pow(kPi, -0.25)).epsilon(1e-14));
  CHECK(hermite_function(1, 0.0) == doctest::Approx(0.0).epsilon(1e-300));
  // ψ₁(q) = √2 q ψ₀(q)
  CHECK(hermite_function(1, 0.7) ==
        doctest::Approx(std::sqrt(2.0) * 0.7 * hermite_function(0, 0.7)).epsilon(1e-14));
  CHECK_THROWS_AS(hermite_function(-1, 0.0), ValidationError);
}

TEST_CASE("hermite_function orthonormality via Gauss-Hermite oracle") {
  for (int n = 0; n <= 20; n += 4)
    for (int m = n; m <= 20; m += 4) {
      double target = (n == m) ? 1.0 : 0.0;
      CHECK(std::abs(oracles::hermite_overlap(n, m) - target) < 1e-10);
    }
}

TEST_CASE("hermite_function three-term recurrence residual") {
  for (int n = 1; n <= 39; n += 2) {
    for (double q : {-10.0, -3.7, -0.4, 0.0, 1.3, 6.2, 10.0}) {
      double lhs = hermite_function(n + 1, q);
      double rhs = std::sqrt(2.0 / (n + 1)) * q * hermite_function(n, q) -
                   std::sqrt(n / (n + 1.0)) * hermite_function(n - 1, q);
      CHECK(std::abs(lhs - rhs) < 1e-10);
    }
  }
}

TEST_CASE("hermite_function_column matches single evaluations") {
  auto col = hermite_function_column(12, 1.9);
  for (int n = 0; n <= 12; ++n) CHECK(col[n] == hermite_function(n, 1.9));
}

TEST_CASE("displacement_element ground-state value and identity") {
  CHECK(std::abs(displacement_element(0, 0, 0.0, 0.0) - 1.0) < 1e-15);
  for (double mu : {0.3, -1.1})
    for (double nu : {0.0, 0.8}) {
      Complex v = displacement_element(0, 0, mu, nu);
      double target = std::exp(-(mu * mu + nu * nu) / 4.0);
      CHECK(std::abs(v.real() - target) < 1e-13);
      CHECK(std::abs(v.imag()) < 1e-13);
    }
  Matrix d0 = displacement_matrix(6, 0.0, 0.0);
  CHECK(max_abs_diff(d0, Matrix::Identity(6, 6)) < 1e-15);
}

TEST_CASE("displacement_element against wavefunction-overlap oracle") {
  for (int n : {0, 1, 3, 6})
    for (int m : {0, 2, 5}) {
      for (double mu : {0.0, 0.9, -2.3})
        for (double nu : {0.0, -0.6, 1.7}) {
          Complex lib = displacement_element(n, m, mu, nu);
          Complex ora = oracles::displacement_overlap(n, m, mu, nu);
          CHECK(std::abs(lib - ora) < 1e-11);
        }
    }
}

TEST_CASE("displacement_matrix agrees with elementwise evaluation") {
  const int dim = 16;
  for (double mu : {0.4, -3.0})
    for (double nu : {1.2, 5.0}) {
      Matrix d = displacement_matrix(dim, mu, nu);
      for (int n = 0; n < dim; ++n)
        for (int m = 0; m < dim; ++m)
          CHECK(std::abs(d(n, m) - displacement_element(n, m, mu, nu)) < 1e-14);
    }
}

TEST_CASE("displacement_matrix is unitary up to truncation leakage") {
  // leakage through the cut scales like the amplitude of reaching the top
  // levels, so small displacements must give a clean low block
  const int dim = 16;
  Matrix d = displacement_matrix(dim, 0.2, -0.3);
  Matrix gram = d.adjoint() * d;
  for (int n = 0; n < 6; ++n)
    for (int m = 0; m < 6; ++m) {
      double target = (n == m) ? 1.0 : 0.0;
      CHECK(std::abs(gram(n, m) - Complex(target)) < 1e-10);
    }
}

TEST_CASE("quadrature operators satisfy the canonical commutator in the bulk") {
  const int dim = 12;
  Matrix q = position_operator(dim), p = momentum_operator(dim);
  Matrix c = q * p - p * q;
  for (int n = 0; n < dim - 1; ++n)
    for (int m = 0; m < dim - 1; ++m) {
      Complex target = (n == m) ? kI : Complex(0.0);
      CHECK(std::abs(c(n, m) - target) < 1e-14);
    }
  // truncation defect sits in the top corner: c(N−1,N−1) = i(1 − N)
  CHECK(std::abs(c(dim - 1, dim - 1) - kI * (1.0 - dim)) < 1e-12);
}

TEST_CASE("DensityMatrix validation rejects broken inputs") {
  Matrix ok = Matrix::Zero(2, 2);
  ok(0, 0) = 0.5;
  ok(1, 1) = 0.5;
  CHECK_NOTHROW(DensityMatrix{ok});

  Matrix bad_trace = ok * 1.01;
  CHECK_THROWS_AS(DensityMatrix{bad_trace}, ValidationError);

  Matrix non_herm = ok;
  non_herm(0, 1) = Complex(0.0, 0.1);
  CHECK_THROWS_AS(DensityMatrix{non_herm}, ValidationError);

  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.1;
  neg(1, 1) = -0.1;
  CHECK_THROWS_AS(DensityMatrix{neg}, ValidationError);
}

TEST_CASE("fidelity has the right fixed points") {
  DensityMatrix f0 = fock_state(HilbertSpec(4), 0);
  DensityMatrix f1 = fock_state(HilbertSpec(4), 1);
  CHECK(fidelity(f0, f0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity(f0, f1) == doctest::Approx(0.0).epsilon(1e-12));
  DensityMatrix mix = mixture({0.5, 0.5}, {f0, f1});
  CHECK(fidelity(f0, mix) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("purity and mean level") {
  DensityMatrix f2 = fock_state(HilbertSpec(6), 2);
  CHECK(f2.purity() == doctest::Approx(1.0));
  CHECK(f2.mean_number() == doctest::Approx(2.0));
  DensityMatrix mix = mixture({0.5, 0.5}, {fock_state(HilbertSpec(6), 0), f2});
  CHECK(mix.purity() == doctest::Approx(0.5));
  CHECK(mix.mean_number() == doctest::Approx(1.0));
}
