#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <memory>

#include "support/oracles.hpp"
#include "tomo/channels.hpp"
#include "tomo/kernels.hpp"
#include "tomo/quadrature.hpp"
#include "tomo/states.hpp"
#include "tomo/transforms.hpp"

using namespace tomo;

namespace {

std::shared_ptr<const QuantizerCache> make_cache(int dim) {
  static std::map<int, std::shared_ptr<const QuantizerCache>> pool;
  auto it = pool.find(dim);
  if (it != pool.end()) return it->second;
  auto cache = std::make_shared<QuantizerCache>(QuantizerCache::make(
      HilbertSpec(dim), RayGrid::make(8.0, 257, 64), RadialRule::make(12.0, 160)));
  pool.emplace(dim, cache);
  return cache;
}

double max_abs_table(const Eigen::ArrayXXd& a, const Eigen::ArrayXXd& b) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  return (a - b).abs().maxCoeff();
}

// Tomogram table of a density matrix assembled directly from wavefunctions,
// without the cache machinery; works for any dimension, normalized or not.
Eigen::ArrayXXd dense_tomogram_table(const Matrix& rho, const RayGrid& g) {
  const int d = static_cast<int>(rho.rows());
  Eigen::ArrayXXd out(g.n_theta, g.n_x);
  for (int i = 0; i < g.n_x; ++i) {
    const std::vector<double> psi = hermite_function_column(d - 1, g.x_nodes[i]);
    for (int j = 0; j < g.n_theta; ++j) {
      Complex s = 0.0;
      for (int n = 0; n < d; ++n)
        for (int m = 0; m < d; ++m)
          s += rho(m, n) * psi[n] * psi[m] * std::polar(1.0, (n - m) * g.theta_nodes[j]);
      out(j, i) = s.real();
    }
  }
  return out;
}

VonNeumannModel three_level_model(double g, double kappa) {
  const double c = 1.0 / std::sqrt(3.0);
  return VonNeumannModel::make({0.0, 1.0, 2.0}, {c, c, c}, g, kappa, 16);
}

}  // namespace

TEST_CASE("pointer model validation and outcome grid construction") {
  const double c = 1.0 / std::sqrt(2.0);
  CHECK_THROWS_AS(VonNeumannModel::make({1.0}, {Complex(1.0)}, 1.0, 1.0),
                  ValidationError);
  CHECK_THROWS_AS(VonNeumannModel::make({0.0, 1.0}, {c, c, c}, 1.0, 1.0),
                  ValidationError);
  CHECK_THROWS_AS(VonNeumannModel::make({0.0, 1.0}, {c, c}, 1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(VonNeumannModel::make({0.0, 1.0}, {c, c}, 1.0, -2.0),
                  ValidationError);
  CHECK_THROWS_AS(VonNeumannModel::make({0.0, 1.0}, {0.9, 0.9}, 1.0, 1.0),
                  ValidationError);
  CHECK_THROWS_AS(VonNeumannModel::make({0.0, 1.0}, {c, c}, 1.0, 1.0, 1),
                  ValidationError);
  // non-monotone explicit grid
  CHECK_THROWS_AS(
      VonNeumannModel::make({0.0, 1.0}, {c, c}, 1.0, 1.0, 16, {0.0, 0.5, 0.4}),
      ValidationError);

  const VonNeumannModel m = VonNeumannModel::make({-1.0, 2.0}, {c, c}, 1.5, 4.0);
  CHECK(m.outcome_grid.front() == doctest::Approx(-1.5 - 4.0).epsilon(1e-12));
  CHECK(m.outcome_grid.back() == doctest::Approx(3.0 + 4.0).epsilon(1e-12));
  // steps no coarser than a third of the pointer deviation
  for (std::size_t i = 1; i < m.outcome_grid.size(); ++i)
    CHECK(m.outcome_grid[i] - m.outcome_grid[i - 1] <= 1.0 / 6.0 + 1e-12);

  // a grid that does not span the coupled eigenvalues is refused
  const VonNeumannModel narrow = VonNeumannModel::make(
      {-1.0, 1.0}, {c, c}, 1.5, 1.0, 16, {-2.0, -1.0, 0.0, 1.0, 2.0});
  CHECK_THROWS_AS(von_neumann_kraus(narrow), ValidationError);
}

TEST_CASE("pointer measurement seen from the system") {
  SUBCASE("zero coupling is the identity channel") {
    const VonNeumannModel m = three_level_model(0.0, 1.0);
    const KrausSet k = von_neumann_kraus(m);
    CHECK(k.continuous);
    CHECK(k.complete);
    CHECK(k.completeness_residual <= 1e-10);

    auto cache = make_cache(3);
    const Vector v = Vector::Constant(3, 1.0 / std::sqrt(3.0));
    const DensityMatrix rho = pure_state(v);
    const DensityMatrix out = apply_channel_oracle(rho, k);
    CHECK(max_abs_diff(out.matrix(), rho.matrix()) <= 1e-12);

    const TomogramGrid t = tomogram_from_density(rho, *cache);
    const TomogramGrid t2 = apply_kernel(t, total_kernel(k, cache));
    CHECK(max_abs_table(t2.values(), t.values()) <= 1e-6);
  }

  SUBCASE("coherence suppression factors across a (kappa, g) sweep") {
    const Vector v = Vector::Constant(3, 1.0 / std::sqrt(3.0));
    const DensityMatrix rho = pure_state(v);
    for (double kappa : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      for (double g : {0.25, 0.5, 1.0, 1.5, 2.0}) {
        const VonNeumannModel m = three_level_model(g, kappa);
        const KrausSet k = von_neumann_kraus(m);
        CHECK(k.complete);
        const DensityMatrix out = apply_channel_oracle(rho, k);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            const double want =
                std::exp(-kappa * g * g * (i - j) * (i - j) / 8.0) / 3.0;
            const double got = std::real(out.matrix()(i, j));
            INFO("kappa=", kappa, " g=", g, " (", i, ",", j, ")");
            CHECK(std::abs(got / want - 1.0) <= 1e-6);
            CHECK(std::abs(std::imag(out.matrix()(i, j))) <= 1e-14);
          }
      }
    }
  }

  SUBCASE("ray-space route reproduces the suppression") {
    const double g = 1.5, kappa = 1.0;
    const VonNeumannModel m = three_level_model(g, kappa);
    auto cache = make_cache(3);
    const Vector v = Vector::Constant(3, 1.0 / std::sqrt(3.0));
    const DensityMatrix rho = pure_state(v);

    Matrix want = rho.matrix();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        want(i, j) *= std::exp(-kappa * g * g * (i - j) * (i - j) / 8.0);

    const TomogramGrid out =
        apply_kernel(tomogram_from_density(rho, *cache), total_kernel(von_neumann_kraus(m), cache));
    CHECK(max_abs_table(out.values(), dense_tomogram_table(want, out.grid())) <= 1e-4);
  }
}

TEST_CASE("pointer measurement seen from the pointer") {
  const int pdim = 16;
  auto cache = make_cache(pdim);
  const DensityMatrix ground = fock_state(HilbertSpec(pdim), 0);
  const TomogramGrid t0 = tomogram_from_density(ground, *cache);
  const RayGrid& g = t0.grid();

  // matrix-exponential oracle for e^{−i s p̂}, independent of the closed-form
  // displacement matrix elements
  Eigen::SelfAdjointEigenSolver<Matrix> es(momentum_operator(pdim));
  const auto expm_shift = [&](double s) {
    return Matrix(es.eigenvectors() *
                  (-kI * s * es.eigenvalues().array().cast<Complex>())
                      .exp()
                      .matrix()
                      .asDiagonal() *
                  es.eigenvectors().adjoint());
  };

  SUBCASE("single reading recenters the packet") {
    const VonNeumannModel m =
        VonNeumannModel::make({-1.0, 1.0}, {0.0, 1.0}, 1.5, 1.0, pdim);
    const ProcessKernel pk = von_neumann_pointer_channel(m, cache);
    const TomogramGrid out = apply_kernel(t0, pk);
    // θ = 0 row: Gaussian recentered at the coupled reading
    const int i15 = 152;  // X node at +1.5
    CHECK(g.x_nodes[i15] == doctest::Approx(1.5).epsilon(1e-14));
    for (int i = 0; i < g.n_x; i += 8) {
      const double want =
          std::exp(-(g.x_nodes[i] - 1.5) * (g.x_nodes[i] - 1.5)) / std::sqrt(kPi);
      CHECK(std::abs(out.values()(0, i) - want) <= 1e-5);
    }
    // full table against the matrix-exponential oracle
    const Matrix u = expm_shift(1.5);
    const Eigen::ArrayXXd ref =
        dense_tomogram_table(u * ground.matrix() * u.adjoint(), g);
    CHECK(max_abs_table(out.values(), ref) <= 1e-6);
  }

  SUBCASE("two readings produce a bimodal marginal") {
    const VonNeumannModel m = VonNeumannModel::make(
        {-1.0, 1.0}, {std::sqrt(0.5), Complex(0.0, std::sqrt(0.5))}, 1.5, 1.0, pdim);
    const ProcessKernel pk = von_neumann_pointer_channel(m, cache);
    const TomogramGrid out = apply_kernel(t0, pk);

    Matrix rho_ref = Matrix::Zero(pdim, pdim);
    for (int j = 0; j < 2; ++j) {
      const Matrix u = expm_shift(m.coupling * m.eigenvalues[j]);
      rho_ref += std::norm(m.amplitudes[j]) * u * ground.matrix() * u.adjoint();
    }
    CHECK(max_abs_table(out.values(), dense_tomogram_table(rho_ref, g)) <= 1e-6);

    // the two peaks on the θ = 0 ray
    const double peak = 0.5 * (1.0 + std::exp(-9.0)) / std::sqrt(kPi);
    CHECK(std::abs(out.values()(0, 152) - peak) <= 1e-5);
    CHECK(std::abs(out.values()(0, 104) - peak) <= 1e-5);

    // exact per-ray shifts agree with the kernel route
    const TomogramGrid shifted = apply_pointer_shifts(t0, m);
    CHECK_FALSE(shifted.is_density());
    CHECK(shifted.max_norm_residual() <= 1e-5);
    CHECK(max_abs_table(out.values(), shifted.values()) <= 1e-4);

    // and on a mixed pointer state
    const TomogramGrid tt =
        tomogram_from_density(thermal_state(HilbertSpec(pdim), 0.5), *cache);
    CHECK(max_abs_table(apply_kernel(tt, pk).values(),
                        apply_pointer_shifts(tt, m).values()) <= 1e-4);
  }

  SUBCASE("zero coupling shifts are exact") {
    const VonNeumannModel m =
        VonNeumannModel::make({-1.0, 1.0}, {std::sqrt(0.5), std::sqrt(0.5)}, 0.0, 1.0,
                              pdim);
    const TomogramGrid same = apply_pointer_shifts(t0, m);
    CHECK(max_abs_table(same.values(), t0.values()) <= 1e-15);
  }

  SUBCASE("refusals") {
    const VonNeumannModel wide =
        VonNeumannModel::make({-6.0, 6.0}, {std::sqrt(0.5), std::sqrt(0.5)}, 1.5, 1.0,
                              pdim);
    CHECK_THROWS_AS(apply_pointer_shifts(t0, wide), ValidationError);
    const VonNeumannModel m =
        VonNeumannModel::make({-1.0, 1.0}, {std::sqrt(0.5), std::sqrt(0.5)}, 1.0, 1.0,
                              pdim);
    CHECK_THROWS_AS(von_neumann_pointer_channel(m, make_cache(8)), ValidationError);
  }
}

TEST_CASE("level projection: selective slices and full dephasing") {
  auto cache = make_cache(4);

  SUBCASE("an eigenstate passes through its own slice unchanged") {
    const DensityMatrix f2 = fock_state(HilbertSpec(4), 2);
    const TomogramGrid t = tomogram_from_density(f2, *cache);
    const TomogramGrid out = apply_kernel(t, basis_projector_partial(2, cache));
    CHECK(out.is_density());
    CHECK(max_abs_table(out.values(), t.values()) <= 1e-12);
  }

  SUBCASE("outcome mass of a mixture slice") {
    const std::vector<double> w = {0.1, 0.2, 0.3, 0.4};
    std::vector<DensityMatrix> states;
    for (int n = 0; n < 4; ++n) states.push_back(fock_state(HilbertSpec(4), n));
    const DensityMatrix rho = mixture(w, states);
    const TomogramGrid t = tomogram_from_density(rho, *cache);
    const TomogramGrid out = apply_kernel(t, basis_projector_partial(1, cache));
    CHECK(out.is_density());
    for (int j = 0; j < t.grid().n_theta; j += 9)
      CHECK(out.ray_norm(j) == doctest::Approx(0.2).epsilon(1e-9));
    const Eigen::ArrayXXd want =
        0.2 * tomogram_from_density(fock_state(HilbertSpec(4), 1), *cache).values();
    CHECK(max_abs_table(out.values(), want) <= 1e-12);
  }

  SUBCASE("non-selective projection keeps only the level populations") {
    Vector v = Vector::Zero(4);
    v(0) = v(3) = 1.0 / std::sqrt(2.0);
    const DensityMatrix rho = pure_state(v);
    const ProcessKernel pk = basis_projector_channel(cache);
    CHECK(pk.complete);
    CHECK(pk.completeness_residual <= 1e-14);
    CHECK(pk.identity_weight == doctest::Approx(4.0 / 16.0).epsilon(1e-12));

    const TomogramGrid out = apply_kernel(tomogram_from_density(rho, *cache), pk);
    const Matrix diag = rho.matrix().diagonal().asDiagonal();
    CHECK(max_abs_table(out.values(), dense_tomogram_table(diag, out.grid())) <= 1e-6);
  }

  SUBCASE("slice outside the space is refused") {
    CHECK_THROWS_AS(basis_projector_partial(7, cache), ValidationError);
    CHECK_THROWS_AS(basis_projector_partial(-1, cache), ValidationError);
  }
}

TEST_CASE("fuzzy level projection") {
  auto cache = make_cache(4);
  oracles::Rng rng(77);
  const DensityMatrix rho{oracles::random_density(4, 3, rng)};

  SUBCASE("analytic coherence suppression e^{-kappa^2 (n-m)^2 / 8}") {
    for (double kappa : {1.0, 2.0}) {
      const KrausSet k = gaussian_basis_projector_kraus(kappa, HilbertSpec(4));
      CHECK(k.continuous);
      CHECK(k.complete);
      CHECK(k.completeness_residual <= 1e-10);
      const DensityMatrix out = apply_channel_oracle(rho, k);
      for (int n = 0; n < 4; ++n)
        for (int m = 0; m < 4; ++m) {
          const Complex want = rho.matrix()(n, m) *
                               std::exp(-kappa * kappa * (n - m) * (n - m) / 8.0);
          CHECK(std::abs(out.matrix()(n, m) - want) <= 1e-10);
        }
    }
  }

  SUBCASE("outcome-grid refinement does not move the answer") {
    const KrausSet coarse = gaussian_basis_projector_kraus(1.0, HilbertSpec(4));
    std::vector<double> fine_grid;
    for (std::size_t i = 0; i + 1 < coarse.outcome_values.size(); ++i) {
      fine_grid.push_back(coarse.outcome_values[i]);
      fine_grid.push_back(0.5 *
                          (coarse.outcome_values[i] + coarse.outcome_values[i + 1]));
    }
    fine_grid.push_back(coarse.outcome_values.back());
    const KrausSet fine = gaussian_basis_projector_kraus(1.0, HilbertSpec(4), fine_grid);
    CHECK(max_abs_diff(apply_channel_oracle(rho, coarse).matrix(),
                       apply_channel_oracle(rho, fine).matrix()) <= 1e-10);
  }

  SUBCASE("ray-space route matches the operator route") {
    const ProcessKernel pk = gaussian_basis_projector_channel(1.0, cache);
    const TomogramGrid out = apply_kernel(tomogram_from_density(rho, *cache), pk);
    const KrausSet k = gaussian_basis_projector_kraus(1.0, HilbertSpec(4));
    const Eigen::ArrayXXd ref =
        dense_tomogram_table(apply_channel_oracle(rho, k).matrix(), out.grid());
    CHECK(max_abs_table(out.values(), ref) <= 1e-5);
  }

  SUBCASE("sharp width recovers the level projector") {
    const ProcessKernel sharp = gaussian_basis_projector_channel(10.0, cache);
    const TomogramGrid t = tomogram_from_density(rho, *cache);
    CHECK(max_abs_table(apply_kernel(t, sharp).values(),
                        apply_kernel(t, basis_projector_channel(cache)).values()) <=
          1e-4);
  }

  SUBCASE("width must be positive") {
    CHECK_THROWS_AS(gaussian_basis_projector_kraus(0.0, HilbertSpec(4)),
                    ValidationError);
    CHECK_THROWS_AS(gaussian_basis_projector_channel(-1.0, cache), ValidationError);
  }
}

TEST_CASE("selective fuzzy-level kernel equals its quantizer-dequantizer sum") {
  auto cache = make_cache(2);
  const double kappa = 1.0, a = 0.7;
  const double pref2 = std::sqrt(kappa * kappa / kTwoPi);  // 1/N²
  Matrix proj = Matrix::Zero(2, 2);
  for (int n = 0; n < 2; ++n)
    proj(n, n) = std::sqrt(pref2) * std::exp(-kappa * kappa * (n - a) * (n - a) / 4.0);
  const PartialKernel part = partial_kernel(proj, 1.0, "a=0.7", cache);

  const PhaseSpacePoint xbar{0.3, 0.5, -0.4};
  const PhaseSpacePoint x{0.7, std::cos(1.1), std::sin(1.1)};
  Complex want = 0.0;
  for (int n = 0; n < 2; ++n)
    for (int m = 0; m < 2; ++m)
      want += proj(n, n).real() * proj(m, m).real() *
              quantizer_element(n, m, xbar.X, xbar.mu, xbar.nu) *
              dequantizer_element_general(m, n, x.X, x.mu, x.nu);
  CHECK(std::abs(kernel_value(part, xbar, x) - want) <= 1e-13);
}

TEST_CASE("quantizer-dequantizer product as a double ray integral") {
  // 𝒟_01(x̄⃗) 𝒰_10(x⃗) rebuilt from the basis-state ray tables alone: the two
  // X-integrals are done in closed form (they are characteristic-function
  // values), the remaining (μ′, ν′, k) integral by Gauss–Legendre.
  const PhaseSpacePoint xb{0.3, 0.5, -0.4};
  const PhaseSpacePoint x{0.7, std::cos(1.1), std::sin(1.1)};
  const Complex lhs = quantizer_element(0, 1, xb.X, xb.mu, xb.nu) *
                      dequantizer_element_general(1, 0, x.X, x.mu, x.nu);

  const int nq = 80;
  const Quadrature gm = gauss_legendre(nq, xb.mu - 9.0, xb.mu + 9.0);
  const Quadrature gn = gauss_legendre(nq, xb.nu - 9.0, xb.nu + 9.0);
  const Quadrature gk = gauss_legendre(nq, -20.0, 20.0);
  Complex acc = 0.0;
  for (int im = 0; im < nq; ++im) {
    const double mp = gm.nodes[im];
    for (int in = 0; in < nq; ++in) {
      const double np = gn.nodes[in];
      const Complex g00 = std::conj(displacement_element(0, 0, mp - xb.mu, np - xb.nu));
      const double w2 = gm.weights[im] * gn.weights[in];
      const double ph1 = 0.5 * (xb.mu * np - mp * xb.nu);
      for (int ik = 0; ik < nq; ++ik) {
        const double k = gk.nodes[ik];
        const Complex g11 = displacement_element(1, 1, mp + k * x.mu, np + k * x.nu);
        const double ph = k * x.X + ph1 + 0.5 * k * (mp * x.nu - x.mu * np);
        acc += w2 * gk.weights[ik] * g00 * g11 * std::polar(1.0, ph);
      }
    }
  }
  acc *= std::polar(1.0, xb.X) / (kTwoPi * kTwoPi * kTwoPi);
  CHECK(std::abs(acc - lhs) <= 1e-11);
}

TEST_CASE("Gaussian coordinate projection") {
  SUBCASE("projector matrix element against the closed Gaussian overlap") {
    for (double kappa : {0.5, 1.0, 2.0}) {
      const Matrix p = gaussian_position_projector_matrix(kappa, 0.0, HilbertSpec(8));
      // ⟨0|Π_0|0⟩ = (πκ²)^{−1/4} π^{−1/2} √(π / (1 + 1/(2κ²)))
      const double want = std::pow(kPi * kappa * kappa, -0.25) / std::sqrt(kPi) *
                          std::sqrt(kPi / (1.0 + 0.5 / (kappa * kappa)));
      CHECK(std::abs(p(0, 0).real() - want) <= 1e-10);
      CHECK((p - p.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
      CHECK(p.imag().cwiseAbs().maxCoeff() <= 1e-14);
      // odd-parity element vanishes for a centred projector
      CHECK(std::abs(p(0, 1)) <= 1e-13);
    }
  }

  SUBCASE("operator-sum route and coordinate-kernel oracle coincide") {
    Vector v = Vector::Zero(8);
    v(0) = v(1) = v(2) = 1.0;
    v.normalize();
    const DensityMatrix rho = pure_state(v);
    auto cache = make_cache(8);
    for (double kappa : {0.5, 1.0}) {
      const auto proj = GaussianProjectorCV::make(kappa, HilbertSpec(8));
      const KrausSet k = gaussian_position_kraus(proj, HilbertSpec(8));
      const DensityMatrix a = apply_channel_oracle(rho, k);
      const DensityMatrix b = coordinate_decoherence_oracle(rho, kappa);
      INFO("kappa=", kappa);
      // both routes lose the same out-of-space weight, element by element
      CHECK(max_abs_diff(a.matrix(), b.matrix()) <= 1e-10);
      CHECK(std::abs(a.matrix().trace() - b.matrix().trace()) <= 1e-10);

      const ProcessKernel pk = gaussian_position_channel(proj, cache);
      const TomogramGrid out = apply_kernel(tomogram_from_density(rho, *cache), pk);
      const Matrix raw = cache->reconstruct_raw(out.values().cast<Complex>());
      CHECK(max_abs_diff(raw, b.matrix()) <= 1e-9);
    }
  }

  SUBCASE("trace preservation on states inside the truncation") {
    const HilbertSpec spec(16);
    const auto proj = GaussianProjectorCV::make(1.0, spec);
    const KrausSet k = gaussian_position_kraus(proj, spec);
    ChannelApplyInfo info;
    apply_channel_oracle(fock_state(spec, 0), k, &info);
    CHECK(info.trace_drift <= 1e-5);
    apply_channel_oracle(fock_state(spec, 1), k, &info);
    CHECK(info.trace_drift <= 1e-5);
    apply_channel_oracle(coherent_state(spec, Complex(0.9, -0.3)), k, &info);
    CHECK(info.trace_drift <= 1e-5);
  }

  SUBCASE("width must be positive everywhere") {
    CHECK_THROWS_AS(GaussianProjectorCV::make(0.0, HilbertSpec(8)), ValidationError);
    CHECK_THROWS_AS(gaussian_position_projector_matrix(-1.0, 0.0, HilbertSpec(8)),
                    ValidationError);
    CHECK_THROWS_AS(coordinate_decoherence_oracle(fock_state(HilbertSpec(4), 0), 0.0),
                    ValidationError);
  }
}

TEST_CASE("coordinate blur of the tomogram") {
  auto cache = make_cache(8);
  const DensityMatrix f1 = fock_state(HilbertSpec(8), 1);
  const TomogramGrid t1 = tomogram_from_density(f1, *cache);

  SUBCASE("blur equals the coordinate-kernel oracle on an enlarged space") {
    BlurReport rep;
    const TomogramGrid blurred = apply_gaussian_position_blur(t1, 1.0, &rep);
    CHECK_FALSE(rep.warned);
    CHECK(rep.max_sigma == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    // reference keeps the scattered weight by working at dimension 16
    const DensityMatrix ref16 =
        coordinate_decoherence_oracle(fock_state(HilbertSpec(16), 1), 1.0);
    CHECK(max_abs_table(blurred.values(),
                        dense_tomogram_table(ref16.matrix(), t1.grid())) <= 1e-4);
    CHECK(blurred.max_norm_residual() <= 1e-9);
  }

  SUBCASE("fitted deviation matches |nu| / (kappa sqrt(2)) on the ground state") {
    const TomogramGrid t0 =
        tomogram_from_density(fock_state(HilbertSpec(8), 0), *cache);
    for (double kappa : {0.7, 1.0, 2.0}) {
      const TomogramGrid b = apply_gaussian_position_blur(t0, kappa, nullptr);
      const RayGrid& g = t0.grid();
      const int j = 32;  // θ = π/2: the widest blur, σ = 1/(κ√2)
      double m0 = 0.0, m2 = 0.0;
      for (int i = 0; i < g.n_x; ++i) {
        m0 += g.x_weights[i] * b.values()(j, i);
        m2 += g.x_weights[i] * g.x_nodes[i] * g.x_nodes[i] * b.values()(j, i);
      }
      const double fitted = std::sqrt(m2 / m0 - 0.5);
      const double want = 1.0 / (kappa * std::sqrt(2.0));
      INFO("kappa=", kappa);
      CHECK(std::abs(fitted / want - 1.0) <= 0.02);
    }
  }

  SUBCASE("weak blur is flagged and leaves the table in place") {
    BlurReport rep;
    const TomogramGrid b = apply_gaussian_position_blur(t1, 100.0, &rep);
    CHECK(rep.warned);
    CHECK(max_abs_table(b.values(), t1.values()) <= 1e-4);
    const DensityMatrix weak = coordinate_decoherence_oracle(f1, 100.0);
    CHECK(max_abs_diff(weak.matrix(), f1.matrix()) <= 1e-4);
  }

  SUBCASE("the theta = 0 ray never blurs") {
    const TomogramGrid b = apply_gaussian_position_blur(t1, 1.0, nullptr);
    for (int i = 0; i < t1.grid().n_x; i += 16)
      CHECK(b.values()(0, i) == doctest::Approx(t1.values()(0, i)).epsilon(1e-12));
  }
}

TEST_CASE("selective coordinate readings") {
  auto cache = make_cache(8);
  const DensityMatrix rho = coherent_state(HilbertSpec(8), 0.8);
  const TomogramGrid t = tomogram_from_density(rho, *cache);
  const auto proj = GaussianProjectorCV::make(1.0, HilbertSpec(8));

  SUBCASE("outcome masses equal the projector expectation") {
    for (double a : {0.0, 0.8, 2.0}) {
      const PartialKernel part = gaussian_position_partial(proj, a, cache);
      const TomogramGrid out = apply_kernel(t, part);
      CHECK(out.is_density());
      const Matrix p = gaussian_position_projector_matrix(1.0, a, HilbertSpec(8));
      const double mass = std::real((p * rho.matrix() * p).trace());
      INFO("a=", a);
      CHECK(std::abs(out.ray_norm(0) - mass) <= 1e-7);
      CHECK(std::abs(out.ray_norm(32) - mass) <= 1e-7);
    }
  }

  SUBCASE("outcome integral of the selective slices is the full channel") {
    const std::vector<double> w = [&] {
      std::vector<double> v(proj.outcome_grid.size());
      v.front() = 0.5 * (proj.outcome_grid[1] - proj.outcome_grid[0]);
      v.back() = 0.5 * (proj.outcome_grid.end()[-1] - proj.outcome_grid.end()[-2]);
      for (std::size_t i = 1; i + 1 < v.size(); ++i)
        v[i] = 0.5 * (proj.outcome_grid[i + 1] - proj.outcome_grid[i - 1]);
      return v;
    }();
    Eigen::ArrayXXd sum = Eigen::ArrayXXd::Zero(t.grid().n_theta, t.grid().n_x);
    for (std::size_t i = 0; i < proj.outcome_grid.size(); ++i) {
      const PartialKernel part =
          gaussian_position_partial(proj, proj.outcome_grid[i], cache);
      sum += w[i] * apply_kernel(t, part).values();
    }
    const TomogramGrid full = apply_kernel(t, gaussian_position_channel(proj, cache));
    CHECK(max_abs_table(sum, full.values()) <= 1e-10);
  }

  SUBCASE("selective density against the direct double quadrature") {
    // independent route: the X̄-integral of the selective output is done in
    // closed form through the state's characteristic function, leaving a 2-D
    // Gauss–Legendre integral in the shear variable and ν̄
    auto cache16 = make_cache(16);
    const DensityMatrix f1 = fock_state(HilbertSpec(16), 1);
    const TomogramGrid t16 = tomogram_from_density(f1, *cache16);
    const double kappa = 1.0, a = 0.5;
    const auto proj16 = GaussianProjectorCV::make(kappa, HilbertSpec(16));
    const TomogramGrid out =
        apply_kernel(t16, gaussian_position_partial(proj16, a, cache16));

    const RayGrid& g = t16.grid();
    const int j = 32, i = 134;  // θ = π/2, X = 0.375
    const double X = g.x_nodes[i];
    const double mu = std::cos(g.theta_nodes[j]), nu = std::sin(g.theta_nodes[j]);
    const Quadrature gu = gauss_legendre(160, -10.0, 10.0);
    const Quadrature gv = gauss_legendre(160, -10.0, 10.0);
    Complex acc = 0.0;
    for (int iu = 0; iu < 160; ++iu)
      for (int iv = 0; iv < 160; ++iv) {
        const double u = gu.nodes[iu], nb = gv.nodes[iv];
        const double mb = (u + mu * nb) / nu;
        const Complex chi = displacement_element(1, 1, -mb, -nb);
        const Complex phase = std::polar(1.0, -X * nb / nu - u * a / nu);
        const double damp = std::exp(-kappa * kappa * u * u / (4.0 * nu * nu) -
                                     nb * nb / (4.0 * kappa * kappa));
        acc += gu.weights[iu] * gv.weights[iv] * chi * phase * damp;
      }
    acc /= (kTwoPi * kTwoPi * nu * nu);
    CHECK(std::abs(acc.imag()) <= 1e-10);
    CHECK(std::abs(acc.real() - out.values()(j, i)) <= 5e-5);
  }
}

TEST_CASE("qubit channels") {
  auto cache = make_cache(2);
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const DensityMatrix rho_plus = pure_state(plus);
  const TomogramGrid t_plus = tomogram_from_density(rho_plus, *cache);

  SUBCASE("parameter endpoints give the identity channel") {
    for (const QubitChannel ch :
         {QubitChannel::make(QubitChannelKind::phase_flip, 1.0),
          QubitChannel::make(QubitChannelKind::amplitude_damping, 0.0)}) {
      const ProcessKernel pk = qubit_channel(ch, cache);
      CHECK(pk.complete);
      CHECK(pk.identity_weight == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(max_abs_table(apply_kernel(t_plus, pk).values(), t_plus.values()) <= 1e-10);
    }
  }

  SUBCASE("full decay sends everything to the ground tomogram") {
    const ProcessKernel pk =
        qubit_channel(QubitChannel::make(QubitChannelKind::amplitude_damping, 1.0), cache);
    const Eigen::ArrayXXd ground =
        tomogram_from_density(fock_state(HilbertSpec(2), 0), *cache).values();
    CHECK(max_abs_table(apply_kernel(t_plus, pk).values(), ground) <= 1e-10);
    const TomogramGrid t1 = tomogram_from_density(fock_state(HilbertSpec(2), 1), *cache);
    CHECK(max_abs_table(apply_kernel(t1, pk).values(), ground) <= 1e-10);
  }

  SUBCASE("balanced dephasing kills the coherence") {
    const ProcessKernel pk =
        qubit_channel(QubitChannel::make(QubitChannelKind::phase_flip, 0.5), cache);
    const TomogramGrid out = apply_kernel(t_plus, pk);
    Matrix want = Matrix::Zero(2, 2);
    want(0, 0) = want(1, 1) = 0.5;
    CHECK(max_abs_table(out.values(), dense_tomogram_table(want, out.grid())) <= 1e-5);
    ReconstructionReport rep;
    const DensityMatrix rec = density_from_tomogram(out, *cache, &rep);
    CHECK(std::abs(rec.matrix()(0, 1)) <= 1e-5);
  }

  SUBCASE("parameter range is validated") {
    CHECK_THROWS_AS(QubitChannel::make(QubitChannelKind::phase_flip, -0.1),
                    ValidationError);
    CHECK_THROWS_AS(QubitChannel::make(QubitChannelKind::amplitude_damping, 1.1),
                    ValidationError);
  }
}

TEST_CASE("qubit closed forms") {
  auto cache = make_cache(2);
  const PhaseSpacePoint points_bar[] = {{0.4, 1.0, 0.0},
                                        {-0.3, std::cos(0.9), std::sin(0.9)},
                                        {1.1, -0.6, 0.8}};
  const PhaseSpacePoint points_x[] = {{0.2, std::cos(0.3), std::sin(0.3)},
                                      {-0.8, 0.0, 1.0},
                                      {0.6, std::cos(2.1), std::sin(2.1)}};

  SUBCASE("total closed form equals the tensor kernel pointwise") {
    for (const QubitChannel ch :
         {QubitChannel::make(QubitChannelKind::phase_flip, 0.3),
          QubitChannel::make(QubitChannelKind::amplitude_damping, 0.45)}) {
      const ProcessKernel pk = qubit_channel(ch, cache);
      const QubitClosedForm form = qubit_closed_form(ch);
      for (int i = 0; i < 3; ++i) {
        const Complex a = kernel_value(pk, points_bar[i], points_x[i]);
        const Complex b = form.value(points_bar[i], points_x[i]);
        CHECK(std::abs(a - b) <= 1e-12);
      }
    }
  }

  SUBCASE("branch closed forms match the per-operator tensors") {
    const QubitChannel ch = QubitChannel::make(QubitChannelKind::amplitude_damping, 0.45);
    const KrausSet k = qubit_kraus(ch);
    const std::vector<QubitClosedForm> forms = qubit_branch_closed_forms(ch);
    REQUIRE(forms.size() == k.ops.size());
    for (std::size_t b = 0; b < forms.size(); ++b) {
      const PartialKernel part = partial_kernel(k.ops[b], 1.0, k.labels[b], cache);
      for (int i = 0; i < 3; ++i)
        CHECK(std::abs(kernel_value(part, points_bar[i], points_x[i]) -
                       forms[b].value(points_bar[i], points_x[i])) <= 1e-12);
    }
    // the decay branch is the one carrying the excited→ground moment term
    CHECK(k.labels[1] == "decay");
    CHECK(forms[1].delta_weight == 0.0);
    CHECK(forms[1].c[0][1] == doctest::Approx(0.45).epsilon(1e-14));
    CHECK(forms[0].delta_weight == doctest::Approx(std::sqrt(0.55)).epsilon(1e-14));
  }

  SUBCASE("flip-branch moment form against a direct shift integral") {
    // regular part of the flip branch: (1−p)/π · [𝒯_0(x⃗) I_0(x̄⃗) + 𝒯_1(x⃗) I_1(x̄⃗)]
    // with I_m(x̄⃗) = ∫ 𝒯_m(X̄+X′, μ̄, ν̄) e^{−iX′} dX′ done by brute force
    const double p = 0.3;
    const QubitChannel ch = QubitChannel::make(QubitChannelKind::phase_flip, p);
    const KrausSet k = qubit_kraus(ch);
    REQUIRE(k.labels[1] == "flip");
    const PartialKernel flip = partial_kernel(k.ops[1], 1.0, "flip", cache);

    for (int c = 0; c < 3; ++c) {
      const PhaseSpacePoint xb = points_bar[c], x = points_x[c];
      const double rbar = std::hypot(xb.mu, xb.nu);
      Complex moments[2];
      const int nn = 40001;
      const double span = 10.0 * rbar + std::abs(xb.X) + 5.0;
      const double h = 2.0 * span / (nn - 1);
      for (int m = 0; m < 2; ++m) {
        Complex acc = 0.0;
        for (int i = 0; i < nn; ++i) {
          const double xp = -span + i * h;
          const double arg = (xb.X + xp) / rbar;
          const double w = (i == 0 || i == nn - 1) ? 0.5 : 1.0;
          const double psi = hermite_function(m, arg);
          acc += w * h * (psi * psi / rbar) * std::polar(1.0, -xp);
        }
        moments[m] = acc;
      }
      Complex delta = 0.0;
      for (int jj = 0; jj < 2; ++jj)
        for (int kk = 0; kk < 2; ++kk)
          delta += quantizer_element(jj, kk, xb.X, xb.mu, xb.nu) *
                   dequantizer_element_general(kk, jj, x.X, x.mu, x.nu);
      const Complex want =
          (1.0 - p) / kPi *
              (dequantizer_element_general(0, 0, x.X, x.mu, x.nu) * moments[0] +
               dequantizer_element_general(1, 1, x.X, x.mu, x.nu) * moments[1]) -
          (1.0 - p) * delta;
      CHECK(std::abs(kernel_value(flip, xb, x) - want) <= 1e-6);
    }
  }

  SUBCASE("closed-form application matches the kernel route") {
    Vector v(2);
    v << std::sqrt(0.7), Complex(0.3, -0.45) / std::abs(Complex(0.3, -0.45)) *
                             std::sqrt(0.3);
    const DensityMatrix rho = pure_state(v);
    const TomogramGrid t = tomogram_from_density(rho, *cache);
    for (const QubitChannel ch :
         {QubitChannel::make(QubitChannelKind::phase_flip, 0.3),
          QubitChannel::make(QubitChannelKind::amplitude_damping, 0.45)}) {
      const TomogramGrid a = apply_kernel(t, qubit_channel(ch, cache));
      const TomogramGrid b = apply_qubit_closed_form(t, qubit_closed_form(ch), *cache);
      CHECK_FALSE(b.is_density());
      CHECK(max_abs_table(a.values(), b.values()) <= 1e-6);
    }
    // a lone branch does not preserve normalization and is flagged
    const auto branches = qubit_branch_closed_forms(
        QubitChannel::make(QubitChannelKind::amplitude_damping, 0.45));
    CHECK(apply_qubit_closed_form(t, branches[1], *cache).is_density());
  }
}

TEST_CASE("channel registry") {
  auto cache2 = make_cache(2);
  auto cache4 = make_cache(4);

  SUBCASE("identity build") {
    const ChannelBuild b = build_channel("identity", {}, cache4);
    CHECK(b.kernel.complete);
    CHECK(b.kernel.identity_weight == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.kraus.ops.size() == 1);
  }

  SUBCASE("qubit channels by name agree with the typed builders") {
    const ChannelBuild b = build_channel("phase-flip", {{"p", 0.3}}, cache2);
    const ProcessKernel direct =
        qubit_channel(QubitChannel::make(QubitChannelKind::phase_flip, 0.3), cache2);
    CHECK((b.kernel.coefficients - direct.coefficients).cwiseAbs().maxCoeff() <= 1e-14);
    const ChannelBuild d = build_channel("amp-damp", {{"gamma", 0.6}}, cache2);
    CHECK(d.kernel.complete);
  }

  SUBCASE("named projector and pointer builds") {
    CHECK(build_channel("basis-projector", {}, cache4).kernel.complete);
    CHECK(build_channel("gauss-basis", {{"kappa", 1.0}}, cache4).kernel.complete);
    const ChannelBuild vn =
        build_channel("von-neumann", {{"kappa", 1.0}, {"g", 0.8}}, cache4);
    CHECK(vn.kernel.complete);
    CHECK(vn.kraus.continuous);
    const ChannelBuild gp = build_channel("gauss-pos", {{"kappa", 1.0}}, cache4);
    CHECK(gp.kraus.continuous);
    CHECK(!gp.summary.empty());
  }

  SUBCASE("refusals") {
    CHECK_THROWS_AS(build_channel("no-such-channel", {}, cache4), ValidationError);
    CHECK_THROWS_AS(build_channel("phase-flip", {}, cache2), ValidationError);
    CHECK_THROWS_AS(build_channel("phase-flip", {{"p", 0.3}}, cache4), ValidationError);
    CHECK_THROWS_AS(build_channel("identity", {{"p", 0.1}}, cache4), ValidationError);
    CHECK_THROWS_AS(build_channel("gauss-basis", {{"width", 1.0}}, cache4),
                    ValidationError);
    const std::vector<std::string> names = channel_registry();
    CHECK(names.size() == 7);
  }
}
