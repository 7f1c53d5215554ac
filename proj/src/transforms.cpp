#include "tomo/transforms.hpp"

#include <cmath>

namespace tomo {

Complex dequantizer_element(int n, int m, double X, double theta) {
  if (n < 0 || m < 0) throw ValidationError("dequantizer_element: negative index");
  const double amp = hermite_function(n, X) * hermite_function(m, X);
  return amp * std::exp(kI * (static_cast<double>(n - m) * theta));
}

Complex dequantizer_element_general(int n, int m, double X, double mu, double nu) {
  const double r = std::hypot(mu, nu);
  if (!(r > 0.0))
    throw ValidationError("dequantizer_element_general: (mu, nu) = (0, 0) does not define a ray");
  double x = X / r;
  double th = std::atan2(nu, mu);
  if (th < 0.0) {  // parity fold: 𝒰(−x⃗) = 𝒰(x⃗) element-wise on (X, θ)
    th += kPi;
    x = -x;
  }
  if (th >= kPi) {
    th -= kPi;
    x = -x;
  }
  return dequantizer_element(n, m, x, th) / r;
}

Complex quantizer_element(int n, int m, double X, double mu, double nu) {
  return std::exp(kI * X) / kTwoPi * displacement_element(n, m, mu, nu);
}

QuantizerCache QuantizerCache::make(HilbertSpec spec, RayGrid grid, RadialRule radial) {
  const int N = spec.dim;
  if (grid.n_theta < 2 * N)
    throw ValidationError(
        "QuantizerCache: n_theta below 2*dim cannot resolve all coherence "
        "frequencies");
  if (grid.x_max < std::sqrt(2.0 * N))
    throw ValidationError(
        "QuantizerCache: x_max below the classical turning point of the "
        "highest retained level");
  QuantizerCache c;
  c.spec_ = spec;
  c.grid_ = std::move(grid);
  c.radial_ = std::move(radial);

  c.psi_.resize(N, c.grid_.n_x);
  for (int i = 0; i < c.grid_.n_x; ++i) {
    std::vector<double> col = hermite_function_column(N - 1, c.grid_.x_nodes[i]);
    for (int n = 0; n < N; ++n) c.psi_(n, i) = col[n];
  }

  c.g_.resize(c.radial_.n_half);
  parallel_for(c.radial_.n_half, [&](int ik) {
    c.g_[ik] = displacement_matrix(N, c.radial_.k_nodes[ik], 0.0);
  });

  c.theta_phase_.resize(2 * N - 1, c.grid_.n_theta);
  for (int d = -(N - 1); d <= N - 1; ++d)
    for (int j = 0; j < c.grid_.n_theta; ++j)
      c.theta_phase_(d + N - 1, j) =
          std::exp(kI * (static_cast<double>(d) * c.grid_.theta_nodes[j]));

  c.x_phase_.resize(c.radial_.n_half, c.grid_.n_x);
  for (int ik = 0; ik < c.radial_.n_half; ++ik)
    for (int i = 0; i < c.grid_.n_x; ++i)
      c.x_phase_(ik, i) = std::exp(kI * (c.radial_.k_nodes[ik] * c.grid_.x_nodes[i]));
  return c;
}

Eigen::ArrayXXcd QuantizerCache::symbol_values(const Matrix& op) const {
  const int N = spec_.dim;
  if (op.rows() != N || op.cols() != N)
    throw ValidationError("symbol_values: operator dimension mismatch");
  // C_d(X) = Σ_m op(m, m+d) ψ_{m+d}(X) ψ_m(X) for d = n − m
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(2 * N - 1, grid_.n_x);
  for (int d = -(N - 1); d <= N - 1; ++d) {
    const int r = d + N - 1;
    const int m_lo = std::max(0, -d), m_hi = N - 1 - std::max(0, d);
    for (int m = m_lo; m <= m_hi; ++m) {
      const Complex a = op(m, m + d);
      if (a == Complex(0.0)) continue;
      for (int i = 0; i < grid_.n_x; ++i)
        C(r, i) += a * (psi_(m + d, i) * psi_(m, i));
    }
  }
  // values = Σ_d e^{i d θ} C_d(X): one gemm
  Eigen::MatrixXcd out = theta_phase_.transpose() * C;
  return out.array();
}

Eigen::ArrayXXcd QuantizerCache::ray_fourier_table(const Eigen::ArrayXXcd& values,
                                                   int sign) const {
  if (values.rows() != grid_.n_theta || values.cols() != grid_.n_x)
    throw ValidationError("ray_fourier_table: value table does not match the grid");
  Eigen::MatrixXcd scaled(grid_.n_theta, grid_.n_x);
  for (int i = 0; i < grid_.n_x; ++i)
    scaled.col(i) = values.col(i).matrix() * grid_.x_weights[i];
  Eigen::MatrixXcd f = (sign > 0) ? (scaled * x_phase_.transpose()).eval()
                                  : (scaled * x_phase_.adjoint()).eval();
  return f.array();
}

Matrix QuantizerCache::reconstruct_raw(const Eigen::ArrayXXcd& values) const {
  const int N = spec_.dim;
  Eigen::ArrayXXcd Fp = ray_fourier_table(values, +1);
  Eigen::ArrayXXcd Fm = ray_fourier_table(values, -1);
  // Φ^s_d(k) = Σ_j w_θ F^s(θ_j, k) e^{i d θ_j}
  Eigen::MatrixXcd Phip = theta_phase_ * Fp.matrix() * grid_.theta_weight;
  Eigen::MatrixXcd Phim = theta_phase_ * Fm.matrix() * grid_.theta_weight;
  Matrix rho = Matrix::Zero(N, N);
  for (int ik = 0; ik < radial_.n_half; ++ik) {
    const double w = radial_.weights_windowed[ik] * radial_.k_nodes[ik] / kTwoPi;
    const Matrix& g = g_[ik];
    for (int n = 0; n < N; ++n)
      for (int m = 0; m < N; ++m) {
        const int r = (n - m) + N - 1;
        // +k branch uses g directly; −k branch uses ⟨n|e^{+ikq̂}|m⟩ = conj(g_mn)
        rho(n, m) += w * (g(n, m) * Phip(r, ik) + std::conj(g(m, n)) * Phim(r, ik));
      }
  }
  return rho;
}

Matrix QuantizerCache::reconstruct_raw(const Eigen::ArrayXXd& values) const {
  return reconstruct_raw(values.cast<Complex>().eval());
}

TomogramGrid tomogram_from_density(const DensityMatrix& rho, const QuantizerCache& cache) {
  if (rho.dim() != cache.spec().dim)
    throw ValidationError("tomogram_from_density: dimension mismatch");
  const Tolerances& tol = default_tolerances();
  Eigen::ArrayXXcd v = cache.symbol_values(rho.matrix());
  const double im = v.imag().abs().maxCoeff();
  if (im > tol.tomogram_reality)
    throw ValidationError(
        "tomogram_from_density: imaginary residue above the reality tolerance");
  Eigen::ArrayXXd rv = v.real();
  double max_norm = 0.0;
  for (int j = 0; j < cache.grid().n_theta; ++j) {
    double s = 0.0;
    for (int i = 0; i < cache.grid().n_x; ++i)
      s += cache.grid().x_weights[i] * rv(j, i);
    max_norm = std::max(max_norm, std::abs(s - 1.0));
  }
  if (max_norm > tol.norm_error)
    throw ConvergenceError(
        "tomogram_from_density: per-ray normalization drift above 1e-4; "
        "enlarge x_max or refine n_x");
  return TomogramGrid::from_values(cache.grid(), std::move(rv), false,
                                   "tomogram_from_density", tol);
}

DensityMatrix density_from_tomogram(const TomogramGrid& t, const QuantizerCache& cache,
                                    ReconstructionReport* report) {
  if (!(t.grid() == cache.grid()))
    throw ValidationError("density_from_tomogram: grid mismatch");
  if (t.is_density())
    throw ValidationError(
        "density_from_tomogram: input is an unnormalized outcome density; "
        "normalize by its outcome mass first");
  const Tolerances& tol = default_tolerances();
  Matrix raw = cache.reconstruct_raw(t.values());
  const double asym = (raw - raw.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol.reconstruction_asymmetry)
    throw ConvergenceError(
        "density_from_tomogram: pre-Hermitization asymmetry above 1e-3; "
        "increase k_max, radial nodes, or n_x");
  Matrix herm = 0.5 * (raw + raw.adjoint());
  const double tr = herm.trace().real();
  if (!(tr > 0.1))
    throw ConvergenceError("density_from_tomogram: reconstructed trace collapsed");
  if (report) {
    report->asymmetry = asym;
    report->trace_correction = std::abs(tr - 1.0);
  }
  Tolerances dtol = tol;
  dtol.psd_floor = -1e-6;  // quadrature noise floor for reconstructed states
  dtol.trace = 1e-9;
  dtol.hermiticity = 1e-14;  // exact after symmetrization
  // For real ray data the ±k-symmetric inverse map is structurally Hermitian,
  // so data inconsistent with any state surfaces as a PSD violation here, not
  // as asymmetry above.  Report it as a convergence/consistency failure.
  try {
    return DensityMatrix(herm / tr, dtol);
  } catch (const ValidationError& e) {
    throw ConvergenceError(std::string("density_from_tomogram: ray data is not "
                                       "consistent with a state at this "
                                       "truncation: ") +
                           e.what());
  }
}

SymbolGrid symbol_from_operator(const Matrix& op, const QuantizerCache& cache,
                                bool generalized, std::string tag) {
  if (op.rows() != cache.spec().dim || op.cols() != cache.spec().dim)
    throw ValidationError("symbol_from_operator: dimension mismatch");
  return SymbolGrid::from_values(cache.grid(), cache.symbol_values(op), generalized,
                                 tag.empty() ? "symbol_from_operator" : std::move(tag));
}

Matrix operator_from_symbol(const SymbolGrid& f, const QuantizerCache& cache) {
  if (!(f.grid() == cache.grid()))
    throw ValidationError("operator_from_symbol: grid mismatch");
  if (f.generalized())
    throw GeneralizedObjectError(
        "operator_from_symbol: the stored table of a generalized symbol is "
        "only its regular part");
  return cache.reconstruct_raw(f.values());
}

SymbolGrid star_product(const SymbolGrid& a, const SymbolGrid& b,
                        const QuantizerCache& cache) {
  if (!(a.grid() == b.grid()) || !(a.grid() == cache.grid()))
    throw ValidationError("star_product: grid mismatch");
  if (a.generalized() || b.generalized())
    throw GeneralizedObjectError("star_product: needs regular symbols");
  Matrix opa = cache.reconstruct_raw(a.values());
  Matrix opb = cache.reconstruct_raw(b.values());
  return symbol_from_operator(opa * opb, cache, false, "star_product");
}

namespace {

// (1/2π) ∫ dθ ∫ dk |k| χ_A*(k e_θ) χ_B(k e_θ) on the stored grids, with
// χ(k e_θ) = Σ_X w_X f(X, θ) e^{−ikX}.  Raw (un-windowed) radial weights.
Complex pairing(const Eigen::ArrayXXcd& a, const Eigen::ArrayXXcd& b,
                const RayGrid& grid, const RadialRule& radial) {
  const int nth = grid.n_theta, nx = grid.n_x, nk = radial.n_half;
  std::vector<Complex> row_acc(nth, Complex(0.0));
  parallel_for(nth, [&](int j) {
    Complex acc = 0.0;
    for (int ik = 0; ik < nk; ++ik) {
      const double k = radial.k_nodes[ik];
      const double w = radial.weights_raw[ik] * k;
      Complex ca_p = 0.0, cb_p = 0.0, ca_m = 0.0, cb_m = 0.0;
      for (int i = 0; i < nx; ++i) {
        const Complex ph = std::exp(Complex(0.0, -k * grid.x_nodes[i]));
        const double wx = grid.x_weights[i];
        ca_p += wx * a(j, i) * ph;
        cb_p += wx * b(j, i) * ph;
        ca_m += wx * a(j, i) * std::conj(ph);
        cb_m += wx * b(j, i) * std::conj(ph);
      }
      acc += w * (std::conj(ca_p) * cb_p + std::conj(ca_m) * cb_m);
    }
    row_acc[j] = acc;
  });
  Complex total = 0.0;
  for (int j = 0; j < nth; ++j) total += row_acc[j];
  return total * grid.theta_weight / kTwoPi;
}

}  // namespace

Complex scalar_product(const SymbolGrid& a, const SymbolGrid& b,
                       const RadialRule& radial) {
  if (!(a.grid() == b.grid())) throw ValidationError("scalar_product: grid mismatch");
  if (a.generalized() || b.generalized())
    throw GeneralizedObjectError(
        "scalar_product: diverges for generalized symbols; pair against a "
        "regular symbol analytically instead");
  return pairing(a.values(), b.values(), a.grid(), radial);
}

Complex scalar_product(const TomogramGrid& a, const TomogramGrid& b,
                       const RadialRule& radial) {
  if (!(a.grid() == b.grid())) throw ValidationError("scalar_product: grid mismatch");
  return pairing(a.values().cast<Complex>(), b.values().cast<Complex>(), a.grid(),
                 radial);
}

std::vector<double> decomposition_coefficients(const TomogramGrid& t,
                                               const std::vector<TomogramGrid>& basis,
                                               const RadialRule& radial) {
  std::vector<double> alpha;
  alpha.reserve(basis.size());
  for (const TomogramGrid& bk : basis)
    alpha.push_back(real_checked(scalar_product(t, bk, radial), 1e-8,
                                 "decomposition coefficient"));
  return alpha;
}

}  // namespace tomo
