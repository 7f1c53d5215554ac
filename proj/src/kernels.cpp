#include "tomo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "tomo/quadrature.hpp"

namespace tomo {
namespace {

inline int pair_index(int a, int b, int n) { return a * n + b; }

// c[(j,k),(l,i)] += w · A_ij · A*_lk
void accumulate_tensor(Matrix& c, const Matrix& a, double w) {
  const int n = static_cast<int>(a.rows());
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const int row = pair_index(j, k, n);
      for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
          c(row, pair_index(l, i, n)) += w * a(i, j) * std::conj(a(l, k));
    }
}

// max_{j,k} |Σ_i c[(j,k),(i,i)] − δ_jk|; the trace-preservation defect,
// identical to max|Σ w A†A − 1| by construction.
double tensor_trace_residual(const Matrix& c, int n) {
  double worst = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      Complex s{0.0, 0.0};
      for (int i = 0; i < n; ++i) s += c(pair_index(j, k, n), pair_index(i, i, n));
      if (j == k) s -= 1.0;
      worst = std::max(worst, std::abs(s));
    }
  return worst;
}

// Hilbert–Schmidt overlap with the identity map, normalized to 1 for the
// identity channel: Σ_{i,k} c[(i,k),(k,i)] / N² = Σ_a w_a |Tr A_a|² / N².
double tensor_identity_weight(const Matrix& c, int n) {
  Complex s{0.0, 0.0};
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) s += c(pair_index(i, k, n), pair_index(k, i, n));
  return real_checked(s / static_cast<double>(n * n), 1e-10, "kernel identity weight");
}

// ρ′_il = Σ_jk ρ_jk · c[(j,k),(l,i)]
Matrix contract_moments(const Matrix& c, const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  Vector v(n * n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) v[pair_index(j, k, n)] = m(j, k);
  Vector u = c.transpose() * v;
  Matrix out(n, n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i) out(i, l) = u[pair_index(l, i, n)];
  return out;
}

TomogramGrid apply_tensor(const TomogramGrid& t, const Matrix& c,
                          const QuantizerCache& cache, bool complete,
                          bool generalized, const std::string& provenance) {
  if (generalized)
    throw GeneralizedObjectError(
        "apply_kernel: kernel is generalized; its tensor does not capture the "
        "full action");
  if (t.is_density())
    throw ValidationError(
        "apply_kernel: input is an outcome density; renormalize it to a "
        "tomogram before further processing");
  if (!(t.grid() == cache.grid()))
    throw ValidationError("apply_kernel: tomogram grid does not match the kernel grids");

  Matrix moments = cache.reconstruct_raw(t.values());
  Matrix out = contract_moments(c, moments);
  out = ((out + out.adjoint()) / 2.0).eval();  // tensor preserves Hermiticity; rounding only

  Eigen::ArrayXXcd vals = cache.symbol_values(out);
  const double resid = vals.imag().abs().maxCoeff();
  if (resid > 1e-9)
    throw ConvergenceError(
        "apply_kernel: output table has imaginary residue above the rounding "
        "floor; increase the grid resolution");

  Tolerances tol = default_tolerances();
  tol.tomogram_negativity = -1e-6;  // reconstruction noise floor
  return TomogramGrid::from_values(t.grid(), vals.real(), /*density=*/!complete,
                                   provenance, tol);
}

// χ(μ,ν) = ∫ f(X, μ, ν) e^{iX} dX evaluated from the stored ray table:
// in polar form χ(k e_θ) = Σ_d e^{idθ} Φ_d(k), Φ_d(k) = Σ_X w_X c_d(X) e^{ikX},
// with c_d the θ-harmonics of the table.  Φ_d is precomputed on a uniform
// k-lattice and interpolated cubically; harmonics below the rounding floor
// are pruned (diagonal families keep only d = 0, which is what makes the
// completeness functional cheap for projector-type sets).
struct HarmonicTables {
  std::vector<int> dvals;
  std::vector<Eigen::VectorXcd> phi;
  double k_lo = 0.0, dk = 0.0;
  int n_k = 0;

  Complex chi(double mu, double nu) const {
    const double r = std::hypot(mu, nu);
    const double th = (r > 0.0) ? std::atan2(nu, mu) : 0.0;
    const double k = r;
    const double tpos = (k - k_lo) / dk;
    const int i1 = static_cast<int>(std::floor(tpos));
    if (i1 < 1 || i1 + 2 >= n_k) return {0.0, 0.0};
    const double f = tpos - i1;
    const double w0 = -0.5 * f * (1.0 - f) * (1.0 - f);
    const double w1 = 1.0 + f * f * (1.5 * f - 2.5);
    const double w2 = f * (0.5 + f * (2.0 - 1.5 * f));
    const double w3 = 0.5 * f * f * (f - 1.0);
    Complex sum{0.0, 0.0};
    for (std::size_t a = 0; a < dvals.size(); ++a) {
      const Eigen::VectorXcd& row = phi[a];
      const Complex v = w0 * row[i1 - 1] + w1 * row[i1] + w2 * row[i1 + 1] + w3 * row[i1 + 2];
      sum += std::polar(1.0, dvals[a] * th) * v;
    }
    return sum;
  }
};

HarmonicTables build_harmonic_tables(const Eigen::ArrayXXcd& vals, const RayGrid& g,
                                     int dim, double k_edge, double dk) {
  const int nth = g.n_theta, nx = g.n_x;
  HarmonicTables t;
  t.dk = dk;
  const int half = static_cast<int>(std::ceil(k_edge / dk));
  t.n_k = 2 * half + 1;
  t.k_lo = -dk * half;

  const double floor_abs = 1e-14 * std::max(1.0, vals.abs().maxCoeff());
  for (int d = -(dim - 1); d <= dim - 1; ++d) {
    // full-circle analysis: the other half of the circle is the stored half
    // with X reflected, so odd and even harmonics stay orthogonal
    const double refl = (d % 2 == 0) ? 1.0 : -1.0;
    Eigen::VectorXcd cd = Eigen::VectorXcd::Zero(nx);
    for (int j = 0; j < nth; ++j) {
      const Complex ph = std::polar(0.5 / nth, -d * g.theta_nodes[j]);
      for (int i = 0; i < nx; ++i)
        cd[i] += ph * (vals(j, i) + refl * vals(j, nx - 1 - i));
    }
    if (cd.cwiseAbs().maxCoeff() <= floor_abs) continue;
    Eigen::VectorXcd row(t.n_k);
    for (int m = 0; m < t.n_k; ++m) {
      const double km = t.k_lo + m * dk;
      Complex s{0.0, 0.0};
      for (int i = 0; i < nx; ++i)
        s += g.x_weights[i] * cd[i] * std::polar(1.0, km * g.x_nodes[i]);
      row[m] = s;
    }
    t.dvals.push_back(d);
    t.phi.push_back(std::move(row));
  }
  return t;
}

// (1/2π)² ∫dμ dν Σ_a w_a χ_a(μ,ν) χ_a*(μ+μ̄, ν+ν̄) e^{i(μ̄ν−μν̄)/2},
// integrated against a normalized Gaussian of width `sigma` in (μ̄, ν̄):
// outer integral in polar form (the stored rays at both radial signs, a
// Gauss–Legendre radial rule), inner smearing by a Gauss–Hermite product rule.
double smeared_functional(const std::vector<HarmonicTables>& tabs,
                          const std::vector<double>& w, const RayGrid& g,
                          double sigma, double k_out, int n_r) {
  const Quadrature rad = gauss_legendre(n_r, 0.0, k_out);
  const Quadrature gh = gauss_hermite(13);
  const double s2 = std::sqrt(2.0) * sigma;
  const std::size_t na = tabs.size();
  const int nth = g.n_theta;

  std::vector<Complex> acc(nth, Complex{0.0, 0.0});
  parallel_for(nth, [&](int j) {
    const double cth = std::cos(g.theta_nodes[j]);
    const double sth = std::sin(g.theta_nodes[j]);
    std::vector<Complex> chi0(na);
    Complex a_j{0.0, 0.0};
    for (int s = 0; s < 2; ++s) {
      const double sign = s ? -1.0 : 1.0;
      for (int ir = 0; ir < n_r; ++ir) {
        const double k = rad.nodes[ir];
        const double wo = g.theta_weight * rad.weights[ir] * k;
        const double mu = sign * k * cth, nu = sign * k * sth;
        for (std::size_t a = 0; a < na; ++a) chi0[a] = tabs[a].chi(mu, nu);
        for (std::size_t u = 0; u < gh.nodes.size(); ++u) {
          const double mub = s2 * gh.nodes[u];
          for (std::size_t v = 0; v < gh.nodes.size(); ++v) {
            const double nub = s2 * gh.nodes[v];
            const double wi = gh.weights[u] * gh.weights[v] / kPi;
            const Complex ph = std::polar(1.0, 0.5 * (mub * nu - mu * nub));
            Complex gsum{0.0, 0.0};
            for (std::size_t a = 0; a < na; ++a)
              gsum += w[a] * chi0[a] * std::conj(tabs[a].chi(mu + mub, nu + nub));
            a_j += (wo * wi) * ph * gsum;
          }
        }
      }
    }
    acc[j] = a_j;
  });

  Complex total{0.0, 0.0};
  for (const Complex& c : acc) total += c;
  total /= kTwoPi * kTwoPi;
  // real only after the shift integration, so the imaginary part carries the
  // same quadrature error as the value itself; trip well below the decision
  // threshold but above the error floor of the outer rule
  if (std::abs(total.imag()) > 1e-5 * (1.0 + std::abs(total.real())))
    throw ConvergenceError(
        "completeness_check: smeared functional has imaginary residue " +
        format_sci(total.imag()) + " against real part " +
        format_sci(total.real()) + "; the outer quadrature did not converge");
  return total.real();
}

}  // namespace

std::vector<SymbolGrid> kraus_symbols(const KrausSet& k, const QuantizerCache& cache) {
  if (k.dim() != cache.spec().dim)
    throw ValidationError("kraus_symbols: operator dimension does not match the cache");
  std::vector<SymbolGrid> out;
  out.reserve(k.ops.size());
  for (std::size_t a = 0; a < k.ops.size(); ++a)
    out.push_back(symbol_from_operator(k.ops[a], cache, /*generalized=*/false, k.labels[a]));
  return out;
}

PartialKernel partial_kernel(const Matrix& a, double weight, std::string label,
                             std::shared_ptr<const QuantizerCache> cache) {
  if (!cache) throw ValidationError("partial_kernel: missing grid cache");
  const int n = cache->spec().dim;
  if (a.rows() != n || a.cols() != n)
    throw ValidationError("partial_kernel: operator dimension does not match the cache");
  if (!(weight > 0.0) || !std::isfinite(weight))
    throw ValidationError("partial_kernel: weight must be positive and finite");

  PartialKernel k;
  k.spec = cache->spec();
  k.label = std::move(label);
  k.weight = weight;
  k.cache = std::move(cache);
  k.coefficients = Matrix::Zero(n * n, n * n);
  accumulate_tensor(k.coefficients, a, weight);
  k.completeness_residual = tensor_trace_residual(k.coefficients, n);
  k.complete = k.completeness_residual <= default_tolerances().kraus_completeness;
  k.identity_weight = tensor_identity_weight(k.coefficients, n);
  return k;
}

ProcessKernel total_kernel(const KrausSet& set, std::shared_ptr<const QuantizerCache> cache) {
  if (!cache) throw ValidationError("total_kernel: missing grid cache");
  const int n = cache->spec().dim;
  if (set.dim() != n)
    throw ValidationError("total_kernel: Kraus dimension does not match the cache");

  ProcessKernel k;
  k.spec = cache->spec();
  k.labels = set.labels;
  k.cache = std::move(cache);
  k.coefficients = Matrix::Zero(n * n, n * n);
  for (std::size_t a = 0; a < set.ops.size(); ++a)
    accumulate_tensor(k.coefficients, set.ops[a], set.weights[a]);
  k.completeness_residual = tensor_trace_residual(k.coefficients, n);
  k.complete = set.complete;  // the family's build-time tolerance is authoritative
  k.identity_weight = tensor_identity_weight(k.coefficients, n);
  return k;
}

TomogramGrid apply_kernel(const TomogramGrid& t, const ProcessKernel& k) {
  return apply_tensor(t, k.coefficients, *k.cache, k.complete, k.generalized,
                      "kernel-output");
}

TomogramGrid apply_kernel(const TomogramGrid& t, const PartialKernel& k) {
  return apply_tensor(t, k.coefficients, *k.cache, k.complete, k.generalized,
                      "kernel-output:" + k.label);
}

TomogramGrid apply_kernel_quadrature(const TomogramGrid& t, const ProcessKernel& k,
                                     double k_cut, int n_radial) {
  if (k.generalized)
    throw GeneralizedObjectError("apply_kernel_quadrature: kernel is generalized");
  if (t.is_density())
    throw ValidationError("apply_kernel_quadrature: input is an outcome density");
  const RayGrid& g = t.grid();
  if (g.n_x > 65 || g.n_theta > 16)
    throw ValidationError(
        "apply_kernel_quadrature: grid exceeds the budget guard (n_x <= 65, "
        "n_theta <= 16); use apply_kernel for production grids");
  if (!(k_cut > 0.0) || !std::isfinite(k_cut))
    throw ValidationError("apply_kernel_quadrature: radial cutoff must be positive");
  if (n_radial < 5 || n_radial % 2 == 0)
    throw ValidationError("apply_kernel_quadrature: radial rule needs an odd node count >= 5");

  const int n = k.spec.dim;
  const double h = k_cut / (n_radial - 1);
  const std::vector<double> wk = simpson_weights(n_radial, h);
  const Eigen::ArrayXXd& tv = t.values();

  // moments m_jk = ∫ T 𝒟_jk = (1/2π) ∫dθ ∫dk |k| F(θ,k) ⟨j|e^{−ikq̂_θ}|k⟩,
  // everything evaluated directly (no shared tables with the structured route)
  std::vector<Matrix> per_ray(g.n_theta);
  parallel_for(g.n_theta, [&](int j) {
    Matrix mj = Matrix::Zero(n, n);
    const double cth = std::cos(g.theta_nodes[j]);
    const double sth = std::sin(g.theta_nodes[j]);
    for (int s = 0; s < 2; ++s) {
      const double sign = s ? -1.0 : 1.0;
      for (int q = 0; q < n_radial; ++q) {
        const double kq = q * h;
        if (kq == 0.0) continue;  // |k| weight vanishes
        Complex f{0.0, 0.0};
        for (int i = 0; i < g.n_x; ++i)
          f += g.x_weights[i] * tv(j, i) * std::polar(1.0, sign * kq * g.x_nodes[i]);
        const Matrix gm = displacement_matrix(n, sign * kq * cth, sign * kq * sth);
        mj += (g.theta_weight * wk[q] * kq / kTwoPi) * (f * gm);
      }
    }
    per_ray[j] = std::move(mj);
  });
  Matrix moments = Matrix::Zero(n, n);
  for (const Matrix& mj : per_ray) moments += mj;

  Matrix out = contract_moments(k.coefficients, moments);
  out = ((out + out.adjoint()) / 2.0).eval();

  Eigen::ArrayXXd vals(g.n_theta, g.n_x);
  for (int i = 0; i < g.n_x; ++i) {
    const std::vector<double> psi = hermite_function_column(n - 1, g.x_nodes[i]);
    for (int j = 0; j < g.n_theta; ++j) {
      Complex s{0.0, 0.0};
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          s += out(a, b) * psi[b] * psi[a] * std::polar(1.0, (b - a) * g.theta_nodes[j]);
      vals(j, i) = s.real();
    }
  }

  Tolerances tol = default_tolerances();
  tol.tomogram_negativity = -5e-3;  // radial-rule quadrature floor
  return TomogramGrid::from_values(g, vals, /*density=*/true,
                                   "kernel-quadrature-output", tol);
}

namespace {

Complex kernel_value_impl(const Matrix& c, int n, bool generalized,
                          PhaseSpacePoint xb, PhaseSpacePoint x) {
  if (generalized)
    throw GeneralizedObjectError(
        "kernel grid view: kernel is generalized; only the coefficient tensor "
        "is meaningful");
  const double r = std::hypot(x.mu, x.nu);
  if (!(r > 0.0))
    throw ValidationError("kernel_value: (mu, nu) = (0, 0) does not define a ray");
  double xu = x.X / r;
  double th = std::atan2(x.nu, x.mu);
  if (th < 0.0) {
    th += kPi;
    xu = -xu;
  }
  if (th >= kPi) {
    th -= kPi;
    xu = -xu;
  }
  const std::vector<double> psi = hermite_function_column(n - 1, xu);

  const Matrix gm = displacement_matrix(n, xb.mu, xb.nu);
  const Complex qpref = std::exp(kI * xb.X) / kTwoPi;

  Vector dq(n * n), du(n * n);
  for (int j = 0; j < n; ++j)
    for (int kk = 0; kk < n; ++kk) dq[pair_index(j, kk, n)] = qpref * gm(j, kk);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      du[pair_index(l, i, n)] =
          psi[l] * psi[i] * std::polar(1.0 / r, (l - i) * th);
  return (dq.transpose() * (c * du))(0);
}

}  // namespace

Complex kernel_value(const ProcessKernel& k, PhaseSpacePoint xbar, PhaseSpacePoint x) {
  return kernel_value_impl(k.coefficients, k.spec.dim, k.generalized, xbar, x);
}

Complex kernel_value(const PartialKernel& k, PhaseSpacePoint xbar, PhaseSpacePoint x) {
  return kernel_value_impl(k.coefficients, k.spec.dim, k.generalized, xbar, x);
}

CompletenessReport completeness_check(const std::vector<SymbolGrid>& symbols,
                                      const std::vector<double>& weights,
                                      const QuantizerCache& cache, double width,
                                      double tol) {
  if (symbols.empty()) throw ValidationError("completeness_check: empty symbol family");
  if (symbols.size() != weights.size())
    throw ValidationError("completeness_check: one weight per symbol required");
  if (!(width > 0.0) || !std::isfinite(width))
    throw ValidationError("completeness_check: test-function width must be positive");
  for (const SymbolGrid& f : symbols) {
    if (f.generalized())
      throw GeneralizedObjectError(
          "completeness_check consumes pointwise symbol tables; regularize "
          "generalized symbols first");
    if (!(f.grid() == cache.grid()))
      throw ValidationError("completeness_check: symbol grid does not match the cache");
  }
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w))
      throw ValidationError("completeness_check: weights must be positive and finite");

  const int n = cache.spec().dim;
  const double k_out = 8.0, dk = 0.02;
  const int n_r = 64;
  const Quadrature gh = gauss_hermite(13);
  double max_node = 0.0;
  for (double x : gh.nodes) max_node = std::max(max_node, std::abs(x));
  const double k_edge = k_out + std::sqrt(2.0) * width * max_node + 5 * dk;

  std::vector<HarmonicTables> tabs;
  tabs.reserve(symbols.size());
  for (const SymbolGrid& f : symbols)
    tabs.push_back(build_harmonic_tables(f.values(), cache.grid(), n, k_edge, dk));

  CompletenessReport rep;
  rep.smeared_value = smeared_functional(tabs, weights, cache.grid(), width, k_out, n_r);

  const SymbolGrid fid = symbol_from_operator(Matrix::Identity(n, n), cache);
  const std::vector<HarmonicTables> tid = {
      build_harmonic_tables(fid.values(), cache.grid(), n, k_edge, dk)};
  rep.smeared_reference = smeared_functional(tid, {1.0}, cache.grid(), width, k_out, n_r);
  rep.smeared_residual =
      std::abs(rep.smeared_value - rep.smeared_reference) / std::abs(rep.smeared_reference);

  rep.scalar_value = 0.0;
  for (std::size_t a = 0; a < symbols.size(); ++a)
    rep.scalar_value += weights[a] * real_checked(scalar_product(symbols[a], symbols[a],
                                                                 cache.radial()),
                                                  1e-7, "completeness scalar term");
  rep.scalar_target = n;
  rep.scalar_residual = std::abs(rep.scalar_value - rep.scalar_target) / rep.scalar_target;

  rep.complete = rep.smeared_residual <= tol && rep.scalar_residual <= tol;
  return rep;
}

TripleTraceValue triple_trace(PhaseSpacePoint x1, PhaseSpacePoint xbar,
                              PhaseSpacePoint x2, PhaseSpacePoint x) {
  TripleTraceValue v;
  const double mu_sum = xbar.mu + x1.mu + x2.mu;
  const double nu_sum = xbar.nu + x1.nu + x2.nu;
  v.c_mubar = x.nu;
  v.c_nubar = -x.mu;
  v.c_mu1 = x.nu;
  v.c_nu1 = -x.mu;
  v.c_mu2 = x.nu;
  v.c_nu2 = -x.mu;
  v.c_mu = -nu_sum;
  v.c_nu = mu_sum;
  v.constraint_value = mu_sum * x.nu - nu_sum * x.mu;

  double phase = xbar.X + x1.X + x2.X;
  if (x.X != 0.0) {
    if (x.nu == 0.0)
      throw ValidationError(
          "triple_trace: the X-dependent phase needs nu != 0 unless X = 0");
    phase -= x.X * nu_sum / x.nu;
  }
  phase += 0.5 * (xbar.mu * (x1.nu - x2.nu) - (x1.mu - x2.mu) * xbar.nu -
                  x1.mu * x2.nu + x2.mu * x1.nu);
  v.prefactor = std::polar(1.0 / (kTwoPi * kTwoPi * kTwoPi), phase);
  return v;
}

Complex DequantizerSymbolForm::evaluate(double, double, double) const {
  throw GeneralizedObjectError(
      "dequantizer symbol is distribution-valued; use x_integrated_phase, "
      "smeared_over_directions or pair_with");
}

Complex DequantizerSymbolForm::x_integrated_phase(double mu, double nu, double tol) const {
  const double rbar = std::hypot(mubar, nubar);
  const double r = std::hypot(mu, nu);
  if (!(rbar > 0.0) || !(r > 0.0))
    throw ValidationError("x_integrated_phase: (mu, nu) = (0, 0) does not define a ray");
  if (std::abs(ray_constraint(mu, nu)) > tol * rbar * r) return {0.0, 0.0};
  // on the surface μ/μ̄ = ν/ν̄; pick the better-conditioned chart
  if (std::abs(mubar) >= std::abs(nubar)) return std::exp(-kI * (Xbar * mu / mubar));
  return std::exp(-kI * (Xbar * nu / nubar));
}

Complex DequantizerSymbolForm::smeared_over_directions(double theta0,
                                                       double sigma_theta) const {
  if (!(sigma_theta > 0.0) || !std::isfinite(sigma_theta))
    throw ValidationError("smeared_over_directions: window width must be positive");
  double k = std::hypot(mubar, nubar);
  if (!(k > 0.0))
    throw ValidationError("smeared_over_directions: (mu, nu) = (0, 0) does not define a ray");
  double th = std::atan2(nubar, mubar);
  if (th < 0.0) {
    th += kPi;
    k = -k;
  }
  if (th >= kPi) {
    th -= kPi;
    k = -k;
  }
  // δ(μ̄ sinθ − ν̄ cosθ) over ray directions has the single root θ = θ̄ with
  // Jacobian |k̄|; the windowed integral is g(θ̄)·e^{−iX̄/k̄}/|k̄|.
  const double d = std::remainder(th - theta0, kPi);
  const double g = std::exp(-0.5 * d * d / (sigma_theta * sigma_theta)) /
                   (std::sqrt(kTwoPi) * sigma_theta);
  return g * std::exp(-kI * (Xbar / k)) / std::abs(k);
}

Complex DequantizerSymbolForm::pair_with(const SymbolGrid& fb) const {
  if (fb.generalized())
    throw GeneralizedObjectError("pair_with: pairing two generalized symbols is undefined");
  return fb.evaluate(Xbar, mubar, nubar);
}

DequantizerSymbolForm postprocess_dequantizer_symbol(double Xbar, double mubar,
                                                     double nubar) {
  if (mubar == 0.0 && nubar == 0.0)
    throw ValidationError(
        "postprocess_dequantizer_symbol: (mu, nu) = (0, 0) does not define a ray");
  return DequantizerSymbolForm{Xbar, mubar, nubar};
}

}  // namespace tomo
