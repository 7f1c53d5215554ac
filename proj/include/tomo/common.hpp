#pragma once
// Shared scalar types, error taxonomy and small utilities.  Everything is
// double precision; ħ = 1 and the oscillator mass/frequency are 1, so the
// quadratures are q = (a + a†)/√2, p = (a − a†)/(i√2).

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace tomo {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr Complex kI{0.0, 1.0};

// Bad parameters or violated data invariants (CLI exit code 3).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A quadrature / reconstruction did not converge on the requested grids
// (CLI exit code 4).  The message says which knob to increase.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Pointwise use of a distribution-valued (generalized) symbol or kernel.
class GeneralizedObjectError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Central tolerance block.  Every verification report prints these, so a
// non-default run is visible in its output.
struct Tolerances {
  double hermiticity = 1e-12;         // operator inputs
  double trace = 1e-12;               // density-matrix trace
  double psd_floor = -1e-10;          // eigenvalue floor for density matrices
  double kraus_completeness = 1e-10;  // analytic Kraus sets
  double kraus_completeness_quadrature = 1e-4;  // discretized outcome families
  double tomogram_reality = 1e-10;    // |Im T| before dropping
  double tomogram_negativity = -1e-8; // quadrature round-off floor
  double norm_warn = 1e-6;            // per-ray normalization drift: warn
  double norm_error = 1e-4;           // per-ray normalization drift: error
  double reconstruction_asymmetry = 1e-3;  // pre-Hermitization |ρ − ρ†| cap
};

const Tolerances& default_tolerances();

// Real part with an explicit guard on the imaginary residue.  Throws a
// ValidationError naming `what` instead of silently truncating.
double real_checked(Complex z, double tol, const char* what);

// Thread budget: TOMO_THREADS if set (clamped to ≥ 1), else hardware.
int max_threads();

// Deterministic parallel loop over [0, n): each index is touched exactly
// once and writes only its own outputs, so results are identical for any
// thread count.
void parallel_for(int n, const std::function<void(int)>& fn);

// FNV-1a, used for config fingerprints in reports.
std::uint64_t fnv1a(const std::string& bytes);

// printf-style %.12e formatting used by every serializer.
std::string format_sci(double v);

}  // namespace tomo
