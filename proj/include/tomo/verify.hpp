#pragma once
// Cross-route verification suites.  Each suite compares independent
// computational routes to the same physics and returns a ComparisonReport;
// for a fixed configuration the serialized report is byte-stable, so a
// rerun can be checked for determinism by plain byte comparison.

#include <string>
#include <utility>
#include <vector>

#include "tomo/io.hpp"

namespace tomo {

// Route-agreement bounds shared by the verification suites, the CLI
// comparison reports, and the acceptance gate: changing one of them changes
// every place the figure is enforced.
constexpr double kRoundTripFidelityDeficit = 1e-6;
constexpr double kOracleEquivalenceQubit = 1e-5;
constexpr double kOracleEquivalenceDefault = 1e-4;
constexpr double kDecoherenceFactorRelative = 1e-6;
constexpr double kRayRouteAgreement = 1e-4;
constexpr double kBlurOracleAgreement = 1e-4;
constexpr double kBlurWidthFitRelative = 0.02;
constexpr double kCompletenessResidual = 1e-4;
constexpr double kViolationDetectionFloor = 0.05;
constexpr double kStarProductAgreement = 1e-6;
constexpr double kPairingAgreement = 1e-6;
constexpr double kCommutatorInterior = 1e-5;
constexpr double kQuadratureRouteAgreement = 1e-3;
constexpr double kNormalizationDrift = 1e-5;

// Options consumed by the completeness suite: which channel to check and an
// optional deliberate violation (dropping an operator, or scaling one by
// 0.9) that the residual must detect.
struct VerifyOptions {
  std::string channel;  // empty = the built-in roster of complete families
  std::vector<std::pair<std::string, double>> params;
  int drop_kraus = -1;
  int scale_kraus = -1;
};

// Forward/backward map on reference and random states: fidelity of the
// reconstructed state against the input.
ComparisonReport verify_round_trip(const GridConfig& grid);

// Structured tensor application against the operator-sum route on the full
// qubit and projector rosters.
ComparisonReport verify_oracle_equivalence(const GridConfig& grid);

// Pointer-coupling dephasing factors against the closed exponential across
// a (kappa, g) sweep, plus one full tomographic round.
ComparisonReport verify_von_neumann_sweep(const GridConfig& grid);

// Per-ray coordinate blur against the coordinate-kernel oracle, and the
// fitted blur width against its closed form.
ComparisonReport verify_gauss_pos(const GridConfig& grid);

// Smeared completeness functional on a channel's operator family; with a
// violation requested, the residual must exceed the detection floor.
ComparisonReport verify_completeness(const GridConfig& grid,
                                     const VerifyOptions& opt);

// Star-product associativity with the matrix product, pairing values on
// reference states, and the canonical commutator.
ComparisonReport verify_star_scalar(const GridConfig& grid);

// Structured kernel application against the brute-force quadrature route on
// deliberately coarse grids.
ComparisonReport verify_route_quadrature(const GridConfig& grid);

// Reruns representative suites and byte-compares their serialized reports
// and a serialized ray table.
ComparisonReport verify_determinism(const GridConfig& grid);

std::vector<std::string> verify_suite_names();

// Dispatch by name; unknown names raise ValidationError listing the suites.
ComparisonReport run_verify_suite(const std::string& name, const GridConfig& grid,
                                  const VerifyOptions& opt = {});

}  // namespace tomo
