#pragma once
// File formats and run descriptions.  Density matrices travel as JSON, ray
// tables as CSV with `# key = value` metadata lines, kernels as JSON tensors
// with an optional dense sampled view.  Every writer uses fixed %.12e number
// formatting and a fixed field order, so identical configurations produce
// byte-identical files; the fingerprint of the canonical run description is
// stamped into each one.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tomo/grid.hpp"
#include "tomo/hilbert.hpp"
#include "tomo/kernels.hpp"
#include "tomo/states.hpp"

namespace tomo {

// Serializable subset of the evaluation grids.
struct GridConfig {
  double x_max = 8.0;
  int n_x = 257;
  int n_theta = 64;
  double k_max = 12.0;
  int n_radial = 160;

  RayGrid ray_grid() const { return RayGrid::make(x_max, n_x, n_theta); }
  RadialRule radial_rule() const { return RadialRule::make(k_max, n_radial); }
};

// Complete description of one command invocation.  A run is reproducible
// from its RunConfig alone.
struct RunConfig {
  std::string command;  // state | tomogram | channel | kernel | verify
  GridConfig grid;
  int dim = 16;
  std::string state;    // state descriptor, e.g. "fock 0"
  std::string channel;  // registry name, empty when unused
  std::vector<std::pair<std::string, double>> params;  // ordered channel params
  std::string method = "tomographic";  // tomographic | oracle | both
  std::string selective;               // outcome selector "a=0.5" / "m=1"
  std::string suite;                   // verify suite name
  int drop_kraus = -1;   // completeness suite: drop element before checking
  int scale_kraus = -1;  // completeness suite: scale element by 0.9
  std::vector<std::pair<std::string, double>> tol_overrides;
  std::string out;  // output path base
};

// Canonical serialization and its FNV-1a fingerprint.
std::string run_config_json(const RunConfig& c);
std::uint64_t run_config_fingerprint(const RunConfig& c);
std::string grid_config_json(const GridConfig& g);

// One named check inside a report: a measured figure held against a bound.
struct CheckResult {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

// Route-comparison result.  The serialized form excludes runtimes, so a
// rerun from the same RunConfig is byte-identical; runtimes go to the
// console only.
struct ComparisonReport {
  std::string suite;
  std::uint64_t config_fingerprint = 0;
  GridConfig grid;
  int dim = 0;
  double max_abs = 0.0;  // worst discrepancy across the suite
  double l2 = 0.0;       // quadratic mean of the check values
  std::vector<CheckResult> checks;
  std::vector<std::pair<std::string, double>> metrics;  // named figures
  double runtime_seconds = 0.0;  // never serialized

  bool pass() const;
  void add(std::string name, double value, double bound);
};

// Tolerance block printed into every report.
std::vector<std::pair<std::string, double>> tolerance_table(const Tolerances& t);

std::string report_json(const ComparisonReport& r);

// Density files: {"dim": N, "trace_re": ..., "re": [...], "im": [...]},
// row-major.
std::string density_json(const DensityMatrix& rho, std::uint64_t fingerprint = 0);
DensityMatrix parse_density_json(const std::string& text);
DensityMatrix read_density_file(const std::string& path);

// Ray tables: `# key = value` metadata, then theta-major `theta,X,value`
// rows (complex values as re,im columns for generalized symbols).
std::string tomogram_csv(const TomogramGrid& t, std::uint64_t fingerprint = 0);
std::string symbol_csv(const SymbolGrid& s, std::uint64_t fingerprint = 0);

// A kernel is structurally the identity when its tensor is the identity map
// times a weight; such kernels get no dense sampled view.
bool kernel_structural_identity(const ProcessKernel& k, double tol = 1e-12);
std::string kernel_json(const ProcessKernel& k, std::uint64_t fingerprint = 0);
std::string kernel_dense_csv(const ProcessKernel& k, int n_x = 13, int n_theta = 8,
                             double x_max = 3.0, std::uint64_t fingerprint = 0);

// State descriptors: "fock N" | "coherent RE [IM]" | "thermal NBAR" |
// "mixture W fockN W fockN ...".
DensityMatrix parse_state(const std::string& descriptor, HilbertSpec spec,
                          StateBuildReport* report = nullptr);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace tomo
