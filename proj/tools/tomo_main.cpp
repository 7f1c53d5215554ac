// Command-line surface: states, tomograms, channels, kernel exports, and the
// verification suites.  One command = one process; every produced file is
// stamped with the fingerprint of the run description that made it.
// Exit codes: 0 ok, 1 failed checks, 2 usage, 3 validation, 4 convergence.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tomo/channels.hpp"
#include "tomo/common.hpp"
#include "tomo/io.hpp"
#include "tomo/kernels.hpp"
#include "tomo/transforms.hpp"
#include "tomo/verify.hpp"

namespace {

using namespace tomo;

// Ordered parameter names for positional channel parameters.
const std::map<std::string, std::vector<std::string>>& param_order() {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"identity", {}},          {"phase-flip", {"p"}},
      {"amp-damp", {"gamma"}},   {"basis-projector", {}},
      {"gauss-basis", {"kappa"}}, {"gauss-pos", {"kappa"}},
      {"von-neumann", {"kappa", "g"}},
  };
  return table;
}

std::map<std::string, double> map_params(const std::string& channel,
                                         const std::vector<double>& values,
                                         std::vector<std::pair<std::string, double>>*
                                             ordered) {
  const auto it = param_order().find(channel);
  if (it == param_order().end()) return {};  // build_channel reports the registry
  if (values.size() != it->second.size()) {
    std::string msg = "channel " + channel + " takes " +
                      std::to_string(it->second.size()) + " parameter(s):";
    for (const std::string& n : it->second) msg += " " + n;
    throw ValidationError(msg);
  }
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[it->second[i]] = values[i];
    if (ordered) ordered->emplace_back(it->second[i], values[i]);
  }
  return out;
}

std::pair<std::string, double> parse_selector(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == s.size())
    throw ValidationError("selective reading must look like a=0.5 or m=1");
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s.substr(eq + 1), &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() - eq - 1)
    throw ValidationError("selective reading: \"" + s.substr(eq + 1) +
                          "\" is not a number");
  return {s.substr(0, eq), v};
}

std::shared_ptr<const QuantizerCache> build_cache(int dim, const GridConfig& grid) {
  return std::make_shared<QuantizerCache>(
      QuantizerCache::make(HilbertSpec(dim), grid.ray_grid(), grid.radial_rule()));
}

// Flags shared by the computing subcommands.
struct CommonFlags {
  GridConfig grid;
  int dim = 16;
  bool dim_given = false;
  std::string out;
};

void add_grid_flags(CLI::App* cmd, CommonFlags* f) {
  cmd->add_option("--xmax", f->grid.x_max, "half-width of the X window");
  cmd->add_option("--nx", f->grid.n_x, "X nodes per ray (odd)");
  cmd->add_option("--ntheta", f->grid.n_theta, "ray angles on [0, pi)");
  cmd->add_option("--kmax", f->grid.k_max, "radial cutoff of the inverse map");
  cmd->add_option("--dim", f->dim, "basis dimension")->check(CLI::PositiveNumber);
}

int file_dim(const std::string& state_file, const CommonFlags& f,
             DensityMatrix* rho) {
  *rho = read_density_file(state_file);
  const int d = static_cast<int>(rho->matrix().rows());
  if (f.dim_given && f.dim != d)
    throw ValidationError("--dim " + std::to_string(f.dim) +
                          " conflicts with the state file (dim " +
                          std::to_string(d) + ")");
  return d;
}

int cmd_state(const std::vector<std::string>& tokens, const CommonFlags& f) {
  std::string descriptor;
  for (const std::string& t : tokens) {
    if (!descriptor.empty()) descriptor += " ";
    descriptor += t;
  }
  RunConfig cfg;
  cfg.command = "state";
  cfg.grid = f.grid;
  cfg.dim = f.dim;
  cfg.state = descriptor;

  StateBuildReport rep;
  const DensityMatrix rho = parse_state(descriptor, HilbertSpec(f.dim), &rep);
  const std::string path = f.out.empty() ? "state.json" : f.out;
  write_text_file(path, density_json(rho, run_config_fingerprint(cfg)));
  std::printf("state written: %s (dim %d)\n", path.c_str(), f.dim);
  if (rep.leakage > 0.0)
    std::printf("truncation leakage: %s%s\n", format_sci(rep.leakage).c_str(),
                rep.warned ? "  (above warning threshold)" : "");
  return 0;
}

int cmd_tomogram(const std::string& state_file, bool reconstruct,
                 const CommonFlags& f) {
  DensityMatrix rho = fock_state(HilbertSpec(2), 0);
  const int dim = file_dim(state_file, f, &rho);

  RunConfig cfg;
  cfg.command = "tomogram";
  cfg.grid = f.grid;
  cfg.dim = dim;
  cfg.state = state_file;
  cfg.method = reconstruct ? "reconstruct" : "forward";
  const std::uint64_t fp = run_config_fingerprint(cfg);

  auto cache = build_cache(dim, f.grid);
  const TomogramGrid t = tomogram_from_density(rho, *cache);
  const std::string base = f.out.empty() ? "tomogram" : f.out;
  write_text_file(base + ".csv", tomogram_csv(t, fp));

  char fp_buf[24];
  std::snprintf(fp_buf, sizeof(fp_buf), "0x%016llx",
                static_cast<unsigned long long>(fp));
  std::string summary = "{";
  summary += "\"format\":\"tomogram-summary\"";
  summary += ",\"fingerprint\":\"" + std::string(fp_buf) + "\"";
  summary += ",\"dim\":" + std::to_string(dim);
  summary += ",\"grid\":" + grid_config_json(f.grid);
  summary += ",\"max_norm_residual\":" + format_sci(t.max_norm_residual());
  if (reconstruct) {
    ReconstructionReport rep;
    const DensityMatrix back = density_from_tomogram(t, *cache, &rep);
    const double fid = fidelity(rho, back);
    summary += ",\"fidelity\":" + format_sci(fid);
    summary += ",\"asymmetry\":" + format_sci(rep.asymmetry);
    summary += ",\"trace_correction\":" + format_sci(rep.trace_correction);
    std::printf("round-trip fidelity: %s\n", format_sci(fid).c_str());
  }
  summary += "}\n";
  write_text_file(base + ".summary.json", summary);
  std::printf("tomogram written: %s.csv (max norm residual %s)\n", base.c_str(),
              format_sci(t.max_norm_residual()).c_str());
  return 0;
}

int cmd_channel(const std::string& name, const std::vector<double>& values,
                const std::string& state_file, const std::string& method,
                const std::string& selective, const CommonFlags& f) {
  DensityMatrix rho = fock_state(HilbertSpec(2), 0);
  const int dim = file_dim(state_file, f, &rho);

  RunConfig cfg;
  cfg.command = "channel";
  cfg.grid = f.grid;
  cfg.dim = dim;
  cfg.state = state_file;
  cfg.channel = name;
  cfg.method = method;
  cfg.selective = selective;
  const std::map<std::string, double> params = map_params(name, values, &cfg.params);
  const std::uint64_t fp = run_config_fingerprint(cfg);

  auto cache = build_cache(dim, f.grid);
  const TomogramGrid t = tomogram_from_density(rho, *cache);
  const std::string base = f.out.empty() ? "channel" : f.out;

  if (!selective.empty()) {
    const auto [key, value] = parse_selector(selective);
    PartialKernel part;
    if (key == "m" && name == "basis-projector") {
      part = basis_projector_partial(static_cast<int>(value), cache);
    } else if (key == "a" && name == "gauss-pos") {
      const auto proj = GaussianProjectorCV::make(params.at("kappa"), HilbertSpec(dim));
      part = gaussian_position_partial(proj, value, cache);
    } else {
      throw ValidationError(
          "selective readings: basis-projector takes m=<level>, gauss-pos takes "
          "a=<position>");
    }
    const TomogramGrid out = apply_kernel(t, part);
    write_text_file(base + ".density.csv", tomogram_csv(out, fp));
    std::printf("selective reading %s: outcome probability %s\n", selective.c_str(),
                format_sci(out.ray_norm(0)).c_str());
    std::printf("outcome density written: %s.density.csv\n", base.c_str());
    return 0;
  }

  const ChannelBuild b = build_channel(name, params, cache);
  bool checks_pass = true;

  TomogramGrid ray_route = t;
  if (method == "tomographic" || method == "both") {
    ray_route = apply_kernel(t, b.kernel);
    write_text_file(base + ".tomogram.csv", tomogram_csv(ray_route, fp));
    std::printf("output tomogram written: %s.tomogram.csv\n", base.c_str());
  }
  DensityMatrix oracle = rho;
  if (method == "oracle" || method == "both") {
    ChannelApplyInfo info;
    oracle = apply_channel_oracle(rho, b.kraus, &info);
    write_text_file(base + ".density.json", density_json(oracle, fp));
    std::printf("output density written: %s.density.json (trace drift %s)\n",
                base.c_str(), format_sci(info.trace_drift).c_str());
  }
  if (method == "both") {
    const TomogramGrid oracle_view = tomogram_from_density(oracle, *cache);
    ComparisonReport r;
    r.suite = "channel-comparison";
    r.config_fingerprint = fp;
    r.grid = f.grid;
    r.dim = dim;
    const double bound =
        dim == 2 ? kOracleEquivalenceQubit : kOracleEquivalenceDefault;
    r.add(b.summary + " ray route vs operator route",
          (ray_route.values() - oracle_view.values()).abs().maxCoeff(), bound);
    r.metrics.emplace_back("identity_weight", b.kernel.identity_weight);
    r.metrics.emplace_back("completeness_residual", b.kernel.completeness_residual);
    write_text_file(base + ".report.json", report_json(r));
    checks_pass = r.pass();
    std::printf("%s  max-abs %s (bound %s)  report: %s.report.json\n",
                checks_pass ? "PASS" : "FAIL", format_sci(r.max_abs).c_str(),
                format_sci(bound).c_str(), base.c_str());
  }
  return checks_pass ? 0 : 1;
}

int cmd_kernel(const std::string& name, const std::vector<double>& values,
               const std::string& selective, const CommonFlags& f) {
  RunConfig cfg;
  cfg.command = "kernel";
  cfg.grid = f.grid;
  cfg.dim = f.dim;
  cfg.channel = name;
  cfg.selective = selective;
  const std::map<std::string, double> params = map_params(name, values, &cfg.params);
  const std::uint64_t fp = run_config_fingerprint(cfg);

  auto cache = build_cache(f.dim, f.grid);
  const std::string base = f.out.empty() ? "kernel" : f.out;

  ProcessKernel kernel;
  if (!selective.empty()) {
    const auto [key, value] = parse_selector(selective);
    PartialKernel part;
    if (key == "m" && name == "basis-projector") {
      part = basis_projector_partial(static_cast<int>(value), cache);
    } else if (key == "a" && name == "gauss-pos") {
      const auto proj =
          GaussianProjectorCV::make(params.at("kappa"), HilbertSpec(f.dim));
      part = gaussian_position_partial(proj, value, cache);
    } else {
      throw ValidationError(
          "selective kernels: basis-projector takes m=<level>, gauss-pos takes "
          "a=<position>");
    }
    kernel.spec = part.spec;
    kernel.coefficients = part.coefficients;
    kernel.labels = {part.label};
    kernel.generalized = part.generalized;
    kernel.cache = part.cache;
    kernel.completeness_residual = part.completeness_residual;
    kernel.complete = part.complete;
    kernel.identity_weight = part.identity_weight;
  } else {
    kernel = build_channel(name, params, cache).kernel;
  }

  write_text_file(base + ".kernel.json", kernel_json(kernel, fp));
  std::printf("kernel tensor written: %s.kernel.json (identity weight %s)\n",
              base.c_str(), format_sci(kernel.identity_weight).c_str());
  if (kernel.generalized) {
    std::printf("kernel carries a structural part; no dense view\n");
  } else if (kernel_structural_identity(kernel)) {
    std::printf("kernel is structurally the identity; no dense view\n");
  } else {
    write_text_file(base + ".kernel.csv", kernel_dense_csv(kernel, 13, 8, 3.0, fp));
    std::printf("dense sampled view written: %s.kernel.csv\n", base.c_str());
  }
  return 0;
}

int cmd_verify(const std::string& suite, const std::vector<std::string>& rest,
               int drop_kraus, int scale_kraus, const CommonFlags& f) {
  VerifyOptions opt;
  opt.drop_kraus = drop_kraus;
  opt.scale_kraus = scale_kraus;
  if (!rest.empty()) {
    opt.channel = rest[0];
    std::vector<double> values;
    for (std::size_t i = 1; i < rest.size(); ++i) {
      std::size_t pos = 0;
      double v = 0.0;
      try {
        v = std::stod(rest[i], &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != rest[i].size())
        throw ValidationError("verify: channel parameter \"" + rest[i] +
                              "\" is not a number");
      values.push_back(v);
    }
    map_params(opt.channel, values, &opt.params);
  }

  const ComparisonReport r = run_verify_suite(suite, f.grid, opt);
  for (const CheckResult& c : r.checks)
    std::printf("%s  %-44s value %s  bound %s\n", c.pass ? "PASS" : "FAIL",
                c.name.c_str(), format_sci(c.value).c_str(),
                format_sci(c.bound).c_str());
  std::printf("suite %s: %s (%zu checks, %.2f s)\n", r.suite.c_str(),
              r.pass() ? "PASS" : "FAIL", r.checks.size(), r.runtime_seconds);
  if (!f.out.empty()) {
    write_text_file(f.out + ".report.json", report_json(r));
    std::printf("report written: %s.report.json\n", f.out.c_str());
  }
  return r.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "tomo: quantum processes in the symplectic-tomography representation"};
  app.require_subcommand(1);

  CommonFlags fs, ft, fc, fk, fv;

  auto* state = app.add_subcommand("state", "build a state file from a descriptor");
  std::vector<std::string> state_tokens;
  state->add_option("descriptor", state_tokens,
                    "fock N | coherent RE [IM] | thermal NBAR | mixture W fockN "
                    "... (quote the whole descriptor when a value is negative)")
      ->required()
      ->expected(-1);
  add_grid_flags(state, &fs);
  state->add_option("--out", fs.out, "output path (default state.json)");

  auto* tomogram =
      app.add_subcommand("tomogram", "forward map a state file to a ray table");
  std::string t_state_file;
  bool t_reconstruct = false;
  tomogram->add_option("statefile", t_state_file, "density JSON file")->required();
  tomogram->add_flag("--reconstruct", t_reconstruct,
                     "also invert the table and report the fidelity");
  add_grid_flags(tomogram, &ft);
  tomogram->add_option("--out", ft.out, "output base path (default tomogram)");

  auto* channel =
      app.add_subcommand("channel", "apply a registered process to a state file");
  std::string c_name, c_state_file, c_selective;
  std::string c_method = "tomographic";
  std::vector<double> c_values;
  channel->add_option("name", c_name, "registry name")->required();
  channel->add_option("params", c_values, "ordered channel parameters");
  channel->add_option("--state", c_state_file, "density JSON file")->required();
  channel->add_option("--method", c_method, "tomographic | oracle | both")
      ->check(CLI::IsMember({"tomographic", "oracle", "both"}));
  channel->add_option("--selective", c_selective,
                      "single-outcome reading, e.g. a=0.5 or m=1");
  add_grid_flags(channel, &fc);
  channel->add_option("--out", fc.out, "output base path (default channel)");

  auto* kernel = app.add_subcommand("kernel", "export a process kernel tensor");
  std::string k_name, k_selective;
  std::vector<double> k_values;
  kernel->add_option("name", k_name, "registry name")->required();
  kernel->add_option("params", k_values, "ordered channel parameters");
  kernel->add_option("--selective", k_selective,
                     "single-outcome slice, e.g. a=0.5 or m=0");
  add_grid_flags(kernel, &fk);
  kernel->add_option("--out", fk.out, "output base path (default kernel)");

  auto* verify = app.add_subcommand("verify", "run a cross-route verification suite");
  std::string v_suite;
  std::vector<std::string> v_rest;
  int v_drop = -1, v_scale = -1;
  std::string suites_help = "suite:";
  for (const std::string& s : tomo::verify_suite_names()) suites_help += " " + s;
  verify->add_option("suite", v_suite, suites_help)->required();
  verify->add_option("channel", v_rest,
                     "completeness only: channel name and parameters");
  verify->add_option("--drop-kraus", v_drop,
                     "completeness only: drop this operator index");
  verify->add_option("--scale-kraus", v_scale,
                     "completeness only: scale this operator index by 0.9");
  add_grid_flags(verify, &fv);
  verify->add_option("--out", fv.out, "report base path (no file when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "tomo-error code=2 msg=\"" << e.what() << "\"\n";
    return 2;
  }
  fs.dim_given = state->count("--dim") > 0;
  ft.dim_given = tomogram->count("--dim") > 0;
  fc.dim_given = channel->count("--dim") > 0;
  fk.dim_given = kernel->count("--dim") > 0;
  fv.dim_given = verify->count("--dim") > 0;

  const auto fail = [](int code, const char* what) {
    std::cerr << "tomo-error code=" << code << " msg=\"" << what << "\"\n";
    return code;
  };
  try {
    if (app.got_subcommand(state)) return cmd_state(state_tokens, fs);
    if (app.got_subcommand(tomogram))
      return cmd_tomogram(t_state_file, t_reconstruct, ft);
    if (app.got_subcommand(channel))
      return cmd_channel(c_name, c_values, c_state_file, c_method, c_selective, fc);
    if (app.got_subcommand(kernel)) return cmd_kernel(k_name, k_values, k_selective, fk);
    if (app.got_subcommand(verify)) return cmd_verify(v_suite, v_rest, v_drop, v_scale, fv);
  } catch (const tomo::ValidationError& e) {
    return fail(3, e.what());
  } catch (const tomo::GeneralizedObjectError& e) {
    return fail(3, e.what());
  } catch (const tomo::ConvergenceError& e) {
    return fail(4, e.what());
  } catch (const std::exception& e) {
    return fail(3, e.what());
  }
  return 2;
}
