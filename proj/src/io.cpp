#include "tomo/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tomo/common.hpp"

namespace tomo {

namespace {

// Writers are hand-assembled so the byte stream depends only on the data:
// fixed key order, fixed %.12e floats, no locale involvement.  Reading back
// goes through the JSON parser, which accepts the same documents.

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string quoted(const std::string& s) { return "\"" + escape(s) + "\""; }

std::string hex_fingerprint(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void append_pairs(std::string& out,
                  const std::vector<std::pair<std::string, double>>& pairs) {
  out += "[";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i) out += ",";
    out += "[" + quoted(pairs[i].first) + "," + format_sci(pairs[i].second) + "]";
  }
  out += "]";
}

std::vector<double> number_array(const nlohmann::json& j, const char* key,
                                 std::size_t want) {
  if (!j.contains(key) || !j[key].is_array())
    throw ValidationError(std::string("density file: missing array \"") + key + "\"");
  const auto& arr = j[key];
  if (arr.size() != want)
    throw ValidationError(std::string("density file: array \"") + key +
                          "\" has wrong length");
  std::vector<double> out(want);
  for (std::size_t i = 0; i < want; ++i) {
    if (!arr[i].is_number())
      throw ValidationError(std::string("density file: non-numeric entry in \"") +
                            key + "\"");
    out[i] = arr[i].get<double>();
  }
  return out;
}

}  // namespace

std::string grid_config_json(const GridConfig& g) {
  std::string out = "{";
  out += "\"x_max\":" + format_sci(g.x_max);
  out += ",\"n_x\":" + std::to_string(g.n_x);
  out += ",\"n_theta\":" + std::to_string(g.n_theta);
  out += ",\"k_max\":" + format_sci(g.k_max);
  out += ",\"n_radial\":" + std::to_string(g.n_radial);
  out += "}";
  return out;
}

// "out" is deliberately left out of the canonical form: the fingerprint
// identifies the computation, not where its files land.
std::string run_config_json(const RunConfig& c) {
  std::string out = "{";
  out += "\"command\":" + quoted(c.command);
  out += ",\"grid\":" + grid_config_json(c.grid);
  out += ",\"dim\":" + std::to_string(c.dim);
  out += ",\"state\":" + quoted(c.state);
  out += ",\"channel\":" + quoted(c.channel);
  out += ",\"params\":";
  append_pairs(out, c.params);
  out += ",\"method\":" + quoted(c.method);
  out += ",\"selective\":" + quoted(c.selective);
  out += ",\"suite\":" + quoted(c.suite);
  out += ",\"drop_kraus\":" + std::to_string(c.drop_kraus);
  out += ",\"scale_kraus\":" + std::to_string(c.scale_kraus);
  out += ",\"tol_overrides\":";
  append_pairs(out, c.tol_overrides);
  out += "}";
  return out;
}

std::uint64_t run_config_fingerprint(const RunConfig& c) {
  return fnv1a(run_config_json(c));
}

bool ComparisonReport::pass() const {
  for (const CheckResult& c : checks)
    if (!c.pass) return false;
  return true;
}

void ComparisonReport::add(std::string name, double value, double bound) {
  checks.push_back({std::move(name), value, bound, value <= bound});
  max_abs = std::max(max_abs, std::abs(value));
  double ss = 0.0;
  for (const CheckResult& c : checks) ss += c.value * c.value;
  l2 = std::sqrt(ss / static_cast<double>(checks.size()));
}

std::vector<std::pair<std::string, double>> tolerance_table(const Tolerances& t) {
  return {{"hermiticity", t.hermiticity},
          {"trace", t.trace},
          {"psd_floor", t.psd_floor},
          {"kraus_completeness", t.kraus_completeness},
          {"kraus_completeness_quadrature", t.kraus_completeness_quadrature},
          {"tomogram_reality", t.tomogram_reality},
          {"tomogram_negativity", t.tomogram_negativity},
          {"norm_warn", t.norm_warn},
          {"norm_error", t.norm_error},
          {"reconstruction_asymmetry", t.reconstruction_asymmetry}};
}

std::string report_json(const ComparisonReport& r) {
  std::string out = "{";
  out += "\"format\":\"comparison-report\"";
  out += ",\"suite\":" + quoted(r.suite);
  out += ",\"config_fingerprint\":" + quoted(hex_fingerprint(r.config_fingerprint));
  out += ",\"grid\":" + grid_config_json(r.grid);
  out += ",\"dim\":" + std::to_string(r.dim);
  out += ",\"max_abs\":" + format_sci(r.max_abs);
  out += ",\"l2\":" + format_sci(r.l2);
  out += std::string(",\"pass\":") + (r.pass() ? "true" : "false");
  out += ",\"checks\":[";
  for (std::size_t i = 0; i < r.checks.size(); ++i) {
    const CheckResult& c = r.checks[i];
    if (i) out += ",";
    out += "{\"name\":" + quoted(c.name);
    out += ",\"value\":" + format_sci(c.value);
    out += ",\"bound\":" + format_sci(c.bound);
    out += std::string(",\"pass\":") + (c.pass ? "true" : "false") + "}";
  }
  out += "],\"metrics\":";
  append_pairs(out, r.metrics);
  out += ",\"tolerances\":";
  append_pairs(out, tolerance_table(default_tolerances()));
  out += "}\n";
  return out;
}

std::string density_json(const DensityMatrix& rho, std::uint64_t fingerprint) {
  const Matrix& m = rho.matrix();
  const int d = static_cast<int>(m.rows());
  std::string out = "{";
  out += "\"format\":\"density-matrix\"";
  out += ",\"dim\":" + std::to_string(d);
  out += ",\"fingerprint\":" + quoted(hex_fingerprint(fingerprint));
  out += ",\"trace_re\":" + format_sci(m.trace().real());
  out += ",\"re\":[";
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i || j) out += ",";
      out += format_sci(m(i, j).real());
    }
  out += "],\"im\":[";
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i || j) out += ",";
      out += format_sci(m(i, j).imag());
    }
  out += "]}\n";
  return out;
}

DensityMatrix parse_density_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("density file: not valid JSON: ") + e.what());
  }
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw ValidationError("density file: missing integer \"dim\"");
  const int d = j["dim"].get<int>();
  const HilbertSpec spec(d);  // range-checks the dimension
  const std::size_t n = static_cast<std::size_t>(d) * d;
  const std::vector<double> re = number_array(j, "re", n);
  const std::vector<double> im = number_array(j, "im", n);
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      m(i, k) = Complex(re[i * d + k], im[i * d + k]);
  // a stored outcome density may carry trace < 1 (selective slice or
  // truncation loss); accept its trace as data, keep the shape constraints
  const double drift = std::abs(m.trace() - Complex(1.0));
  Tolerances tol = default_tolerances();
  tol.trace = std::max(tol.trace, drift * (1.0 + 1e-3) + 1e-15);
  return DensityMatrix(std::move(m), tol);
}

DensityMatrix read_density_file(const std::string& path) {
  return parse_density_json(read_text_file(path));
}

namespace {

void csv_header(std::string& out, const char* format, const RayGrid& g,
                const std::string& provenance, std::uint64_t fingerprint) {
  out += std::string("# format = ") + format + "\n";
  out += "# provenance = " + provenance + "\n";
  out += "# fingerprint = " + hex_fingerprint(fingerprint) + "\n";
  out += "# x_max = " + format_sci(g.x_max) + "\n";
  out += "# n_x = " + std::to_string(g.n_x) + "\n";
  out += "# n_theta = " + std::to_string(g.n_theta) + "\n";
}

}  // namespace

std::string tomogram_csv(const TomogramGrid& t, std::uint64_t fingerprint) {
  const RayGrid& g = t.grid();
  std::string out;
  out.reserve(32 * static_cast<std::size_t>(g.n_x) * g.n_theta);
  csv_header(out, "tomogram", g, t.provenance(), fingerprint);
  out += std::string("# kind = ") + (t.is_density() ? "density" : "normalized") + "\n";
  if (t.is_density())
    out += "# outcome_mass = " + format_sci(t.ray_norm(0)) + "\n";
  else
    out += "# max_norm_residual = " + format_sci(t.max_norm_residual()) + "\n";
  out += "theta,X,T\n";
  for (int j = 0; j < g.n_theta; ++j)
    for (int i = 0; i < g.n_x; ++i)
      out += format_sci(g.theta_nodes[j]) + "," + format_sci(g.x_nodes[i]) + "," +
             format_sci(t.values()(j, i)) + "\n";
  return out;
}

std::string symbol_csv(const SymbolGrid& s, std::uint64_t fingerprint) {
  const RayGrid& g = s.grid();
  std::string out;
  out.reserve(48 * static_cast<std::size_t>(g.n_x) * g.n_theta);
  csv_header(out, "symbol", g, s.provenance(), fingerprint);
  out += std::string("# generalized = ") + (s.generalized() ? "true" : "false") + "\n";
  out += "theta,X,re,im\n";
  for (int j = 0; j < g.n_theta; ++j)
    for (int i = 0; i < g.n_x; ++i)
      out += format_sci(g.theta_nodes[j]) + "," + format_sci(g.x_nodes[i]) + "," +
             format_sci(s.values()(j, i).real()) + "," +
             format_sci(s.values()(j, i).imag()) + "\n";
  return out;
}

bool kernel_structural_identity(const ProcessKernel& k, double tol) {
  const int d = k.spec.dim;
  double resid = 0.0;
  for (int j = 0; j < d; ++j)
    for (int kk = 0; kk < d; ++kk)
      for (int l = 0; l < d; ++l)
        for (int i = 0; i < d; ++i) {
          const double id = (i == j && l == kk) ? 1.0 : 0.0;
          resid = std::max(resid, std::abs(k.coefficients(j * d + kk, l * d + i) -
                                           k.identity_weight * id));
        }
  return resid <= tol;
}

std::string kernel_json(const ProcessKernel& k, std::uint64_t fingerprint) {
  const int n2 = static_cast<int>(k.coefficients.rows());
  std::string out = "{";
  out += "\"format\":\"process-kernel\"";
  out += ",\"dim\":" + std::to_string(k.spec.dim);
  out += ",\"fingerprint\":" + quoted(hex_fingerprint(fingerprint));
  out += ",\"labels\":[";
  for (std::size_t i = 0; i < k.labels.size(); ++i) {
    if (i) out += ",";
    out += quoted(k.labels[i]);
  }
  out += "]";
  out += std::string(",\"complete\":") + (k.complete ? "true" : "false");
  out += ",\"completeness_residual\":" + format_sci(k.completeness_residual);
  out += ",\"identity_weight\":" + format_sci(k.identity_weight);
  out += std::string(",\"generalized\":") + (k.generalized ? "true" : "false");
  out += std::string(",\"structural_identity\":") +
         (kernel_structural_identity(k) ? "true" : "false");
  out += ",\"coefficients_re\":[";
  for (int r = 0; r < n2; ++r)
    for (int c = 0; c < n2; ++c) {
      if (r || c) out += ",";
      out += format_sci(k.coefficients(r, c).real());
    }
  out += "],\"coefficients_im\":[";
  for (int r = 0; r < n2; ++r)
    for (int c = 0; c < n2; ++c) {
      if (r || c) out += ",";
      out += format_sci(k.coefficients(r, c).imag());
    }
  out += "]}\n";
  return out;
}

std::string kernel_dense_csv(const ProcessKernel& k, int n_x, int n_theta,
                             double x_max, std::uint64_t fingerprint) {
  if (k.generalized)
    throw ValidationError(
        "kernel dense view: kernel carries a structural (generalized) part");
  if (kernel_structural_identity(k))
    throw ValidationError(
        "kernel dense view: kernel is structurally the identity; nothing regular "
        "to sample");
  if (n_x < 2 || n_theta < 1 || x_max <= 0.0)
    throw ValidationError("kernel dense view: invalid sampling grid");
  std::string out;
  out += "# format = kernel-dense\n";
  out += "# fingerprint = " + hex_fingerprint(fingerprint) + "\n";
  out += "# dim = " + std::to_string(k.spec.dim) + "\n";
  out += "# x_max = " + format_sci(x_max) + "\n";
  out += "# n_x = " + std::to_string(n_x) + "\n";
  out += "# n_theta = " + std::to_string(n_theta) + "\n";
  out += "theta_out,X_out,theta_in,X_in,re,im\n";
  const double dx = 2.0 * x_max / (n_x - 1);
  const double dth = kPi / n_theta;
  for (int jb = 0; jb < n_theta; ++jb)
    for (int ib = 0; ib < n_x; ++ib)
      for (int j = 0; j < n_theta; ++j)
        for (int i = 0; i < n_x; ++i) {
          const double thb = jb * dth, th = j * dth;
          const PhaseSpacePoint xb{-x_max + ib * dx, std::cos(thb), std::sin(thb)};
          const PhaseSpacePoint x{-x_max + i * dx, std::cos(th), std::sin(th)};
          const Complex v = kernel_value(k, xb, x);
          out += format_sci(thb) + "," + format_sci(xb.X) + "," + format_sci(th) +
                 "," + format_sci(x.X) + "," + format_sci(v.real()) + "," +
                 format_sci(v.imag()) + "\n";
        }
  return out;
}

DensityMatrix parse_state(const std::string& descriptor, HilbertSpec spec,
                          StateBuildReport* report) {
  std::istringstream in(descriptor);
  std::vector<std::string> tok;
  std::string t;
  while (in >> t) tok.push_back(t);
  if (report) *report = StateBuildReport{};

  const auto want_number = [&](const std::string& s, const char* what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != s.size())
      throw ValidationError(std::string("state descriptor: expected a number for ") +
                            what + ", got \"" + s + "\"");
    return v;
  };

  if (tok.empty()) throw ValidationError("state descriptor: empty");
  if (tok[0] == "fock") {
    if (tok.size() != 2)
      throw ValidationError("state descriptor: usage \"fock N\"");
    const double n = want_number(tok[1], "the level");
    if (n != std::floor(n) || n < 0)
      throw ValidationError("state descriptor: fock level must be a whole number");
    return fock_state(spec, static_cast<int>(n));
  }
  if (tok[0] == "coherent") {
    if (tok.size() != 2 && tok.size() != 3)
      throw ValidationError("state descriptor: usage \"coherent RE [IM]\"");
    const double re = want_number(tok[1], "the amplitude");
    const double im = tok.size() == 3 ? want_number(tok[2], "the amplitude") : 0.0;
    return coherent_state(spec, Complex(re, im), report);
  }
  if (tok[0] == "thermal") {
    if (tok.size() != 2)
      throw ValidationError("state descriptor: usage \"thermal NBAR\"");
    return thermal_state(spec, want_number(tok[1], "the occupation"), report);
  }
  if (tok[0] == "mixture") {
    if (tok.size() < 3 || tok.size() % 2 == 0)
      throw ValidationError(
          "state descriptor: usage \"mixture W fockN W fockN ...\"");
    std::vector<double> weights;
    std::vector<DensityMatrix> states;
    for (std::size_t i = 1; i < tok.size(); i += 2) {
      weights.push_back(want_number(tok[i], "a mixture weight"));
      const std::string& s = tok[i + 1];
      if (s.rfind("fock", 0) != 0 || s.size() == 4)
        throw ValidationError(
            "state descriptor: mixture components must look like \"fock0\"");
      const double n = want_number(s.substr(4), "a fock level");
      if (n != std::floor(n) || n < 0)
        throw ValidationError("state descriptor: fock level must be a whole number");
      states.push_back(fock_state(spec, static_cast<int>(n)));
    }
    return mixture(weights, states);
  }
  throw ValidationError("state descriptor: unknown family \"" + tok[0] +
                        "\" (try fock, coherent, thermal, mixture)");
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw ValidationError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace tomo
