// Run configuration: a flat INI-like text format.
//
//   # comment            ; comment
//   seed = 7              keys before the first section are top-level
//   [section]
//   key = 1.5             numbers and booleans are bare
//   key = "text"          strings are double-quoted
//
// Sections and keys (defaults in parentheses):
//   (top)        seed (0)
//   [lagrangian] n_fields (1), kinetic ("1", rows separated by ';'), potential (required)
//   [gamma]      dim (1), rep ("scalar"), kinetic_normalization ("mechanical_exact")
//   [grid]       n_q (256), q_min (-12), q_max (12)
//   [lattice]    n_x (64), length (2 pi)
//   [initial]    kind ("gaussian" | "eigenstate" | "dirac_packet" | "dirac_plane_wave" | "random"),
//                center (0), width (1), momentum (0), level (0),
//                packet_center (pi), packet_width (0.6), mode (1), upper (1), lower (0)
//   [evolution]  scheme, stepper ("rk4"), dt, n_steps, output_stride (1), snapshots (false)
//   [classical]  dt, n_steps, output_stride (1), amplitude (1), mode (1), velocity (0)
//   [groundstate] tol (1e-12), dtau (0.5), levels (4)
//   [dispersion] schemes ("mechanical_schrodinger, good, dirac_like"), k ("0.5, 1, 2, 4"), mu (optional)
//   [picture]    n_max (32), observable ("a" | "a+adag" | "h"), state ("01" | "0" | "random"),
//                t_max (6.283185307179586), n_t (64)
//   [diagnostics] reports: comma list of groundstate, spectrum, hamiltonian, norms, hmu,
//                dispersion, picture (empty list allowed)
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dwlab/clifford.hpp"
#include "dwlab/errors.hpp"
#include "dwlab/evolution.hpp"
#include "dwlab/lagrangian.hpp"
#include "dwlab/polynomial.hpp"
#include "dwlab/quantization.hpp"

namespace dwlab {

struct ConfigValue {
  std::string text;
  bool quoted = false;
  int line = 0;
};

using ConfigSections = std::map<std::string, std::map<std::string, ConfigValue>>;

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split_list(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

}  // namespace detail

/// Lexical pass: sections and raw values. Syntax errors carry the line number.
inline ConfigSections parse_config_text(std::string_view text) {
  ConfigSections sections;
  sections[""];
  std::string current;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  std::vector<std::string> errors;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = detail::trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    auto err = [&](const std::string& m) { errors.push_back("line " + std::to_string(line_no) + ": " + m); };
    if (line[0] == '[') {
      if (line.back() != ']') {
        err("unterminated section header");
        continue;
      }
      current = detail::trim(std::string_view(line).substr(1, line.size() - 2));
      if (current.empty()) err("empty section name");
      if (sections.count(current) && !sections[current].empty()) err("duplicate section [" + current + "]");
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      err("expected 'key = value'");
      continue;
    }
    const std::string key = detail::trim(std::string_view(line).substr(0, eq));
    std::string value = detail::trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) {
      err("missing key");
      continue;
    }
    ConfigValue v;
    v.line = line_no;
    if (!value.empty() && value[0] == '"') {
      const auto close = value.find('"', 1);
      if (close == std::string::npos) {
        err("unterminated string");
        continue;
      }
      const std::string rest = detail::trim(std::string_view(value).substr(close + 1));
      if (!rest.empty() && rest[0] != '#' && rest[0] != ';') {
        err("unexpected text after string");
        continue;
      }
      v.text = value.substr(1, close - 1);
      v.quoted = true;
    } else {
      const auto hash = value.find_first_of("#;");
      if (hash != std::string::npos) value = detail::trim(std::string_view(value).substr(0, hash));
      if (value.empty()) {
        err("missing value for '" + key + "'");
        continue;
      }
      v.text = value;
    }
    auto& sec = sections[current];
    if (sec.count(key)) {
      err("duplicate key '" + key + "'");
      continue;
    }
    sec[key] = v;
  }
  if (!errors.empty()) {
    std::string msg = "config syntax error:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return sections;
}

struct InitialConfig {
  std::string kind = "gaussian";
  double center = 0.0, width = 1.0, momentum = 0.0;
  int level = 0;
  double packet_center = std::numbers::pi, packet_width = 0.6;
  int mode = 1;
  double upper = 1.0, lower = 0.0;
};

struct ClassicalConfig {
  double dt = 0.0;
  long n_steps = 0;
  long output_stride = 1;
  double amplitude = 1.0;
  int mode = 1;
  double velocity = 0.0;
};

struct GroundStateConfig {
  double tol = 1e-12;
  double dtau = 0.5;
  int levels = 4;
};

struct DispersionConfig {
  std::vector<Scheme> schemes{Scheme::mechanical_schrodinger, Scheme::good, Scheme::dirac_like};
  std::vector<double> k{0.5, 1.0, 2.0, 4.0};
  std::optional<double> mu;
};

struct PictureConfig {
  int n_max = 32;
  std::string observable = "a";
  std::string state = "01";
  double t_max = 2.0 * std::numbers::pi;
  int n_t = 64;
};

struct RunConfig {
  std::uint64_t seed = 0;
  // lagrangian
  int n_fields = 1;
  Eigen::MatrixXd kinetic = Eigen::MatrixXd::Identity(1, 1);
  std::string potential_text;
  // gamma
  int dim = 1;
  Representation rep = Representation::scalar;
  KineticNormalization normalization = KineticNormalization::mechanical_exact;
  // grids
  FieldGrid grid;
  Lattice1D lattice = Lattice1D{64, 2.0 * std::numbers::pi / 64};
  bool has_lattice = false;
  InitialConfig initial;
  std::optional<EvolutionConfig> evolution;
  std::optional<ClassicalConfig> classical;
  GroundStateConfig groundstate;
  DispersionConfig dispersion;
  PictureConfig picture;
  std::vector<std::string> reports;
  std::string source_text;

  LagrangianSpec lagrangian() const {
    return LagrangianSpec::create(dim, kinetic, parse_polynomial(potential_text, n_fields));
  }
  std::shared_ptr<const GammaSet> gamma() const {
    return std::make_shared<const GammaSet>(build_gamma_set(dim, rep));
  }
  std::optional<Lattice1D> spatial_lattice() const {
    return has_lattice ? std::optional<Lattice1D>(lattice) : std::nullopt;
  }
  bool wants(std::string_view report) const {
    return std::find(reports.begin(), reports.end(), report) != reports.end();
  }
};

inline const std::vector<std::string>& known_reports() {
  static const std::vector<std::string> r{"groundstate", "spectrum", "hamiltonian", "norms",
                                          "hmu",         "dispersion", "picture"};
  return r;
}

namespace detail {

/// Typed reads from the lexical sections, collecting every problem.
class ConfigReader {
 public:
  explicit ConfigReader(const ConfigSections& s) : s_(s) {}

  bool has_section(const std::string& sec) const { return s_.count(sec) > 0; }

  const ConfigValue* find(const std::string& sec, const std::string& key) {
    used_.insert(sec + "." + key);
    auto it = s_.find(sec);
    if (it == s_.end()) return nullptr;
    auto kt = it->second.find(key);
    return kt == it->second.end() ? nullptr : &kt->second;
  }

  static std::string path(const std::string& sec, const std::string& key) {
    return sec.empty() ? key : sec + "." + key;
  }

  void error(const std::string& sec, const std::string& key, const std::string& msg) {
    errors.push_back(path(sec, key) + ": " + msg);
  }

  double number(const std::string& sec, const std::string& key, std::optional<double> def) {
    const ConfigValue* v = find(sec, key);
    if (!v) {
      if (!def) error(sec, key, "required");
      return def.value_or(0.0);
    }
    if (v->quoted) {
      error(sec, key, "expected a number, got a string (line " + std::to_string(v->line) + ")");
      return def.value_or(0.0);
    }
    double out = 0.0;
    const char* b = v->text.data();
    const char* e = b + v->text.size();
    auto [ptr, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || ptr != e || !std::isfinite(out)) {
      error(sec, key, "not a finite number: '" + v->text + "' (line " + std::to_string(v->line) + ")");
      return def.value_or(0.0);
    }
    return out;
  }

  long integer(const std::string& sec, const std::string& key, std::optional<long> def) {
    const ConfigValue* v = find(sec, key);
    if (!v) {
      if (!def) error(sec, key, "required");
      return def.value_or(0);
    }
    long out = 0;
    const char* b = v->text.data();
    const char* e = b + v->text.size();
    auto [ptr, ec] = std::from_chars(b, e, out);
    if (v->quoted || ec != std::errc() || ptr != e) {
      error(sec, key, "expected an integer, got '" + v->text + "' (line " + std::to_string(v->line) + ")");
      return def.value_or(0);
    }
    return out;
  }

  std::uint64_t unsigned_integer(const std::string& sec, const std::string& key, std::uint64_t def) {
    const ConfigValue* v = find(sec, key);
    if (!v) return def;
    std::uint64_t out = 0;
    const char* b = v->text.data();
    const char* e = b + v->text.size();
    auto [ptr, ec] = std::from_chars(b, e, out);
    if (v->quoted || ec != std::errc() || ptr != e) {
      error(sec, key, "expected a non-negative integer, got '" + v->text + "'");
      return def;
    }
    return out;
  }

  std::string string(const std::string& sec, const std::string& key, std::optional<std::string> def) {
    const ConfigValue* v = find(sec, key);
    if (!v) {
      if (!def) error(sec, key, "required");
      return def.value_or("");
    }
    return v->text;
  }

  bool boolean(const std::string& sec, const std::string& key, bool def) {
    const ConfigValue* v = find(sec, key);
    if (!v) return def;
    if (v->text == "true") return true;
    if (v->text == "false") return false;
    error(sec, key, "expected true or false, got '" + v->text + "'");
    return def;
  }

  void report_unknown_keys() {
    for (const auto& [sec, keys] : s_) {
      for (const auto& [key, v] : keys) {
        if (!used_.count(sec + "." + key)) {
          errors.push_back(path(sec, key) + ": unknown key (line " + std::to_string(v.line) + ")");
        }
      }
    }
  }

  std::vector<std::string> errors;
  std::vector<std::string> unsupported;

 private:
  const ConfigSections& s_;
  std::set<std::string> used_;
};

inline Eigen::MatrixXd parse_matrix(const std::string& text, int n, ConfigReader& r) {
  const auto rows = split_list(text, ';');
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  if (static_cast<int>(rows.size()) != n) {
    r.error("lagrangian", "kinetic", "expected " + std::to_string(n) + " rows separated by ';'");
    return m;
  }
  for (int i = 0; i < n; ++i) {
    std::istringstream row(rows[static_cast<std::size_t>(i)]);
    std::vector<double> vals;
    std::string tok;
    while (row >> tok) {
      for (auto& c : tok) {
        if (c == ',') c = ' ';
      }
      std::istringstream t2(tok);
      double x;
      while (t2 >> x) vals.push_back(x);
    }
    if (static_cast<int>(vals.size()) != n) {
      r.error("lagrangian", "kinetic", "row " + std::to_string(i + 1) + " needs " + std::to_string(n) + " entries");
      return Eigen::MatrixXd::Identity(n, n);
    }
    for (int j = 0; j < n; ++j) m(i, j) = vals[static_cast<std::size_t>(j)];
  }
  return m;
}

}  // namespace detail

/// Parses and fully validates a configuration. Every violated constraint is
/// reported (not just the first). Unsupported scheme/representation pairings
/// raise UnsupportedError; anything else raises ConfigError.
inline RunConfig parse_config(std::string_view text) {
  const ConfigSections sections = parse_config_text(text);
  detail::ConfigReader r(sections);
  RunConfig c;
  c.source_text = std::string(text);
  c.seed = r.unsigned_integer("", "seed", 0);

  // lagrangian
  c.n_fields = static_cast<int>(r.integer("lagrangian", "n_fields", 1));
  if (c.n_fields < 1) {
    r.error("lagrangian", "n_fields", "must be >= 1");
    c.n_fields = 1;
  }
  c.kinetic = detail::parse_matrix(r.string("lagrangian", "kinetic", "1"), c.n_fields, r);
  c.potential_text = r.string("lagrangian", "potential", std::nullopt);

  // gamma
  c.dim = static_cast<int>(r.integer("gamma", "dim", 1));
  const std::string rep_name = r.string("gamma", "rep", "scalar");
  try {
    c.rep = parse_representation(rep_name);
  } catch (const ConfigError& e) {
    r.error("gamma", "rep", e.what());
  }
  try {
    c.normalization = parse_kinetic_normalization(r.string("gamma", "kinetic_normalization", "mechanical_exact"));
  } catch (const ConfigError& e) {
    r.error("gamma", "kinetic_normalization", e.what());
  }
  bool gamma_ok = false;
  for (const auto& e : representation_registry()) {
    if (e.dim == c.dim && e.rep == c.rep) gamma_ok = true;
  }
  if (!gamma_ok) {
    r.error("gamma", "rep", "unsupported (dim, rep) pair; supported: " + supported_representations_text());
  }

  if (!c.potential_text.empty()) {
    try {
      (void)c.lagrangian();
    } catch (const ConfigError& e) {
      r.error("lagrangian", "potential", e.what());
    }
  }

  // grids
  c.grid.n_q = static_cast<int>(r.integer("grid", "n_q", 256));
  c.grid.q_min = r.number("grid", "q_min", -12.0);
  c.grid.q_max = r.number("grid", "q_max", 12.0);
  if (c.grid.n_q < 8) r.error("grid", "n_q", "must be >= 8");
  if (!(c.grid.q_min < c.grid.q_max)) r.error("grid", "q_max", "must exceed grid.q_min");

  c.has_lattice = r.has_section("lattice");
  {
    const long n_x = r.integer("lattice", "n_x", 64);
    const double length = r.number("lattice", "length", 2.0 * std::numbers::pi);
    if (n_x < 1) r.error("lattice", "n_x", "must be >= 1");
    if (!(length > 0.0)) r.error("lattice", "length", "must be > 0");
    if (n_x >= 1 && length > 0.0) c.lattice = Lattice1D{static_cast<int>(n_x), length / static_cast<double>(n_x)};
  }

  // initial data
  {
    auto& in = c.initial;
    in.kind = r.string("initial", "kind", "gaussian");
    static const std::set<std::string> kinds{"gaussian", "eigenstate", "dirac_packet", "dirac_plane_wave", "random"};
    if (!kinds.count(in.kind)) r.error("initial", "kind", "unknown kind '" + in.kind + "'");
    in.center = r.number("initial", "center", 0.0);
    in.width = r.number("initial", "width", 1.0);
    if (!(in.width > 0.0)) r.error("initial", "width", "must be > 0");
    in.momentum = r.number("initial", "momentum", 0.0);
    in.level = static_cast<int>(r.integer("initial", "level", 0));
    in.packet_center = r.number("initial", "packet_center", std::numbers::pi);
    in.packet_width = r.number("initial", "packet_width", 0.6);
    if (!(in.packet_width > 0.0)) r.error("initial", "packet_width", "must be > 0");
    in.mode = static_cast<int>(r.integer("initial", "mode", 1));
    in.upper = r.number("initial", "upper", 1.0);
    in.lower = r.number("initial", "lower", 0.0);
  }

  // evolution
  if (r.has_section("evolution")) {
    EvolutionConfig e;
    try {
      e.scheme = parse_scheme(r.string("evolution", "scheme", c.dim == 1 ? "mechanical_schrodinger" : "dirac_like"));
    } catch (const ConfigError& ex) {
      r.error("evolution", "scheme", ex.what());
    }
    try {
      e.stepper = parse_stepper(r.string("evolution", "stepper", "rk4"));
    } catch (const ConfigError& ex) {
      r.error("evolution", "stepper", ex.what());
    }
    e.dt = r.number("evolution", "dt", std::nullopt);
    e.n_steps = r.integer("evolution", "n_steps", std::nullopt);
    e.output_stride = r.integer("evolution", "output_stride", 1);
    e.store_snapshots = r.boolean("evolution", "snapshots", false);
    if (!(e.dt > 0.0)) r.error("evolution", "dt", "must be > 0");
    if (e.n_steps < 0) r.error("evolution", "n_steps", "must be >= 0");
    if (e.output_stride < 1) r.error("evolution", "output_stride", "must be >= 1");
    if (c.rep == Representation::kemmer_spin0) {
      r.unsupported.push_back("gamma.rep: kemmer_spin0 cannot be combined with [evolution] (Gamma^0 is not invertible)");
    }
    if (c.dim > 2) r.unsupported.push_back("gamma.dim: evolution supports dim 1 or 2, got " + std::to_string(c.dim));
    if (e.scheme == Scheme::good) r.unsupported.push_back("evolution.scheme: good has no time-domain integrator");
    if (e.scheme == Scheme::mechanical_schrodinger && c.dim != 1) {
      r.error("evolution", "scheme", "mechanical_schrodinger needs gamma.dim = 1");
    }
    if (e.stepper == Stepper::crank_nicolson && c.dim != 1) {
      r.error("evolution", "stepper", "crank_nicolson is for mechanics (gamma.dim = 1) only");
    }
    if (c.dim == 2 && !c.has_lattice) r.error("lattice", "n_x", "1+1 evolution needs a [lattice] section");
    if (c.n_fields != 1) r.unsupported.push_back("lagrangian.n_fields: quantum evolution needs a single field");
    c.evolution = e;
  }

  // classical
  if (r.has_section("classical")) {
    ClassicalConfig k;
    k.dt = r.number("classical", "dt", std::nullopt);
    k.n_steps = r.integer("classical", "n_steps", std::nullopt);
    k.output_stride = r.integer("classical", "output_stride", 1);
    k.amplitude = r.number("classical", "amplitude", 1.0);
    k.mode = static_cast<int>(r.integer("classical", "mode", 1));
    k.velocity = r.number("classical", "velocity", 0.0);
    if (!(k.dt > 0.0)) r.error("classical", "dt", "must be > 0");
    if (k.n_steps < 0) r.error("classical", "n_steps", "must be >= 0");
    if (k.output_stride < 1) r.error("classical", "output_stride", "must be >= 1");
    if (c.dim == 2 && c.has_lattice && k.dt > 0.5 * c.lattice.dx) {
      r.error("classical", "dt", "CFL violation: must be <= 0.5 * lattice dx = " + std::to_string(0.5 * c.lattice.dx));
    }
    if (c.dim > 2) r.unsupported.push_back("gamma.dim: classical integrator supports dim 1 or 2");
    if (c.n_fields != 1) r.unsupported.push_back("lagrangian.n_fields: classical integrator needs a single field");
    c.classical = k;
  }

  // groundstate / dispersion / picture parameters
  c.groundstate.tol = r.number("groundstate", "tol", 1e-12);
  c.groundstate.dtau = r.number("groundstate", "dtau", 0.5);
  c.groundstate.levels = static_cast<int>(r.integer("groundstate", "levels", 4));
  if (!(c.groundstate.tol > 0.0)) r.error("groundstate", "tol", "must be > 0");
  if (!(c.groundstate.dtau > 0.0)) r.error("groundstate", "dtau", "must be > 0");
  if (c.groundstate.levels < 1) r.error("groundstate", "levels", "must be >= 1");

  if (r.has_section("dispersion")) {
    c.dispersion.schemes.clear();
    for (const auto& name : detail::split_list(r.string("dispersion", "schemes", "mechanical_schrodinger, good, dirac_like"), ',')) {
      try {
        c.dispersion.schemes.push_back(parse_scheme(name));
      } catch (const ConfigError& e) {
        r.error("dispersion", "schemes", e.what());
      }
    }
    c.dispersion.k.clear();
    for (const auto& tok : detail::split_list(r.string("dispersion", "k", "0.5, 1, 2, 4"), ',')) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        r.error("dispersion", "k", "not a number: '" + tok + "'");
      } else {
        c.dispersion.k.push_back(v);
      }
    }
    if (const ConfigValue* mu = r.find("dispersion", "mu")) {
      (void)mu;
      c.dispersion.mu = r.number("dispersion", "mu", 0.0);
    }
  }

  c.picture.n_max = static_cast<int>(r.integer("picture", "n_max", 32));
  c.picture.observable = r.string("picture", "observable", "a");
  c.picture.state = r.string("picture", "state", "01");
  c.picture.t_max = r.number("picture", "t_max", 2.0 * std::numbers::pi);
  c.picture.n_t = static_cast<int>(r.integer("picture", "n_t", 64));
  if (c.picture.n_max < 2) r.error("picture", "n_max", "must be >= 2");
  if (c.picture.observable != "a" && c.picture.observable != "a+adag" && c.picture.observable != "h") {
    r.error("picture", "observable", "expected a | a+adag | h");
  }
  if (c.picture.state != "01" && c.picture.state != "0" && c.picture.state != "random") {
    r.error("picture", "state", "expected 01 | 0 | random");
  }
  if (c.picture.n_t < 3) r.error("picture", "n_t", "must be >= 3");
  if (!(c.picture.t_max > 0.0)) r.error("picture", "t_max", "must be > 0");

  // reports
  for (const auto& name : detail::split_list(r.string("diagnostics", "reports", ""), ',')) {
    const auto& known = known_reports();
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      r.error("diagnostics", "reports", "unknown report '" + name + "'");
    } else {
      c.reports.push_back(name);
    }
  }
  const bool quantum_grid_report = c.wants("groundstate") || c.wants("spectrum") || c.wants("hamiltonian");
  if (quantum_grid_report && (c.dim != 1 || c.rep != Representation::scalar)) {
    r.unsupported.push_back("diagnostics.reports: groundstate/spectrum/hamiltonian need the mechanical limit (dim 1, scalar)");
  }
  if ((c.wants("norms") || c.wants("hmu")) && !c.evolution) {
    r.error("diagnostics", "reports", "norms and hmu need an [evolution] section");
  }
  if (c.wants("hmu") && c.evolution) c.evolution->store_snapshots = true;
  if (c.wants("norms") && c.evolution && c.evolution->n_steps / c.evolution->output_stride < 2) {
    r.error("evolution", "n_steps", "norms needs at least 3 recorded times (n_steps / output_stride >= 2)");
  }
  if (c.rep == Representation::kemmer_spin0 && (quantum_grid_report || c.wants("hmu"))) {
    r.unsupported.push_back("gamma.rep: kemmer_spin0 cannot be used for Hamiltonian assembly");
  }

  r.report_unknown_keys();
  if (!r.errors.empty() || !r.unsupported.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : r.errors) msg += "\n  - " + e;
    for (const auto& e : r.unsupported) msg += "\n  - unsupported combination: " + e;
    if (r.errors.empty()) throw UnsupportedError(msg);
    throw ConfigError(msg);
  }
  return c;
}

}  // namespace dwlab
