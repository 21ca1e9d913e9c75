// dwlab command-line front end.
#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dwlab/clifford.hpp"
#include "dwlab/config.hpp"
#include "dwlab/lagrangian.hpp"
#include "dwlab/runner.hpp"

namespace {

using json = nlohmann::ordered_json;

struct Globals {
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

json matrix_json(const dwlab::CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

json real_matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  for (const auto& tok : dwlab::detail::split_list(text, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw dwlab::ConfigError("not a number: '" + tok + "'");
    }
  }
  return out;
}

dwlab::RunOptions run_options(const Globals& g) {
  dwlab::RunOptions o;
  o.out_dir = g.out;
  o.seed_override = g.seed;
  o.log = g.quiet ? nullptr : &std::cerr;
  return o;
}

void print_files(const Globals& g, const dwlab::RunResult& r) {
  if (g.quiet) return;
  for (const auto& f : r.files) std::cout << (std::filesystem::path(g.out) / f).string() << '\n';
}

int gamma_dump(int dim, const std::string& rep, const Globals& g) {
  const dwlab::GammaSet set = dwlab::build_gamma_set(dim, rep);
  json j;
  j["dim"] = dim;
  j["rep"] = std::string(dwlab::to_string(set.rep));
  j["metric"] = set.signature.diag;
  json mats = json::array();
  for (const auto& m : set.matrices) mats.push_back(matrix_json(m));
  j["matrices"] = mats;
  j["gamma0_hermitizer"] = matrix_json(set.gamma0_hermitizer);
  if (set.is_dirac_type()) {
    const dwlab::SigmaTensor s = dwlab::sigma_tensor(set);
    json sig = json::object();
    for (int mu = 0; mu < dim; ++mu) {
      for (int nu = mu + 1; nu < dim; ++nu) sig[std::to_string(mu) + std::to_string(nu)] = matrix_json(s(mu, nu));
    }
    j["sigma"] = sig;
  }
  const std::string text = j.dump(2);
  std::cout << text << '\n';
  if (g.out != ".") {
    std::filesystem::create_directories(g.out);
    std::ofstream(std::filesystem::path(g.out) / ("gamma_" + rep + "_" + std::to_string(dim) + ".json")) << text << '\n';
  }
  return 0;
}

int gamma_check(int dim, const std::string& rep, const Globals& g) {
  const dwlab::ValidationReport r = dwlab::check_representation(dwlab::build_gamma_set(dim, rep));
  json j;
  j["dim"] = dim;
  j["rep"] = rep;
  j["tolerance"] = dwlab::ValidationReport::tolerance;
  j["max_residual"] = r.max_residual;
  j["pass"] = r.pass;
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back({{"identity", c.name}, {"residual", c.residual}});
  j["checks"] = checks;
  if (!g.quiet) std::cout << j.dump(2) << '\n';
  return r.pass ? 0 : 3;
}

struct LegendreArgs {
  std::string config;
  int dim = 2;
  int n_fields = 1;
  std::string kinetic = "1";
  std::string potential;
  std::string phi;
  std::string dphi;
};

int legendre_eval(const LegendreArgs& a, const Globals& g) {
  dwlab::LagrangianSpec L = [&] {
    if (!a.config.empty()) return dwlab::load_config_file(a.config).lagrangian();
    if (a.potential.empty()) throw dwlab::ConfigError("legendre eval needs --potential or --config");
    std::string text = "[lagrangian]\nn_fields = " + std::to_string(a.n_fields) + "\nkinetic = \"" + a.kinetic +
                       "\"\npotential = \"" + a.potential + "\"\n[gamma]\ndim = " + std::to_string(a.dim) + "\n";
    if (a.dim != 1 && a.dim != 2 && a.dim != 4) throw dwlab::ConfigError("--dim must be 1, 2 or 4");
    text += a.dim == 2 ? "rep = \"dirac_1p1\"\n" : (a.dim == 4 ? "rep = \"dirac_3p1\"\n" : "");
    return dwlab::parse_config(text).lagrangian();
  }();
  const int A = L.n_fields(), D = L.dim();
  const std::vector<double> phi = parse_numbers(a.phi);
  const std::vector<double> dphi = parse_numbers(a.dphi);
  if (static_cast<int>(phi.size()) != A) throw dwlab::ConfigError("--phi needs " + std::to_string(A) + " values");
  if (static_cast<int>(dphi.size()) != A * D) {
    throw dwlab::ConfigError("--dphi needs " + std::to_string(A * D) + " values (row-major, field by direction)");
  }
  dwlab::JetPoint jet;
  jet.phi = Eigen::Map<const Eigen::VectorXd>(phi.data(), A);
  jet.dphi.resize(A, D);
  for (int r = 0; r < A; ++r) {
    for (int c = 0; c < D; ++c) jet.dphi(r, c) = dphi[static_cast<std::size_t>(r * D + c)];
  }
  const Eigen::MatrixXd pi = dwlab::covariant_momenta(L, jet);
  const dwlab::PhasePoint pp{jet.phi, pi};
  const dwlab::DwRhs rhs = dwlab::dw_rhs(L, pp);
  json j;
  j["lagrangian"] = dwlab::lagrangian_density(L, jet);
  j["momenta"] = real_matrix_json(pi);
  j["hamiltonian"] = dwlab::covariant_hamiltonian(L, pp);
  j["hamiltonian_form_residual"] = dwlab::hamiltonian_form_residual(L, jet);
  j["dH_dpi"] = real_matrix_json(rhs.dH_dpi);
  j["minus_dH_dphi"] = std::vector<double>(rhs.minus_dH_dphi.data(), rhs.minus_dH_dphi.data() + A);
  j["energy_momentum_tensor"] = real_matrix_json(dwlab::energy_momentum_tensor(L, jet));
  if (!g.quiet) std::cout << j.dump(2) << '\n';
  return 0;
}

int run_with(const std::string& path, const std::vector<dwlab::Stage>& stages, const Globals& g) {
  const dwlab::RunConfig c = dwlab::load_config_file(path);
  print_files(g, dwlab::run_stages(c, stages, run_options(g)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dwlab: De Donder-Weyl covariant Hamiltonian field theory toolkit"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "Override the config seed");
  app.add_flag("--quiet", g.quiet, "Suppress progress output");
  app.fallthrough();

  int result = 0;
  std::function<int()> action;

  // gamma
  auto* gamma = app.add_subcommand("gamma", "Gamma-matrix representations");
  gamma->require_subcommand(1);
  int g_dim = 2;
  std::string g_rep = "dirac_1p1";
  for (auto* sub : {gamma->add_subcommand("dump", "Print matrices as JSON"),
                    gamma->add_subcommand("check", "Verify the defining identities")}) {
    sub->add_option("--dim", g_dim, "Spacetime dimension")->capture_default_str();
    sub->add_option("--rep", g_rep, "scalar | dirac_1p1 | dirac_3p1 | kemmer_spin0")->capture_default_str();
    const std::string name = sub->get_name();
    sub->callback([&, name] {
      action = [&, name] { return name == "dump" ? gamma_dump(g_dim, g_rep, g) : gamma_check(g_dim, g_rep, g); };
    });
  }

  // legendre
  auto* legendre = app.add_subcommand("legendre", "Polymomentum Legendre transform");
  legendre->require_subcommand(1);
  LegendreArgs la;
  auto* leval = legendre->add_subcommand("eval", "Evaluate L, pi, H, Theta at a jet point");
  leval->add_option("--config", la.config, "Take the Lagrangian from a config file");
  leval->add_option("--dim", la.dim, "Spacetime dimension (1, 2, 4)")->capture_default_str();
  leval->add_option("--n-fields", la.n_fields, "Number of fields")->capture_default_str();
  leval->add_option("--kinetic", la.kinetic, "Kinetic matrix, rows separated by ';'")->capture_default_str();
  leval->add_option("--potential", la.potential, "Potential polynomial");
  leval->add_option("--phi", la.phi, "Field values, comma separated")->required();
  leval->add_option("--dphi", la.dphi, "Derivatives d_mu phi^a, row-major")->required();
  leval->callback([&] { action = [&] { return legendre_eval(la, g); }; });

  // classical
  std::string cfg_path;
  auto* classical = app.add_subcommand("classical", "Classical DW field evolution");
  classical->require_subcommand(1);
  auto* crun = classical->add_subcommand("run", "Integrate the [classical] section");
  crun->add_option("config", cfg_path, "Config file")->required()->check(CLI::ExistingFile);
  crun->callback([&] { action = [&] { return run_with(cfg_path, {dwlab::Stage::classical}, g); }; });

  // quantum
  auto* quantum = app.add_subcommand("quantum", "Quantum evolution");
  quantum->require_subcommand(1);
  auto* qevolve = quantum->add_subcommand("evolve", "Evolve the wave function per [evolution]");
  qevolve->add_option("config", cfg_path, "Config file")->required()->check(CLI::ExistingFile);
  qevolve->callback([&] { action = [&] { return run_with(cfg_path, {dwlab::Stage::evolution}, g); }; });
  auto* qground = quantum->add_subcommand("groundstate", "Imaginary-time ground state (mechanical limit)");
  bool with_matrix = false;
  qground->add_option("config", cfg_path, "Config file")->required()->check(CLI::ExistingFile);
  qground->add_flag("--hamiltonian-csv", with_matrix, "Also write the field-space Hamiltonian matrix");
  qground->callback([&] {
    action = [&] {
      std::vector<dwlab::Stage> s{dwlab::Stage::groundstate, dwlab::Stage::spectrum};
      if (with_matrix) s.push_back(dwlab::Stage::hamiltonian);
      return run_with(cfg_path, s, g);
    };
  });

  // diagnose
  auto* diagnose = app.add_subcommand("diagnose", "Diagnostics");
  diagnose->require_subcommand(1);
  const std::vector<std::pair<std::string, std::vector<dwlab::Stage>>> diag{
      {"norms", {dwlab::Stage::evolution, dwlab::Stage::norms}},
      {"hmu", {dwlab::Stage::hmu}},
      {"dispersion", {dwlab::Stage::dispersion}}};
  for (const auto& [name, stages] : diag) {
    auto* sub = diagnose->add_subcommand(name, "Write the " + name + " report");
    sub->add_option("config", cfg_path, "Config file")->required()->check(CLI::ExistingFile);
    const auto st = stages;
    sub->callback([&, st] { action = [&, st] { return run_with(cfg_path, st, g); }; });
  }

  // picture
  auto* picture = app.add_subcommand("picture", "Heisenberg / Schrodinger picture toy");
  picture->require_subcommand(1);
  auto* pcheck = picture->add_subcommand("check", "Compare exact translation and the Heisenberg equation");
  pcheck->add_option("config", cfg_path, "Optional config file with a [picture] section")->check(CLI::ExistingFile);
  pcheck->callback([&] {
    action = [&] {
      const dwlab::RunConfig c =
          cfg_path.empty() ? dwlab::parse_config("[lagrangian]\npotential = \"0.5*phi^2\"\n") : dwlab::load_config_file(cfg_path);
      print_files(g, dwlab::run_stages(c, {dwlab::Stage::picture}, run_options(g)));
      return 0;
    };
  });

  // run
  auto* run = app.add_subcommand("run", "Run every stage a config asks for");
  run->add_option("config", cfg_path, "Config file")->required()->check(CLI::ExistingFile);
  run->callback([&] {
    action = [&] {
      const dwlab::RunConfig c = dwlab::load_config_file(cfg_path);
      print_files(g, dwlab::run_config(c, run_options(g)));
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (seed_opt->count() > 0) g.seed = seed;

  try {
    result = action ? action() : 2;
  } catch (const dwlab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return dwlab::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return result;
}
