// Config-driven pipeline: runs the requested stages and writes CSV/JSON
// reports plus manifest.json into an output directory. Numbers are written
// with %.17g so identical inputs give byte-identical report files.
#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "dwlab/classical.hpp"
#include "dwlab/config.hpp"
#include "dwlab/diagnostics.hpp"
#include "dwlab/evolution.hpp"
#include "dwlab/picture.hpp"
#include "dwlab/quantization.hpp"

namespace dwlab {

inline constexpr const char* version_string = "0.1.0";

inline std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
  return buf;
}

enum class Stage { classical, evolution, groundstate, spectrum, hamiltonian, norms, hmu, dispersion, picture };

inline std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::classical: return "classical";
    case Stage::evolution: return "evolution";
    case Stage::groundstate: return "groundstate";
    case Stage::spectrum: return "spectrum";
    case Stage::hamiltonian: return "hamiltonian";
    case Stage::norms: return "norms";
    case Stage::hmu: return "hmu";
    case Stage::dispersion: return "dispersion";
    case Stage::picture: return "picture";
  }
  return "?";
}

/// Stages implied by a config: classical/evolution when their sections exist,
/// then every report listed under [diagnostics].
inline std::vector<Stage> stages_for(const RunConfig& c) {
  std::vector<Stage> out;
  if (c.classical) out.push_back(Stage::classical);
  if (c.evolution) out.push_back(Stage::evolution);
  for (const auto& r : c.reports) {
    for (auto s : {Stage::groundstate, Stage::spectrum, Stage::hamiltonian, Stage::norms, Stage::hmu,
                   Stage::dispersion, Stage::picture}) {
      if (to_string(s) == r) out.push_back(s);
    }
  }
  return out;
}

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed_override;
  std::ostream* log = nullptr;  // progress lines; null when quiet
};

struct RunResult {
  std::vector<std::string> files;
  std::optional<double> ground_energy;
  std::optional<EvolutionTrace> trace;
};

/// Quantum initial data from the [initial] section; normalized to norm_plus = 1.
inline WaveFunction initial_state(const RunConfig& c, const HamiltonianOperator& h, std::uint64_t seed) {
  const auto& in = c.initial;
  const auto gamma = h.gamma_ptr();
  const auto lattice = c.spatial_lattice();
  const double length = lattice ? lattice->length() : 1.0;
  const double kx = 2.0 * std::numbers::pi * in.mode / length;
  auto envelope = [&](double x) {
    const double u = (x - in.packet_center) / in.packet_width;
    return std::exp(-0.5 * u * u);
  };
  auto fixed_spinor = [&](int s) -> Complex {
    if (gamma->size() == 1) return 1.0;
    return s == 0 ? in.upper : (s == 1 ? in.lower : 0.0);
  };

  WaveFunction psi(gamma, c.grid, lattice);
  if (in.kind == "gaussian") {
    psi = product_state(gamma, c.grid, lattice, gaussian_profile(c.grid, in.center, in.width, in.momentum),
                        [&](int s, double) { return fixed_spinor(s); });
  } else if (in.kind == "eigenstate") {
    psi = product_state(gamma, c.grid, lattice, field_eigenstate(h, in.level).second,
                        [&](int s, double) { return fixed_spinor(s); });
  } else if (in.kind == "dirac_packet") {
    psi = product_state(gamma, c.grid, lattice, field_eigenstate(h, in.level).second, [&](int s, double x) {
      return fixed_spinor(s) * envelope(x) * std::polar(1.0, kx * x);
    });
  } else if (in.kind == "dirac_plane_wave") {
    if (gamma->rep != Representation::dirac_1p1) throw ConfigError("initial.kind: dirac_plane_wave needs dirac_1p1");
    const auto [mu, field] = field_eigenstate(h, in.level);
    const double k_eff = lattice ? std::sin(kx * lattice->dx) / lattice->dx : kx;
    const Eigen::Vector2cd u = dirac_plane_wave_spinor(*gamma, mu, k_eff, +1);
    psi = product_state(gamma, c.grid, lattice, field, [&](int s, double x) { return u(s) * std::polar(1.0, kx * x); });
  } else {  // random
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const Eigen::VectorXcd env = gaussian_profile(c.grid, in.center, in.width, in.momentum);
    for (int s = 0; s < psi.spinor_dim(); ++s) {
      for (int j = 0; j < psi.n_x(); ++j) {
        for (int i = 0; i < psi.n_q(); ++i) psi(s, i, j) = env(i) * Complex(uni(rng), uni(rng));
      }
    }
  }
  const double n = norm_plus(psi);
  if (!(n > 0.0)) throw ConfigError("initial state has zero norm (check initial.upper / initial.lower)");
  psi.values() /= std::sqrt(n);
  return psi;
}

namespace detail {

class Pipeline {
 public:
  Pipeline(const RunConfig& c, const RunOptions& o) : c_(c), o_(o) {
    seed_ = o.seed_override.value_or(c.seed);
    std::filesystem::create_directories(o.out_dir);
  }

  RunResult run(const std::vector<Stage>& stages) {
    const auto start = std::chrono::steady_clock::now();
    const std::time_t started = std::time(nullptr);
    for (Stage s : stages) {
      log(std::string("stage ") + std::string(to_string(s)));
      switch (s) {
        case Stage::classical: classical(); break;
        case Stage::evolution: evolution(); break;
        case Stage::groundstate: groundstate(); break;
        case Stage::spectrum: spectrum(); break;
        case Stage::hamiltonian: hamiltonian_csv(); break;
        case Stage::norms: norms(); break;
        case Stage::hmu: hmu(); break;
        case Stage::dispersion: dispersion(); break;
        case Stage::picture: picture(); break;
      }
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    manifest(stages, started, wall);
    result_.files.push_back("manifest.json");
    return result_;
  }

 private:
  void log(const std::string& m) const {
    if (o_.log) *o_.log << "[dwlab] " << m << '\n';
  }

  std::ofstream open(const std::string& name) {
    std::ofstream f(o_.out_dir / name, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + (o_.out_dir / name).string());
    result_.files.push_back(name);
    return f;
  }

  const LagrangianSpec& lagrangian() {
    if (!L_) L_ = c_.lagrangian();
    return *L_;
  }

  const HamiltonianOperator& hamiltonian() {
    if (!H_) H_ = assemble_hamiltonian(lagrangian(), c_.gamma(), c_.grid, c_.normalization);
    return *H_;
  }

  const EvolutionTrace& trace() {
    if (!result_.trace) evolution();
    return *result_.trace;
  }

  void classical() {
    if (!c_.classical) throw ConfigError("classical: config has no [classical] section");
    const auto& k = *c_.classical;
    const LagrangianSpec& L = lagrangian();
    const bool spatial = L.dim() == 2;
    const Lattice1D lattice = spatial ? c_.lattice : Lattice1D{1, 1.0};
    ClassicalFieldState s = ClassicalFieldState::zeros(lattice);
    const double kin = L.kinetic()(0, 0);
    for (int j = 0; j < lattice.n_x; ++j) {
      const double shape = spatial ? std::cos(2.0 * std::numbers::pi * k.mode * lattice.coordinate(j) / lattice.length()) : 1.0;
      s.phi[static_cast<std::size_t>(j)] = k.amplitude * shape;
      s.pi0[static_cast<std::size_t>(j)] = kin * k.velocity * shape;
    }
    std::ofstream f = open("classical.csv");
    f << "t,site,x,phi,pi0,energy\n";
    auto write = [&](const ClassicalFieldState& st) {
      const auto density = classical_energy_density(L, st);
      const std::string t = format_number(st.time);
      for (int j = 0; j < lattice.n_x; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        f << t << ',' << j << ',' << format_number(spatial ? lattice.coordinate(j) : 0.0) << ','
          << format_number(st.phi[jj]) << ',' << format_number(st.pi0[jj]) << ',' << format_number(density[jj]) << '\n';
      }
      f << t << ",total,,,," << format_number(classical_energy(L, st)) << '\n';
    };
    write(s);
    dw_evolve(L, s, k.dt, k.n_steps, [&](const ClassicalFieldState& st, long step) {
      if (step % k.output_stride == 0) write(st);
    });
  }

  void evolution() {
    if (!c_.evolution) throw ConfigError("evolution: config has no [evolution] section");
    const HamiltonianOperator& h = hamiltonian();
    const WaveFunction psi0 = initial_state(c_, h, seed_);
    result_.trace = evolve(psi0, h, *c_.evolution);
    const EvolutionTrace& t = *result_.trace;
    std::ofstream f = open("evolution.csv");
    f << "t,norm_plus,norm_bar,energy\n";
    for (std::size_t k = 0; k < t.size(); ++k) {
      f << format_number(t.times[k]) << ',' << format_number(t.norm_plus[k]) << ',' << format_number(t.norm_bar[k])
        << ',' << format_number(t.energy[k]) << '\n';
    }
  }

  void groundstate() {
    ImaginaryTimeOptions opts;
    opts.dtau = c_.groundstate.dtau;
    const GroundState gs = ground_state_imaginary_time(hamiltonian(), c_.grid, c_.groundstate.tol, opts);
    result_.ground_energy = gs.energy;
    std::ofstream f = open("groundstate.csv");
    f << "iteration,energy\n";
    for (std::size_t k = 0; k < gs.energy_history.size(); ++k) {
      f << (k + 1) << ',' << format_number(gs.energy_history[k]) << '\n';
    }
    f << "E0," << format_number(gs.energy) << '\n';
    log("E0 = " + format_number(gs.energy));
  }

  void spectrum() {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hamiltonian().field_matrix(), Eigen::EigenvaluesOnly);
    std::ofstream f = open("spectrum.csv");
    f << "n,eigenvalue\n";
    const int n = std::min<int>(c_.groundstate.levels, static_cast<int>(es.eigenvalues().size()));
    for (int k = 0; k < n; ++k) f << k << ',' << format_number(es.eigenvalues()(k)) << '\n';
  }

  void hamiltonian_csv() {
    std::ofstream f = open("hamiltonian.csv");
    hamiltonian().write_csv(f);
  }

  void norms() {
    const auto rows = norm_drift(trace());
    std::ofstream f = open("norms.csv");
    f << "t,norm_plus,norm_bar,d_norm_plus_dt,d_norm_bar_dt\n";
    for (const auto& r : rows) {
      f << format_number(r.t) << ',' << format_number(r.norm_plus) << ',' << format_number(r.norm_bar) << ','
        << format_number(r.d_norm_plus_dt) << ',' << format_number(r.d_norm_bar_dt) << '\n';
    }
  }

  void hmu() {
    if (result_.trace && result_.trace->snapshots.empty()) result_.trace.reset();
    if (!result_.trace) {
      RunConfig copy = c_;
      copy.evolution->store_snapshots = true;
      const HamiltonianOperator& h = hamiltonian();
      result_.trace = evolve(initial_state(copy, h, seed_), h, *copy.evolution);
    }
    const HamiltonianOperator& h = hamiltonian();
    const HmuSeries series = h_mu_residual(result_.trace->snapshots, h.gamma(), h);
    std::ofstream f = open("hmu.csv");
    f << "t,residual\n";
    for (std::size_t k = 0; k < series.times.size(); ++k) {
      f << format_number(series.times[k]) << ',' << format_number(series.residuals[k]) << '\n';
    }
  }

  void dispersion() {
    DispersionOptions opts;
    opts.mu = c_.dispersion.mu;
    opts.normalization = c_.normalization;
    std::ofstream f = open("dispersion.csv");
    f << "scheme,k,re,im,multiplicity\n";
    for (Scheme s : c_.dispersion.schemes) {
      const DispersionTable table = dispersion_table(s, lagrangian(), c_.dispersion.k, opts);
      for (const auto& row : table.rows) {
        if (row.degenerate) {
          f << to_string(s) << ',' << format_number(row.k) << ",,,all\n";
          continue;
        }
        if (row.omegas.empty()) {
          f << to_string(s) << ',' << format_number(row.k) << ",,,none\n";
          continue;
        }
        if (row.omegas.empty()) {
          f << to_string(s) << ',' << format_number(row.k) << ",,,none\n";
          continue;
        }
        for (std::size_t i = 0; i < row.omegas.size(); ++i) {
          f << to_string(s) << ',' << format_number(row.k) << ',' << format_number(row.omegas[i].real()) << ','
            << format_number(row.omegas[i].imag()) << ',' << row.multiplicities[i] << '\n';
        }
      }
    }
  }

  void picture() {
    const auto& p = c_.picture;
    const FockTruncation f = FockTruncation::create(p.n_max);
    CMatrix o = f.a;
    if (p.observable == "a+adag") o = f.a + f.adag();
    if (p.observable == "h") o = f.h;
    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(f.size());
    if (p.state == "0") {
      psi0(0) = 1.0;
    } else if (p.state == "01") {
      psi0(0) = psi0(1) = 1.0;
    } else {
      std::mt19937_64 rng(seed_);
      std::uniform_real_distribution<double> uni(-1.0, 1.0);
      for (int n = 0; n < f.protected_size(); ++n) psi0(n) = Complex(uni(rng), uni(rng));
    }
    psi0.normalize();
    std::vector<double> t_grid(static_cast<std::size_t>(p.n_t));
    for (int k = 0; k < p.n_t; ++k) t_grid[static_cast<std::size_t>(k)] = p.t_max * k / (p.n_t - 1);
    const PictureCheckReport r = schrodinger_picture_check(f, psi0, t_grid, &o);
    nlohmann::ordered_json j;
    j["n_max"] = p.n_max;
    j["observable"] = p.observable;
    j["state"] = p.state;
    j["t"] = r.t_values;
    j["heisenberg_residual"] = r.heisenberg_residuals;
    j["schrodinger_residual"] = r.schrodinger_residuals;
    j["max_heisenberg_residual"] = *std::max_element(r.heisenberg_residuals.begin(), r.heisenberg_residuals.end());
    j["max_schrodinger_residual"] =
        *std::max_element(r.schrodinger_residuals.begin(), r.schrodinger_residuals.end());
    std::ofstream out = open("picture.json");
    out << j.dump(2) << '\n';
  }

  void manifest(const std::vector<Stage>& stages, std::time_t started, double wall) {
    char hash[20];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a64(c_.source_text)));
    char when[32];
    std::strftime(when, sizeof when, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&started));
    nlohmann::ordered_json j;
    j["version"] = version_string;
    j["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                         std::to_string(EIGEN_MINOR_VERSION);
    j["config_hash"] = std::string("fnv1a64:") + hash;
    j["seed"] = seed_;
    j["started_at"] = when;
    j["wall_time_seconds"] = wall;
    nlohmann::ordered_json names = nlohmann::ordered_json::array();
    for (Stage s : stages) names.push_back(std::string(to_string(s)));
    j["reports"] = names;
    j["files"] = result_.files;
    std::ofstream f(o_.out_dir / "manifest.json", std::ios::binary);
    f << j.dump(2) << '\n';
  }

  const RunConfig& c_;
  const RunOptions& o_;
  std::uint64_t seed_ = 0;
  std::optional<LagrangianSpec> L_;
  std::optional<HamiltonianOperator> H_;
  RunResult result_;
};

}  // namespace detail

inline RunResult run_stages(const RunConfig& c, const std::vector<Stage>& stages, const RunOptions& opts = {}) {
  return detail::Pipeline(c, opts).run(stages);
}

inline RunResult run_config(const RunConfig& c, const RunOptions& opts = {}) {
  return run_stages(c, stages_for(c), opts);
}

inline RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config(text);
}

}  // namespace dwlab
