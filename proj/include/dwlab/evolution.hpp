// Time stepping of the Dirac-like equation  i Gamma^mu d_mu Psi = H-hat Psi.
//
// Solving for the time derivative (Gamma^0 is invertible for Clifford reps):
//   d_t Psi = (Gamma^0)^-1 ( -i H-hat Psi - sum_{k>=1} Gamma^k d_k Psi )
// In the mechanical limit (dim 1, Gamma^0 = 1) this is the Schrodinger
// equation i d_t Psi = H-hat Psi. The spatial derivative is a centered
// periodic difference; the field-space derivatives live inside H-hat.
//
// Steppers and their time-step bounds:
//   rk4             any supported dim;  dt <= 0.5 * min(dq^2 / (2a), dx)
//   crank_nicolson  mechanics only;     unconditionally stable, exactly norm-preserving
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dwlab/clifford.hpp"
#include "dwlab/errors.hpp"
#include "dwlab/quantization.hpp"
#include "dwlab/wavefunction.hpp"

namespace dwlab {

enum class Stepper { rk4, crank_nicolson };

inline std::string_view to_string(Stepper s) { return s == Stepper::rk4 ? "rk4" : "crank_nicolson"; }

inline Stepper parse_stepper(std::string_view name) {
  if (name == "rk4") return Stepper::rk4;
  if (name == "crank_nicolson") return Stepper::crank_nicolson;
  throw ConfigError("unknown stepper '" + std::string(name) + "' (expected rk4 | crank_nicolson)");
}

struct EvolutionConfig {
  Scheme scheme = Scheme::mechanical_schrodinger;
  double dt = 1e-3;
  long n_steps = 1000;
  Stepper stepper = Stepper::crank_nicolson;
  long output_stride = 1;
  bool store_snapshots = false;
};

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> norm_plus;  // sum Psi^dagger Psi
  std::vector<double> norm_bar;   // sum Psi-bar Psi (may be negative)
  std::vector<double> energy;     // <Psi|H-hat|Psi> with the positive product
  std::vector<WaveFunction> snapshots;

  std::size_t size() const { return times.size(); }
};

inline Complex bar_product(const WaveFunction& psi, const WaveFunction& phi) {
  return weighted_product(psi, phi, psi.gamma().gamma0_hermitizer);
}

inline double norm_bar(const WaveFunction& psi) { return bar_product(psi, psi).real(); }

inline double energy_expectation(const HamiltonianOperator& h, const WaveFunction& psi) {
  return plain_product(psi, h.apply(psi)).real();
}

namespace detail {

/// Thomas algorithm for a constant-off-diagonal complex tridiagonal system.
class TridiagonalSolver {
 public:
  TridiagonalSolver(Eigen::VectorXcd diag, Complex off) : off_(off), c_(diag.size()), inv_(diag.size()) {
    const Eigen::Index n = diag.size();
    Complex denom = diag(0);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i > 0) denom = diag(i) - off_ * c_(i - 1);
      inv_(i) = 1.0 / denom;
      c_(i) = off_ * inv_(i);
    }
  }

  template <typename Vec>
  void solve_in_place(Vec&& x) const {
    const Eigen::Index n = c_.size();
    x(0) *= inv_(0);
    for (Eigen::Index i = 1; i < n; ++i) x(i) = (x(i) - off_ * x(i - 1)) * inv_(i);
    for (Eigen::Index i = n - 2; i >= 0; --i) x(i) -= c_(i) * x(i + 1);
  }

 private:
  Complex off_;
  Eigen::VectorXcd c_;
  Eigen::VectorXcd inv_;
};

/// Semi-discrete right-hand side d_t Psi = F(Psi) on the raw value layout.
class DiracLikeSystem {
 public:
  DiracLikeSystem(const HamiltonianOperator& h, const WaveFunction& shape)
      : h_(h), n_s_(shape.spinor_dim()), n_q_(shape.n_q()), n_x_(shape.n_x()), dx_(shape.dx()),
        spatial_(shape.lattice().has_value() && shape.gamma().dim() == 2 && shape.n_x() > 1) {
    const GammaSet& g = shape.gamma();
    g0_inv_ = g[0].inverse();
    if (g.dim() == 2) {
      // (Gamma^0)^-1 Gamma^1 multiplies d_x Psi.
      g0_inv_g1_ = g0_inv_ * g[1];
    }
  }

  void operator()(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
    h_psi_.resize(in.size());
    for (int s = 0; s < n_s_; ++s) {
      for (int j = 0; j < n_x_; ++j) {
        const Eigen::Index o = off(s, 0, j);
        h_.apply_column(in.segment(o, n_q_), h_psi_.segment(o, n_q_));
      }
    }
    if (spatial_) {
      dx_psi_.resize(in.size());
      const double inv = 1.0 / (2.0 * dx_);
      for (int s = 0; s < n_s_; ++s) {
        for (int j = 0; j < n_x_; ++j) {
          const int jp = (j + 1) % n_x_;
          const int jm = (j + n_x_ - 1) % n_x_;
          dx_psi_.segment(off(s, 0, j), n_q_) =
              (in.segment(off(s, 0, jp), n_q_) - in.segment(off(s, 0, jm), n_q_)) * inv;
        }
      }
    }
    out.setZero(in.size());
    const Complex minus_i(0.0, -1.0);
    for (int s = 0; s < n_s_; ++s) {
      for (int j = 0; j < n_x_; ++j) {
        auto o = out.segment(off(s, 0, j), n_q_);
        for (int t = 0; t < n_s_; ++t) {
          const Complex a = minus_i * g0_inv_(s, t);
          if (a != Complex(0.0)) o += a * h_psi_.segment(off(t, 0, j), n_q_);
          if (spatial_) {
            const Complex b = -g0_inv_g1_(s, t);
            if (b != Complex(0.0)) o += b * dx_psi_.segment(off(t, 0, j), n_q_);
          }
        }
      }
    }
  }

 private:
  Eigen::Index off(int s, int i, int j) const { return (static_cast<Eigen::Index>(s) * n_x_ + j) * n_q_ + i; }

  const HamiltonianOperator& h_;
  int n_s_, n_q_, n_x_;
  double dx_;
  bool spatial_;
  CMatrix g0_inv_;
  CMatrix g0_inv_g1_;
  Eigen::VectorXcd h_psi_;
  Eigen::VectorXcd dx_psi_;
};

inline void validate_evolution(const WaveFunction& psi, const HamiltonianOperator& h, const EvolutionConfig& cfg) {
  const GammaSet& g = psi.gamma();
  if (!g.is_dirac_type()) throw UnsupportedError("evolution with the Kemmer representation is not supported");
  if (g.dim() > 2) throw UnsupportedError("evolution supports dim 1 (mechanics) and dim 2 (1+1) only");
  if (cfg.scheme == Scheme::good) {
    throw UnsupportedError("Good's scheme has no time-domain integrator (use the dispersion analysis)");
  }
  if (cfg.scheme == Scheme::mechanical_schrodinger && (g.dim() != 1 || g.rep != Representation::scalar)) {
    throw ConfigError("scheme mechanical_schrodinger needs dim 1 with the scalar representation");
  }
  if (cfg.stepper == Stepper::crank_nicolson && g.dim() != 1) {
    throw ConfigError("crank_nicolson is offered for mechanics (dim 1) only");
  }
  if (psi.grid() != h.grid() || psi.spinor_dim() != h.spinor_dim()) {
    throw UsageError("initial wave function does not match the Hamiltonian grid/representation");
  }
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("evolution.dt must be > 0");
  if (cfg.n_steps < 0) throw ConfigError("evolution.n_steps must be >= 0");
  if (cfg.output_stride < 1) throw ConfigError("evolution.output_stride must be >= 1");
  if (cfg.stepper == Stepper::rk4) {
    const double dq = psi.grid().dq();
    double bound = dq * dq / (2.0 * h.kinetic_coefficient());
    if (psi.lattice() && psi.n_x() > 1 && g.dim() == 2) bound = std::min(bound, psi.dx());
    bound *= 0.5;
    if (cfg.dt > bound) {
      throw ConfigError("CFL violation: rk4 needs dt <= " + std::to_string(bound) + ", got " + std::to_string(cfg.dt));
    }
  }
}

}  // namespace detail

/// Advances psi0 by cfg.n_steps steps, recording norms and energy at every
/// output_stride-th step (step 0 included).
inline EvolutionTrace evolve(const WaveFunction& psi0, const HamiltonianOperator& h, const EvolutionConfig& cfg) {
  detail::validate_evolution(psi0, h, cfg);
  EvolutionTrace trace;
  WaveFunction psi = psi0;
  auto record = [&] {
    trace.times.push_back(psi.time);
    trace.norm_plus.push_back(norm_plus(psi));
    trace.norm_bar.push_back(norm_bar(psi));
    trace.energy.push_back(energy_expectation(h, psi));
    if (cfg.store_snapshots) trace.snapshots.push_back(psi);
  };
  record();

  const double dt = cfg.dt;
  const double t0 = psi0.time;
  auto check = [&](long step) {
    if (!psi.all_finite()) throw DivergenceError("non-finite wave function", step);
  };

  if (cfg.stepper == Stepper::crank_nicolson) {
    // (1 + i dt/2 H) psi' = (1 - i dt/2 H) psi
    const Complex half(0.0, 0.5 * dt);
    Eigen::VectorXcd diag(h.grid().n_q);
    for (int i = 0; i < h.grid().n_q; ++i) diag(i) = 1.0 + half * h.diagonal(i);
    const detail::TridiagonalSolver solver(diag, half * h.off_diagonal());
    Eigen::VectorXcd hpsi(h.grid().n_q);
    for (long step = 1; step <= cfg.n_steps; ++step) {
      auto col = psi.column(0, 0);
      h.apply_column(col, hpsi);
      col -= half * hpsi;
      solver.solve_in_place(col);
      psi.time = t0 + dt * static_cast<double>(step);
      check(step);
      if (step % cfg.output_stride == 0) record();
    }
    return trace;
  }

  detail::DiracLikeSystem rhs(h, psi0);
  Eigen::VectorXcd k1, k2, k3, k4, tmp;
  for (long step = 1; step <= cfg.n_steps; ++step) {
    Eigen::VectorXcd& y = psi.values();
    rhs(y, k1);
    tmp = y + 0.5 * dt * k1;
    rhs(tmp, k2);
    tmp = y + 0.5 * dt * k2;
    rhs(tmp, k3);
    tmp = y + dt * k3;
    rhs(tmp, k4);
    y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    psi.time = t0 + dt * static_cast<double>(step);
    check(step);
    if (step % cfg.output_stride == 0) record();
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Imaginary-time ground state (mechanical limit).

struct GroundState {
  double energy = 0.0;
  WaveFunction psi;
  std::vector<double> energy_history;  // Rayleigh quotient after each renormalization
};

struct ImaginaryTimeOptions {
  double dtau = 0.5;
  long max_iterations = 100000;
};

/// Backward-Euler imaginary-time propagation (1 + dtau H) psi' = psi with
/// renormalization each step. The amplification 1/(1 + dtau lambda) is positive
/// and decreasing in lambda, so the energy never increases between iterations.
inline GroundState ground_state_imaginary_time(const HamiltonianOperator& h, const FieldGrid& grid, double tol,
                                               ImaginaryTimeOptions opts = {}) {
  const GammaSet& g = h.gamma();
  if (g.dim() != 1 || g.rep != Representation::scalar) {
    throw UnsupportedError("imaginary-time ground state is for the mechanical limit (scalar representation) only");
  }
  if (grid != h.grid()) throw UsageError("ground state grid differs from the Hamiltonian grid");
  if (!(tol > 0.0)) throw ConfigError("tolerance must be > 0");

  WaveFunction psi(h.gamma_ptr(), grid);
  // A positive start has non-zero overlap with the nodeless ground state.
  psi.values().setOnes();
  psi.values() /= std::sqrt(norm_plus(psi));

  Eigen::VectorXcd diag(grid.n_q);
  for (int i = 0; i < grid.n_q; ++i) diag(i) = 1.0 + opts.dtau * h.diagonal(i);
  const detail::TridiagonalSolver solver(diag, opts.dtau * h.off_diagonal());

  GroundState out{0.0, psi, {}};
  double previous = energy_expectation(h, psi);
  for (long it = 1; it <= opts.max_iterations; ++it) {
    solver.solve_in_place(psi.column(0, 0));
    psi.values() /= std::sqrt(norm_plus(psi));
    const double e = energy_expectation(h, psi);
    out.energy_history.push_back(e);
    if (!std::isfinite(e)) throw DivergenceError("non-finite energy in imaginary time", it);
    if (std::fabs(e - previous) < tol) {
      out.energy = e;
      out.psi = psi;
      return out;
    }
    previous = e;
  }
  throw ConvergenceError("imaginary-time propagation did not converge; last energy " + std::to_string(previous),
                         previous);
}

// ---------------------------------------------------------------------------
// Initial data.

/// exp(-(q-c)^2 / (2 w^2)) exp(i k q), normalized so dq * sum |f|^2 = 1.
inline Eigen::VectorXcd gaussian_profile(const FieldGrid& grid, double center, double width, double k = 0.0) {
  Eigen::VectorXcd f(grid.n_q);
  for (int i = 0; i < grid.n_q; ++i) {
    const double q = grid.coordinate(i);
    const double x = (q - center) / width;
    f(i) = std::exp(-0.5 * x * x) * std::polar(1.0, k * q);
  }
  return f / std::sqrt(f.squaredNorm() * grid.dq());
}

/// n-th eigenvector of the field-space block (dense eigensolve), normalized,
/// sign fixed so the largest-magnitude entry is positive.
inline std::pair<double, Eigen::VectorXcd> field_eigenstate(const HamiltonianOperator& h, int n) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.field_matrix());
  if (n < 0 || n >= h.grid().n_q) throw UsageError("eigenstate index out of range");
  Eigen::VectorXd v = es.eigenvectors().col(n);
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v(imax) < 0) v = -v;
  v /= std::sqrt(v.squaredNorm() * h.grid().dq());
  return {es.eigenvalues()(n), v.cast<Complex>()};
}

/// Psi(s, i, j) = field(i) * spinor(s, x_j).
inline WaveFunction product_state(std::shared_ptr<const GammaSet> gamma, const FieldGrid& grid,
                                  std::optional<Lattice1D> lattice, const Eigen::VectorXcd& field,
                                  const std::function<Complex(int, double)>& spinor) {
  WaveFunction psi(std::move(gamma), grid, lattice);
  if (field.size() != grid.n_q) throw UsageError("field profile length does not match the grid");
  for (int s = 0; s < psi.spinor_dim(); ++s) {
    for (int j = 0; j < psi.n_x(); ++j) {
      const double x = lattice ? lattice->coordinate(j) : 0.0;
      psi.column(s, j) = spinor(s, x) * field;
    }
  }
  return psi;
}

/// Positive (sign = +1) or negative energy eigenspinor of the 1+1 Dirac
/// plane-wave Hamiltonian h(k) = gamma^0 mu + k gamma^0 gamma^1.
inline Eigen::Vector2cd dirac_plane_wave_spinor(const GammaSet& g, double mu, double k, int sign) {
  if (g.rep != Representation::dirac_1p1) throw UsageError("plane-wave spinors need dirac_1p1");
  const CMatrix hk = g[0] * mu + k * g[0] * g[1];
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hk);
  Eigen::Vector2cd u = es.eigenvectors().col(sign > 0 ? 1 : 0);
  // Deterministic phase: make the first non-negligible component real positive.
  const int ref = std::abs(u(0)) > 1e-12 ? 0 : 1;
  u *= std::conj(u(ref)) / std::abs(u(ref));
  return u;
}

}  // namespace dwlab
