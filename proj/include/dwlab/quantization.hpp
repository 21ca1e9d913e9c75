// Quantum operators of the Dirac-like scheme on a field-space grid, and the
// plane-wave symbol of Good's momentum operator.
//
//   phi-hat   = multiplication by phi
//   pi-hat^mu = -i Gamma^mu d/dphi                          (Dirac-like)
//   pi-hat^mu = -d^2/(dphi dx_mu)                           (Good, symbol only)
//
// The covariant Hamiltonian H = 1/2 K^-1 g_{mu nu} pi^mu pi^nu + V contracts to
//   g_{mu nu} pi-hat^mu pi-hat^nu = -(g_{mu nu} Gamma^mu Gamma^nu) d^2 = -dim * I * d^2
// for Clifford representations, so
//   H-hat = -(dim/2) K^-1 c d^2/dphi^2 + V(phi),
// with normalization c = 1/dim by default (KineticNormalization::mechanical_exact),
// which makes the kinetic term -1/2 K^-1 d^2 in every dimension and the
// mechanical limit exactly the Schrodinger operator. clifford_trace keeps c = 1.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "dwlab/clifford.hpp"
#include "dwlab/errors.hpp"
#include "dwlab/lagrangian.hpp"
#include "dwlab/wavefunction.hpp"

namespace dwlab {

enum class Scheme { dirac_like, mechanical_schrodinger, good };

inline std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::dirac_like: return "dirac_like";
    case Scheme::mechanical_schrodinger: return "mechanical_schrodinger";
    case Scheme::good: return "good";
  }
  return "?";
}

inline Scheme parse_scheme(std::string_view name) {
  for (auto s : {Scheme::dirac_like, Scheme::mechanical_schrodinger, Scheme::good}) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown scheme '" + std::string(name) + "' (expected dirac_like | mechanical_schrodinger | good)");
}

enum class KineticNormalization { mechanical_exact, clifford_trace };

inline std::string_view to_string(KineticNormalization k) {
  return k == KineticNormalization::mechanical_exact ? "mechanical_exact" : "clifford_trace";
}

inline KineticNormalization parse_kinetic_normalization(std::string_view name) {
  if (name == "mechanical_exact") return KineticNormalization::mechanical_exact;
  if (name == "clifford_trace") return KineticNormalization::clifford_trace;
  throw ConfigError("unknown kinetic normalization '" + std::string(name) +
                    "' (expected mechanical_exact | clifford_trace)");
}

/// Factor multiplying -(dim/2) K^-1 d^2 in H-hat.
inline double kinetic_normalization_factor(KineticNormalization k, int dim) {
  return k == KineticNormalization::mechanical_exact ? 1.0 / dim : 1.0;
}

/// H-hat restricted to one lattice site: spinor identity (x) a real symmetric
/// tridiagonal field-space matrix with diagonal 2a/dq^2 + V_i and off-diagonal -a/dq^2.
class HamiltonianOperator {
 public:
  HamiltonianOperator(Scheme scheme, std::shared_ptr<const GammaSet> gamma, FieldGrid grid,
                      double kinetic_coefficient, Eigen::VectorXd potential)
      : scheme_(scheme), gamma_(std::move(gamma)), grid_(grid), a_(kinetic_coefficient),
        potential_(std::move(potential)) {
    if (potential_.size() != grid_.n_q) throw UsageError("potential samples do not match the field grid");
  }

  Scheme scheme() const { return scheme_; }
  const GammaSet& gamma() const { return *gamma_; }
  const std::shared_ptr<const GammaSet>& gamma_ptr() const { return gamma_; }
  const FieldGrid& grid() const { return grid_; }
  int spinor_dim() const { return gamma_->size(); }
  /// a in the kinetic term -a d^2/dphi^2.
  double kinetic_coefficient() const { return a_; }
  const Eigen::VectorXd& potential() const { return potential_; }

  double off_diagonal() const { return -a_ / (grid_.dq() * grid_.dq()); }
  double diagonal(int i) const { return 2.0 * a_ / (grid_.dq() * grid_.dq()) + potential_(i); }

  /// Dense n_q x n_q field-space block.
  Eigen::MatrixXd field_matrix() const {
    const int n = grid_.n_q;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      m(i, i) = diagonal(i);
      if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = off_diagonal();
    }
    return m;
  }

  template <typename In, typename Out>
  void apply_column(const In& in, Out&& out) const {
    const int n = grid_.n_q;
    const double off = off_diagonal();
    for (int i = 0; i < n; ++i) {
      Complex v = diagonal(i) * in(i);
      if (i > 0) v += off * in(i - 1);
      if (i + 1 < n) v += off * in(i + 1);
      out(i) = v;
    }
  }

  WaveFunction apply(const WaveFunction& psi) const {
    if (psi.grid() != grid_ || psi.spinor_dim() != spinor_dim()) {
      throw UsageError("Hamiltonian applied to a wave function on a different grid/representation");
    }
    WaveFunction out = psi;
    for (int s = 0; s < psi.spinor_dim(); ++s) {
      for (int j = 0; j < psi.n_x(); ++j) apply_column(psi.column(s, j), out.column(s, j));
    }
    return out;
  }

  /// Field-space block as CSV, one row per line.
  void write_csv(std::ostream& os) const {
    const Eigen::MatrixXd m = field_matrix();
    char buf[32];
    for (int r = 0; r < m.rows(); ++r) {
      for (int c = 0; c < m.cols(); ++c) {
        std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
        os << (c ? "," : "") << buf;
      }
      os << '\n';
    }
  }

 private:
  Scheme scheme_;
  std::shared_ptr<const GammaSet> gamma_;
  FieldGrid grid_;
  double a_;
  Eigen::VectorXd potential_;
};

inline Eigen::VectorXd sample_potential(const LagrangianSpec& L, const FieldGrid& grid) {
  Eigen::VectorXd v(grid.n_q);
  for (int i = 0; i < grid.n_q; ++i) {
    const double q = grid.coordinate(i);
    v(i) = L.potential()(std::span<const double>(&q, 1));
  }
  return v;
}

inline HamiltonianOperator assemble_hamiltonian(const LagrangianSpec& L, std::shared_ptr<const GammaSet> g,
                                                const FieldGrid& grid,
                                                KineticNormalization norm = KineticNormalization::mechanical_exact) {
  if (L.n_fields() != 1) {
    throw UnsupportedError("field-space grids support a single field; Lagrangian has " +
                           std::to_string(L.n_fields()));
  }
  if (!g) throw UsageError("assemble_hamiltonian needs a gamma set");
  if (!g->is_dirac_type()) {
    throw UnsupportedError("Hamiltonian assembly needs a Clifford representation (g_{mu nu} Gamma^mu Gamma^nu "
                           "is not proportional to I for " + std::string(to_string(g->rep)) + ")");
  }
  if (g->dim() != L.dim()) {
    throw ConfigError("gamma dim " + std::to_string(g->dim()) + " does not match Lagrangian dim " +
                      std::to_string(L.dim()));
  }
  grid.validate();
  const int dim = L.dim();
  const double a = 0.5 * dim * L.kinetic_inverse()(0, 0) * kinetic_normalization_factor(norm, dim);
  const Scheme scheme = (dim == 1) ? Scheme::mechanical_schrodinger : Scheme::dirac_like;
  return HamiltonianOperator(scheme, std::move(g), grid, a, sample_potential(L, grid));
}

/// phi-hat^a: multiplication by the grid coordinate. Only a = 0 exists on a one-field grid.
inline WaveFunction apply_phi_hat(int a, const WaveFunction& psi) {
  if (a != 0) throw UsageError("field index " + std::to_string(a) + " not on a one-field grid");
  WaveFunction out = psi;
  for (int s = 0; s < psi.spinor_dim(); ++s) {
    for (int j = 0; j < psi.n_x(); ++j) {
      auto col = out.column(s, j);
      for (int i = 0; i < psi.n_q(); ++i) col(i) *= psi.grid().coordinate(i);
    }
  }
  return out;
}

/// Centered first derivative in phi with zero ghost values outside the box.
inline WaveFunction field_derivative(const WaveFunction& psi) {
  WaveFunction out = psi;
  const int n = psi.n_q();
  const double inv = 1.0 / (2.0 * psi.grid().dq());
  for (int s = 0; s < psi.spinor_dim(); ++s) {
    for (int j = 0; j < psi.n_x(); ++j) {
      const auto in = psi.column(s, j);
      auto o = out.column(s, j);
      for (int i = 0; i < n; ++i) {
        const Complex up = i + 1 < n ? in(i + 1) : Complex(0.0);
        const Complex down = i > 0 ? in(i - 1) : Complex(0.0);
        o(i) = (up - down) * inv;
      }
    }
  }
  return out;
}

/// Left-multiply the spinor index by a matrix.
inline WaveFunction apply_spinor_matrix(const CMatrix& m, const WaveFunction& psi) {
  WaveFunction out = psi;
  const int n = psi.spinor_dim();
  for (int j = 0; j < psi.n_x(); ++j) {
    for (int s = 0; s < n; ++s) {
      auto o = out.column(s, j);
      o.setZero();
      for (int t = 0; t < n; ++t) {
        if (m(s, t) != Complex(0.0)) o += m(s, t) * psi.column(t, j);
      }
    }
  }
  return out;
}

/// pi-hat^mu = -i Gamma^mu d/dphi.
inline WaveFunction apply_pi_hat_dirac(int mu, const WaveFunction& psi) {
  if (mu < 0 || mu >= psi.gamma().dim()) {
    throw UsageError("index mu = " + std::to_string(mu) + " out of range for dim " + std::to_string(psi.gamma().dim()));
  }
  return apply_spinor_matrix(Complex(0.0, -1.0) * psi.gamma()[mu], field_derivative(psi));
}

/// Symbol of Good's -d^2/(dphi dx_mu) on exp(i(k phi - omega.x)): -(ik)(-i omega^mu) = -k omega^mu.
/// `omega` holds the contravariant components omega^mu.
inline Complex good_pi_symbol(int mu, double k, std::span<const double> omega) {
  if (mu < 0 || static_cast<std::size_t>(mu) >= omega.size()) throw UsageError("good_pi_symbol: mu out of range");
  return {-k * omega[static_cast<std::size_t>(mu)], 0.0};
}

}  // namespace dwlab
