// Field-space grid and the sampled wave function Psi(phi, x).
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <optional>
#include <string>

#include "dwlab/classical.hpp"
#include "dwlab/clifford.hpp"
#include "dwlab/errors.hpp"

namespace dwlab {

/// Uniform grid on [q_min, q_max], n_q nodes including both ends.
/// Dirichlet walls (Psi = 0) sit on ghost nodes one spacing outside the
/// box, so every stored node is an unknown.
struct FieldGrid {
  int n_q = 256;
  double q_min = -12.0;
  double q_max = 12.0;

  static FieldGrid box(int n_q, double q_min, double q_max) {
    FieldGrid g{n_q, q_min, q_max};
    g.validate();
    return g;
  }

  /// Grid whose Dirichlet walls lie exactly at -half_width and +half_width.
  static FieldGrid with_walls(double half_width, int n_q) {
    const double dq = 2.0 * half_width / (n_q + 1);
    return box(n_q, -half_width + dq, half_width - dq);
  }

  double dq() const { return (q_max - q_min) / (n_q - 1); }
  double coordinate(int i) const { return q_min + i * dq(); }

  void validate() const {
    if (n_q < 8) throw ConfigError("field grid needs n_q >= 8, got " + std::to_string(n_q));
    if (!(q_min < q_max) || !std::isfinite(q_min) || !std::isfinite(q_max)) {
      throw ConfigError("field grid needs finite q_min < q_max");
    }
  }
  bool operator==(const FieldGrid&) const = default;
};

/// Psi sampled on (spinor s, field node i, lattice site j). Storage keeps the
/// field index contiguous: offset = (s * n_x + j) * n_q + i.
class WaveFunction {
 public:
  WaveFunction(std::shared_ptr<const GammaSet> gamma, FieldGrid grid, std::optional<Lattice1D> lattice = {})
      : gamma_(std::move(gamma)), grid_(grid), lattice_(lattice) {
    if (!gamma_) throw UsageError("wave function needs a gamma set");
    grid_.validate();
    if (lattice_) lattice_->validate();
    values_ = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(spinor_dim()) * n_x() * n_q());
  }

  const GammaSet& gamma() const { return *gamma_; }
  const std::shared_ptr<const GammaSet>& gamma_ptr() const { return gamma_; }
  const FieldGrid& grid() const { return grid_; }
  const std::optional<Lattice1D>& lattice() const { return lattice_; }
  int spinor_dim() const { return gamma_->size(); }
  int n_q() const { return grid_.n_q; }
  int n_x() const { return lattice_ ? lattice_->n_x : 1; }
  /// Spatial measure: dx on a lattice, 1 without one.
  double dx() const { return lattice_ ? lattice_->dx : 1.0; }

  Eigen::Index offset(int s, int i, int j) const {
    return (static_cast<Eigen::Index>(s) * n_x() + j) * n_q() + i;
  }
  Complex& operator()(int s, int i, int j = 0) { return values_(offset(s, i, j)); }
  const Complex& operator()(int s, int i, int j = 0) const { return values_(offset(s, i, j)); }

  /// Contiguous field-direction column for fixed (s, j).
  auto column(int s, int j) { return values_.segment(offset(s, 0, j), n_q()); }
  auto column(int s, int j) const { return values_.segment(offset(s, 0, j), n_q()); }

  Eigen::VectorXcd& values() { return values_; }
  const Eigen::VectorXcd& values() const { return values_; }

  double time = 0.0;

  bool same_shape(const WaveFunction& o) const {
    return gamma_->rep == o.gamma_->rep && gamma_->dim() == o.gamma_->dim() && grid_ == o.grid_ &&
           lattice_ == o.lattice_;
  }
  bool all_finite() const { return values_.allFinite(); }

 private:
  std::shared_ptr<const GammaSet> gamma_;
  FieldGrid grid_;
  std::optional<Lattice1D> lattice_;
  Eigen::VectorXcd values_;
};

/// Sum over sites (weight dx) of the field-space quadrature of Psi^dagger M Phi.
/// Walls carry Psi = 0, so the trapezoid rule on the extended grid is dq * sum.
inline Complex weighted_product(const WaveFunction& psi, const WaveFunction& phi, const CMatrix& m) {
  if (!psi.same_shape(phi)) throw UsageError("scalar product of wave functions with different shapes");
  const int n = psi.spinor_dim();
  Complex total = 0.0;
  for (int j = 0; j < psi.n_x(); ++j) {
    for (int s = 0; s < n; ++s) {
      for (int t = 0; t < n; ++t) {
        const Complex w = m(s, t);
        if (w == Complex(0.0)) continue;
        total += w * psi.column(s, j).dot(phi.column(t, j));  // dot conjugates the left operand
      }
    }
  }
  return total * psi.grid().dq() * psi.dx();
}

/// Positive-definite L2 product, sum Psi^dagger Phi.
inline Complex plain_product(const WaveFunction& psi, const WaveFunction& phi) {
  return weighted_product(psi, phi, CMatrix::Identity(psi.spinor_dim(), psi.spinor_dim()));
}

inline double norm_plus(const WaveFunction& psi) { return plain_product(psi, psi).real(); }

}  // namespace dwlab
