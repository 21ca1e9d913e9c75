// Heisenberg and "pure Schrodinger" pictures on a truncated single-mode Fock
// space, with P_0 = H = a^dagger a (the Legendre transform of a*(i adot - a)).
//
// Conventions. Translation by t:
//     O_H(t) = e^{iHt} O e^{-iHt}
// and the state that reproduces the same expectation values with
// time-independent operators is
//     Psi_S(t) = e^{-iHt} psi_0,   i d_t Psi_S = H Psi_S.
// The opposite sign, Psi_S = e^{+iHt} psi_0, would give i d_t Psi_S = -H Psi_S
// and contradict the generalized Schrodinger equation; the translation rule
// above fixes the sign.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "dwlab/clifford.hpp"
#include "dwlab/errors.hpp"

namespace dwlab {

struct FockTruncation {
  int n_max = 2;
  CMatrix a;  // annihilation, (n_max+1)^2
  CMatrix h;  // a^dagger a

  static FockTruncation create(int n_max) {
    if (n_max < 2) throw ConfigError("Fock truncation needs n_max >= 2");
    FockTruncation f;
    f.n_max = n_max;
    const int d = n_max + 1;
    f.a = CMatrix::Zero(d, d);
    for (int n = 1; n < d; ++n) f.a(n - 1, n) = std::sqrt(static_cast<double>(n));
    f.h = f.a.adjoint() * f.a;
    return f;
  }

  int size() const { return n_max + 1; }
  CMatrix adag() const { return a.adjoint(); }
  /// Basis states n < n_max - 2 are far enough from the cut to be protected.
  int protected_size() const { return n_max - 2; }
};

struct PictureCheckReport {
  std::vector<double> t_values;
  std::vector<double> heisenberg_residuals;
  std::vector<double> schrodinger_residuals;
};

namespace detail {

inline Eigen::VectorXd diagonal_energies(const FockTruncation& f) {
  // H is diagonal in the number basis; its eigendecomposition is the diagonal.
  return f.h.diagonal().real();
}

/// e^{sign i H t} via the eigendecomposition of H.
inline Eigen::VectorXcd phases(const FockTruncation& f, double t, int sign) {
  const Eigen::VectorXd e = diagonal_energies(f);
  Eigen::VectorXcd p(e.size());
  for (Eigen::Index n = 0; n < e.size(); ++n) p(n) = std::polar(1.0, sign * e(n) * t);
  return p;
}

inline double block_max_abs(const CMatrix& m, int size) {
  return size <= 0 ? 0.0 : m.topLeftCorner(size, size).cwiseAbs().maxCoeff();
}

}  // namespace detail

/// e^{iHt} O e^{-iHt} from exact phases.
inline CMatrix heisenberg_exact(const FockTruncation& f, const CMatrix& o, double t) {
  const Eigen::VectorXcd plus = detail::phases(f, t, +1);
  const Eigen::VectorXcd minus = detail::phases(f, t, -1);
  return plus.asDiagonal() * o * minus.asDiagonal();
}

namespace detail {

/// Advances X by dt under dX/dt = i[H, X] with classical RK4 (full matrix products).
inline void heisenberg_advance(const FockTruncation& f, CMatrix& x, double dt, double max_step) {
  if (dt == 0.0) return;
  const long steps = static_cast<long>(std::ceil(std::fabs(dt) / max_step));
  const double h = dt / static_cast<double>(steps);
  // H is diagonal in the number basis: [H, X]_{mn} = (E_m - E_n) X_{mn}.
  const Eigen::VectorXd e = diagonal_energies(f);
  CMatrix gap(x.rows(), x.cols());
  for (Eigen::Index m = 0; m < x.rows(); ++m) {
    for (Eigen::Index n = 0; n < x.cols(); ++n) gap(m, n) = Complex(0.0, e(m) - e(n));
  }
  auto rate = [&](const CMatrix& m) -> CMatrix { return gap.cwiseProduct(m); };
  for (long s = 0; s < steps; ++s) {
    const CMatrix k1 = rate(x);
    const CMatrix k2 = rate(x + 0.5 * h * k1);
    const CMatrix k3 = rate(x + 0.5 * h * k2);
    const CMatrix k4 = rate(x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
}

}  // namespace detail

inline constexpr double heisenberg_oracle_step = 2.5e-3;

/// Oracle: O_H(t) from integrating the Heisenberg equation dO/dt = i[H, O].
inline CMatrix heisenberg_oracle(const FockTruncation& f, const CMatrix& o, double t,
                                 double max_step = heisenberg_oracle_step) {
  CMatrix x = o;
  detail::heisenberg_advance(f, x, t, max_step);
  return x;
}

/// max-entry residual between the exact translation and the oracle, restricted
/// to the protected sub-block n < n_max - 2.
inline double heisenberg_translation_check(const FockTruncation& f, const CMatrix& o, double t) {
  if (o.rows() != f.size() || o.cols() != f.size()) throw UsageError("operator does not match the Fock truncation");
  if (!o.allFinite()) throw UsageError("operator has non-finite entries");
  return detail::block_max_abs(heisenberg_exact(f, o, t) - heisenberg_oracle(f, o, t), f.protected_size());
}

/// Psi_S(t) = e^{-iHt} psi0.
inline Eigen::VectorXcd schrodinger_state(const FockTruncation& f, const Eigen::VectorXcd& psi0, double t) {
  return detail::phases(f, t, -1).cwiseProduct(psi0);
}

/// For each t on a uniform grid: || i (Psi_S(t+h) - Psi_S(t-h)) / 2h - H Psi_S(t) ||,
/// h the grid spacing; the Heisenberg column checks O (default a) at each t.
inline PictureCheckReport schrodinger_picture_check(const FockTruncation& f, const Eigen::VectorXcd& psi0,
                                                    const std::vector<double>& t_grid, const CMatrix* observable = nullptr) {
  if (psi0.size() != f.size()) throw UsageError("psi0 does not match the Fock truncation");
  if (std::fabs(psi0.norm() - 1.0) > 1e-12) throw UsageError("psi0 must be normalized");
  if (t_grid.size() < 2) throw UsageError("t_grid needs at least two points");
  const double h = t_grid[1] - t_grid[0];
  if (!(h > 0.0)) throw UsageError("t_grid must be increasing");
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    if (std::fabs((t_grid[k] - t_grid[k - 1]) - h) > 1e-9 * std::max(1.0, std::fabs(h))) {
      throw UsageError("t_grid must be uniform");
    }
  }
  const CMatrix o = observable ? *observable : f.a;
  PictureCheckReport r;
  const Complex i(0.0, 1.0);
  // The oracle is carried along the grid instead of restarted at every t.
  CMatrix o_oracle = o;
  double t_oracle = 0.0;
  for (double t : t_grid) {
    const Eigen::VectorXcd psi = schrodinger_state(f, psi0, t);
    const Eigen::VectorXcd dpsi = (schrodinger_state(f, psi0, t + h) - schrodinger_state(f, psi0, t - h)) / (2.0 * h);
    r.t_values.push_back(t);
    r.schrodinger_residuals.push_back((i * dpsi - f.h * psi).norm());
    detail::heisenberg_advance(f, o_oracle, t - t_oracle, heisenberg_oracle_step);
    t_oracle = t;
    r.heisenberg_residuals.push_back(
        detail::block_max_abs(heisenberg_exact(f, o, t) - o_oracle, f.protected_size()));
  }
  return r;
}

}  // namespace dwlab
