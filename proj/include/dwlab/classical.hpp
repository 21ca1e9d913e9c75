// Classical De Donder-Weyl evolution of one scalar field in 1+1 (or a single
// coordinate in 0+1) on a periodic lattice.
//
// Time is the evolution direction. With H quadratic in pi:
//   d_t phi  =  dH/d pi^0            = K^-1 pi^0
//   d_x phi  =  dH/d pi^1            =>  pi^1 = -K d_x phi   (eliminated)
//   d_t pi^0 = -dH/d phi - d_x pi^1  = -V'(phi) - d_x pi^1
// pi^1 lives on the half-sites j+1/2 (centered difference of phi); its
// centered divergence back on site j is the compact 3-point Laplacian.
// Integration is kick-drift-kick leapfrog (Stormer-Verlet).
#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "dwlab/errors.hpp"
#include "dwlab/lagrangian.hpp"

namespace dwlab {

struct Lattice1D {
  int n_x = 1;
  double dx = 1.0;

  static Lattice1D periodic_box(int n_x, double length) {
    Lattice1D l{n_x, length / n_x};
    l.validate();
    return l;
  }
  double length() const { return n_x * dx; }
  double coordinate(int j) const { return j * dx; }
  int wrap(int j) const { return ((j % n_x) + n_x) % n_x; }
  void validate() const {
    if (n_x < 1) throw ConfigError("lattice n_x must be >= 1");
    if (!(dx > 0.0) || !std::isfinite(dx)) throw ConfigError("lattice dx must be > 0");
  }
  bool operator==(const Lattice1D&) const = default;
};

struct ClassicalFieldState {
  Lattice1D lattice;
  std::vector<double> phi;
  std::vector<double> pi0;
  double time = 0.0;

  static ClassicalFieldState zeros(const Lattice1D& lattice) {
    const auto n = static_cast<std::size_t>(lattice.n_x);
    return {lattice, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0.0};
  }
};

namespace detail {

/// Single-field quantities pulled out of a LagrangianSpec once per step.
struct ScalarFieldModel {
  double k = 1.0;
  double k_inv = 1.0;
  bool spatial = false;
  std::vector<double> dv;  // coefficients of V'(phi)

  explicit ScalarFieldModel(const LagrangianSpec& L) {
    if (L.n_fields() != 1) {
      throw UnsupportedError("classical integrator handles a single scalar field, got " +
                             std::to_string(L.n_fields()) + " fields");
    }
    if (L.dim() > 2) {
      throw UnsupportedError("classical integrator handles dim 1 (mechanics) or 2 (1+1), got dim " +
                             std::to_string(L.dim()));
    }
    k = L.kinetic()(0, 0);
    k_inv = L.kinetic_inverse()(0, 0);
    spatial = L.dim() == 2;
    if (L.potential().degree() >= 1) dv = L.potential_derivative(0).univariate_coefficients();
  }

  double dV(double phi) const {
    double r = 0.0;
    for (auto it = dv.rbegin(); it != dv.rend(); ++it) r = r * phi + *it;
    return r;
  }
};

inline void check_state(const ClassicalFieldState& s) {
  s.lattice.validate();
  const auto n = static_cast<std::size_t>(s.lattice.n_x);
  if (s.phi.size() != n || s.pi0.size() != n) throw UsageError("state arrays do not match lattice n_x");
}

inline void check_cfl(const ScalarFieldModel& m, const Lattice1D& lattice, double dt) {
  if (!(dt != 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be finite and non-zero");
  if (m.spatial && std::fabs(dt) > 0.5 * lattice.dx) {
    throw ConfigError("CFL violation: |dt| = " + std::to_string(std::fabs(dt)) + " exceeds 0.5*dx = " +
                      std::to_string(0.5 * lattice.dx));
  }
}

/// d_t pi^0 = -d_x pi^1 - V'(phi), with pi^1 on half-sites.
inline void momentum_rate(const ScalarFieldModel& m, const Lattice1D& lattice, std::span<const double> phi,
                          std::span<double> out) {
  const int n = lattice.n_x;
  for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = -m.dV(phi[static_cast<std::size_t>(j)]);
  if (!m.spatial || n == 1) return;
  const double inv_dx = 1.0 / lattice.dx;
  auto pi1_half = [&](int j) {  // pi^1 at j + 1/2
    const double grad = (phi[static_cast<std::size_t>(lattice.wrap(j + 1))] - phi[static_cast<std::size_t>(j)]) * inv_dx;
    return -m.k * grad;
  };
  double left = pi1_half(lattice.wrap(-1));
  for (int j = 0; j < n; ++j) {
    const double right = pi1_half(j);
    out[static_cast<std::size_t>(j)] -= (right - left) * inv_dx;
    left = right;
  }
}

inline bool all_finite(const ClassicalFieldState& s) {
  for (std::size_t j = 0; j < s.phi.size(); ++j) {
    if (!std::isfinite(s.phi[j]) || !std::isfinite(s.pi0[j])) return false;
  }
  return true;
}

inline void kdk(const ScalarFieldModel& m, ClassicalFieldState& s, double dt, std::vector<double>& rate) {
  momentum_rate(m, s.lattice, s.phi, rate);
  for (std::size_t j = 0; j < s.phi.size(); ++j) s.pi0[j] += 0.5 * dt * rate[j];
  for (std::size_t j = 0; j < s.phi.size(); ++j) s.phi[j] += dt * m.k_inv * s.pi0[j];
  momentum_rate(m, s.lattice, s.phi, rate);
  for (std::size_t j = 0; j < s.phi.size(); ++j) s.pi0[j] += 0.5 * dt * rate[j];
  s.time += dt;
}

}  // namespace detail

/// One leapfrog step. dt may be negative (backward stepping); the CFL bound
/// |dt| <= dx/2 applies in 1+1.
inline ClassicalFieldState dw_step(const LagrangianSpec& L, const ClassicalFieldState& s, double dt) {
  const detail::ScalarFieldModel m(L);
  detail::check_state(s);
  detail::check_cfl(m, s.lattice, dt);
  ClassicalFieldState next = s;
  std::vector<double> rate(s.phi.size());
  detail::kdk(m, next, dt, rate);
  if (!detail::all_finite(next)) throw DivergenceError("non-finite classical field", 1);
  return next;
}

/// n_steps leapfrog steps; `observer(state, step)` is called after each step if given.
template <typename Observer>
ClassicalFieldState dw_evolve(const LagrangianSpec& L, ClassicalFieldState s, double dt, long n_steps,
                              Observer&& observer) {
  const detail::ScalarFieldModel m(L);
  detail::check_state(s);
  detail::check_cfl(m, s.lattice, dt);
  std::vector<double> rate(s.phi.size());
  for (long step = 1; step <= n_steps; ++step) {
    detail::kdk(m, s, dt, rate);
    if (!detail::all_finite(s)) throw DivergenceError("non-finite classical field", step);
    observer(s, step);
  }
  return s;
}

inline ClassicalFieldState dw_evolve(const LagrangianSpec& L, ClassicalFieldState s, double dt, long n_steps) {
  return dw_evolve(L, std::move(s), dt, n_steps, [](const ClassicalFieldState&, long) {});
}

/// Independent oracle: three-level leapfrog on K(phi_tt - phi_xx) + V'(phi) = 0,
/// written for phi alone. The momentum only enters through the initial
/// velocity and the returned pi0 = K * phi_t.
inline ClassicalFieldState euler_lagrange_oracle(const LagrangianSpec& L, const ClassicalFieldState& s,
                                                 double dt, long n_steps) {
  const detail::ScalarFieldModel m(L);
  detail::check_state(s);
  detail::check_cfl(m, s.lattice, dt);
  const int n = s.lattice.n_x;
  const double inv_dx2 = 1.0 / (s.lattice.dx * s.lattice.dx);
  auto acceleration = [&](const std::vector<double>& f, std::vector<double>& a) {
    for (int j = 0; j < n; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      double lap = 0.0;
      if (m.spatial && n > 1) {
        lap = (f[static_cast<std::size_t>(s.lattice.wrap(j + 1))] - 2.0 * f[jj] +
               f[static_cast<std::size_t>(s.lattice.wrap(j - 1))]) * inv_dx2;
      }
      a[jj] = lap - m.k_inv * m.dV(f[jj]);
    }
  };

  ClassicalFieldState out = s;
  if (n_steps <= 0) return out;
  std::vector<double> prev = s.phi, cur(s.phi.size()), next(s.phi.size()), acc(s.phi.size());
  acceleration(prev, acc);
  for (std::size_t j = 0; j < cur.size(); ++j) {
    const double velocity = m.k_inv * s.pi0[j];
    cur[j] = prev[j] + dt * velocity + 0.5 * dt * dt * acc[j];
  }
  for (long step = 2; step <= n_steps; ++step) {
    acceleration(cur, acc);
    for (std::size_t j = 0; j < cur.size(); ++j) next[j] = 2.0 * cur[j] - prev[j] + dt * dt * acc[j];
    prev.swap(cur);
    cur.swap(next);
    for (double v : cur) {
      if (!std::isfinite(v)) throw DivergenceError("non-finite field in Euler-Lagrange oracle", step);
    }
  }
  // Velocity at the final level from the backward difference plus the
  // half-step acceleration correction (second order).
  acceleration(cur, acc);
  for (std::size_t j = 0; j < cur.size(); ++j) {
    out.phi[j] = cur[j];
    out.pi0[j] = m.k * ((cur[j] - prev[j]) / dt + 0.5 * dt * acc[j]);
  }
  out.time = s.time + dt * static_cast<double>(n_steps);
  return out;
}

/// Per-site Theta^0_0: 1/2 K^-1 (pi^0)^2 + 1/2 K (d_x phi)^2 + V(phi),
/// the gradient taken on the same half-sites the integrator uses.
inline std::vector<double> classical_energy_density(const LagrangianSpec& L, const ClassicalFieldState& s) {
  const detail::ScalarFieldModel m(L);
  detail::check_state(s);
  const int n = s.lattice.n_x;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    JetPoint jet;
    jet.phi = Eigen::VectorXd::Constant(1, s.phi[jj]);
    jet.dphi = Eigen::MatrixXd::Zero(1, L.dim());
    jet.dphi(0, 0) = m.k_inv * s.pi0[jj];
    if (m.spatial && n > 1) {
      jet.dphi(0, 1) = (s.phi[static_cast<std::size_t>(s.lattice.wrap(j + 1))] - s.phi[jj]) / s.lattice.dx;
    }
    out[jj] = energy_momentum_tensor(L, jet)(0, 0);
  }
  return out;
}

/// Lattice sum of Theta^0_0 dx (dx = 1 in mechanics).
inline double classical_energy(const LagrangianSpec& L, const ClassicalFieldState& s) {
  const double dx = L.dim() == 2 ? s.lattice.dx : 1.0;
  double e = 0.0;
  for (double d : classical_energy_density(L, s)) e += d * dx;
  return e;
}

}  // namespace dwlab
