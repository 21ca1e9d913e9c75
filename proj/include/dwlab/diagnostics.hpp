// Scalar products, their time dependence, the H_mu decomposition residual and
// plane-wave dispersion tables for the three schemes.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dwlab/clifford.hpp"
#include "dwlab/errors.hpp"
#include "dwlab/evolution.hpp"
#include "dwlab/lagrangian.hpp"
#include "dwlab/quantization.hpp"
#include "dwlab/wavefunction.hpp"

namespace dwlab {

/// <Psi|Phi> = sum_x dx  int dphi  Psi^dagger gamma^0 Phi.
inline Complex scalar_product(const WaveFunction& psi, const WaveFunction& phi) { return bar_product(psi, phi); }

/// Per-site values of int dphi Psi^dagger gamma^0 Phi (no dx weight).
inline std::vector<Complex> scalar_product_per_site(const WaveFunction& psi, const WaveFunction& phi) {
  if (!psi.same_shape(phi)) throw UsageError("scalar product of wave functions with different shapes");
  const CMatrix& g0 = psi.gamma().gamma0_hermitizer;
  std::vector<Complex> out(static_cast<std::size_t>(psi.n_x()));
  for (int j = 0; j < psi.n_x(); ++j) {
    Complex sum = 0.0;
    for (int s = 0; s < psi.spinor_dim(); ++s) {
      for (int t = 0; t < psi.spinor_dim(); ++t) {
        if (g0(s, t) != Complex(0.0)) sum += g0(s, t) * psi.column(s, j).dot(phi.column(t, j));
      }
    }
    out[static_cast<std::size_t>(j)] = sum * psi.grid().dq();
  }
  return out;
}

struct NormReport {
  double t = 0.0;
  double norm_plus = 0.0;
  double norm_bar = 0.0;
  double d_norm_plus_dt = 0.0;
  double d_norm_bar_dt = 0.0;
};

namespace detail {

/// Second-order finite-difference derivative of samples f(t): centered in the
/// interior, one-sided three-point at the ends.
inline std::vector<double> sampled_derivative(std::span<const double> t, std::span<const double> f) {
  const std::size_t n = t.size();
  std::vector<double> d(n);
  for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (f[k + 1] - f[k - 1]) / (t[k + 1] - t[k - 1]);
  const double h0 = t[1] - t[0];
  const double h1 = t[n - 1] - t[n - 2];
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h0);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h1);
  return d;
}

}  // namespace detail

inline std::vector<NormReport> norm_drift(const EvolutionTrace& trace) {
  if (trace.size() < 3) throw UsageError("norm_drift needs at least 3 recorded times, got " + std::to_string(trace.size()));
  const auto dp = detail::sampled_derivative(trace.times, trace.norm_plus);
  const auto db = detail::sampled_derivative(trace.times, trace.norm_bar);
  std::vector<NormReport> out(trace.size());
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out[k] = {trace.times[k], trace.norm_plus[k], trace.norm_bar[k], dp[k], db[k]};
  }
  return out;
}

struct HmuSeries {
  std::vector<double> times;
  std::vector<double> residuals;
};

/// Residual of i d_0 Psi = (-Sigma_{0 nu} d^nu + gamma_0 H-hat) Psi along stored snapshots.
///
/// The operator identity follows from multiplying i gamma^nu d_nu Psi = H-hat Psi
/// by gamma_0 and using gamma_mu gamma_nu = g_{mu nu} - i Sigma_{mu nu}. With the
/// diagonal metric, -Sigma_{0 nu} d^nu = -g_00 Sigma^{0 nu} d_nu.
/// Time and space derivatives are centered second-order differences; the two
/// field-space boundary nodes are excluded from the L2 norm.
inline HmuSeries h_mu_residual(const std::vector<WaveFunction>& snapshots, const GammaSet& g,
                               const HamiltonianOperator& h) {
  if (snapshots.size() < 3) throw UsageError("h_mu_residual needs at least 3 snapshots");
  if (!g.is_dirac_type()) throw UnsupportedError("h_mu_residual needs a Clifford representation");
  const WaveFunction& first = snapshots.front();
  if (first.gamma().rep != g.rep || first.gamma().dim() != g.dim()) {
    throw UsageError("snapshots were not produced with this gamma set");
  }
  for (const auto& s : snapshots) {
    if (!s.same_shape(first)) throw UsageError("snapshots have inconsistent shapes");
  }
  const SigmaTensor sigma = sigma_tensor(g);
  const double g00 = g.signature.g(0, 0);
  const bool spatial = g.dim() == 2 && first.lattice() && first.n_x() > 1;
  const int n_s = first.spinor_dim(), n_q = first.n_q(), n_x = first.n_x();
  const double dq = first.grid().dq(), dx = first.dx();

  HmuSeries out;
  for (std::size_t k = 1; k + 1 < snapshots.size(); ++k) {
    const WaveFunction& prev = snapshots[k - 1];
    const WaveFunction& cur = snapshots[k];
    const WaveFunction& next = snapshots[k + 1];
    const double span = next.time - prev.time;
    if (!(span > 0.0)) throw UsageError("snapshot times must be increasing");

    const WaveFunction h_psi = h.apply(cur);
    WaveFunction dx_psi = cur;
    if (spatial) {
      for (int s = 0; s < n_s; ++s) {
        for (int j = 0; j < n_x; ++j) {
          dx_psi.column(s, j) = (cur.column(s, (j + 1) % n_x) - cur.column(s, (j + n_x - 1) % n_x)) / (2.0 * dx);
        }
      }
    }
    double sum = 0.0;
    for (int j = 0; j < n_x; ++j) {
      for (int i = 1; i + 1 < n_q; ++i) {
        for (int s = 0; s < n_s; ++s) {
          Complex lhs = Complex(0.0, 1.0) * (next(s, i, j) - prev(s, i, j)) / span;
          Complex rhs = 0.0;
          for (int t = 0; t < n_s; ++t) {
            rhs += g00 * g[0](s, t) * h_psi(t, i, j);
            if (spatial) rhs -= g00 * sigma(0, 1)(s, t) * dx_psi(t, i, j);
          }
          sum += std::norm(lhs - rhs);
        }
      }
    }
    out.times.push_back(cur.time);
    out.residuals.push_back(std::sqrt(sum * dq * dx));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dispersion relations.

struct DispersionRow {
  double k = 0.0;
  std::vector<Complex> omegas;
  std::vector<int> multiplicities;
  bool degenerate = false;  // every omega solves (characteristic polynomial vanishes identically)
};

struct DispersionTable {
  Scheme scheme = Scheme::mechanical_schrodinger;
  std::vector<DispersionRow> rows;
};

struct DispersionOptions {
  std::optional<double> mu;  // dirac_like 1+1: eigenvalue of H-hat on the data
  KineticNormalization normalization = KineticNormalization::mechanical_exact;
};

namespace detail {

/// Roots of c2 w^2 + c1 w + c0 (closed form), equal roots merged with multiplicity.
inline DispersionRow polynomial_roots(double k, double c2, double c1, double c0) {
  DispersionRow row;
  row.k = k;
  const double scale = std::max({std::fabs(c2), std::fabs(c1), std::fabs(c0), 1.0});
  const double eps = 1e-14 * scale;
  auto push = [&](Complex w, int m) {
    row.omegas.push_back(w);
    row.multiplicities.push_back(m);
  };
  if (std::fabs(c2) <= eps) {
    if (std::fabs(c1) <= eps) {
      row.degenerate = std::fabs(c0) <= eps;
      return row;
    }
    push(-c0 / c1, 1);
    return row;
  }
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  if (std::fabs(disc) <= 1e-14 * std::max(c1 * c1, std::fabs(4.0 * c2 * c0)) || disc == 0.0) {
    push(-c1 / (2.0 * c2), 2);
    return row;
  }
  const Complex root = std::sqrt(Complex(disc, 0.0));
  // Numerically stable pairing.
  const Complex qv = -0.5 * (Complex(c1, 0.0) + (c1 >= 0 ? root : -root));
  Complex w1 = qv / c2;
  Complex w2 = Complex(c0, 0.0) / qv;
  if (w2.real() < w1.real() || (w2.real() == w1.real() && w2.imag() < w1.imag())) std::swap(w1, w2);
  push(w1, 1);
  push(w2, 1);
  return row;
}

inline double constant_potential(const LagrangianSpec& L, Scheme scheme) {
  if (L.potential().degree() > 0) {
    throw ConfigError("dispersion for scheme " + std::string(to_string(scheme)) +
                      " needs a constant potential (plane waves in phi are not eigenfunctions otherwise)");
  }
  return L.potential().coefficient({0});
}

}  // namespace detail

/// Plane-wave characteristic roots omega(k) for Psi ~ exp(i(k phi - omega t)) (mechanics)
/// or Psi ~ exp(i(k x - omega t)) (dirac_like in 1+1, H-hat Psi = mu Psi).
///   mechanical_schrodinger, dirac_like dim 1:  omega = a k^2 + V0
///   good (dim 1):   omega^2 = a k^2 omega^2 + V0   ->  (1 - a k^2) omega^2 - V0 = 0
///   dirac_like dim 2:  omega^2 = k^2 + mu^2
/// where a = 1/2 K^-1 dim c is the kinetic coefficient of H-hat.
inline DispersionTable dispersion_table(Scheme scheme, const LagrangianSpec& L, std::vector<double> k_list,
                                        const DispersionOptions& opts = {}) {
  if (L.n_fields() != 1) throw UnsupportedError("dispersion analysis handles one field");
  std::sort(k_list.begin(), k_list.end());
  const int dim = L.dim();
  const double a = 0.5 * dim * L.kinetic_inverse()(0, 0) * kinetic_normalization_factor(opts.normalization, dim);
  DispersionTable table;
  table.scheme = scheme;

  if (scheme == Scheme::dirac_like && dim == 2) {
    double mu = 0.0;
    if (opts.mu) {
      mu = *opts.mu;
    } else {
      const Polynomial& v = L.potential();
      const double v2 = v.coefficient({2}), v1 = v.coefficient({1}), v0 = v.coefficient({0});
      if (v.degree() != 2 || !(v2 > 0.0)) {
        throw ConfigError("dirac_like 1+1 dispersion needs mu or a confining quadratic potential");
      }
      mu = std::sqrt(a * v2) + v0 - v1 * v1 / (4.0 * v2);
    }
    for (double k : k_list) table.rows.push_back(detail::polynomial_roots(k, 1.0, 0.0, -(k * k + mu * mu)));
    return table;
  }
  if (dim != 1) {
    throw ConfigError("scheme " + std::string(to_string(scheme)) + " dispersion is defined for mechanics (dim 1)");
  }
  const double v0 = detail::constant_potential(L, scheme);
  for (double k : k_list) {
    if (scheme == Scheme::good) {
      table.rows.push_back(detail::polynomial_roots(k, 1.0 - a * k * k, 0.0, -v0));
    } else {
      table.rows.push_back(detail::polynomial_roots(k, 0.0, 1.0, -(a * k * k + v0)));
    }
  }
  return table;
}

/// True when the two rows have the same roots (with multiplicity) to tol.
inline bool same_solution_set(const DispersionRow& x, const DispersionRow& y, double tol) {
  if (x.degenerate || y.degenerate) return x.degenerate == y.degenerate;
  if (x.omegas.size() != y.omegas.size()) return false;
  for (std::size_t i = 0; i < x.omegas.size(); ++i) {
    if (std::abs(x.omegas[i] - y.omegas[i]) > tol || x.multiplicities[i] != y.multiplicities[i]) return false;
  }
  return true;
}

}  // namespace dwlab
