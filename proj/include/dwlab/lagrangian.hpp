// First-order Lagrangians with a quadratic kinetic form and a polynomial
// potential, together with their covariant (De Donder-Weyl) Hamiltonian
// description:
//
//   L(phi, d phi) = 1/2 K_ab g^{mu nu} d_mu phi^a d_nu phi^b - V(phi)
//   pi^mu_a       = dL/d(d_mu phi^a) = K_ab g^{mu nu} d_nu phi^b
//   H(phi, pi)    = pi^mu_a d_mu phi^a - L = 1/2 (K^-1)^{ab} g_{mu nu} pi^mu_a pi^nu_b + V(phi)
//
// K must be symmetric positive-definite so the Legendre map is invertible.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "dwlab/clifford.hpp"
#include "dwlab/errors.hpp"
#include "dwlab/polynomial.hpp"

namespace dwlab {

class LagrangianSpec {
 public:
  static constexpr int max_potential_degree = 6;

  /// Validates and builds a spec; every violated constraint is listed in the error.
  static LagrangianSpec create(int dim, Eigen::MatrixXd kinetic, Polynomial potential) {
    std::vector<std::string> problems;
    const int n = static_cast<int>(kinetic.rows());
    if (dim < 1 || dim > 4) problems.push_back("dim must be in [1, 4]");
    if (n < 1 || kinetic.cols() != n) problems.push_back("kinetic matrix must be square and non-empty");
    if (n >= 1 && kinetic.cols() == n) {
      if (!kinetic.allFinite()) {
        problems.push_back("kinetic coefficients must be finite");
      } else if ((kinetic - kinetic.transpose()).cwiseAbs().maxCoeff() > 1e-14 * (1.0 + kinetic.cwiseAbs().maxCoeff())) {
        problems.push_back("kinetic matrix must be symmetric");
      } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kinetic);
        if (es.eigenvalues().minCoeff() <= 0.0) {
          problems.push_back(
              "kinetic matrix must be positive-definite (degenerate or first-order kinetic terms, "
              "e.g. a Dirac-field Lagrangian, have no invertible covariant Legendre transform)");
        }
      }
    }
    if (potential.n_vars() != n) problems.push_back("potential arity does not match n_fields");
    if (!potential.all_finite()) problems.push_back("potential coefficients must be finite");
    if (potential.degree() > max_potential_degree) {
      problems.push_back("potential degree " + std::to_string(potential.degree()) + " exceeds " +
                         std::to_string(max_potential_degree));
    }
    if (!problems.empty()) {
      std::string msg = "invalid Lagrangian:";
      for (const auto& p : problems) msg += "\n  - " + p;
      throw ConfigError(msg);
    }
    LagrangianSpec s;
    s.signature_ = MetricSignature::lorentzian(dim);
    s.kinetic_ = std::move(kinetic);
    s.kinetic_inverse_ = s.kinetic_.inverse();
    s.potential_ = std::move(potential);
    for (int a = 0; a < n; ++a) s.potential_gradient_.push_back(s.potential_.derivative(a));
    return s;
  }

  int n_fields() const { return static_cast<int>(kinetic_.rows()); }
  int dim() const { return signature_.dim; }
  const MetricSignature& signature() const { return signature_; }
  const Eigen::MatrixXd& kinetic() const { return kinetic_; }
  const Eigen::MatrixXd& kinetic_inverse() const { return kinetic_inverse_; }
  const Polynomial& potential() const { return potential_; }
  const Polynomial& potential_derivative(int a) const {
    return potential_gradient_[static_cast<std::size_t>(a)];
  }

 private:
  LagrangianSpec() = default;
  MetricSignature signature_;
  Eigen::MatrixXd kinetic_;
  Eigen::MatrixXd kinetic_inverse_;
  Polynomial potential_;
  std::vector<Polynomial> potential_gradient_;
};

/// phi^a and d_mu phi^a (rows: field a, columns: mu).
struct JetPoint {
  Eigen::VectorXd phi;
  Eigen::MatrixXd dphi;
};

/// phi^a and pi^mu_a (rows: field a, columns: mu).
struct PhasePoint {
  Eigen::VectorXd phi;
  Eigen::MatrixXd pi;
};

namespace detail {

inline void check_shape(const LagrangianSpec& L, const Eigen::VectorXd& phi, const Eigen::MatrixXd& m) {
  if (phi.size() != L.n_fields() || m.rows() != L.n_fields() || m.cols() != L.dim()) {
    throw UsageError("jet/phase point shape does not match the Lagrangian (" +
                     std::to_string(L.n_fields()) + " fields, dim " + std::to_string(L.dim()) + ")");
  }
}

inline Eigen::VectorXd metric_diagonal(const LagrangianSpec& L) {
  Eigen::VectorXd g(L.dim());
  for (int mu = 0; mu < L.dim(); ++mu) g(mu) = L.signature().g(mu, mu);
  return g;
}

inline double potential_at(const LagrangianSpec& L, const Eigen::VectorXd& phi) {
  return L.potential()(std::span<const double>(phi.data(), static_cast<std::size_t>(phi.size())));
}

}  // namespace detail

inline double lagrangian_density(const LagrangianSpec& L, const JetPoint& j) {
  detail::check_shape(L, j.phi, j.dphi);
  const Eigen::MatrixXd raised = j.dphi * detail::metric_diagonal(L).asDiagonal();
  const double kinetic = 0.5 * (j.dphi.transpose() * L.kinetic() * raised).trace();
  return kinetic - detail::potential_at(L, j.phi);
}

inline Eigen::MatrixXd covariant_momenta(const LagrangianSpec& L, const JetPoint& j) {
  detail::check_shape(L, j.phi, j.dphi);
  return L.kinetic() * j.dphi * detail::metric_diagonal(L).asDiagonal();
}

inline double covariant_hamiltonian(const LagrangianSpec& L, const PhasePoint& p) {
  detail::check_shape(L, p.phi, p.pi);
  // g is its own inverse, so lowering pi uses the same diagonal.
  const Eigen::MatrixXd lowered = p.pi * detail::metric_diagonal(L).asDiagonal();
  const double kinetic = 0.5 * (p.pi.transpose() * L.kinetic_inverse() * lowered).trace();
  return kinetic + detail::potential_at(L, p.phi);
}

/// |pi . d phi - H(phi, pi) - L(j)| with pi = covariant_momenta(j).
inline double hamiltonian_form_residual(const LagrangianSpec& L, const JetPoint& j) {
  const PhasePoint p{j.phi, covariant_momenta(L, j)};
  const double contraction = (p.pi.array() * j.dphi.array()).sum();
  return std::fabs(contraction - covariant_hamiltonian(L, p) - lagrangian_density(L, j));
}

struct DwRhs {
  Eigen::MatrixXd dH_dpi;         // d_mu phi^a   = dH/d pi^mu_a
  Eigen::VectorXd minus_dH_dphi;  // d_mu pi^mu_a = -dH/d phi^a
};

inline DwRhs dw_rhs(const LagrangianSpec& L, const PhasePoint& p) {
  detail::check_shape(L, p.phi, p.pi);
  DwRhs r;
  r.dH_dpi = L.kinetic_inverse() * p.pi * detail::metric_diagonal(L).asDiagonal();
  r.minus_dH_dphi.resize(L.n_fields());
  const std::span<const double> phi(p.phi.data(), static_cast<std::size_t>(p.phi.size()));
  for (int a = 0; a < L.n_fields(); ++a) r.minus_dH_dphi(a) = -L.potential_derivative(a)(phi);
  return r;
}

/// Theta^mu_nu = d_nu phi^a pi^mu_a - delta^mu_nu L, indexed (mu, nu).
inline Eigen::MatrixXd energy_momentum_tensor(const LagrangianSpec& L, const JetPoint& j) {
  const Eigen::MatrixXd pi = covariant_momenta(L, j);
  Eigen::MatrixXd theta = pi.transpose() * j.dphi;
  theta.diagonal().array() -= lagrangian_density(L, j);
  return theta;
}

// ---------------------------------------------------------------------------
// Shipped Lagrangians.

namespace models {

inline LagrangianSpec free_scalar(double mass, int dim = 2) {
  return LagrangianSpec::create(dim, Eigen::MatrixXd::Identity(1, 1),
                                (0.5 * mass * mass) * parse_polynomial("phi^2", 1));
}

/// V = 1/2 m^2 phi^2 + 1/4 lambda phi^4.
inline LagrangianSpec quartic_scalar(double mass, double lambda, int dim = 2) {
  return LagrangianSpec::create(dim, Eigen::MatrixXd::Identity(1, 1),
                                (0.5 * mass * mass) * parse_polynomial("phi^2", 1) +
                                    (0.25 * lambda) * parse_polynomial("phi^4", 1));
}

/// Mechanics (dim 1): L = 1/2 qdot^2 - 1/2 omega^2 q^2.
inline LagrangianSpec harmonic_oscillator(double omega) {
  return LagrangianSpec::create(1, Eigen::MatrixXd::Identity(1, 1),
                                (0.5 * omega * omega) * parse_polynomial("phi^2", 1));
}

/// Two coupled fields in 1+1 with a non-diagonal kinetic form.
inline LagrangianSpec coupled_doublet() {
  Eigen::MatrixXd k(2, 2);
  k << 2.0, 0.5, 0.5, 1.0;
  return LagrangianSpec::create(
      2, k, parse_polynomial("0.5*phi1^2 + 0.75*phi2^2 + 0.1*phi1^2*phi2^2 - 0.2*phi1*phi2", 2));
}

/// Scalar in 3+1 with a bounded sextic potential.
inline LagrangianSpec sextic_scalar_3p1() {
  return LagrangianSpec::create(4, Eigen::MatrixXd::Identity(1, 1) * 1.5,
                                parse_polynomial("0.5*phi^2 - 0.1*phi^4 + 0.01*phi^6", 1));
}

/// The complex oscillator L = a*(i adot - a) in real variables.
///
/// With a = (q + i p)/sqrt(2):
///   a* i adot = 1/2 (p qdot - q pdot) + (i/4) d/dt(q^2 + p^2)   (imaginary part: total derivative)
///   a* a      = 1/2 (q^2 + p^2)
/// so Re L = 1/2 (p qdot - q pdot) - 1/2 (q^2 + p^2)
///         = p qdot - H(q, p) - d/dt(q p / 2),   H = a* a = 1/2 (p^2 + q^2).
/// This is the phase-space form of the oscillator with omega = 1; eliminating p
/// through its equation of motion (p = qdot) leaves L = 1/2 qdot^2 - 1/2 q^2,
/// which is harmonic_oscillator(1).
inline LagrangianSpec complex_oscillator_real_form() { return harmonic_oscillator(1.0); }

/// Real part of a*(i adot - a) evaluated on (q, p, qdot, pdot).
inline double complex_oscillator_lagrangian(double q, double p, double qdot, double pdot) {
  return 0.5 * (p * qdot - q * pdot) - 0.5 * (q * q + p * p);
}

}  // namespace models

}  // namespace dwlab
