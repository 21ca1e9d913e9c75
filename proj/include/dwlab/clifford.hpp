// Gamma-matrix families and the derived spin tensor.
//
// Metric convention is time-positive, (+,-,...,-). Upper-index matrices
// Gamma^mu are stored; since g is diagonal with entries +-1, lowering an
// index only flips a sign.
//
// Pinned representations:
//   scalar        dim 1   Gamma^0 = [1]
//   dirac_1p1     dim 2   gamma^0 = diag(1,-1), gamma^1 = [[0,1],[-1,0]]
//   dirac_3p1     dim 4   Dirac (standard) representation:
//                         gamma^0 = diag(I2,-I2), gamma^k = [[0,s_k],[-s_k,0]]
//   kemmer_spin0  dim 2,4 (dim+1)x(dim+1) spin-0 Duffin-Kemmer-Petiau matrices,
//                         beta^mu = E(0,mu+1) + g^{mu mu} E(mu+1,0)
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "dwlab/errors.hpp"

namespace dwlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

struct MetricSignature {
  int dim = 1;
  std::vector<int> diag{1};

  static MetricSignature lorentzian(int dim) {
    if (dim < 1 || dim > 4) {
      throw ConfigError("spacetime dimension must be in [1, 4], got " + std::to_string(dim));
    }
    MetricSignature s;
    s.dim = dim;
    s.diag.assign(static_cast<std::size_t>(dim), -1);
    s.diag[0] = 1;
    return s;
  }

  double g(int mu, int nu) const { return mu == nu ? static_cast<double>(diag[mu]) : 0.0; }
  bool operator==(const MetricSignature&) const = default;
};

enum class Representation { scalar, dirac_1p1, dirac_3p1, kemmer_spin0 };

inline std::string_view to_string(Representation r) {
  switch (r) {
    case Representation::scalar: return "scalar";
    case Representation::dirac_1p1: return "dirac_1p1";
    case Representation::dirac_3p1: return "dirac_3p1";
    case Representation::kemmer_spin0: return "kemmer_spin0";
  }
  return "?";
}

inline Representation parse_representation(std::string_view name) {
  for (auto r : {Representation::scalar, Representation::dirac_1p1, Representation::dirac_3p1,
                 Representation::kemmer_spin0}) {
    if (to_string(r) == name) return r;
  }
  throw ConfigError("unknown representation '" + std::string(name) +
                    "' (expected scalar | dirac_1p1 | dirac_3p1 | kemmer_spin0)");
}

struct GammaSet {
  MetricSignature signature;
  Representation rep = Representation::scalar;
  std::vector<CMatrix> matrices;  // Gamma^mu, mu = 0..dim-1
  CMatrix gamma0_hermitizer;      // psi-bar = psi^dagger * gamma0_hermitizer

  int dim() const { return signature.dim; }
  int size() const { return static_cast<int>(matrices.front().rows()); }
  bool is_dirac_type() const { return rep != Representation::kemmer_spin0; }
  const CMatrix& operator[](int mu) const { return matrices[static_cast<std::size_t>(mu)]; }
};

struct SigmaTensor {
  int dim = 0;
  std::vector<CMatrix> components;  // row-major dim x dim, Sigma^{mu nu}

  const CMatrix& operator()(int mu, int nu) const {
    return components[static_cast<std::size_t>(mu * dim + nu)];
  }
};

namespace detail {

inline CMatrix pauli(int k) {
  CMatrix s(2, 2);
  const Complex i(0.0, 1.0);
  switch (k) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -i, i, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

inline GammaSet make_scalar() {
  GammaSet g;
  g.signature = MetricSignature::lorentzian(1);
  g.rep = Representation::scalar;
  g.matrices = {CMatrix::Identity(1, 1)};
  g.gamma0_hermitizer = CMatrix::Identity(1, 1);
  return g;
}

inline GammaSet make_dirac_1p1() {
  GammaSet g;
  g.signature = MetricSignature::lorentzian(2);
  g.rep = Representation::dirac_1p1;
  CMatrix g0(2, 2), g1(2, 2);
  g0 << 1, 0, 0, -1;
  g1 << 0, 1, -1, 0;
  g.matrices = {g0, g1};
  g.gamma0_hermitizer = g0;
  return g;
}

inline GammaSet make_dirac_3p1() {
  GammaSet g;
  g.signature = MetricSignature::lorentzian(4);
  g.rep = Representation::dirac_3p1;
  CMatrix g0 = CMatrix::Zero(4, 4);
  g0.topLeftCorner(2, 2) = CMatrix::Identity(2, 2);
  g0.bottomRightCorner(2, 2) = -CMatrix::Identity(2, 2);
  g.matrices.push_back(g0);
  for (int k = 1; k <= 3; ++k) {
    CMatrix gk = CMatrix::Zero(4, 4);
    gk.topRightCorner(2, 2) = pauli(k);
    gk.bottomLeftCorner(2, 2) = -pauli(k);
    g.matrices.push_back(gk);
  }
  g.gamma0_hermitizer = g0;
  return g;
}

inline GammaSet make_kemmer_spin0(int dim) {
  GammaSet g;
  g.signature = MetricSignature::lorentzian(dim);
  g.rep = Representation::kemmer_spin0;
  const int n = dim + 1;
  for (int mu = 0; mu < dim; ++mu) {
    CMatrix b = CMatrix::Zero(n, n);
    b(0, mu + 1) = 1.0;
    b(mu + 1, 0) = g.signature.g(mu, mu);
    g.matrices.push_back(b);
  }
  // eta^0 = 2 (beta^0)^2 - 1 plays the role of gamma^0 in psi-bar.
  g.gamma0_hermitizer = 2.0 * g.matrices[0] * g.matrices[0] - CMatrix::Identity(n, n);
  return g;
}

}  // namespace detail

/// One supported (dim, representation) pair and how to build it.
struct RepresentationEntry {
  int dim;
  Representation rep;
  std::function<GammaSet()> build;
};

/// Registry of the pinned representations. New Gamma choices are added here.
inline const std::vector<RepresentationEntry>& representation_registry() {
  static const std::vector<RepresentationEntry> registry{
      {1, Representation::scalar, detail::make_scalar},
      {2, Representation::dirac_1p1, detail::make_dirac_1p1},
      {4, Representation::dirac_3p1, detail::make_dirac_3p1},
      {2, Representation::kemmer_spin0, [] { return detail::make_kemmer_spin0(2); }},
      {4, Representation::kemmer_spin0, [] { return detail::make_kemmer_spin0(4); }},
  };
  return registry;
}

inline std::string supported_representations_text() {
  std::string out;
  for (const auto& e : representation_registry()) {
    if (!out.empty()) out += ", ";
    out += "(" + std::to_string(e.dim) + ", " + std::string(to_string(e.rep)) + ")";
  }
  return out;
}

inline GammaSet build_gamma_set(int dim, Representation rep) {
  for (const auto& e : representation_registry()) {
    if (e.dim == dim && e.rep == rep) return e.build();
  }
  throw ConfigError("unsupported gamma representation (" + std::to_string(dim) + ", " +
                    std::string(to_string(rep)) + "); supported: " +
                    supported_representations_text());
}

inline GammaSet build_gamma_set(int dim, std::string_view rep_name) {
  return build_gamma_set(dim, parse_representation(rep_name));
}

/// Sigma^{mu nu} = (i/2)[gamma^mu, gamma^nu], so gamma^mu gamma^nu = g^{mu nu} - i Sigma^{mu nu}.
inline SigmaTensor sigma_tensor(const GammaSet& g) {
  if (!g.is_dirac_type()) {
    throw UnsupportedError("sigma_tensor requires a Clifford (scalar or dirac_*) representation, got " +
                           std::string(to_string(g.rep)));
  }
  const Complex half_i(0.0, 0.5);
  SigmaTensor s;
  s.dim = g.dim();
  s.components.reserve(static_cast<std::size_t>(s.dim * s.dim));
  for (int mu = 0; mu < s.dim; ++mu) {
    for (int nu = 0; nu < s.dim; ++nu) {
      s.components.push_back(half_i * (g[mu] * g[nu] - g[nu] * g[mu]));
    }
  }
  return s;
}

inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

struct IdentityCheck {
  std::string name;
  double residual = 0.0;
};

struct ValidationReport {
  std::vector<IdentityCheck> checks;
  double max_residual = 0.0;
  bool pass = true;
  static constexpr double tolerance = 1e-12;
};

/// Tests every algebraic identity the representation must satisfy.
/// Clifford reps: anticommutators, (gamma^0)^2 = I and Sigma reconstruction.
/// Kemmer rep: the trilinear DKP relation for every index triple.
inline ValidationReport check_representation(const GammaSet& g) {
  ValidationReport report;
  const int d = g.dim();
  const int n = g.size();
  const CMatrix id = CMatrix::Identity(n, n);
  auto record = [&](std::string name, double r) {
    report.checks.push_back({std::move(name), r});
    report.max_residual = std::max(report.max_residual, r);
  };
  auto idx = [](int a, int b) { return std::to_string(a) + std::to_string(b); };

  if (g.is_dirac_type()) {
    for (int mu = 0; mu < d; ++mu) {
      for (int nu = mu; nu < d; ++nu) {
        const CMatrix ac = g[mu] * g[nu] + g[nu] * g[mu] - 2.0 * g.signature.g(mu, nu) * id;
        record("anticommutator " + idx(mu, nu), max_abs(ac));
      }
    }
    record("gamma0 squared", max_abs(g.gamma0_hermitizer * g.gamma0_hermitizer - id));
    // Sigma built inline so a corrupted set reports rather than throws.
    for (int mu = 0; mu < d; ++mu) {
      for (int nu = 0; nu < d; ++nu) {
        const CMatrix sigma = Complex(0.0, 0.5) * (g[mu] * g[nu] - g[nu] * g[mu]);
        const CMatrix rec = g[mu] * g[nu] + Complex(0.0, 1.0) * sigma - g.signature.g(mu, nu) * id;
        record("sigma reconstruction " + idx(mu, nu), max_abs(rec));
      }
    }
  } else {
    for (int mu = 0; mu < d; ++mu) {
      for (int nu = 0; nu < d; ++nu) {
        for (int la = 0; la < d; ++la) {
          const CMatrix lhs = g[mu] * g[nu] * g[la] + g[la] * g[nu] * g[mu];
          const CMatrix rhs = g.signature.g(mu, nu) * g[la] + g.signature.g(la, nu) * g[mu];
          record("kemmer " + idx(mu, nu) + std::to_string(la), max_abs(lhs - rhs));
        }
      }
    }
  }
  report.pass = report.max_residual < ValidationReport::tolerance;
  return report;
}

}  // namespace dwlab
