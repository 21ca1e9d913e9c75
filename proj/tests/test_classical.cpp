#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dwlab/classical.hpp"
#include "oracles.hpp"

using namespace dwlab;

namespace {

ClassicalFieldState cosine_state(const Lattice1D& lat, double amplitude, int mode) {
  ClassicalFieldState s = ClassicalFieldState::zeros(lat);
  for (int j = 0; j < lat.n_x; ++j) {
    s.phi[static_cast<std::size_t>(j)] = amplitude * std::cos(2 * std::numbers::pi * mode * lat.coordinate(j) / lat.length());
  }
  return s;
}

double l2(const std::vector<double>& a, const std::vector<double>& b, double dx) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(s * dx);
}

}  // namespace

TEST(Classical, HarmonicOscillatorMechanics) {
  const LagrangianSpec L = models::harmonic_oscillator(1.0);
  ClassicalFieldState s = ClassicalFieldState::zeros(Lattice1D{1, 1.0});
  s.phi[0] = 1.0;
  const double dt = 1e-3;
  const long n = 1000;
  const ClassicalFieldState out = dw_evolve(L, s, dt, n);
  EXPECT_NEAR(out.phi[0], std::cos(1.0), 1e-6);
  EXPECT_NEAR(out.pi0[0], -std::sin(1.0), 1e-6);
  EXPECT_NEAR(out.time, 1.0, 1e-12);
}

TEST(Classical, FreeScalarMatchesLatticeKleinGordon) {
  const Lattice1D lat = Lattice1D::periodic_box(256, 2 * std::numbers::pi);
  const LagrangianSpec L = models::free_scalar(1.0);
  const double dt = lat.dx / 4;
  const long n = static_cast<long>(std::lround(1.0 / dt));
  const ClassicalFieldState out = dw_evolve(L, cosine_state(lat, 1.0, 1), dt, n);
  std::vector<double> exact(256);
  for (int j = 0; j < 256; ++j) exact[static_cast<std::size_t>(j)] = oracle::free_kg_lattice(1.0, 1.0, 1.0, lat.dx, lat.coordinate(j), out.time);
  EXPECT_LT(l2(out.phi, exact, lat.dx), 1e-5);
}

TEST(Classical, AgreesWithEulerLagrangeOracle) {
  const Lattice1D lat = Lattice1D::periodic_box(128, 2 * std::numbers::pi);
  for (const auto& L : {models::free_scalar(1.0), models::quartic_scalar(1.0, 1.0)}) {
    const ClassicalFieldState s0 = cosine_state(lat, 0.9, 2);
    const double dt = lat.dx / 4;
    const ClassicalFieldState a = dw_evolve(L, s0, dt, 200);
    const ClassicalFieldState b = euler_lagrange_oracle(L, s0, dt, 200);
    EXPECT_LT(l2(a.phi, b.phi, lat.dx), 1e-10);
    EXPECT_LT(l2(a.pi0, b.pi0, lat.dx), 1e-8);
  }
}

TEST(Classical, TimeReversalReturnsToStart) {
  const Lattice1D lat = Lattice1D::periodic_box(64, 2 * std::numbers::pi);
  const LagrangianSpec L = models::quartic_scalar(1.0, 2.0);
  const ClassicalFieldState s0 = cosine_state(lat, 1.0, 1);
  const double dt = lat.dx / 4;
  const ClassicalFieldState fwd = dw_evolve(L, s0, dt, 500);
  const ClassicalFieldState back = dw_evolve(L, fwd, -dt, 500);
  EXPECT_LT(l2(back.phi, s0.phi, lat.dx), 1e-11);
  EXPECT_LT(l2(back.pi0, s0.pi0, lat.dx), 1e-11);
}

TEST(Classical, EnergyHasNoSecularDrift) {
  const Lattice1D lat = Lattice1D::periodic_box(256, 2 * std::numbers::pi);
  const LagrangianSpec L = models::free_scalar(1.0);
  const double dt = lat.dx / 4;
  const long n = static_cast<long>(std::lround(10.0 / dt));
  std::vector<double> t, e;
  const double e0 = classical_energy(L, cosine_state(lat, 1.0, 1));
  EXPECT_NEAR(e0, std::numbers::pi * (0.5 + 0.5 * std::pow(2 * std::sin(lat.dx / 2) / lat.dx, 2)), 1e-12);
  dw_evolve(L, cosine_state(lat, 1.0, 1), dt, n, [&](const ClassicalFieldState& s, long step) {
    if (step % 10 == 0) {
      t.push_back(s.time);
      e.push_back(classical_energy(L, s));
    }
  });
  const double drift = std::fabs(oracle::ls_slope(t, e)) * (t.back() - t.front()) / e0;
  EXPECT_LT(drift, 1e-6);
  double worst = 0.0;
  for (double v : e) worst = std::max(worst, std::fabs(v - e0) / e0);
  EXPECT_LT(worst, 1e-4);  // bounded leapfrog oscillation
}

TEST(Classical, CflAndShapeErrors) {
  const Lattice1D lat = Lattice1D::periodic_box(32, 1.0);
  const LagrangianSpec L = models::free_scalar(1.0);
  const ClassicalFieldState s = ClassicalFieldState::zeros(lat);
  EXPECT_THROW(dw_step(L, s, lat.dx), ConfigError);
  EXPECT_THROW(dw_step(L, s, 0.0), ConfigError);
  ClassicalFieldState bad = s;
  bad.phi.pop_back();
  EXPECT_THROW(dw_step(L, bad, 0.1 * lat.dx), UsageError);
  EXPECT_THROW(dw_step(models::coupled_doublet(), s, 0.1 * lat.dx), UnsupportedError);
  EXPECT_THROW(dw_step(models::sextic_scalar_3p1(), s, 0.1 * lat.dx), UnsupportedError);
}

TEST(Classical, BlowUpReportsTheStep) {
  const Lattice1D lat = Lattice1D::periodic_box(16, 2 * std::numbers::pi);
  const LagrangianSpec L = LagrangianSpec::create(2, Eigen::MatrixXd::Identity(1, 1), parse_polynomial("-phi^6", 1));
  try {
    dw_evolve(L, cosine_state(lat, 3.0, 1), 0.1 * lat.dx, 100000);
    FAIL();
  } catch (const DivergenceError& e) {
    EXPECT_GT(e.step(), 0);
  }
}

TEST(Classical, StaticMinimumIsStationary) {
  const Lattice1D lat = Lattice1D::periodic_box(32, 2 * std::numbers::pi);
  const LagrangianSpec L = models::quartic_scalar(1.0, 1.0);
  const ClassicalFieldState out = dw_evolve(L, ClassicalFieldState::zeros(lat), lat.dx / 4, 400);
  for (std::size_t j = 0; j < out.phi.size(); ++j) {
    EXPECT_EQ(out.phi[j], 0.0);
    EXPECT_EQ(out.pi0[j], 0.0);
  }
  ClassicalFieldState ho = ClassicalFieldState::zeros(Lattice1D{1, 1.0});
  ho = dw_evolve(models::harmonic_oscillator(2.0), ho, 1e-2, 1000);
  EXPECT_EQ(ho.phi[0], 0.0);
  EXPECT_EQ(ho.pi0[0], 0.0);
}

TEST(Classical, HarmonicOscillatorEnergyExample) {
  ClassicalFieldState s = ClassicalFieldState::zeros(Lattice1D{1, 1.0});
  s.phi[0] = 1.0;
  // 1/2 p^2 + 1/2 w^2 q^2 with q = 1, p = 0, w = 2
  EXPECT_DOUBLE_EQ(classical_energy(models::harmonic_oscillator(2.0), s), 2.0);
}

TEST(Classical, OracleAgreementRelativeToFieldNorm) {
  const Lattice1D lat = Lattice1D::periodic_box(128, 2 * std::numbers::pi);
  const LagrangianSpec L = models::free_scalar(1.0);
  const ClassicalFieldState s0 = cosine_state(lat, 1.0, 1);
  const double dt = lat.dx / 4;
  const long n = static_cast<long>(std::lround(1.0 / dt));
  const ClassicalFieldState a = dw_evolve(L, s0, dt, n);
  const ClassicalFieldState b = euler_lagrange_oracle(L, s0, dt, n);
  EXPECT_LT(l2(a.phi, b.phi, lat.dx), 1e-6 * l2(a.phi, std::vector<double>(a.phi.size(), 0.0), lat.dx));
}
