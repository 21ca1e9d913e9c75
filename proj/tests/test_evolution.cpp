#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dwlab/evolution.hpp"
#include "oracles.hpp"

using namespace dwlab;

namespace {

std::shared_ptr<const GammaSet> gamma(int dim, const char* rep) {
  return std::make_shared<const GammaSet>(build_gamma_set(dim, rep));
}

double position(const WaveFunction& psi) {
  double s = 0.0;
  for (int i = 0; i < psi.n_q(); ++i) s += psi.grid().coordinate(i) * std::norm(psi(0, i));
  return s * psi.grid().dq();
}

}  // namespace

TEST(Evolution, CrankNicolsonIsUnitary) {
  const auto g = gamma(1, "scalar");
  const FieldGrid grid = FieldGrid::box(256, -12, 12);
  const HamiltonianOperator h = assemble_hamiltonian(models::harmonic_oscillator(1.0), g, grid);
  const WaveFunction psi0 = product_state(g, grid, std::nullopt, gaussian_profile(grid, 1.0, 1.0), [](int, double) { return 1.0; });
  EvolutionConfig cfg{Scheme::mechanical_schrodinger, 0.01, 2000, Stepper::crank_nicolson, 1, false};
  const EvolutionTrace t = evolve(psi0, h, cfg);
  ASSERT_EQ(t.size(), 2001u);
  for (std::size_t k = 1; k < t.size(); ++k) {
    EXPECT_LT(std::fabs(t.norm_plus[k] - t.norm_plus[k - 1]), 1e-12);
    EXPECT_NEAR(t.energy[k], t.energy[0], 1e-10);
  }
}

TEST(Evolution, CoherentStateOscillates) {
  const auto g = gamma(1, "scalar");
  const FieldGrid grid = FieldGrid::box(512, -12, 12);
  const HamiltonianOperator h = assemble_hamiltonian(models::harmonic_oscillator(1.0), g, grid);
  const WaveFunction psi0 = product_state(g, grid, std::nullopt, gaussian_profile(grid, 1.5, 1.0), [](int, double) { return 1.0; });
  EvolutionConfig cfg{Scheme::mechanical_schrodinger, 0.005, 400, Stepper::crank_nicolson, 100, true};
  const EvolutionTrace t = evolve(psi0, h, cfg);
  // Level spacing on the grid is 1 - O(dq^2), so the phase lags by ~1e-3 at t = 2.
  for (std::size_t k = 0; k < t.size(); ++k) EXPECT_NEAR(position(t.snapshots[k]), 1.5 * std::cos(t.times[k]), 3e-3);
}

TEST(Evolution, Rk4MatchesCrankNicolsonInMechanics) {
  const auto g = gamma(1, "scalar");
  const FieldGrid grid = FieldGrid::box(64, -6, 6);
  const HamiltonianOperator h = assemble_hamiltonian(models::harmonic_oscillator(1.0), g, grid);
  const WaveFunction psi0 = product_state(g, grid, std::nullopt, gaussian_profile(grid, 0.5, 1.0), [](int, double) { return 1.0; });
  EvolutionConfig rk{Scheme::mechanical_schrodinger, 0.002, 500, Stepper::rk4, 500, true};
  EvolutionConfig cn = rk;
  cn.stepper = Stepper::crank_nicolson;
  cn.dt = 0.0005;
  cn.n_steps = 2000;
  cn.output_stride = 2000;
  const WaveFunction a = evolve(psi0, h, rk).snapshots.back();
  const WaveFunction b = evolve(psi0, h, cn).snapshots.back();
  EXPECT_LT((a.values() - b.values()).norm() * std::sqrt(grid.dq()), 1e-6);
}

TEST(Evolution, DiracLikeMatchesSpectralOracle) {
  const auto g = gamma(2, "dirac_1p1");
  const FieldGrid grid = FieldGrid::box(24, -4, 4);
  const Lattice1D lat = Lattice1D::periodic_box(16, 2 * std::numbers::pi);
  const LagrangianSpec L = LagrangianSpec::create(2, Eigen::MatrixXd::Identity(1, 1), parse_polynomial("2*phi^2", 1));
  const HamiltonianOperator h = assemble_hamiltonian(L, g, grid);
  const WaveFunction psi0 = product_state(g, grid, lat, gaussian_profile(grid, 0.3, 0.8), [](int s, double x) {
    return Complex(s == 0 ? 1.0 : 0.4, 0.0) * std::exp(-2.0 * (x - 3.0) * (x - 3.0)) * std::polar(1.0, x);
  });
  Eigen::VectorXd diag(grid.n_q);
  for (int i = 0; i < grid.n_q; ++i) diag(i) = h.diagonal(i);
  const Eigen::Matrix2cd g0 = g->matrices[0], g1 = g->matrices[1];
  const double t_end = 0.5;
  const Eigen::VectorXcd exact =
      oracle::dirac_spectral_evolve(psi0.values(), grid.n_q, lat.n_x, lat.dx, diag, h.off_diagonal(), g0, g1, t_end);
  std::vector<double> errors;
  for (long n : {100L, 200L}) {
    EvolutionConfig cfg{Scheme::dirac_like, t_end / n, n, Stepper::rk4, n, true};
    const WaveFunction out = evolve(psi0, h, cfg).snapshots.back();
    errors.push_back((out.values() - exact).norm() * std::sqrt(grid.dq() * lat.dx));
  }
  EXPECT_LT(errors[1], 1e-7);
  EXPECT_GT(errors[0] / errors[1], 12.0);  // fourth order in time
}

TEST(Evolution, ValidationErrors) {
  const FieldGrid grid = FieldGrid::box(32, -4, 4);
  const auto g = gamma(1, "scalar");
  const HamiltonianOperator h = assemble_hamiltonian(models::harmonic_oscillator(1.0), g, grid);
  const WaveFunction psi(g, grid);
  EvolutionConfig cfg{Scheme::mechanical_schrodinger, 1.0, 1, Stepper::rk4, 1, false};
  EXPECT_THROW(evolve(psi, h, cfg), ConfigError);  // CFL
  cfg.dt = -1.0;
  cfg.stepper = Stepper::crank_nicolson;
  EXPECT_THROW(evolve(psi, h, cfg), ConfigError);
  cfg.dt = 0.01;
  cfg.scheme = Scheme::good;
  EXPECT_THROW(evolve(psi, h, cfg), UnsupportedError);

  const auto d = gamma(2, "dirac_1p1");
  const HamiltonianOperator hd = assemble_hamiltonian(models::free_scalar(1.0), d, grid);
  const WaveFunction pd(d, grid, Lattice1D::periodic_box(8, 1.0));
  EvolutionConfig cd{Scheme::dirac_like, 0.001, 1, Stepper::crank_nicolson, 1, false};
  EXPECT_THROW(evolve(pd, hd, cd), ConfigError);
  cd.stepper = Stepper::rk4;
  cd.scheme = Scheme::mechanical_schrodinger;
  EXPECT_THROW(evolve(pd, hd, cd), ConfigError);
  EXPECT_THROW(evolve(psi, hd, EvolutionConfig{Scheme::dirac_like, 0.001, 1, Stepper::rk4, 1, false}), UsageError);
}

TEST(Evolution, DivergenceCarriesStep) {
  const FieldGrid grid = FieldGrid::box(32, -4, 4);
  const auto g = gamma(1, "scalar");
  const HamiltonianOperator h = assemble_hamiltonian(models::harmonic_oscillator(1.0), g, grid);
  WaveFunction psi(g, grid);
  psi(0, 3) = std::numeric_limits<double>::infinity();
  EvolutionConfig cfg{Scheme::mechanical_schrodinger, 0.01, 5, Stepper::crank_nicolson, 1, false};
  try {
    evolve(psi, h, cfg);
    FAIL();
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.step(), 1);
  }
}

TEST(Evolution, GroundStateFromImaginaryTime) {
  for (double omega : {1.0, 2.0}) {
    const auto g = gamma(1, "scalar");
    const FieldGrid grid = FieldGrid::box(512, -12, 12);
    const HamiltonianOperator h = assemble_hamiltonian(models::harmonic_oscillator(omega), g, grid);
    const GroundState gs = ground_state_imaginary_time(h, grid, 1e-13);
    EXPECT_NEAR(gs.energy, omega / 2, 1e-3);
    for (std::size_t k = 1; k < gs.energy_history.size(); ++k) {
      EXPECT_LE(gs.energy_history[k], gs.energy_history[k - 1] + 1e-13);
    }
    EXPECT_NEAR(field_eigenstate(h, 0).first, gs.energy, 1e-9);
    EXPECT_NEAR(field_eigenstate(h, 1).first, 1.5 * omega, 3e-3);
  }
}

TEST(Evolution, GroundStateRejectsSpinors) {
  const FieldGrid grid = FieldGrid::box(32, -4, 4);
  const HamiltonianOperator h = assemble_hamiltonian(models::free_scalar(1.0), gamma(2, "dirac_1p1"), grid);
  EXPECT_THROW(ground_state_imaginary_time(h, grid, 1e-10), UnsupportedError);
}

TEST(Evolution, ParticleInABox) {
  // V = 0 between walls at +-1: E_n = (n pi / 2)^2 / 2.
  const auto g = gamma(1, "scalar");
  const FieldGrid grid = FieldGrid::with_walls(1.0, 399);
  const LagrangianSpec L = LagrangianSpec::create(1, Eigen::MatrixXd::Identity(1, 1), Polynomial(1));
  const HamiltonianOperator h = assemble_hamiltonian(L, g, grid);
  for (int n = 1; n <= 3; ++n) {
    const double exact = 0.5 * std::pow(n * std::numbers::pi / 2.0, 2);
    EXPECT_NEAR(field_eigenstate(h, n - 1).first, exact, 1e-4 * n * n);
  }
}

TEST(Evolution, PlaneWaveSpinorIsAnEigenvector) {
  const GammaSet g = build_gamma_set(2, "dirac_1p1");
  for (int sign : {+1, -1}) {
    const double mu = 1.3, k = 0.7;
    const Eigen::Vector2cd u = dirac_plane_wave_spinor(g, mu, k, sign);
    const CMatrix hk = g[0] * mu + k * g[0] * g[1];
    const Eigen::Vector2cd hu = hk * u;
    EXPECT_LT((hu - sign * std::sqrt(mu * mu + k * k) * u).norm(), 1e-12);
    EXPECT_NEAR(u.norm(), 1.0, 1e-14);
  }
}

TEST(Evolution, GroundStateAtDefaultGrid) {
  const auto g = gamma(1, "scalar");
  const FieldGrid grid = FieldGrid::box(256, -12, 12);
  EXPECT_NEAR(ground_state_imaginary_time(assemble_hamiltonian(models::harmonic_oscillator(1.0), g, grid), grid, 1e-13).energy,
              0.5, 1e-3);
  EXPECT_NEAR(ground_state_imaginary_time(assemble_hamiltonian(models::harmonic_oscillator(2.0), g, grid), grid, 1e-13).energy,
              1.0, 2e-3);
}

TEST(Evolution, BoxGroundStateViaImaginaryTime) {
  const auto g = gamma(1, "scalar");
  const LagrangianSpec L = LagrangianSpec::create(1, Eigen::MatrixXd::Identity(1, 1), Polynomial(1));
  for (double half : {1.0, 2.5}) {
    const FieldGrid grid = FieldGrid::with_walls(half, 63);
    const double exact = std::numbers::pi * std::numbers::pi / (8 * half * half);
    const double e0 = ground_state_imaginary_time(assemble_hamiltonian(L, g, grid), grid, 1e-13).energy;
    EXPECT_NEAR(e0, exact, 1e-2 * exact);
  }
}

TEST(Evolution, GroundStateReportsNonConvergence) {
  const auto g = gamma(1, "scalar");
  const FieldGrid grid = FieldGrid::box(64, -6, 6);
  const HamiltonianOperator h = assemble_hamiltonian(models::harmonic_oscillator(1.0), g, grid);
  EXPECT_THROW(ground_state_imaginary_time(h, grid, 1e-14, ImaginaryTimeOptions{0.5, 3}), ConvergenceError);
}

TEST(Evolution, CrankNicolsonKeepsEigenstateStationary) {
  const auto g = gamma(1, "scalar");
  const FieldGrid grid = FieldGrid::box(256, -12, 12);
  const HamiltonianOperator h = assemble_hamiltonian(models::harmonic_oscillator(1.0), g, grid);
  const WaveFunction psi0 = product_state(g, grid, std::nullopt, field_eigenstate(h, 0).second, [](int, double) { return 1.0; });
  EvolutionConfig cfg{Scheme::mechanical_schrodinger, 0.01, 1000, Stepper::crank_nicolson, 10, true};
  const EvolutionTrace t = evolve(psi0, h, cfg);
  for (const WaveFunction& s : t.snapshots) EXPECT_GE(std::norm(plain_product(s, psi0)), 1.0 - 1e-6);
  EXPECT_NEAR(t.times.back(), 10.0, 1e-9);
}

TEST(Evolution, DiracLikeMatchesContinuumFreeDirac) {
  // Field factor is an exact eigenvector of H-hat with eigenvalue mu, so the
  // spinor obeys the free Dirac equation with mass mu. Reference: continuum
  // plane-wave propagator exp(-i (g0 mu + k g0 g1) t).
  const auto g = gamma(2, "dirac_1p1");
  const FieldGrid grid = FieldGrid::box(32, -4, 4);
  const Lattice1D lat = Lattice1D::periodic_box(256, 2 * std::numbers::pi);
  const LagrangianSpec L = LagrangianSpec::create(2, Eigen::MatrixXd::Identity(1, 1), parse_polynomial("2*phi^2", 1));
  const HamiltonianOperator h = assemble_hamiltonian(L, g, grid);
  const auto [mu, field] = field_eigenstate(h, 0);
  const double k = 1.0, t_end = 1.0;
  const Eigen::Vector2cd u0 = Eigen::Vector2cd(1.0, Complex(0.4, 0.2)).normalized() / std::sqrt(2 * std::numbers::pi);
  const WaveFunction psi0 = product_state(g, grid, lat, field, [&](int s, double x) { return u0(s) * std::polar(1.0, k * x); });
  const EvolutionConfig cfg{Scheme::dirac_like, 0.005, 200, Stepper::rk4, 200, true};
  const WaveFunction out = evolve(psi0, h, cfg).snapshots.back();

  const Eigen::Matrix2cd hk = g->matrices[0] * mu + k * g->matrices[0] * g->matrices[1];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(hk);
  Eigen::Matrix2cd phase = Eigen::Matrix2cd::Zero();
  for (int r = 0; r < 2; ++r) phase(r, r) = std::polar(1.0, -es.eigenvalues()(r) * t_end);
  const Eigen::Vector2cd u = es.eigenvectors() * phase * es.eigenvectors().adjoint() * u0;
  const WaveFunction exact = product_state(g, grid, lat, field, [&](int s, double x) { return u(s) * std::polar(1.0, k * x); });
  EXPECT_LT((out.values() - exact.values()).norm() * std::sqrt(grid.dq() * lat.dx), 1e-4);
}

TEST(Evolution, Rk4HalvingAgainstFineReference) {
  const auto g = gamma(2, "dirac_1p1");
  const FieldGrid grid = FieldGrid::box(24, -4, 4);
  const Lattice1D lat = Lattice1D::periodic_box(32, 2 * std::numbers::pi);
  const LagrangianSpec L = LagrangianSpec::create(2, Eigen::MatrixXd::Identity(1, 1), parse_polynomial("2*phi^2", 1));
  const HamiltonianOperator h = assemble_hamiltonian(L, g, grid);
  const WaveFunction psi0 = product_state(g, grid, lat, gaussian_profile(grid, 0.3, 0.8), [](int s, double x) {
    return Complex(s == 0 ? 1.0 : 0.4, 0.0) * std::exp(-(x - 3.0) * (x - 3.0)) * std::polar(1.0, x);
  });
  auto run = [&](long n) { return evolve(psi0, h, {Scheme::dirac_like, 1.0 / n, n, Stepper::rk4, n, true}).snapshots.back(); };
  const WaveFunction ref = run(1600);
  const double e1 = (run(20).values() - ref.values()).norm(), e2 = (run(40).values() - ref.values()).norm();
  EXPECT_GE(e1 / e2, 12.0);
  EXPECT_LE(e1 / e2, 20.0);
}
