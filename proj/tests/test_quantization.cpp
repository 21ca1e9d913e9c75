#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "dwlab/evolution.hpp"
#include "dwlab/quantization.hpp"

using namespace dwlab;

namespace {

std::shared_ptr<const GammaSet> gamma(int dim, const char* rep) {
  return std::make_shared<const GammaSet>(build_gamma_set(dim, rep));
}

}  // namespace

TEST(Quantization, MechanicsHamiltonianEntries) {
  const FieldGrid grid = FieldGrid::box(16, -2.0, 2.0);
  const HamiltonianOperator h = assemble_hamiltonian(models::harmonic_oscillator(2.0), gamma(1, "scalar"), grid);
  EXPECT_EQ(h.scheme(), Scheme::mechanical_schrodinger);
  EXPECT_DOUBLE_EQ(h.kinetic_coefficient(), 0.5);
  const double dq = 4.0 / 15.0;
  const Eigen::MatrixXd m = h.field_matrix();
  for (int i = 0; i < 16; ++i) {
    const double q = -2.0 + i * dq;
    EXPECT_NEAR(m(i, i), 1.0 / (dq * dq) + 2.0 * q * q, 1e-12);
    if (i + 1 < 16) {
      EXPECT_NEAR(m(i, i + 1), -0.5 / (dq * dq), 1e-12);
    }
    if (i + 2 < 16) {
      EXPECT_EQ(m(i, i + 2), 0.0);
    }
  }
  EXPECT_LT((m - m.transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Quantization, KineticNormalizationChoices) {
  const FieldGrid grid = FieldGrid::box(16, -2.0, 2.0);
  const LagrangianSpec L = models::free_scalar(1.0, 2);
  EXPECT_DOUBLE_EQ(assemble_hamiltonian(L, gamma(2, "dirac_1p1"), grid).kinetic_coefficient(), 0.5);
  EXPECT_DOUBLE_EQ(
      assemble_hamiltonian(L, gamma(2, "dirac_1p1"), grid, KineticNormalization::clifford_trace).kinetic_coefficient(),
      1.0);
  const LagrangianSpec heavy = LagrangianSpec::create(2, Eigen::MatrixXd::Constant(1, 1, 4.0), parse_polynomial("phi^2", 1));
  EXPECT_DOUBLE_EQ(assemble_hamiltonian(heavy, gamma(2, "dirac_1p1"), grid).kinetic_coefficient(), 0.125);
  EXPECT_EQ(assemble_hamiltonian(L, gamma(2, "dirac_1p1"), grid).scheme(), Scheme::dirac_like);
}

TEST(Quantization, AssemblyRejectsBadCombinations) {
  const FieldGrid grid = FieldGrid::box(16, -2.0, 2.0);
  EXPECT_THROW(assemble_hamiltonian(models::free_scalar(1.0), gamma(2, "kemmer_spin0"), grid), UnsupportedError);
  EXPECT_THROW(assemble_hamiltonian(models::coupled_doublet(), gamma(2, "dirac_1p1"), grid), UnsupportedError);
  EXPECT_THROW(assemble_hamiltonian(models::free_scalar(1.0), gamma(1, "scalar"), grid), ConfigError);
  EXPECT_THROW(assemble_hamiltonian(models::harmonic_oscillator(1.0), gamma(1, "scalar"), FieldGrid::box(4, -1, 1)),
               ConfigError);
}

TEST(Quantization, HamiltonianActsAsSecondOrderOperator) {
  // H psi vs -1/2 psi'' + 1/2 q^2 psi for a Gaussian; error O(dq^2).
  double previous = 0.0;
  for (int n : {101, 201, 401}) {
    const FieldGrid grid = FieldGrid::box(n, -8.0, 8.0);
    const auto g = gamma(1, "scalar");
    const HamiltonianOperator h = assemble_hamiltonian(models::harmonic_oscillator(1.0), g, grid);
    WaveFunction psi(g, grid);
    for (int i = 0; i < n; ++i) {
      const double q = grid.coordinate(i) - 0.5;
      psi(0, i) = std::exp(-q * q);
    }
    const WaveFunction hp = h.apply(psi);
    double err = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
      const double x = grid.coordinate(i), q = x - 0.5;
      const double second = (4 * q * q - 2) * std::exp(-q * q);
      err = std::max(err, std::abs(hp(0, i) - (-0.5 * second + 0.5 * x * x * std::exp(-q * q))));
    }
    if (previous > 0) {
      EXPECT_NEAR(previous / err, 4.0, 0.2);
    }
    previous = err;
  }
}

TEST(Quantization, CanonicalCommutatorOnSmoothStates) {
  const auto g = gamma(2, "dirac_1p1");
  const FieldGrid grid = FieldGrid::box(257, -8.0, 8.0);
  const Lattice1D lat{4, 0.5};
  WaveFunction psi(g, grid, lat);
  for (int s = 0; s < 2; ++s) {
    for (int j = 0; j < 4; ++j) {
      for (int i = 0; i < grid.n_q; ++i) {
        const double q = grid.coordinate(i);
        psi(s, i, j) = std::exp(-q * q / 2) * Complex(1.0 + s, 0.3 * j);
      }
    }
  }
  const double dq = grid.dq();
  for (int mu = 0; mu < 2; ++mu) {
    const WaveFunction a = apply_phi_hat(0, apply_pi_hat_dirac(mu, psi));
    const WaveFunction b = apply_pi_hat_dirac(mu, apply_phi_hat(0, psi));
    const WaveFunction expect = apply_spinor_matrix(Complex(0.0, 1.0) * g->matrices[mu], psi);
    double worst = 0.0;
    for (int s = 0; s < 2; ++s) {
      for (int j = 0; j < 4; ++j) {
        for (int i = 1; i + 1 < grid.n_q; ++i) worst = std::max(worst, std::abs(a(s, i, j) - b(s, i, j) - expect(s, i, j)));
      }
    }
    EXPECT_LT(worst, 5 * dq * dq);
  }
  EXPECT_THROW(apply_phi_hat(1, psi), UsageError);
  EXPECT_THROW(apply_pi_hat_dirac(2, psi), UsageError);
}

TEST(Quantization, GoodMomentumSymbol) {
  const std::vector<double> omega{1.5, -0.5};
  EXPECT_EQ(good_pi_symbol(0, 2.0, omega), Complex(-3.0, 0.0));
  EXPECT_EQ(good_pi_symbol(1, 2.0, omega), Complex(1.0, 0.0));
  EXPECT_THROW(good_pi_symbol(2, 2.0, omega), UsageError);
}

TEST(Quantization, MatrixCsvIsDense) {
  const FieldGrid grid = FieldGrid::box(8, -1.0, 1.0);
  const HamiltonianOperator h = assemble_hamiltonian(models::harmonic_oscillator(1.0), gamma(1, "scalar"), grid);
  std::ostringstream os;
  h.write_csv(os);
  const std::string text = os.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 8);
  EXPECT_EQ(std::count(text.begin(), text.end(), ','), 8 * 7);
}

TEST(Quantization, PhiHatOnConstantIsRamp) {
  const auto g = gamma(1, "scalar");
  const FieldGrid grid = FieldGrid::box(21, -1.0, 1.0);
  WaveFunction psi(g, grid);
  for (int i = 0; i < grid.n_q; ++i) psi(0, i) = 1.0;
  const WaveFunction out = apply_phi_hat(0, psi);
  for (int i = 0; i < grid.n_q; ++i) EXPECT_EQ(out(0, i), Complex(grid.coordinate(i), 0.0));
}

TEST(Quantization, PhiHatExpectationOfShiftedGaussian) {
  const auto g = gamma(1, "scalar");
  const FieldGrid grid = FieldGrid::box(201, -8.0, 8.0);
  WaveFunction psi(g, grid);
  for (int i = 0; i < grid.n_q; ++i) {
    const double q = grid.coordinate(i) - 0.5;
    psi(0, i) = std::exp(-q * q);
  }
  const double mean = plain_product(psi, apply_phi_hat(0, psi)).real() / norm_plus(psi);
  EXPECT_NEAR(mean, 0.5, grid.dq());
}

TEST(Quantization, PiHatOnPlaneWave) {
  const auto g = gamma(1, "scalar");
  const double k = 1.5;
  double previous = 0.0;
  for (int n : {201, 401}) {
    const FieldGrid grid = FieldGrid::box(n, -4.0, 4.0);
    WaveFunction psi(g, grid);
    for (int i = 0; i < n; ++i) psi(0, i) = std::polar(1.0, k * grid.coordinate(i));
    const WaveFunction out = apply_pi_hat_dirac(0, psi);
    double err = 0.0;
    for (int i = 1; i + 1 < n; ++i) err = std::max(err, std::abs(out(0, i) - k * psi(0, i)));
    EXPECT_LT(err, k * k * k * grid.dq() * grid.dq());
    if (previous > 0) {
      EXPECT_NEAR(previous / err, 4.0, 0.1);
    }
    previous = err;
  }
}

TEST(Quantization, PiHatOnRealGaussianIsImaginaryAndOdd) {
  const auto g = gamma(1, "scalar");
  const FieldGrid grid = FieldGrid::box(101, -6.0, 6.0);
  WaveFunction psi(g, grid);
  for (int i = 0; i < grid.n_q; ++i) psi(0, i) = std::exp(-grid.coordinate(i) * grid.coordinate(i));
  const WaveFunction out = apply_pi_hat_dirac(0, psi);
  for (int i = 0; i < grid.n_q; ++i) {
    EXPECT_EQ(out(0, i).real(), 0.0);
    EXPECT_NEAR(out(0, i).imag(), -out(0, grid.n_q - 1 - i).imag(), 1e-14);
  }
}

TEST(Quantization, GoodSymbolExamples) {
  const std::vector<double> one{1.0}, three{3.0};
  EXPECT_EQ(good_pi_symbol(0, 1.0, one), Complex(-1.0, 0.0));
  EXPECT_EQ(good_pi_symbol(0, 0.0, one).real(), 0.0);
  EXPECT_EQ(good_pi_symbol(0, 2.0, three), Complex(-6.0, 0.0));
}
