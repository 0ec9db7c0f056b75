#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "helpers.hpp"
#include "vibronqed/diag.hpp"
#include "vibronqed/fock.hpp"

using namespace vibronqed;

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

TEST_CASE("block Hamiltonian structure") {
  const DimensionlessModel mod = testutil::reference_model();
  for (int m : {0, 1, 3}) {
    const BlockHamiltonian block = build_block(m, mod, PhononBasis{20});
    const int d = 21;

    SECTION("symmetric, m = " + std::to_string(m)) {
      CHECK((block.matrix - block.matrix.transpose()).cwiseAbs().maxCoeff() <= 1e-13);
    }
    SECTION("diagonal blocks tridiagonal, m = " + std::to_string(m)) {
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          if (std::abs(i - j) > 1) {
            CHECK(block.matrix(i, j) == 0.0);
            CHECK(block.matrix(d + i, d + j) == 0.0);
          }
        }
      }
    }
    SECTION("branch coupling is sqrt(m+1) g identity, m = " + std::to_string(m)) {
      const Eigen::MatrixXd coupling = block.matrix.topRightCorner(d, d);
      const Eigen::MatrixXd expected =
          std::sqrt(double(m + 1)) * Eigen::MatrixXd::Identity(d, d);
      CHECK((coupling - expected).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("decoupled branches give exact displaced-oscillator ladders") {
  DimensionlessModel mod = testutil::reference_model();
  mod.g = 0.0;  // switch off the emitter-cavity exchange
  for (int m : {0, 2}) {
    const BlockHamiltonian block = build_block(m, mod, PhononBasis{60});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block.matrix,
                                                      Eigen::EigenvaluesOnly);
    // Branch ladders relative to the sector offset: n*omega (g branch, the
    // recoil shift cancels the displacement energy) and n*omega + detuning.
    std::vector<double> expected;
    for (int n = 0; n < 10; ++n) {
      expected.push_back(n * mod.omega);
      expected.push_back(n * mod.omega + mod.detuning);
    }
    std::sort(expected.begin(), expected.end());
    for (int i = 0; i < 10; ++i) {
      CHECK(es.eigenvalues()(i) == Catch::Approx(expected[i]).margin(1e-10));
    }
  }
}

TEST_CASE("static-emitter reduction to detuned exchange doublets") {
  // lamb_dicke = 0 leaves a block-diagonal matrix in phonon number whose
  // 2x2 blocks have splitting 2 sqrt(detuning^2/4 + (m+1) g^2).
  const double detuning = 0.8;
  const DimensionlessModel mod = testutil::synth_model(10.0, 0.0, 1e6, detuning);
  for (int m : {0, 1}) {
    const BlockHamiltonian block = build_block(m, mod, PhononBasis{12});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block.matrix,
                                                      Eigen::EigenvaluesOnly);
    const double split =
        2.0 * std::sqrt(0.25 * detuning * detuning + (m + 1) * mod.g * mod.g);
    const double center = 0.5 * detuning;
    CHECK(es.eigenvalues()(0) == Catch::Approx(center - split / 2).margin(1e-12));
    CHECK(es.eigenvalues()(1) == Catch::Approx(center + split / 2).margin(1e-12));
    // next doublet sits one trap quantum up
    CHECK(es.eigenvalues()(2) ==
          Catch::Approx(mod.omega + center - split / 2).margin(1e-12));
  }
}

TEST_CASE("resonant exchange doublet in the zero-phonon sub-block") {
  const DimensionlessModel mod = testutil::synth_model(10.0, 0.0, 1e6, 0.0);
  const BlockHamiltonian block = build_block(0, mod, PhononBasis{6});
  const int d = 7;
  Eigen::Matrix2d sub;
  sub << block.matrix(0, 0), block.matrix(0, d), block.matrix(d, 0), block.matrix(d, d);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(sub, Eigen::EigenvaluesOnly);
  CHECK(block.energy_offset + es.eigenvalues()(0) == Catch::Approx(1e6 - 1.0));
  CHECK(block.energy_offset + es.eigenvalues()(1) == Catch::Approx(1e6 + 1.0));
}

TEST_CASE("adjacent sectors reproduce their decoupled ladders independently") {
  DimensionlessModel mod = testutil::reference_model();
  mod.g = 0.0;
  for (int m : {0, 1}) {
    const BlockHamiltonian block = build_block(m, mod, PhononBasis{40});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block.matrix,
                                                      Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues()(0) == Catch::Approx(0.0).margin(1e-10));
    CHECK(es.eigenvalues()(2) == Catch::Approx(mod.omega).margin(1e-10));
    CHECK(block.energy_offset == (m + 1) * mod.omega_a);
  }
}

TEST_CASE("truncation convergence of the lowest levels") {
  const DimensionlessModel mod = testutil::reference_model();
  for (int m : {0, 1}) {
    const auto coarse = eigen_decompose(build_block(m, mod, PhononBasis{60}), mod);
    const auto fine = eigen_decompose(build_block(m, mod, PhononBasis{120}), mod);
    for (int i = 0; i < 10; ++i) {
      CHECK(std::abs(coarse.eigenvalues(i) - fine.eigenvalues(i)) < 1e-8);
    }
    CHECK(coarse.doubling_shift < 1e-8);
  }
}

TEST_CASE("displacement matrix") {
  const PhononBasis basis{60};

  SECTION("zero angle gives the identity") {
    const DisplacementMatrix d = displacement_matrix(0.0, basis);
    CHECK((d.matrix - Eigen::MatrixXcd::Identity(61, 61)).cwiseAbs().maxCoeff() <=
          1e-14);
  }

  SECTION("column zero matches the coherent-state expansion") {
    const double theta = 0.4;
    const DisplacementMatrix d = displacement_matrix(theta, basis);
    const std::complex<double> iu(0.0, 1.0);
    for (int n = 0; n <= 40; ++n) {
      const std::complex<double> expected = std::pow(iu * theta, n) *
                                            std::exp(-0.5 * theta * theta) /
                                            std::sqrt(factorial(n));
      CHECK(std::abs(d.matrix(n, 0) - expected) < 1e-10);
    }
  }

  SECTION("vacuum overlap is the Gaussian") {
    for (double theta : {0.1, 0.5, 1.0}) {
      const DisplacementMatrix d = displacement_matrix(theta, basis);
      CHECK(std::abs(d.matrix(0, 0) - std::exp(-0.5 * theta * theta)) < 1e-12);
    }
  }

  SECTION("unitary on the interior block") {
    for (double theta : {0.3, 1.0}) {
      const DisplacementMatrix d = displacement_matrix(theta, basis);
      const Eigen::MatrixXcd defect =
          d.matrix.adjoint() * d.matrix - Eigen::MatrixXcd::Identity(61, 61);
      CHECK(defect.topLeftCorner(56, 56).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }

  SECTION("interior column norms") {
    const DisplacementMatrix d = displacement_matrix(0.8, basis);
    for (int c = 0; c <= 40; ++c) {
      const double norm = d.matrix.col(c).norm();
      CHECK(norm <= 1.0 + 1e-12);
      CHECK(norm >= 1.0 - 1e-8);
    }
  }

  SECTION("truncation warning when the displaced weight reaches the edge") {
    CHECK_FALSE(displacement_matrix(0.5, basis).truncation_warning);
    CHECK(displacement_matrix(6.0, PhononBasis{8}).truncation_warning);
  }
}

TEST_CASE("transformed initial state") {
  SECTION("static emitter: the bare state itself") {
    const DimensionlessModel mod = testutil::synth_model(10.0, 0.0);
    const TransformedState state = transformed_initial_state(0, PhononBasis{20}, mod);
    CHECK(state.vector(0) == Catch::Approx(1.0).margin(1e-14));
    CHECK(state.vector.tail(41).cwiseAbs().maxCoeff() == 0.0);
  }

  SECTION("unit norm at the shallow-trap operating point") {
    const DimensionlessModel mod = testutil::reference_model(2e8);  // ka ~ 0.16
    const TransformedState state = transformed_initial_state(0, PhononBasis{60}, mod);
    CHECK(std::abs(state.vector.norm() - 1.0) <= 1e-10);
    CHECK_FALSE(state.truncation_warning);
  }

  SECTION("phonon statistics of the g branch are Poissonian") {
    const DimensionlessModel mod = testutil::reference_model(2e8);
    for (int m : {0, 1}) {
      const TransformedState state = transformed_initial_state(m, PhononBasis{60}, mod);
      const double lambda = std::pow(mod.lamb_dicke * (m + 1), 2);
      for (int n = 0; n <= 20; ++n) {
        const double expected = std::exp(-lambda) * std::pow(lambda, n) / factorial(n);
        CHECK(state.vector(n) * state.vector(n) == Catch::Approx(expected).margin(1e-8));
      }
      // e branch empty
      CHECK(state.vector.tail(61).cwiseAbs().maxCoeff() == 0.0);
    }
  }

  SECTION("signs alternate against the displacement direction") {
    const DimensionlessModel mod = testutil::reference_model();
    const TransformedState state = transformed_initial_state(0, PhononBasis{30}, mod);
    CHECK(state.vector(0) > 0.0);
    CHECK(state.vector(1) < 0.0);
    CHECK(state.vector(2) > 0.0);
  }
}

TEST_CASE("excitation number operator") {
  const DimensionlessModel mod = testutil::reference_model();
  const PhononBasis basis{15};
  for (int m : {0, 1, 4}) {
    const Eigen::MatrixXd op = excitation_number_operator(basis, m);
    const BlockHamiltonian block = build_block(m, mod, basis);
    SECTION("commutes with the block Hamiltonian, m = " + std::to_string(m)) {
      const Eigen::MatrixXd commutator = op * block.matrix - block.matrix * op;
      CHECK(commutator.cwiseAbs().maxCoeff() == 0.0);
    }
    SECTION("eigenvalue m + 1 everywhere, m = " + std::to_string(m)) {
      CHECK((op - double(m + 1) * Eigen::MatrixXd::Identity(32, 32))
                .cwiseAbs()
                .maxCoeff() == 0.0);
    }
    SECTION("trace, m = " + std::to_string(m)) {
      CHECK(op.trace() == Catch::Approx(2.0 * 16 * (m + 1)));
    }
  }
}
