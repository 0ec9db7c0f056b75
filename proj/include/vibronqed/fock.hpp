#pragma once

// Truncated phonon Fock space: excitation-sector block Hamiltonians, the
// phonon displacement transform, and the transformed initial state used by
// the dynamics module.
//
// Sector m (conserved excitation number m+1) is spanned by the two branches
// {|m+1, n, g>, |m, n, e>} with n the phonon number. All matrices are built
// in the phase-rotated frame in which the phonon displacement couplings are
// real, so every block Hamiltonian is real symmetric. Branch-major ordering:
// g-branch phonons 0..n_max first, then e-branch.

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "vibronqed/model.hpp"

namespace vibronqed {

struct PhononBasis {
  int n_max = 60;
  int dim() const { return n_max + 1; }
};

inline void check_basis(const PhononBasis& basis) {
  if (basis.n_max < 1) throw std::invalid_argument("n_max must be >= 1");
}

// Position-like ladder combination b + b^dagger on the truncated basis.
inline Eigen::MatrixXd ladder_sum(const PhononBasis& basis) {
  check_basis(basis);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(basis.dim(), basis.dim());
  for (int n = 0; n + 1 <= basis.n_max; ++n) {
    x(n, n + 1) = x(n + 1, n) = std::sqrt(double(n + 1));
  }
  return x;
}

// Sector Hamiltonian, stored relative to sector_offset(m). The full matrix is
// offset * I + matrix; keeping the offset apart preserves the sub-coupling
// energy scales when omega_a / g is large.
struct BlockHamiltonian {
  int m = 0;
  double energy_offset = 0.0;  // units of hbar g
  PhononBasis basis;
  Eigen::MatrixXd matrix;      // dimension 2 * (n_max + 1), real symmetric

  int dim() const { return 2 * basis.dim(); }
};

inline BlockHamiltonian build_block(int m, const DimensionlessModel& mod,
                                    const PhononBasis& basis) {
  if (m < 0) throw std::domain_error("sector index m must be >= 0");
  check_basis(basis);
  const int d = basis.dim();
  const double w = mod.omega;
  const double ka = mod.lamb_dicke;
  const Eigen::MatrixXd x = ladder_sum(basis);

  BlockHamiltonian block;
  block.m = m;
  block.basis = basis;
  block.energy_offset = sector_offset(m, mod);
  block.matrix = Eigen::MatrixXd::Zero(2 * d, 2 * d);

  // g branch: photon number m+1. Relative to the offset the diagonal keeps
  // only the phonon ladder and the photon-recoil Kerr shift.
  Eigen::MatrixXd hgg = (m + 1) * ka * w * x;
  for (int n = 0; n < d; ++n) {
    hgg(n, n) += n * w + double(m + 1) * double(m + 1) * mod.chi;
  }
  // e branch: photon number m, emitter excited; differs from the offset by
  // the detuning Omega - omega_a.
  Eigen::MatrixXd hee = m * ka * w * x;
  for (int n = 0; n < d; ++n) {
    hee(n, n) += n * w + double(m) * double(m) * mod.chi + mod.detuning;
  }

  block.matrix.topLeftCorner(d, d) = hgg;
  block.matrix.bottomRightCorner(d, d) = hee;
  const double coupling = std::sqrt(double(m + 1)) * mod.g;
  block.matrix.topRightCorner(d, d) = coupling * Eigen::MatrixXd::Identity(d, d);
  block.matrix.bottomLeftCorner(d, d) = coupling * Eigen::MatrixXd::Identity(d, d);
  return block;
}

// Variant with the phonon displacement switched off but the Kerr shift kept;
// this is the Hamiltonian whose eigenpairs are the closed-form dressed levels.
inline BlockHamiltonian build_block_dressed_reference(int m, const DimensionlessModel& mod,
                                                      const PhononBasis& basis) {
  DimensionlessModel frozen = mod;
  frozen.lamb_dicke = 0.0;
  frozen.eta = 0.0;
  return build_block(m, frozen, basis);
}

struct DisplacementMatrix {
  double theta = 0.0;
  Eigen::MatrixXcd matrix;        // exp(i theta (b^dagger + b)) on the truncated basis
  bool truncation_warning = false;  // displaced vacuum leaks past the truncation edge
};

// Unitary exponentiation of the truncated generator. The closed-form
// coherent-state expansion is kept in the tests as an independent check.
inline DisplacementMatrix displacement_matrix(double theta, const PhononBasis& basis) {
  check_basis(basis);
  const Eigen::MatrixXd x = ladder_sum(basis);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(theta * x);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("displacement generator eigendecomposition failed");
  }
  const std::complex<double> iu(0.0, 1.0);
  Eigen::VectorXcd phases(basis.dim());
  for (int j = 0; j < basis.dim(); ++j) {
    phases(j) = std::exp(iu * es.eigenvalues()(j));
  }
  DisplacementMatrix result;
  result.theta = theta;
  result.matrix = es.eigenvectors().cast<std::complex<double>>() *
                  phases.asDiagonal() *
                  es.eigenvectors().transpose().cast<std::complex<double>>();
  // Weight of the displaced vacuum on the top 5 truncated levels.
  double edge_weight = 0.0;
  for (int n = std::max(0, basis.n_max - 4); n <= basis.n_max; ++n) {
    edge_weight += std::norm(result.matrix(n, 0));
  }
  result.truncation_warning = edge_weight > 1e-8;
  return result;
}

struct TransformedState {
  Eigen::VectorXd vector;  // dimension 2 * (n_max + 1), branch-major
  bool truncation_warning = false;
};

// Polaron-transformed initial state for |psi(0)> = |m+1, 0, g>, expressed in
// the same real rotated frame as build_block: the g branch carries the phonon
// vacuum displaced by -lamb_dicke * (m+1), the e branch is empty.
inline TransformedState transformed_initial_state(int m, const PhononBasis& basis,
                                                  const DimensionlessModel& mod) {
  if (m < 0) throw std::domain_error("sector index m must be >= 0");
  const double theta = mod.lamb_dicke * (m + 1);
  const DisplacementMatrix disp = displacement_matrix(theta, basis);
  const int d = basis.dim();
  TransformedState state;
  state.truncation_warning = disp.truncation_warning;
  state.vector = Eigen::VectorXd::Zero(2 * d);
  // The frame rotation multiplies phonon component n by i^n, which exactly
  // cancels the i^n phase of the displaced column; the result is real.
  static const std::complex<double> unit_phase[4] = {
      {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  for (int n = 0; n < d; ++n) {
    const std::complex<double> value = unit_phase[n % 4] * disp.matrix(n, 0);
    state.vector(n) = value.real();
  }
  return state;
}

// Conserved excitation number a^dagger a + |e><e| restricted to sector m:
// a multiple of the identity, kept for block-conservation assertions.
inline Eigen::MatrixXd excitation_number_operator(const PhononBasis& basis, int m) {
  if (m < 0) throw std::domain_error("sector index m must be >= 0");
  check_basis(basis);
  const int d = 2 * basis.dim();
  return double(m + 1) * Eigen::MatrixXd::Identity(d, d);
}

}  // namespace vibronqed
