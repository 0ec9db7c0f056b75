#pragma once

// Closed-form results for the displacement-free part of the sector dynamics:
// dressed levels of the emitter-cavity doublets (Kerr shift included), the
// intra-doublet Rabi splitting, the optomechanical transition intensity
// between neighboring-phonon dressed states, and the two-peak transition
// frequencies that the hybridized pair produces in a shallow trap.

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "vibronqed/fock.hpp"
#include "vibronqed/model.hpp"

namespace vibronqed {

enum class Branch { plus, minus };

// Mixing angle of the emitter-cavity doublet in sector m,
// tan(theta) = 2 sqrt(m+1) g / (detuning - (2m+1) chi), theta in (0, pi).
inline double mixing_angle(int m, const DimensionlessModel& mod) {
  if (m < 0) throw std::domain_error("sector index m must be >= 0");
  return std::atan2(2.0 * std::sqrt(double(m + 1)) * mod.g,
                    mod.detuning - (2 * m + 1) * mod.chi);
}

// Dressed energy relative to the sector offset (m+1) * omega_a.
inline double dressed_energy_eps(int m, int n, Branch branch,
                                 const DimensionlessModel& mod) {
  if (m < 0 || n < 0) throw std::domain_error("m and n must be >= 0");
  const double half_gap = (m + 0.5) * mod.chi - 0.5 * mod.detuning;
  const double rabi = std::sqrt(half_gap * half_gap + (m + 1) * mod.g * mod.g);
  const double sign = branch == Branch::plus ? 1.0 : -1.0;
  return (double(m) * m + m + 0.5) * mod.chi + 0.5 * mod.detuning + n * mod.omega +
         sign * rabi;
}

inline double dressed_energy(int m, int n, Branch branch, const DimensionlessModel& mod) {
  return sector_offset(m, mod) + dressed_energy_eps(m, n, branch, mod);
}

struct DressedLevel {
  int m = 0;
  int n = 0;
  Branch branch = Branch::plus;
  double energy = 0.0;  // absolute E/(hbar g)
  double eps = 0.0;     // relative to the sector offset
  double theta = 0.0;
  double amp_e = 0.0;  // coefficient of |m, n, e>
  double amp_g = 0.0;  // coefficient of |m+1, n, g>
};

inline DressedLevel dressed_level(int m, int n, Branch branch,
                                  const DimensionlessModel& mod) {
  DressedLevel level;
  level.m = m;
  level.n = n;
  level.branch = branch;
  level.theta = mixing_angle(m, mod);
  level.eps = dressed_energy_eps(m, n, branch, mod);
  level.energy = sector_offset(m, mod) + level.eps;
  const double c = std::cos(0.5 * level.theta);
  const double s = std::sin(0.5 * level.theta);
  if (branch == Branch::plus) {
    level.amp_e = c;
    level.amp_g = s;
  } else {
    level.amp_e = -s;
    level.amp_g = c;
  }
  return level;
}

// Intra-doublet splitting in the detuning-free form,
// Delta_m = 2 sqrt(((m + 1/2) chi)^2 + (m+1) g^2).
inline double rabi_splitting(int m, const DimensionlessModel& mod) {
  if (m < 0) throw std::domain_error("sector index m must be >= 0");
  const double kerr = (m + 0.5) * mod.chi;
  return 2.0 * std::sqrt(kerr * kerr + (m + 1) * mod.g * mod.g);
}

// |<psi_+^(m,0)| eta a^dagger a (b - b^dagger) |psi_-^(m,1)>|. In the dressed
// basis the photon-number weights (m and m+1) of the two branches contribute
// with opposite mixing signs and the difference collapses to one unit,
// leaving (eta/2) sin(theta); eta/2 on resonance.
inline double transition_intensity(int m, const DimensionlessModel& mod) {
  return 0.5 * mod.eta * std::sin(mixing_angle(m, mod));
}

// Cross-check counterpart of transition_intensity: diagonalize the
// displacement-free block numerically, pick the (n = 0, +) and (n = 1, -)
// dressed vectors by their phonon support, and evaluate the optomechanical
// matrix element with explicit operator matrices.
inline double brute_force_transition_intensity(int m, const DimensionlessModel& mod,
                                               const PhononBasis& basis = {20}) {
  const BlockHamiltonian ref = build_block_dressed_reference(m, mod, basis);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ref.matrix);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("dressed-reference eigendecomposition failed");
  }
  const int d = basis.dim();
  auto phonon_support = [&](int col) {
    int best = 0;
    double weight = -1.0;
    for (int n = 0; n < d; ++n) {
      const double w = es.eigenvectors()(n, col) * es.eigenvectors()(n, col) +
                       es.eigenvectors()(d + n, col) * es.eigenvectors()(d + n, col);
      if (w > weight) {
        weight = w;
        best = n;
      }
    }
    return best;
  };
  int plus_n0 = -1;
  int minus_n1 = -1;
  for (int col = 0; col < 2 * d; ++col) {
    const int n = phonon_support(col);
    if (n == 0) plus_n0 = col;  // eigenvalues ascend, so the last n=0 hit is '+'
    if (n == 1 && minus_n1 < 0) minus_n1 = col;  // and the first n=1 hit is '-'
  }
  if (plus_n0 < 0 || minus_n1 < 0) {
    throw std::runtime_error("could not identify dressed doublet levels");
  }
  const Eigen::MatrixXd x = ladder_sum(basis);
  Eigen::MatrixXd coupling = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  coupling.topLeftCorner(d, d) = double(m + 1) * mod.eta * x;
  coupling.bottomRightCorner(d, d) = double(m) * mod.eta * x;
  return std::abs(es.eigenvectors().col(plus_n0).dot(
      coupling * es.eigenvectors().col(minus_n1)));
}

struct TwoPeakPrediction {
  int m = 0;
  double mu = 0.0;          // hybridization intensity [g]
  double e_plus = 0.0;      // hybridized-level energies, absolute E/(hbar g)
  double e_minus = 0.0;
  double omega_plus = 0.0;  // transition frequencies [g]
  double omega_minus = 0.0;
};

// Hybridization of psi_+^(m,0) with psi_-^(m,1) by the optomechanical
// coupling, Kerr shift neglected and resonance assumed; the two transition
// frequencies down to psi_-^(m,0) are
//   omega_pm = sqrt(m+1) g + omega/2 +- sqrt((sqrt(m+1) g - omega/2)^2 + mu^2).
inline TwoPeakPrediction two_peak_frequencies(int m, const DimensionlessModel& mod) {
  if (m < 0) throw std::domain_error("sector index m must be >= 0");
  TwoPeakPrediction p;
  p.m = m;
  p.mu = transition_intensity(m, mod);
  const double rabi_half = std::sqrt(double(m + 1)) * mod.g;
  const double mean = 0.5 * mod.omega;
  const double split = std::sqrt((rabi_half - mean) * (rabi_half - mean) + p.mu * p.mu);
  p.omega_plus = rabi_half + mean + split;
  p.omega_minus = rabi_half + mean - split;
  p.e_plus = sector_offset(m, mod) + mean + split;
  p.e_minus = sector_offset(m, mod) + mean - split;
  return p;
}

}  // namespace vibronqed
