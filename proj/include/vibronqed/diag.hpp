#pragma once

// Dense real-symmetric eigendecomposition of sector block Hamiltonians, with
// a truncation-convergence certificate, plus the root-validation report that
// cross-checks transcendental-equation roots against the spectrum.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vibronqed/fock.hpp"
#include "vibronqed/model.hpp"

namespace vibronqed {

struct EigenSystem {
  int m = 0;
  double energy_offset = 0.0;      // add to eigenvalues for absolute E/(hbar g)
  int n_max = 0;
  Eigen::VectorXd eigenvalues;     // ascending, relative to energy_offset
  Eigen::MatrixXd eigenvectors;    // orthonormal columns
  double doubling_shift = 0.0;     // max |shift| of the 10 lowest levels at 2*n_max
  double reliability_ceiling = 0.0;  // highest level with doubling shift < 1e-8

  double absolute(int i) const { return energy_offset + eigenvalues(i); }
};

namespace detail {

inline Eigen::VectorXd sorted_eigenvalues(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("symmetric eigensolver did not converge (dim = " +
                             std::to_string(h.rows()) + ")");
  }
  return es.eigenvalues();
}

}  // namespace detail

// Full decomposition of one sector block. The certificate re-runs the build
// at twice the phonon truncation; levels whose position moves by more than
// 1e-8 are above the reliability ceiling and excluded from validation.
inline EigenSystem eigen_decompose(const BlockHamiltonian& block,
                                   const DimensionlessModel& mod) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block.matrix);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("symmetric eigensolver did not converge (sector m = " +
                             std::to_string(block.m) + ", dim = " +
                             std::to_string(block.dim()) + ")");
  }
  EigenSystem sys;
  sys.m = block.m;
  sys.energy_offset = block.energy_offset;
  sys.n_max = block.basis.n_max;
  sys.eigenvalues = es.eigenvalues();
  sys.eigenvectors = es.eigenvectors();

  PhononBasis doubled{2 * block.basis.n_max};
  const Eigen::VectorXd refined =
      detail::sorted_eigenvalues(build_block(block.m, mod, doubled).matrix);

  const int d = int(sys.eigenvalues.size());
  sys.doubling_shift = 0.0;
  for (int i = 0; i < std::min(10, d); ++i) {
    sys.doubling_shift = std::max(sys.doubling_shift,
                                  std::abs(sys.eigenvalues(i) - refined(i)));
  }
  sys.reliability_ceiling = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < d; ++i) {
    if (std::abs(sys.eigenvalues(i) - refined(i)) >= 1e-8) break;
    sys.reliability_ceiling = sys.eigenvalues(i);
  }
  return sys;
}

// ---- root validation ----

struct RootMatch {
  double root = 0.0;        // relative to energy_offset
  double eigenvalue = 0.0;  // relative to energy_offset
  double diff = 0.0;
};

struct RootValidationReport {
  int m = 0;
  double energy_offset = 0.0;
  double tolerance = 0.0;
  std::vector<RootMatch> matches;
  std::vector<double> unmatched_roots;               // no eigenvalue within tolerance
  std::vector<double> unmatched_eigenvalues;         // below ceiling, no root
  std::vector<double> unmatched_above_ceiling;       // informational only
  double max_diff = 0.0;

  bool passed() const {
    return unmatched_roots.empty() && unmatched_eigenvalues.empty() &&
           max_diff <= tolerance;
  }
};

// Greedy nearest-neighbor matching between a sorted root list and the sorted
// spectrum. Roots and eigenvalues are given relative to the sector offset.
inline RootValidationReport validate_roots(const std::vector<double>& roots,
                                           const EigenSystem& sys, double tol,
                                           std::optional<double> window_min = {},
                                           std::optional<double> window_max = {}) {
  RootValidationReport report;
  report.m = sys.m;
  report.energy_offset = sys.energy_offset;
  report.tolerance = tol;

  std::vector<double> sorted_roots = roots;
  std::sort(sorted_roots.begin(), sorted_roots.end());
  std::vector<bool> eig_used(sys.eigenvalues.size(), false);

  for (double root : sorted_roots) {
    int best = -1;
    double best_diff = std::numeric_limits<double>::infinity();
    for (int i = 0; i < int(sys.eigenvalues.size()); ++i) {
      if (eig_used[i]) continue;
      const double diff = std::abs(sys.eigenvalues(i) - root);
      if (diff < best_diff) {
        best_diff = diff;
        best = i;
      }
    }
    if (best >= 0 && best_diff <= tol) {
      eig_used[best] = true;
      report.matches.push_back({root, sys.eigenvalues(best), best_diff});
      report.max_diff = std::max(report.max_diff, best_diff);
    } else {
      report.unmatched_roots.push_back(root);
    }
  }

  for (int i = 0; i < int(sys.eigenvalues.size()); ++i) {
    if (eig_used[i]) continue;
    const double e = sys.eigenvalues(i);
    if (window_min && e < *window_min) continue;
    if (window_max && e > *window_max) continue;
    if (e <= sys.reliability_ceiling) {
      report.unmatched_eigenvalues.push_back(e);
    } else {
      report.unmatched_above_ceiling.push_back(e);
    }
  }
  return report;
}

}  // namespace vibronqed
