#pragma once

// Time evolution within one excitation sector, the g-branch population P(t),
// its Fourier spectrum, and spectral peak extraction.
//
// Propagation is spectral: |psi(t)> = sum_j exp(-i E_j t) <v_j|psi(0)> |v_j>,
// which is unitary to machine precision and allows arbitrary sampling. The
// population projector is diagonal in both the polaron transform and the
// phase rotation, so P(t) can be read off directly in the computational
// frame. The constant sector offset contributes a global phase only and is
// dropped.

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <fftw3.h>

#include "vibronqed/diag.hpp"
#include "vibronqed/fock.hpp"
#include "vibronqed/model.hpp"

namespace vibronqed {

struct TimeGrid {
  double t_max = 200.0 * M_PI;  // units of 1/g
  double dt = M_PI / 100.0;

  int count() const { return int(std::lround(t_max / dt)) + 1; }
};

inline void check_grid(const TimeGrid& grid) {
  if (!(grid.dt > 0.0) || !(grid.t_max > 0.0)) {
    throw std::invalid_argument("time grid must have positive dt and t_max");
  }
  if (grid.count() < 2) throw std::invalid_argument("time grid needs at least 2 samples");
}

// Fastest transition the analysis must keep: the sector Rabi line or the trap
// frequency, whichever is higher. The sampling step must oversample it.
inline double nyquist_guard_frequency(int m, const DimensionlessModel& mod) {
  return std::max(2.0 * std::sqrt(double(m + 1)) * mod.g, mod.omega);
}

struct Peak {
  double frequency = 0.0;  // units of g
  double height = 0.0;
  bool interpolated = false;
};

struct DynamicsResult {
  int m = 0;
  TimeGrid grid;
  std::vector<double> time;        // units of 1/g
  std::vector<double> population;  // g-branch population, in [0, 1]
  std::vector<double> norm;        // state norm at each sample
  // Spectrum of the mean-removed population on the DFT grid.
  std::vector<double> omega0;
  std::vector<std::complex<double>> spectrum;
  std::vector<double> spectrum_abs;
  double mean_removed = 0.0;
  double resolution = 0.0;  // 2*pi / t_max
  std::vector<Peak> peaks;  // sorted by height, highest first
  double norm_max_deviation = 0.0;
  double energy_max_drift = 0.0;  // relative, sampled along the trajectory
  bool truncation_warning = false;
};

// Population evolution from |psi(0)> = |m+1, 0, g> using a precomputed
// eigensystem of the sector block.
inline DynamicsResult evolve(const BlockHamiltonian& block, const EigenSystem& sys,
                             const DimensionlessModel& mod, const TimeGrid& grid) {
  check_grid(grid);
  const double guard = nyquist_guard_frequency(block.m, mod);
  if (grid.dt > M_PI / (10.0 * guard) * (1.0 + 1e-12)) {
    throw std::invalid_argument(
        "dt too coarse: sampling must stay below pi / (10 * max relevant frequency)");
  }

  const TransformedState initial = transformed_initial_state(block.m, block.basis, mod);
  const int dim = block.dim();
  const int d = block.basis.dim();
  const Eigen::VectorXd overlaps = sys.eigenvectors.transpose() * initial.vector;

  // Modes with negligible weight contribute nothing measurable; skipping them
  // keeps the assembly cost proportional to the occupied part of the sector.
  std::vector<int> active;
  for (int j = 0; j < dim; ++j) {
    if (std::abs(overlaps(j)) > 1e-15) active.push_back(j);
  }
  const int n_active = int(active.size());
  Eigen::MatrixXd vectors(dim, n_active);
  Eigen::VectorXd energies(n_active);
  Eigen::VectorXd weights(n_active);
  for (int j = 0; j < n_active; ++j) {
    vectors.col(j) = sys.eigenvectors.col(active[j]);
    energies(j) = sys.eigenvalues(active[j]);
    weights(j) = overlaps(active[j]);
  }

  DynamicsResult result;
  result.m = block.m;
  result.grid = grid;
  result.truncation_warning = initial.truncation_warning;
  const int count = grid.count();
  result.time.resize(count);
  result.population.resize(count);
  result.norm.resize(count);

  const double energy_ref = weights.cwiseAbs2().dot(energies);
  const int energy_stride = std::max(1, count / 64);

  Eigen::VectorXd phase_re(n_active), phase_im(n_active);
  Eigen::VectorXd amp_re(dim), amp_im(dim);
  for (int i = 0; i < count; ++i) {
    const double t = i * grid.dt;
    result.time[i] = t;
    for (int j = 0; j < n_active; ++j) {
      phase_re(j) = weights(j) * std::cos(energies(j) * t);
      phase_im(j) = -weights(j) * std::sin(energies(j) * t);
    }
    amp_re.noalias() = vectors * phase_re;
    amp_im.noalias() = vectors * phase_im;
    result.population[i] = amp_re.head(d).squaredNorm() + amp_im.head(d).squaredNorm();
    result.norm[i] = std::sqrt(amp_re.squaredNorm() + amp_im.squaredNorm());
    result.norm_max_deviation =
        std::max(result.norm_max_deviation, std::abs(result.norm[i] - 1.0));
    if (i % energy_stride == 0) {
      const double energy = amp_re.dot(block.matrix * amp_re) +
                            amp_im.dot(block.matrix * amp_im);
      const double drift =
          std::abs(energy - energy_ref) / std::max(std::abs(energy_ref), 1.0);
      result.energy_max_drift = std::max(result.energy_max_drift, drift);
    }
  }
  return result;
}

inline DynamicsResult evolve(int m, const DimensionlessModel& mod, const PhononBasis& basis,
                             const TimeGrid& grid) {
  const BlockHamiltonian block = build_block(m, mod, basis);
  const EigenSystem sys = eigen_decompose(block, mod);
  return evolve(block, sys, mod, grid);
}

namespace detail {

// FFTW plan creation is not reentrant; execution is.
inline std::mutex& fftw_plan_mutex() {
  static std::mutex mutex;
  return mutex;
}

}  // namespace detail

// Discrete approximation of f(omega0) = (2 pi)^(-1/2) integral P(t)
// exp(-i omega0 t) dt over the sampled span, after removing the mean of P.
// One-sided grid omega_k = 2 pi k / (count * dt).
inline void fourier_spectrum(DynamicsResult& result) {
  const int n = int(result.population.size());
  if (n < 2) throw std::invalid_argument("need at least 2 samples");
  const double dt = result.grid.dt;

  double mean = 0.0;
  for (double p : result.population) mean += p;
  mean /= n;
  result.mean_removed = mean;

  std::vector<double> input(n);
  for (int i = 0; i < n; ++i) input[i] = result.population[i] - mean;
  std::vector<std::complex<double>> output(n / 2 + 1);

  {
    std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
    fftw_plan plan = fftw_plan_dft_r2c_1d(
        n, input.data(), reinterpret_cast<fftw_complex*>(output.data()),
        FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    if (plan == nullptr) throw std::runtime_error("fftw plan creation failed");
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }

  const int bins = n / 2 + 1;
  result.omega0.resize(bins);
  result.spectrum.resize(bins);
  result.spectrum_abs.resize(bins);
  const double scale = dt / std::sqrt(2.0 * M_PI);
  const double d_omega = 2.0 * M_PI / (n * dt);
  for (int k = 0; k < bins; ++k) {
    result.omega0[k] = k * d_omega;
    result.spectrum[k] = scale * output[k];
    result.spectrum_abs[k] = std::abs(result.spectrum[k]);
  }
  result.resolution = 2.0 * M_PI / result.grid.t_max;
}

// Local maxima of the magnitude spectrum above min_prominence times the
// global maximum, refined by three-point quadratic interpolation and sorted
// by height (highest first). The DC bin is excluded.
inline std::vector<Peak> find_peaks(const std::vector<double>& omega0,
                                    const std::vector<double>& magnitude,
                                    double min_prominence) {
  if (omega0.size() != magnitude.size()) {
    throw std::invalid_argument("frequency and magnitude grids differ in length");
  }
  const int n = int(magnitude.size());
  std::vector<Peak> peaks;
  if (n < 3) return peaks;
  double global_max = 0.0;
  for (int k = 1; k < n; ++k) global_max = std::max(global_max, magnitude[k]);
  if (global_max <= 0.0) return peaks;
  const double threshold = min_prominence * global_max;
  const double d_omega = omega0[1] - omega0[0];

  for (int k = 1; k + 1 < n; ++k) {
    const double y0 = magnitude[k - 1];
    const double y1 = magnitude[k];
    const double y2 = magnitude[k + 1];
    if (!(y1 > y0 && y1 >= y2 && y1 >= threshold)) continue;
    Peak peak;
    peak.frequency = omega0[k];
    peak.height = y1;
    const double denom = y0 - 2.0 * y1 + y2;
    if (denom < 0.0) {
      const double shift = 0.5 * (y0 - y2) / denom;
      peak.frequency += shift * d_omega;
      peak.height = y1 - 0.25 * (y0 - y2) * shift;
      peak.interpolated = true;
    }
    peaks.push_back(peak);
  }
  std::sort(peaks.begin(), peaks.end(),
            [](const Peak& a, const Peak& b) { return a.height > b.height; });
  return peaks;
}

inline std::vector<Peak> find_peaks(const DynamicsResult& result, double min_prominence) {
  return find_peaks(result.omega0, result.spectrum_abs, min_prominence);
}

}  // namespace vibronqed
