#pragma once

// Exact-spectrum machinery: the two displaced-frame recursions, the
// transcendental function G_m(E) whose zeros are the sector-m eigenenergies,
// pole bookkeeping, and pole-aware bracketing root search.
//
// Construction sketch. Within sector m the two diagonal phonon blocks are
// displaced oscillators with displacements lamb_dicke*(m+1) (g branch) and
// lamb_dicke*m (e branch). Displacing away either linear term yields a
// formal eigenvector expansion over the corresponding displaced Fock states,
// with coefficients generated by a three-term recursion
//
//     n f_n = K_{n-1} f_{n-1} - f_{n-2},   f_0 = 1, f_1 = K_0,
//
// run once in each frame ("unprimed" for the g-branch displacement, "primed"
// for the e-branch one). A true eigenvector admits both expansions, so the
// two must be proportional; projecting both onto the undisplaced phonon
// vacuum and eliminating the proportionality constant gives G_m(E) = 0 with
//
//     G_m = (sum_n e_n x^n)(sum_n e'_n y^n) - (sum_n f_n x^n)(sum_n f'_n y^n),
//     x = lamb_dicke * (m+1),   y = -lamb_dicke * m,
//
// where e_n = -sqrt(m+1) g f_n / (n*omega - gamma - E) and likewise primed.
// The sign of y carries the alternating phases of the primed expansion; with
// +lamb_dicke*m the zero set loses genuine levels off resonance. For m = 0
// the primed factor collapses to its first term and G_0 reduces to a single
// series.
//
// The vacuum projection is a necessary condition only: G_m also vanishes at
// isolated energies where the two projections happen to align without the
// full expansions being proportional (observed just above each pole for
// m >= 1). Projecting onto the first Fock state instead gives an independent
// necessary condition with different accidental zeros, so a candidate root
// is accepted only when both projections vanish at the same energy. Rejected
// candidates are reported, not dropped.
//
// All energies handled internally are sector-relative:
// eps = E/hbar - (m+1)*omega_a.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vibronqed/diag.hpp"
#include "vibronqed/model.hpp"

namespace vibronqed {

enum class BogoliubovFrame { unprimed, primed };

class PoleProximityError : public std::runtime_error {
 public:
  PoleProximityError(int n, double distance, BogoliubovFrame frame)
      : std::runtime_error("energy within " + std::to_string(distance) +
                           " of the n = " + std::to_string(n) + " pole (" +
                           (frame == BogoliubovFrame::unprimed ? "unprimed" : "primed") +
                           " frame)"),
        n_(n),
        distance_(distance) {}
  int pole_index() const { return n_; }
  double distance() const { return distance_; }

 private:
  int n_;
  double distance_;
};

struct GFunctionOptions {
  double tol = 1e-12;        // relative tail target for early termination
  int max_terms = 160;       // hard cap; hitting it flags the evaluation
  double pole_guard = 1e-9;  // minimum distance to either pole family
  bool swap_factor_order = false;  // alternate overall normalization (tests)
};

struct GFunctionEval {
  double energy = 0.0;  // absolute E/(hbar g)
  double eps = 0.0;     // relative to the sector offset
  int m = 0;
  double value = 0.0;      // vacuum-projection G_m
  double companion = 0.0;  // first-Fock-projection G_m
  int terms_used = 0;
  double tail_estimate = 0.0;
  bool converged = false;  // tail_estimate <= tol * |value| before the cap
  double nearest_pole_distance = 0.0;
};

namespace detail {

// Pole of the given frame's recursion denominators, in eps units.
inline double frame_pole(int n, BogoliubovFrame frame, const DimensionlessModel& mod) {
  return frame == BogoliubovFrame::unprimed ? n * mod.omega : n * mod.omega + mod.detuning;
}

inline double recursion_denominator(int n, double eps, BogoliubovFrame frame,
                                    const DimensionlessModel& mod, double guard) {
  const double den = frame_pole(n, frame, mod) - eps;
  if (std::abs(den) < guard) throw PoleProximityError(n, std::abs(den), frame);
  return den;
}

inline double k_coefficient_eps(int n, int m, double eps, const DimensionlessModel& mod,
                                BogoliubovFrame frame, double guard = 1e-9) {
  if (m < 0) throw std::domain_error("sector index m must be >= 0");
  if (!(mod.lamb_dicke > 0.0)) {
    throw std::domain_error("k_coefficient requires lamb_dicke > 0 (moving emitter)");
  }
  const double w = mod.omega;
  const double pole_term =
      (m + 1) * mod.g * mod.g / recursion_denominator(n, eps, frame, mod, guard);
  // The linear-in-n part differs between frames only through the detuning.
  const double linear = frame == BogoliubovFrame::unprimed
                            ? n * w + mod.chi + mod.detuning - eps
                            : n * w + mod.chi - eps;
  return (linear - pole_term) / (mod.lamb_dicke * w);
}

// One frame's running sums under both projections. Terms are carried as
// u_n = f_n z^n (so n u_n = K_{n-1} z u_{n-1} - z^2 u_{n-2}), which keeps the
// magnitudes tame; a shared power-of-two exponent absorbs what growth
// remains, so the stored sums are the true ones times 2^(-scale_exp).
struct FrameState {
  int m;
  double eps;
  double z;
  BogoliubovFrame frame;
  const DimensionlessModel* mod;
  double guard;

  double u_prev = 0.0;
  double u_curr = 0.0;
  double e_vac = 0.0;  // sum e_n z^n
  double f_vac = 0.0;  // sum f_n z^n
  double e_one = 0.0;  // sum e_n z^(n-1) (n - z^2)
  double f_one = 0.0;  // sum f_n z^(n-1) (n - z^2)
  int scale_exp = 0;
  int n = 0;
  double last_term = 0.0;  // |u_n| at the stored scale
  bool frozen = false;     // z == 0: series exhausted after two terms

  void advance() {
    const double sq = std::sqrt(double(m + 1));
    if (z == 0.0) {
      // Only n = 0 survives the vacuum projection and n = 1 the first-Fock
      // one; later steps contribute nothing.
      if (n == 0) {
        const double den0 = recursion_denominator(0, eps, frame, *mod, guard);
        f_vac = 1.0;
        e_vac = -sq * mod->g / den0;
      } else if (n == 1) {
        const double f1 = k_coefficient_eps(0, m, eps, *mod, frame, guard);
        const double den1 = recursion_denominator(1, eps, frame, *mod, guard);
        f_one = f1;
        e_one = -sq * mod->g * f1 / den1;
        frozen = true;
      }
      last_term = 0.0;
      ++n;
      return;
    }
    double u;
    if (n == 0) {
      u = std::ldexp(1.0, -scale_exp);
    } else {
      const double k = k_coefficient_eps(n - 1, m, eps, *mod, frame, guard);
      u = (k * z * u_curr - z * z * u_prev) / double(n);
    }
    const double den = recursion_denominator(n, eps, frame, *mod, guard);
    const double w_one = (double(n) - z * z) / z;
    f_vac += u;
    e_vac += -sq * mod->g * u / den;
    f_one += u * w_one;
    e_one += -sq * mod->g * u * w_one / den;
    last_term = std::abs(u);
    u_prev = u_curr;
    u_curr = u;
    ++n;
    if (std::abs(u_curr) > 0x1p500) rescale(-500);
  }

  void rescale(int shift) {
    u_prev = std::ldexp(u_prev, shift);
    u_curr = std::ldexp(u_curr, shift);
    f_vac = std::ldexp(f_vac, shift);
    e_vac = std::ldexp(e_vac, shift);
    f_one = std::ldexp(f_one, shift);
    e_one = std::ldexp(e_one, shift);
    last_term = std::ldexp(last_term, shift);
    scale_exp -= shift;
  }
};

struct GValue {
  double value = 0.0;
  double companion = 0.0;
  int terms_used = 0;
  double tail_estimate = 0.0;
  bool converged = false;
};

inline GValue g_value_eps(double eps, int m, const DimensionlessModel& mod,
                          const GFunctionOptions& opt) {
  if (m < 0) throw std::domain_error("sector index m must be >= 0");
  if (!(mod.lamb_dicke > 0.0)) {
    throw std::domain_error("g_function requires lamb_dicke > 0 (moving emitter)");
  }
  const double x = mod.lamb_dicke * (m + 1);
  const double y = -mod.lamb_dicke * m;
  FrameState b{m, eps, x, BogoliubovFrame::unprimed, &mod, opt.pole_guard};
  FrameState a{m, eps, y, BogoliubovFrame::primed, &mod, opt.pole_guard};

  GValue out;
  int quiet_steps = 0;
  for (int step = 0; step < opt.max_terms; ++step) {
    b.advance();
    a.advance();
    const int scale = b.scale_exp + a.scale_exp;
    const double mantissa = b.e_vac * a.e_vac - b.f_vac * a.f_vac;
    // Running tail bound: the step's own contribution, which caps what any
    // single further term can add while the terms keep shrinking.
    const double increment =
        b.last_term * std::abs(a.f_vac) + a.last_term * std::abs(b.f_vac);
    out.value = std::ldexp(mantissa, scale);
    out.companion = std::ldexp(b.e_one * a.e_one - b.f_one * a.f_one, scale);
    out.tail_estimate = std::ldexp(increment, scale);
    out.terms_used = step + 1;
    if (step >= 12 && out.tail_estimate <= opt.tol * std::abs(out.value)) {
      if (++quiet_steps >= 4) {
        out.converged = true;
        break;
      }
    } else {
      quiet_steps = 0;
    }
  }
  if (opt.swap_factor_order) {
    // Alternate normalization: keep the Gaussian overlap prefactors the
    // vacuum projection produces and subtract the products the other way
    // around. An overall nonzero factor, so the zero set is unchanged.
    const double gauss = std::exp(-0.5 * (x * x + y * y));
    out.value = -gauss * out.value;
    out.companion = -gauss * out.companion;
    out.tail_estimate = gauss * out.tail_estimate;
  }
  return out;
}

// Both pole families (recursion denominators of the two frames) inside a
// window of sector-relative energies, deduplicated and sorted.
inline std::vector<double> pole_grid_eps(double eps_min, double eps_max,
                                         const DimensionlessModel& mod) {
  std::vector<double> poles;
  const double w = mod.omega;
  for (BogoliubovFrame frame : {BogoliubovFrame::unprimed, BogoliubovFrame::primed}) {
    const double base = frame == BogoliubovFrame::unprimed ? 0.0 : mod.detuning;
    const int n_lo = std::max(0, int(std::floor((eps_min - base) / w)) - 1);
    const int n_hi = int(std::ceil((eps_max - base) / w)) + 1;
    for (int n = n_lo; n <= n_hi; ++n) {
      const double p = base + n * w;
      if (p >= eps_min && p <= eps_max) poles.push_back(p);
    }
  }
  std::sort(poles.begin(), poles.end());
  poles.erase(std::unique(poles.begin(), poles.end(),
                          [](double u, double v) { return std::abs(u - v) < 1e-12; }),
              poles.end());
  return poles;
}

}  // namespace detail

// ---- public surface ----

// K_n of the three-term recursion at absolute energy E/(hbar g).
inline double k_coefficient(int n, int m, double energy, const DimensionlessModel& mod,
                            BogoliubovFrame frame, double pole_guard = 1e-9) {
  const double eps = energy - sector_offset(m, mod);
  return detail::k_coefficient_eps(n, m, eps, mod, frame, pole_guard);
}

inline GFunctionEval g_function(double energy, int m, const DimensionlessModel& mod,
                                const GFunctionOptions& opt = {}) {
  const double eps = energy - sector_offset(m, mod);
  const detail::GValue v = detail::g_value_eps(eps, m, mod, opt);
  GFunctionEval eval;
  eval.energy = energy;
  eval.eps = eps;
  eval.m = m;
  eval.value = v.value;
  eval.companion = v.companion;
  eval.terms_used = v.terms_used;
  eval.tail_estimate = v.tail_estimate;
  eval.converged = v.converged;
  eval.nearest_pole_distance = std::numeric_limits<double>::infinity();
  for (double p : detail::pole_grid_eps(eps - 2.0 * mod.omega, eps + 2.0 * mod.omega, mod)) {
    eval.nearest_pole_distance = std::min(eval.nearest_pole_distance, std::abs(eps - p));
  }
  return eval;
}

struct EnergyWindow {
  double min = 0.0;  // absolute E/(hbar g)
  double max = 0.0;
};

struct PoleSet {
  int m = 0;
  std::vector<double> energies;  // absolute E/(hbar g), spacing exactly omega
};

// Divergence points E/hbar = n*omega + (m+1)*omega_a of the sector-m
// recursion inside the window.
inline PoleSet pole_locations(int m, const EnergyWindow& window,
                              const DimensionlessModel& mod) {
  if (!(window.max > window.min)) throw std::invalid_argument("empty energy window");
  PoleSet set;
  set.m = m;
  const double offset = sector_offset(m, mod);
  const double w = mod.omega;
  const int n_lo = std::max(0, int(std::floor((window.min - offset) / w)) - 1);
  const int n_hi = int(std::ceil((window.max - offset) / w)) + 1;
  for (int n = n_lo; n <= n_hi; ++n) {
    const double e = offset + n * w;
    if (e >= window.min && e <= window.max) set.energies.push_back(e);
  }
  return set;
}

struct RootRecord {
  double eps = 0.0;     // relative to the sector offset
  double energy = 0.0;  // absolute E/(hbar g)
  int interval_index = 0;
  double residual = 0.0;   // |G_m| at the root
  bool confirmed = false;  // the companion projection vanishes here too
  bool suspected_double_root = false;  // oracle level with no sign change
  std::optional<double> oracle_eps;
  std::optional<double> oracle_diff;
};

struct SpectrumResult {
  int m = 0;
  double energy_offset = 0.0;
  EnergyWindow window;
  std::vector<RootRecord> roots;     // confirmed zeros, ascending
  std::vector<RootRecord> rejected;  // vacuum-projection zeros failing confirmation
  std::vector<RootRecord> flagged;   // oracle levels without a matching sign change
  int grid_per_omega = 0;
};

struct RootSearchOptions {
  int grid_per_omega = 400;
  double refine_tol = 1e-12;  // bisection width in eps
  double edge_guard = 1e-6;   // keep-out distance from poles
  double confirm_tol = 1e-6;  // max distance between the two projections' zeros
  GFunctionOptions gfun;
};

namespace detail {

// Bisection on a bracketing interval of fn's sign change.
template <typename F>
double bisect(F&& fn, double lo, double hi, double f_lo, double tol) {
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = fn(mid);
    if (f_mid == 0.0) return mid;
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct ScanZeros {
  std::vector<std::pair<double, int>> vacuum;  // (eps, interval index)
  std::vector<std::pair<double, int>> fock1;
};

// One pass over the window: uniform grid per inter-pole interval, sign-change
// detection and bisection for both projections.
inline ScanZeros scan_intervals(int m, double eps_min, double eps_max,
                                const DimensionlessModel& mod,
                                const RootSearchOptions& opt) {
  auto vacuum = [&](double e) { return g_value_eps(e, m, mod, opt.gfun).value; };
  auto fock1 = [&](double e) { return g_value_eps(e, m, mod, opt.gfun).companion; };

  ScanZeros zeros;
  std::vector<double> edges = pole_grid_eps(eps_min, eps_max, mod);
  edges.insert(edges.begin(), eps_min);
  edges.push_back(eps_max);
  int interval = 0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i, ++interval) {
    const double lo = edges[i] + (i == 0 ? 0.0 : opt.edge_guard);
    const double hi = edges[i + 1] - (i + 2 == edges.size() ? 0.0 : opt.edge_guard);
    if (!(hi > lo)) continue;
    const int points =
        std::max(9, int(std::lround(opt.grid_per_omega * (hi - lo) / mod.omega)));
    double prev_x = lo;
    GValue prev = g_value_eps(prev_x, m, mod, opt.gfun);
    for (int j = 1; j < points; ++j) {
      const double xj = lo + (hi - lo) * double(j) / double(points - 1);
      const GValue cur = g_value_eps(xj, m, mod, opt.gfun);
      if (prev.value != 0.0 && cur.value != 0.0 &&
          std::signbit(prev.value) != std::signbit(cur.value)) {
        zeros.vacuum.emplace_back(bisect(vacuum, prev_x, xj, prev.value, opt.refine_tol),
                                  interval);
      }
      if (prev.companion != 0.0 && cur.companion != 0.0 &&
          std::signbit(prev.companion) != std::signbit(cur.companion)) {
        zeros.fock1.emplace_back(bisect(fock1, prev_x, xj, prev.companion, opt.refine_tol),
                                 interval);
      }
      prev_x = xj;
      prev = cur;
    }
  }
  return zeros;
}

}  // namespace detail

// Scan the window interval by interval, bisect the vacuum-projection sign
// changes, and keep the zeros the first-Fock projection confirms. When an
// eigensystem is supplied, each root is paired with its nearest oracle level
// and oracle levels lacking any root are flagged (a touching, non-crossing
// zero would be invisible to the sign scan).
inline SpectrumResult find_roots(int m, const EnergyWindow& window,
                                 const DimensionlessModel& mod,
                                 const RootSearchOptions& opt = {},
                                 const EigenSystem* oracle = nullptr) {
  if (!(window.max > window.min)) throw std::invalid_argument("empty energy window");
  const double offset = sector_offset(m, mod);
  const double eps_min = window.min - offset;
  const double eps_max = window.max - offset;
  if (eps_min < -(mod.omega + 2.0 * std::sqrt(double(m + 1)) * mod.g)) {
    throw std::invalid_argument(
        "window extends more than one trap quantum below the sector base");
  }

  SpectrumResult result;
  result.m = m;
  result.energy_offset = offset;
  result.window = window;
  result.grid_per_omega = opt.grid_per_omega;

  const detail::ScanZeros zeros = detail::scan_intervals(m, eps_min, eps_max, mod, opt);

  for (const auto& [eps_root, interval] : zeros.vacuum) {
    RootRecord record;
    record.eps = eps_root;
    record.energy = offset + eps_root;
    record.interval_index = interval;
    record.residual = std::abs(detail::g_value_eps(eps_root, m, mod, opt.gfun).value);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [c, ci] : zeros.fock1) best = std::min(best, std::abs(c - eps_root));
    record.confirmed = best <= opt.confirm_tol;
    if (oracle) {
      double diff = std::numeric_limits<double>::infinity();
      double at = 0.0;
      for (int i = 0; i < int(oracle->eigenvalues.size()); ++i) {
        const double d = std::abs(oracle->eigenvalues(i) - eps_root);
        if (d < diff) {
          diff = d;
          at = oracle->eigenvalues(i);
        }
      }
      if (std::isfinite(diff)) {
        record.oracle_eps = at;
        record.oracle_diff = diff;
      }
    }
    (record.confirmed ? result.roots : result.rejected).push_back(record);
  }

  if (oracle) {
    for (int i = 0; i < int(oracle->eigenvalues.size()); ++i) {
      const double e = oracle->eigenvalues(i);
      if (e < eps_min || e > eps_max || e > oracle->reliability_ceiling) continue;
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& r : result.roots) nearest = std::min(nearest, std::abs(r.eps - e));
      if (nearest > opt.confirm_tol) {
        RootRecord record;
        record.eps = e;
        record.energy = offset + e;
        record.suspected_double_root = true;
        record.oracle_eps = e;
        result.flagged.push_back(record);
      }
    }
  }
  return result;
}

// Validation report in terms of the diag module's matcher.
inline RootValidationReport validate_roots(const SpectrumResult& spectrum,
                                           const EigenSystem& sys, double tol) {
  std::vector<double> roots;
  roots.reserve(spectrum.roots.size());
  for (const auto& r : spectrum.roots) roots.push_back(r.eps);
  const double offset = sys.energy_offset;
  return validate_roots(roots, sys, tol, spectrum.window.min - offset,
                        spectrum.window.max - offset);
}

}  // namespace vibronqed
