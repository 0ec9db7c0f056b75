#pragma once

// Physical parameters of the cavity / trapped-emitter system, the derived
// coupling constants, and the conversion to the dimensionless working frame
// (hbar = 1, frequencies in units of the emitter-cavity coupling g).

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace vibronqed {

inline constexpr double kHbar = 1.054571817e-34;  // J s (CODATA)
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// All inputs in SI units; angular frequencies in rad/s.
struct ModelParams {
  double mass_kg = 0.0;        // emitter mass M
  double omega_emitter = 0.0;  // transition frequency Omega
  double omega_cavity = 0.0;   // cavity frequency omega_a
  double omega_trap = 0.0;     // trap frequency omega
  double wavevector = 0.0;     // photon wave vector k [1/m]
  double coupling_g = 0.0;     // emitter-cavity coupling g
  std::optional<double> wavelength;  // optional; must satisfy k = 2*pi/lambda
};

struct DerivedConstants {
  double alpha = 0.0;       // oscillator length sqrt(hbar / 2 M omega) [m]
  double chi = 0.0;         // Kerr strength k^2 alpha^2 omega = hbar k^2 / 2M [rad/s]
  double eta = 0.0;         // optomechanical strength k alpha omega [rad/s]
  double lamb_dicke = 0.0;  // k alpha, dimensionless
};

// Frequencies divided by g, energies in units of hbar*g, times in units of
// 1/g. `coupling_g_si` and `wavevector_si` anchor the frame so the SI
// parameters can be reconstructed exactly.
struct DimensionlessModel {
  double omega_a = 0.0;
  double omega_emitter = 0.0;
  double omega = 0.0;
  double chi = 0.0;
  double eta = 0.0;
  double lamb_dicke = 0.0;
  double detuning = 0.0;  // omega_emitter - omega_a, formed once at input time
  double g = 1.0;
  double coupling_g_si = 0.0;
  double wavevector_si = 0.0;
};

inline void validate_params(const ModelParams& p) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ParameterError(std::string("parameter '") + name +
                           "' must be strictly positive and finite");
    }
  };
  positive(p.mass_kg, "mass_kg");
  positive(p.omega_emitter, "omega_emitter");
  positive(p.omega_cavity, "omega_cavity");
  positive(p.omega_trap, "omega_trap");
  positive(p.wavevector, "wavevector");
  positive(p.coupling_g, "coupling_g");
  if (p.wavelength) {
    positive(*p.wavelength, "wavelength");
    const double k_from_lambda = kTwoPi / *p.wavelength;
    if (std::abs(k_from_lambda - p.wavevector) > 1e-12 * p.wavevector) {
      std::ostringstream os;
      os << "wavevector " << p.wavevector << " inconsistent with wavelength "
         << *p.wavelength << " (2*pi/lambda = " << k_from_lambda << ")";
      throw ParameterError(os.str());
    }
  }
}

// Soft checks: conditions outside the regime the model was written for.
inline std::vector<std::string> parameter_warnings(const ModelParams& p) {
  std::vector<std::string> warnings;
  const double fmin = std::min(p.omega_cavity, p.omega_emitter);
  if (p.coupling_g > 0.01 * fmin) {
    std::ostringstream os;
    os << "coupling_g = " << p.coupling_g << " exceeds 1% of min(omega_cavity, "
       << "omega_emitter) = " << fmin << "; rotating-wave form is questionable";
    warnings.push_back(os.str());
  }
  return warnings;
}

inline DerivedConstants derive_constants(const ModelParams& p) {
  validate_params(p);
  DerivedConstants d;
  d.alpha = std::sqrt(kHbar / (2.0 * p.mass_kg * p.omega_trap));
  d.lamb_dicke = p.wavevector * d.alpha;
  d.eta = d.lamb_dicke * p.omega_trap;
  d.chi = d.lamb_dicke * d.lamb_dicke * p.omega_trap;
  // The same quantity without the trap frequency; both routes must agree.
  const double chi_recoil = kHbar * p.wavevector * p.wavevector / (2.0 * p.mass_kg);
  if (std::abs(d.chi - chi_recoil) > 1e-12 * std::max(d.chi, chi_recoil)) {
    throw std::logic_error("Kerr-strength cross-check failed");
  }
  return d;
}

inline DimensionlessModel to_dimensionless(const ModelParams& p, const DerivedConstants& d) {
  if (!(p.coupling_g > 0.0)) throw ParameterError("coupling_g must be positive");
  DimensionlessModel mod;
  const double g = p.coupling_g;
  mod.omega_a = p.omega_cavity / g;
  mod.omega_emitter = p.omega_emitter / g;
  mod.omega = p.omega_trap / g;
  mod.chi = d.chi / g;
  mod.eta = d.eta / g;
  mod.lamb_dicke = d.lamb_dicke;
  mod.detuning = (p.omega_emitter - p.omega_cavity) / g;
  mod.g = 1.0;
  mod.coupling_g_si = g;
  mod.wavevector_si = p.wavevector;
  return mod;
}

inline ModelParams to_si(const DimensionlessModel& mod) {
  ModelParams p;
  const double g = mod.coupling_g_si;
  p.coupling_g = g;
  p.omega_cavity = mod.omega_a * g;
  p.omega_emitter = mod.omega_emitter * g;
  p.omega_trap = mod.omega * g;
  p.wavevector = mod.wavevector_si;
  p.mass_kg = kHbar * mod.wavevector_si * mod.wavevector_si / (2.0 * mod.chi * g);
  return p;
}

// Sector energy offset: the conserved-excitation block for sector m sits at
// (m+1) * omega_a above the ground reference. All sector-internal energies are
// kept relative to this offset so that double precision is spent on the
// structure of the spectrum rather than on the large additive constant.
inline double sector_offset(int m, const DimensionlessModel& mod) {
  return (m + 1) * mod.omega_a;
}

// ---- configuration file (flat JSON object) ----

inline ModelParams params_from_json(const nlohmann::json& j) {
  ModelParams p;
  auto require = [&](const char* key) -> double {
    if (!j.contains(key)) {
      throw ParameterError(std::string("missing configuration key '") + key + "'");
    }
    if (!j.at(key).is_number()) {
      throw ParameterError(std::string("configuration key '") + key + "' must be a number");
    }
    return j.at(key).get<double>();
  };
  p.mass_kg = require("mass_kg");
  p.omega_emitter = require("omega_emitter");
  p.omega_cavity = require("omega_cavity");
  p.omega_trap = require("omega_trap");
  p.coupling_g = require("coupling_g");
  const bool has_k = j.contains("wavevector");
  const bool has_lambda = j.contains("wavelength");
  if (!has_k && !has_lambda) {
    throw ParameterError("missing configuration key 'wavevector' (or 'wavelength')");
  }
  if (has_lambda) {
    p.wavelength = j.at("wavelength").get<double>();
    p.wavevector = has_k ? j.at("wavevector").get<double>() : kTwoPi / *p.wavelength;
  } else {
    p.wavevector = j.at("wavevector").get<double>();
  }
  validate_params(p);
  return p;
}

inline ModelParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParameterError("cannot open configuration file: " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParameterError("configuration parse error in " + path.string() + ": " + e.what());
  }
  return params_from_json(j);
}

}  // namespace vibronqed
