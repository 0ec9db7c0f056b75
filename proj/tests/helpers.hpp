#pragma once

// Shared fixtures for the test suite: the reference physical parameter set
// and a synthetic dimensionless model builder for regime studies.

#include "vibronqed/model.hpp"

namespace testutil {

inline vibronqed::ModelParams reference_params(double omega_trap = 1e9) {
  vibronqed::ModelParams p;
  p.mass_kg = 1e-27;
  p.omega_emitter = 1e14;
  p.omega_cavity = 1e14;
  p.omega_trap = omega_trap;
  p.wavevector = 1e7;
  p.coupling_g = 1e8;
  return p;
}

inline vibronqed::DimensionlessModel reference_model(double omega_trap = 1e9) {
  const auto params = reference_params(omega_trap);
  return vibronqed::to_dimensionless(params, vibronqed::derive_constants(params));
}

// Consistent dimensionless model from raw ratios (chi and eta derived from
// the Lamb-Dicke factor so the internal identities hold).
inline vibronqed::DimensionlessModel synth_model(double omega, double lamb_dicke,
                                                 double omega_a = 1e6,
                                                 double detuning = 0.0,
                                                 double g = 1.0) {
  vibronqed::DimensionlessModel mod;
  mod.omega = omega;
  mod.lamb_dicke = lamb_dicke;
  mod.chi = lamb_dicke * lamb_dicke * omega;
  mod.eta = lamb_dicke * omega;
  mod.omega_a = omega_a;
  mod.omega_emitter = omega_a + detuning;
  mod.detuning = detuning;
  mod.g = g;
  mod.coupling_g_si = 1e8;
  mod.wavevector_si = 1e7;
  return mod;
}

}  // namespace testutil
