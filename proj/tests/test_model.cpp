#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "vibronqed/model.hpp"

using namespace vibronqed;

TEST_CASE("derived constants at the reference operating point") {
  const ModelParams p = testutil::reference_params();
  const DerivedConstants d = derive_constants(p);

  // Independent route: chi = hbar k^2 / (2 M), no trap frequency involved.
  const double chi_direct = kHbar * p.wavevector * p.wavevector / (2.0 * p.mass_kg);
  CHECK(d.chi == Catch::Approx(chi_direct).epsilon(1e-13));

  const DimensionlessModel mod = to_dimensionless(p, d);
  CHECK(mod.chi == Catch::Approx(0.05272859085).epsilon(1e-9));
  CHECK(mod.eta == Catch::Approx(0.7261445).epsilon(1e-6));
  CHECK(mod.lamb_dicke == Catch::Approx(0.07261445).epsilon(1e-6));
  CHECK(mod.omega == Catch::Approx(10.0).epsilon(1e-14));
  CHECK(mod.omega_a == Catch::Approx(1e6).epsilon(1e-14));
  CHECK(mod.detuning == 0.0);
  CHECK(mod.g == 1.0);
}

TEST_CASE("no-recoil limit: chi and eta vanish with the wave vector") {
  ModelParams p = testutil::reference_params();
  p.wavevector = 1e-30;
  const DerivedConstants d = derive_constants(p);
  CHECK(d.chi < 1e-60);
  CHECK(d.eta < 1e-30);
}

TEST_CASE("mass scaling of the derived constants") {
  ModelParams p = testutil::reference_params();
  const DerivedConstants d1 = derive_constants(p);
  p.mass_kg *= 2.0;
  const DerivedConstants d2 = derive_constants(p);
  CHECK(d2.chi == Catch::Approx(0.5 * d1.chi).epsilon(1e-12));
  CHECK(d2.eta == Catch::Approx(d1.eta / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("Kerr-optomechanical identity chi * omega == eta^2") {
  for (double omega_trap : {2e8, 5e8, 1e9, 3e9}) {
    for (double mass : {5e-28, 1e-27, 7e-27}) {
      ModelParams p = testutil::reference_params(omega_trap);
      p.mass_kg = mass;
      const DimensionlessModel mod = to_dimensionless(p, derive_constants(p));
      CHECK(std::abs(mod.chi * mod.omega - mod.eta * mod.eta) <=
            1e-12 * mod.eta * mod.eta);
    }
  }
}

TEST_CASE("derivation is a pure function of the inputs") {
  const ModelParams p = testutil::reference_params();
  const DerivedConstants a = derive_constants(p);
  const DerivedConstants b = derive_constants(p);
  CHECK(std::memcmp(&a, &b, sizeof a) == 0);
}

TEST_CASE("dimensionless round trip preserves every field") {
  const ModelParams p = testutil::reference_params(7.7e8);
  const DimensionlessModel mod = to_dimensionless(p, derive_constants(p));
  const ModelParams back = to_si(mod);
  CHECK(back.mass_kg == Catch::Approx(p.mass_kg).epsilon(1e-12));
  CHECK(back.omega_emitter == Catch::Approx(p.omega_emitter).epsilon(1e-12));
  CHECK(back.omega_cavity == Catch::Approx(p.omega_cavity).epsilon(1e-12));
  CHECK(back.omega_trap == Catch::Approx(p.omega_trap).epsilon(1e-12));
  CHECK(back.wavevector == Catch::Approx(p.wavevector).epsilon(1e-12));
  CHECK(back.coupling_g == Catch::Approx(p.coupling_g).epsilon(1e-12));
}

TEST_CASE("frequency ratios") {
  ModelParams p = testutil::reference_params();
  const DimensionlessModel mod = to_dimensionless(p, derive_constants(p));
  CHECK(mod.omega == 10.0);            // 1e9 / 1e8
  CHECK(mod.g == 1.0);                 // g / g
  CHECK(mod.omega_emitter == 1e6);     // 1e14 / 1e8
}

TEST_CASE("parameter validation") {
  SECTION("non-positive input rejected") {
    ModelParams p = testutil::reference_params();
    p.omega_trap = -1.0;
    CHECK_THROWS_AS(derive_constants(p), ParameterError);
    p = testutil::reference_params();
    p.mass_kg = 0.0;
    CHECK_THROWS_AS(derive_constants(p), ParameterError);
  }
  SECTION("wavelength consistency") {
    ModelParams p = testutil::reference_params();
    p.wavelength = kTwoPi / p.wavevector;
    CHECK_NOTHROW(validate_params(p));
    p.wavelength = 1.01 * kTwoPi / p.wavevector;
    CHECK_THROWS_AS(validate_params(p), ParameterError);
  }
  SECTION("rotating-wave warning above 1% coupling") {
    ModelParams p = testutil::reference_params();
    CHECK(parameter_warnings(p).empty());
    p.coupling_g = 0.02 * std::min(p.omega_cavity, p.omega_emitter);
    CHECK_FALSE(parameter_warnings(p).empty());
  }
}

TEST_CASE("configuration file parsing") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "vibronqed_model_test";
  fs::create_directories(dir);

  SECTION("complete file") {
    const fs::path file = dir / "ok.json";
    std::ofstream(file) << R"({"mass_kg":1e-27,"omega_emitter":1e14,
      "omega_cavity":1e14,"omega_trap":1e9,"wavevector":1e7,"coupling_g":1e8})";
    const ModelParams p = load_params(file);
    CHECK(p.mass_kg == 1e-27);
    CHECK(p.wavevector == 1e7);
  }
  SECTION("missing key is named") {
    const fs::path file = dir / "missing.json";
    std::ofstream(file) << R"({"omega_emitter":1e14,"omega_cavity":1e14,
      "omega_trap":1e9,"wavevector":1e7,"coupling_g":1e8})";
    CHECK_THROWS_WITH(load_params(file), Catch::Matchers::ContainsSubstring("mass_kg"));
  }
  SECTION("wavelength alone determines the wave vector") {
    const fs::path file = dir / "lambda.json";
    std::ofstream(file) << R"({"mass_kg":1e-27,"omega_emitter":1e14,
      "omega_cavity":1e14,"omega_trap":1e9,"wavelength":6.283185307179586e-7,
      "coupling_g":1e8})";
    const ModelParams p = load_params(file);
    CHECK(p.wavevector == Catch::Approx(1e7).epsilon(1e-12));
  }
  SECTION("inconsistent wavelength and wave vector rejected") {
    const fs::path file = dir / "bad.json";
    std::ofstream(file) << R"({"mass_kg":1e-27,"omega_emitter":1e14,
      "omega_cavity":1e14,"omega_trap":1e9,"wavevector":1e7,
      "wavelength":7e-7,"coupling_g":1e8})";
    CHECK_THROWS_AS(load_params(file), ParameterError);
  }
}
