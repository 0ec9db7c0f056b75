// Command-line front end: reproduces the library's reference datasets
// (derived constants, transcendental-function scans, exact spectra with
// cross-validation, sector dynamics with spectral analysis, closed-form
// reports) and runs the validation suite.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vibronqed/cli.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<double> omega_trap;
  std::optional<int> n_max;
  std::optional<double> t_max;
  std::optional<double> dt;
  std::optional<int> grid_per_omega;
  std::optional<double> tol;
  std::optional<double> emin;
  std::optional<double> emax;
  std::optional<int> levels;
  int m = 0;
};

vibronqed::RunConfig build_config(const CliOptions& options) {
  vibronqed::RunConfig config;
  config.params = options.config_path.empty()
                      ? vibronqed::reference_params()
                      : vibronqed::load_params(options.config_path);
  if (options.omega_trap) config.params.omega_trap = *options.omega_trap;
  vibronqed::validate_params(config.params);
  config.out_dir = options.out_dir;
  config.m = options.m;
  if (options.n_max) config.n_max = *options.n_max;
  if (options.t_max) config.t_max = *options.t_max;
  if (options.dt) config.dt = *options.dt;
  if (options.grid_per_omega) config.grid_per_omega = *options.grid_per_omega;
  if (options.tol) config.tol = *options.tol;
  config.emin = options.emin;
  config.emax = options.emax;
  if (options.levels) config.levels = *options.levels;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact spectra and Rabi dynamics of a cavity coupled to a "
               "harmonically trapped emitter"};
  app.require_subcommand(1);

  CliOptions options;
  app.add_option("--config", options.config_path,
                 "JSON parameter file (defaults to the built-in reference set)");
  app.add_option("--out", options.out_dir, "output directory");
  app.add_option("--omega-trap", options.omega_trap, "override trap frequency [rad/s]");
  app.add_option("--nmax", options.n_max, "phonon truncation");
  app.add_option("--tmax", options.t_max, "evolution span [1/g]");
  app.add_option("--dt", options.dt, "evolution step [1/g]");
  app.add_option("--grid", options.grid_per_omega, "scan points per trap quantum");
  app.add_option("--tol", options.tol, "validation tolerance [hbar g]");
  app.add_option("--emin", options.emin, "window lower edge, E/(hbar g)");
  app.add_option("--emax", options.emax, "window upper edge, E/(hbar g)");
  app.add_option("--levels", options.levels, "number of levels to validate");
  app.add_option("--m", options.m, "excitation sector index")->check(CLI::NonNegativeNumber);

  auto* params = app.add_subcommand("params", "print SI and dimensionless constants");
  auto* gscan = app.add_subcommand("gscan", "tabulate G_m over an energy window");
  auto* spectrum =
      app.add_subcommand("spectrum", "exact roots with eigensolver cross-validation");
  auto* dynamics =
      app.add_subcommand("dynamics", "evolve |m+1,0,g> and analyze the oscillation");
  auto* analytic = app.add_subcommand("analytic", "closed-form quantities report");
  auto* validate = app.add_subcommand("validate", "run the full cross-validation suite");

  CLI11_PARSE(app, argc, argv);

  try {
    const vibronqed::RunConfig config = build_config(options);
    if (params->parsed()) return vibronqed::cmd_params(config, std::cout);
    if (gscan->parsed()) return vibronqed::cmd_gscan(config, std::cout);
    if (spectrum->parsed()) return vibronqed::cmd_spectrum(config, std::cout);
    if (dynamics->parsed()) return vibronqed::cmd_dynamics(config, std::cout);
    if (analytic->parsed()) return vibronqed::cmd_analytic(config, std::cout);
    if (validate->parsed()) return vibronqed::cmd_validate(config, std::cout);
  } catch (const vibronqed::ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
