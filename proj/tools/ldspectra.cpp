// ldspectra: spectra, regimes, dynamics and JC analysis of the Lamb-Dicke
// trapped-ion model from the command line.

#include <iostream>

#include <CLI11.hpp>

#include "ldspectra/errors.hpp"
#include "ldspectra/workflows.hpp"

using namespace ldspectra;

namespace {

void common_flags(CLI::App* cmd, ConfigOverrides& ov) {
  cmd->add_option("--config", ov.config, "key/value config file (flags win)");
  cmd->add_option("--nu", ov.nu, "trap frequency");
  cmd->add_option("--K", ov.K, "coupling energy lambda E_L");
  cmd->add_option("--delta", ov.delta, "detuning omega_L - omega_0");
  cmd->add_option("--epsilon", ov.epsilon, "confinement length over laser wavelength");
  cmd->add_option("--n-max", ov.n_max, "Fock cutoff");
  cmd->add_option("--n-guard", ov.n_guard, "guard band below the cutoff");
  cmd->add_option("--out", ov.out, "output directory");
  cmd->add_option("--format", ov.format, "table format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--sweep-epsilon", ov.sweep_epsilon, "comma separated epsilon values");
  cmd->add_option("--sweep-K", ov.sweep_K, "comma separated K values");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lamb-Dicke spectra and dynamics of a laser-driven trapped ion"};
  app.require_subcommand(1);
  ConfigOverrides ov;

  auto* spectrum = app.add_subcommand("spectrum", "perturbative vs exact levels");
  auto* regimes = app.add_subcommand("regimes", "regime classification, doublets, ladder spacings");
  auto* evolve = app.add_subcommand("evolve", "lab-frame integration vs the assembled solution");
  auto* jc = app.add_subcommand("jc", "Jaynes-Cummings reduction: levels, blocks, algebra, |R(n,s)>");
  auto* validate = app.add_subcommand("validate", "invariant suite; exit 0 iff all pass");
  for (auto* c : {spectrum, regimes, evolve, jc, validate}) common_flags(c, ov);

  evolve->add_option("--t-end", ov.t_end, "final time (default 10 trap periods)");
  evolve->add_option("--steps", ov.steps, "output intervals");
  evolve->add_option("--tol", ov.tol, "integrator tolerance (>= 1e-12)");
  evolve->add_option("--order", ov.order, "perturbative order 0|1|2")->check(CLI::Range(0, 2));
  evolve->add_option("--amps", ov.amps, "CSV of n,s,Re,Im initial amplitudes");
  validate->add_flag("--corrupt-hamiltonian", ov.corrupt_hamiltonian, "test hook: break H_eta hermiticity");

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = resolve_config(ov);
    if (*spectrum) return cmd_spectrum(cfg, std::cout);
    if (*regimes) return cmd_regimes(cfg, std::cout);
    if (*evolve) return cmd_evolve(cfg, std::cout);
    if (*jc) return cmd_jc(cfg, std::cout);
    return cmd_validate(cfg, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
