#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinforge/dynamics.hpp"
#include "spinforge/model.hpp"
#include "spinforge/thermo.hpp"

namespace spinforge {

// Thrown on malformed or inconsistent config input; the message names the
// offending field. The CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class InitState { Ground, Excited, MaximallyMixed };

InitState init_state_from_name(const std::string& name);
std::string init_state_name(InitState s);

// One declarative experiment. Field names in the JSON carry explicit units
// (delta_t_us, window_ms, ...); everything here is already converted to SI.
struct ExperimentConfig {
  std::string experiment;  // fig2 | fig3 | fig4 | machine | tomography
  SpinConvention convention = SpinConvention::SpinHalf;

  int n_per_chain = 3;
  std::vector<int> sizes_n_per_chain;  // fig3 sweep; empty = just n_per_chain
  CouplingConstants couplings =
      CouplingConstants::from_effective(550.0, 980.0);

  std::vector<double> delta_t_s{1.228e-6};  // fig2 sweeps several values
  double tau_p_s = 9.89e-6;
  int n_cycles = 0;  // 0 = derive from the window via cycles_for_window
  double window_s = 10e-3;
  int n_samples = 500;

  InitState carbon_init = InitState::Excited;
  InitState bath_init = InitState::Ground;
  int ensemble_members = 32;  // maximally-mixed bath sample size

  double beta_per_joule = -5e25;
  double omega1_rad_s = 2.0 * 3.14159265358979323846 * 125.7e6;
  std::vector<MachineUnitary> machine_unitaries{MachineUnitary::Upi};
  bool machine_simulated = false;

  std::uint64_t seed = 1;
  std::string output_dir = "out";
  EvolveMethod method = EvolveMethod::Auto;

  void validate() const;  // throws ConfigError
};

// Parse and validate a JSON config file. Unknown keys are rejected so a
// typo cannot silently fall back to a default.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);

}  // namespace spinforge
