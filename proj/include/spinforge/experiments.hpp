#pragma once

#include <string>
#include <vector>

#include "spinforge/config.hpp"
#include "spinforge/tomography.hpp"

namespace spinforge {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;      // measured
  double threshold = 0.0;  // gate it was compared against
};

struct ExperimentOutcome {
  std::vector<CheckResult> checks;
  std::vector<std::string> files;  // artifacts written, in creation order
  bool all_pass() const;
};

// Dispatch on config.experiment; writes CSV/JSON artifacts into
// config.output_dir and returns the invariant-check results.
ExperimentOutcome run_experiment(const ExperimentConfig& config);

ExperimentOutcome run_fig2(const ExperimentConfig& config);
ExperimentOutcome run_fig3(const ExperimentConfig& config);
ExperimentOutcome run_fig4(const ExperimentConfig& config);
ExperimentOutcome run_machine_experiment(const ExperimentConfig& config);
ExperimentOutcome run_tomography_experiment(const ExperimentConfig& config);

// Max coefficient-magnitude residual between the zeroth-order average of
// the pulsed natural Hamiltonian and the closed-form effective Hamiltonian
// with J_eff = J/4. Zero up to rounding when the cycle averaging is exact.
double aht_residual(int n_per_chain, const CouplingConstants& couplings,
                    SpinConvention convention);

// Full-precision scalar formatting shared by every writer, so outputs are
// byte-stable across runs.
std::string format_g17(double v);
void write_csv(const std::string& path,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

// Mean of the trailing fraction of the samples (by count, not time).
double final_fraction_average(const std::vector<double>& values,
                              double fraction);

}  // namespace spinforge
