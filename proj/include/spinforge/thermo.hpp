#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "spinforge/dynamics.hpp"
#include "spinforge/model.hpp"

namespace spinforge {

// Signed inverse temperature in 1/J. beta < 0 means population inversion,
// beta = 0 the maximally mixed state.
struct InverseTemperature {
  double beta = 0.0;
};

// Two-stroke ledger of one machine cycle. Energies are in Joules; negative
// work is extracted by the machine. efficiency is empty when no heat flows.
struct MachineRecord {
  double xi = 0.0;
  double work = 0.0;
  double heat = 0.0;
  std::optional<double> efficiency;
};

enum class MachineUnitary { Ux, Uy, Upi, UI };
MachineUnitary machine_unitary_from_name(const std::string& name);
std::string machine_unitary_name(MachineUnitary u);

// The unitary stroke acting on the working qubit. These are Bloch
// rotations (sigma/2 generators): Ux and Uy are pi/2 turns, Upi a full
// flip, UI a 2 pi turn, i.e. the identity up to phase.
Eigen::Matrix2cd machine_unitary(MachineUnitary u);

// Gibbs state exp(-beta H) / Z of a single-site Hamiltonian.
DensityMatrix thermal_state(const OperatorSum& h1, InverseTemperature beta);

// xi = |<1|U|0>|^2.
double transition_probability(const Eigen::Matrix2cd& u);

// Spectral gap of a single-site Hamiltonian, in Joules.
double zeeman_gap(const OperatorSum& h1);

// <W> = Tr[rho2 H1] - Tr[rho1 H1] with rho2 = U rho1 U^dagger; <Q> = -<W>.
// rho1 must commute with H1 (a Gibbs state of it).
MachineRecord work_and_heat(const DensityMatrix& rho1,
                            const Eigen::Matrix2cd& u, const OperatorSum& h1);

// gap * xi * tanh(beta * gap / 2): the closed form of <W> for a Gibbs
// initial state; negative (work extracted) exactly when beta < 0.
double closed_form_work(double gap, double beta, double xi);

struct MachineConfig {
  InverseTemperature beta{-1.0};
  ZeemanParams zeeman{2.0 * 3.14159265358979323846 * 125.7e6};
  MachineUnitary unitary = MachineUnitary::Upi;
  SpinConvention convention = SpinConvention::SpinHalf;

  bool simulated = false;        // analytic closed forms by default
  ChainTopology topo{6};         // simulated mode only
  CouplingConstants couplings =
      CouplingConstants::from_effective(550.0, 980.0);
  double delta_t = 1.228e-6;     // s
  double tau_p = 9.89e-6;        // s
  double stroke_window = 10e-3;  // s of wall time per bath-contact stroke
  EvolveMethod method = EvolveMethod::Auto;
};

// Per-stroke energy bookkeeping of the simulated cycle, in Joules.
struct StrokeLedger {
  double heat_thermalization = 0.0;   // bath contact from the ground state
  double work_unitary = 0.0;
  double heat_rethermalization = 0.0; // bath contact after the unitary
};

struct MachineResult {
  MachineRecord record;
  Trajectory excited_population;  // simulated mode: P_e over wall time
  StrokeLedger ledger;            // simulated mode
  // Index into the trajectory of the last sample before the unitary
  // stroke; the next sample is immediately after it.
  std::size_t unitary_sample = 0;
};

// Analytic mode evaluates the closed forms. Simulated mode prepares the
// bath fully inverted (negative effective temperature), thermalizes the
// carbon by pulsed evolution, applies the unitary to the carbon, and
// re-thermalizes, recording P_e(t) and the stroke energies.
MachineResult run_machine(const MachineConfig& config);

}  // namespace spinforge
