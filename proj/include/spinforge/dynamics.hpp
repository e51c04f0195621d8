#pragma once

#include <vector>

#include "spinforge/evolution.hpp"
#include "spinforge/model.hpp"
#include "spinforge/pulse_engine.hpp"

namespace spinforge {

// Sampled observables. mz is the carbon <sigma_z>, normalized to [-1, 1]
// in either convention. eof, when tracked, is the entanglement of
// formation between the carbon and the first hydrogen of chain a.
struct Trajectory {
  std::vector<double> times;  // s, strictly increasing
  std::vector<double> mz;
  std::vector<double> eof;    // empty unless tracked

  void validate() const;
};

struct RunOptions {
  SpinConvention convention = SpinConvention::SpinHalf;
  EvolveMethod method = EvolveMethod::Auto;
  bool track_eof = false;
  int n_samples = 500;  // effective mode only; pulsed samples once per cycle
  KrylovOptions krylov{};
};

enum class SiteState { Ground, Excited };

// Basis state with the given excitation pattern (bit k set = site k in |1>).
StateVector product_state(int n_sites, Index excited_bits);
StateVector chain_initial_state(const ChainTopology& topo, SiteState carbon,
                                SiteState bath);
// bath_bits runs over the 2N hydrogens, bit 0 = first hydrogen of chain a.
StateVector chain_initial_state_bits(const ChainTopology& topo,
                                     SiteState carbon, Index bath_bits);

// Uniform samples of an existing propagator, including t = 0.
Trajectory sample_trajectory(const Propagator& prop, StateVector psi,
                             double t_total, int n_samples, bool track_eof,
                             int eof_site_a, int eof_site_b);

// Continuous evolution under the cycle-averaged Hamiltonian.
Trajectory run_effective(const ChainTopology& topo,
                         const CouplingConstants& couplings,
                         const StateVector& psi0, double t_total,
                         const RunOptions& opts = RunOptions{});

// Repeated application of the exact cycle propagator under the natural
// Hamiltonian, sampled once per cycle with wall-clock timestamps.
Trajectory run_pulsed(const ChainTopology& topo,
                      const CouplingConstants& couplings,
                      const PulseCycle& cycle, const StateVector& psi0,
                      int n_cycles, const RunOptions& opts = RunOptions{});

// Wootters concurrence of a two-qubit state.
double concurrence(const DensityMatrix& rho);
// Entanglement of formation: h((1 + sqrt(1 - C^2)) / 2).
double entanglement_of_formation(const DensityMatrix& rho);
double binary_entropy(double p);

}  // namespace spinforge
