#pragma once

#include "spinforge/spin_algebra.hpp"

namespace spinforge {

// One qubit (site 0) coupled to two linear hydrogen chains of N sites each.
// Chain a occupies sites 1..N, chain b sites N+1..2N, nearest site first.
struct ChainTopology {
  int n_per_chain = 1;

  int n_sites() const { return 1 + 2 * n_per_chain; }
  int carbon() const { return 0; }
  // chain is 0 or 1, k runs 1..n_per_chain from the carbon outward.
  int hydrogen(int chain, int k) const;
  void validate() const;
};

// Couplings in rad/s. The cycle-averaged values are exactly 1/4 of these.
struct CouplingConstants {
  double j_ch = 0.0;
  double j_hh = 0.0;

  static CouplingConstants from_effective(double j_ch_eff, double j_hh_eff) {
    return {4.0 * j_ch_eff, 4.0 * j_hh_eff};
  }
  double j_ch_eff() const { return j_ch / 4.0; }
  double j_hh_eff() const { return j_hh / 4.0; }
};

struct ZeemanParams {
  double omega1 = 0.0;              // rad/s, > 0
  double hbar = 1.054571817e-34;    // J s
};

// H = H_SE + H_E:
//   H_SE = j_ch * sum_chains S_z I_z        (carbon to first hydrogen)
//   H_E  = j_hh * sum_bonds [2 I_z I_z - (I_x I_x + I_y I_y)]
// Term count: 2 + 6 (N - 1).
OperatorSum build_natural_hamiltonian(const ChainTopology& topo,
                                      const CouplingConstants& c,
                                      SpinConvention conv);

// Cycle-averaged Hamiltonian:
//   (j_ch/4) * sum_chains (2 S_z I_z + S_x I_x + S_y I_y)
// + (j_hh/4) * sum_bonds  (2 I_z I_z - I_x I_x - I_y I_y)
// Conserves total sigma_z; the transverse part is a flip-flop exchange.
OperatorSum build_effective_hamiltonian(const ChainTopology& topo,
                                        const CouplingConstants& c,
                                        SpinConvention conv);

// H_1 = -(1/2) hbar omega1 S_z on a single site; ground state |0>.
OperatorSum build_zeeman(const ZeemanParams& z, SpinConvention conv);

}  // namespace spinforge
