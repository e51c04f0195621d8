#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "spinforge/dynamics.hpp"
#include "spinforge/evolution.hpp"
#include "spinforge/model.hpp"
#include "spinforge/pulse_engine.hpp"
#include "spinforge/spin_algebra.hpp"

namespace spinforge {

// Operator basis for process matrices, (E0, E1, E2, E3) = (I, Sx, iSy, Sz)
// with Pauli normalization: Tr[Em^dag En] = 2 delta_mn.
std::array<Eigen::Matrix2cd, 4> process_basis();

// Plain Pauli basis (I, X, Y, Z), kept around for basis-change checks.
std::array<Eigen::Matrix2cd, 4> pauli_basis();

// chi of a single-qubit channel, rho_f = sum_mn chi_mn Em rho_i En^dag,
// in the process_basis() ordering.
struct ProcessMatrix {
  Eigen::Matrix4cd chi = Eigen::Matrix4cd::Zero();

  // Hermitian, PSD within tol, completeness sum chi_mn En^dag Em = I
  // within tol.
  void validate(double tol = 1e-8) const;
};

using Channel = std::function<DensityMatrix(const DensityMatrix&)>;

// The four probe inputs used for reconstruction: |0><0|, |1><1|,
// |+><+|, |+i><+i|.
std::array<Eigen::Matrix2cd, 4> probe_states();

// Reconstruct chi by probing the channel on probe_states() and solving the
// basis expansion. The fit is re-checked on a held-out generic input;
// throws if that residual reaches 1e-10 (channel not linear and trace
// preserving). The result is validated.
ProcessMatrix reconstruct_chi(const Channel& channel);

// Same reconstruction in an arbitrary operator basis, without validation.
Eigen::Matrix4cd reconstruct_chi_in_basis(
    const Channel& channel, const std::array<Eigen::Matrix2cd, 4>& basis);

// Brute-force conversion of a Kraus set into chi: a_im = Tr[Em^dag Ki]/2,
// chi = sum_i a_i a_i^dag.
ProcessMatrix chi_from_kraus(const std::vector<Eigen::Matrix2cd>& kraus);

// max-norm of sum_mn chi_mn En^dag Em - I.
double completeness_residual(const Eigen::Matrix4cd& chi,
                             const std::array<Eigen::Matrix2cd, 4>& basis);

// Uhlmann fidelity of the trace-normalized matrices:
// F = (Tr sqrt(sqrt(a') b' sqrt(a')))^2 with a' = a / Tr a.
double process_fidelity(const ProcessMatrix& a, const ProcessMatrix& b);

Channel unitary_channel(const Eigen::Matrix2cd& u);
Channel kraus_channel(std::vector<Eigen::Matrix2cd> kraus);

// Carbon channel induced by n_cycles of the four-pulse sequence with the
// hydrogens fixed in a product state: embed the input on the carbon, run
// the pulsed evolution, trace out the bath. Mixed inputs are handled by
// evolving the eigenvectors separately, so the map is linear by
// construction.
Channel engineered_relaxation_channel(
    const ChainTopology& topo, const CouplingConstants& couplings,
    double delta_t, double tau_p, int n_cycles,
    SiteState bath = SiteState::Ground,
    SpinConvention convention = SpinConvention::SpinHalf,
    EvolveMethod method = EvolveMethod::Auto);

}  // namespace spinforge
