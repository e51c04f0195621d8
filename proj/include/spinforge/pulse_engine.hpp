#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "spinforge/evolution.hpp"
#include "spinforge/spin_algebra.hpp"

namespace spinforge {

enum class RotationAxis { PlusX, MinusX, PlusY, MinusY };

// A collective rotation of every site by the same Bloch angle about the
// same axis; the angle is a physical rotation, independent of the spin
// convention used for Hamiltonian coefficients. tau_p is wall-clock width
// only; the rotation itself is ideal.
struct Pulse {
  RotationAxis axis = RotationAxis::PlusX;
  double angle = 1.5707963267948966;  // Bloch rad
  double tau_p = 0.0;                 // s
};

// Four pulses with free evolution delta_t between them; the first and last
// free intervals last delta_t / 2, so one cycle is
//   U = e(dt/2) P4 e(dt) P3 e(dt) P2 e(dt) P1 e(dt/2).
struct PulseCycle {
  std::array<Pulse, 4> pulses;
  double delta_t = 0.0;  // s

  // pi/2 pulses about +x, -x, +y, -y: the exchange-engineering sequence.
  static PulseCycle four_pulse_xy(double delta_t, double tau_p);

  double free_time() const { return 4.0 * delta_t; }
  double wall_time() const;

  // Whether P4 P3 P2 P1 is the identity up to a global phase.
  bool cyclic(double tol = 1e-12) const;
};

// Single-site Bloch rotation exp(-i (angle/2) sigma_axis).
Eigen::Matrix2cd rotation_matrix(RotationAxis axis, double angle);

// The same rotation applied to every site of an n-site register.
struct CollectiveRotation {
  int n_sites = 0;
  Eigen::Matrix2cd site_unitary;

  void apply(StateVector& psi) const;
};

CollectiveRotation pulse_unitary(const Pulse& p, int n_sites);

// Signed axis permutation sigma_a -> sign[a] * sigma[image[a]], the action
// A -> W^dagger A W of a collective rotation on single-site Paulis. pi/2
// and pi Bloch rotations close over Pauli strings.
struct PauliConjugation {
  std::array<PauliAxis, 3> image{PauliAxis::X, PauliAxis::Y, PauliAxis::Z};
  std::array<double, 3> sign{1.0, 1.0, 1.0};

  static PauliConjugation identity() { return {}; }
  static PauliConjugation quarter_turn(RotationAxis axis);
  static PauliConjugation half_turn(RotationAxis axis);
  // Conjugation for one pulse, dispatching on its Bloch angle.
  static PauliConjugation for_pulse(const Pulse& p);

  PauliString apply(const PauliString& t) const;
  OperatorSum apply(const OperatorSum& op) const;
};

// g(A) = outer(inner(A)).
PauliConjugation compose(const PauliConjugation& outer,
                         const PauliConjugation& inner);

// Interaction frame between pulses: T_j is the cumulative pulse product,
// weight_fraction the share of the cycle's free time spent in the frame.
struct TogglingFrame {
  PauliConjugation map;     // A -> T_j^dagger A T_j
  double weight_fraction;   // Delta t_j / (4 delta_t)
  OperatorSum frame_hamiltonian;
};

std::vector<TogglingFrame> toggling_frames(const OperatorSum& h,
                                           const PulseCycle& cycle);

// Zeroth-order average of the toggling-frame Hamiltonians, weighted by the
// free-evolution fractions {1/8, 1/4, 1/4, 1/4, 1/8}. Closed form: no dense
// matrices are built.
OperatorSum average_hamiltonian_zeroth(const OperatorSum& h,
                                       const PulseCycle& cycle);

// One cycle of the exact pulsed propagator, applied matrix-free.
class CyclePropagator {
 public:
  CyclePropagator(OperatorSum h, PulseCycle cycle,
                  EvolveMethod method = EvolveMethod::Auto);

  void apply_cycle(StateVector& psi) const;
  const PulseCycle& cycle() const { return cycle_; }
  double wall_period() const { return cycle_.wall_time(); }
  double effective_period() const { return cycle_.free_time(); }

 private:
  PulseCycle cycle_;
  Propagator free_;
  std::array<Eigen::Matrix2cd, 4> rotations_;
};

struct Schedule {
  double tau_c;
  double total_wall;
  double effective_per_cycle;
  double total_effective;
};

Schedule schedule(double delta_t, double tau_p, int n_cycles);

// Cycle count whose wall time best matches the window.
int cycles_for_window(double window, double delta_t, double tau_p);

}  // namespace spinforge
