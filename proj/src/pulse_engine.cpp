#include "spinforge/pulse_engine.hpp"

#include <cmath>
#include <iostream>
#include <mutex>
#include <stdexcept>

namespace spinforge {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::Matrix2cd signed_axis_matrix(RotationAxis axis) {
  switch (axis) {
    case RotationAxis::PlusX: return pauli_matrix(PauliAxis::X);
    case RotationAxis::MinusX: return -pauli_matrix(PauliAxis::X);
    case RotationAxis::PlusY: return pauli_matrix(PauliAxis::Y);
    case RotationAxis::MinusY: return -pauli_matrix(PauliAxis::Y);
  }
  throw std::logic_error("signed_axis_matrix: bad axis");
}

}  // namespace

PulseCycle PulseCycle::four_pulse_xy(double delta_t, double tau_p) {
  if (delta_t <= 0.0)
    throw std::invalid_argument("PulseCycle: delta_t must be > 0");
  if (tau_p < 0.0)
    throw std::invalid_argument("PulseCycle: tau_p must be >= 0");
  PulseCycle c;
  c.delta_t = delta_t;
  const double half_pi = kPi / 2.0;
  c.pulses[0] = Pulse{RotationAxis::PlusX, half_pi, tau_p};
  c.pulses[1] = Pulse{RotationAxis::MinusX, half_pi, tau_p};
  c.pulses[2] = Pulse{RotationAxis::PlusY, half_pi, tau_p};
  c.pulses[3] = Pulse{RotationAxis::MinusY, half_pi, tau_p};
  return c;
}

double PulseCycle::wall_time() const {
  double t = free_time();
  for (const Pulse& p : pulses) t += p.tau_p;
  return t;
}

bool PulseCycle::cyclic(double tol) const {
  Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
  for (const Pulse& p : pulses) u = rotation_matrix(p.axis, p.angle) * u;
  const Complex phase = u.trace() / 2.0;
  if (std::abs(std::abs(phase) - 1.0) > tol) return false;
  return (u - phase * Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <=
         tol;
}

Eigen::Matrix2cd rotation_matrix(RotationAxis axis, double angle) {
  const double half = angle / 2.0;
  return std::cos(half) * Eigen::Matrix2cd::Identity() -
         Complex{0.0, 1.0} * std::sin(half) * signed_axis_matrix(axis);
}

void CollectiveRotation::apply(StateVector& psi) const {
  if (psi.n_sites != n_sites)
    throw std::invalid_argument("CollectiveRotation: dimension mismatch");
  const Complex u00 = site_unitary(0, 0), u01 = site_unitary(0, 1);
  const Complex u10 = site_unitary(1, 0), u11 = site_unitary(1, 1);
  Complex* a = psi.amp.data();
  const std::int64_t d = static_cast<std::int64_t>(psi.dim());
  for (int site = 0; site < n_sites; ++site) {
    const Index bit = Index{1} << site;
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < d; ++i) {
      if (static_cast<Index>(i) & bit) continue;
      const Complex lo = a[i];
      const Complex hi = a[i | bit];
      a[i] = u00 * lo + u01 * hi;
      a[i | bit] = u10 * lo + u11 * hi;
    }
  }
}

CollectiveRotation pulse_unitary(const Pulse& p, int n_sites) {
  return CollectiveRotation{n_sites, rotation_matrix(p.axis, p.angle)};
}

PauliConjugation PauliConjugation::quarter_turn(RotationAxis axis) {
  PauliConjugation c;
  auto set = [&](PauliAxis from, PauliAxis to, double s) {
    c.image[static_cast<int>(from)] = to;
    c.sign[static_cast<int>(from)] = s;
  };
  switch (axis) {
    case RotationAxis::PlusX:
      set(PauliAxis::Y, PauliAxis::Z, -1.0);
      set(PauliAxis::Z, PauliAxis::Y, 1.0);
      break;
    case RotationAxis::MinusX:
      set(PauliAxis::Y, PauliAxis::Z, 1.0);
      set(PauliAxis::Z, PauliAxis::Y, -1.0);
      break;
    case RotationAxis::PlusY:
      set(PauliAxis::X, PauliAxis::Z, 1.0);
      set(PauliAxis::Z, PauliAxis::X, -1.0);
      break;
    case RotationAxis::MinusY:
      set(PauliAxis::X, PauliAxis::Z, -1.0);
      set(PauliAxis::Z, PauliAxis::X, 1.0);
      break;
  }
  return c;
}

PauliConjugation PauliConjugation::half_turn(RotationAxis axis) {
  PauliConjugation c;
  const bool about_x =
      axis == RotationAxis::PlusX || axis == RotationAxis::MinusX;
  if (about_x) {
    c.sign[static_cast<int>(PauliAxis::Y)] = -1.0;
    c.sign[static_cast<int>(PauliAxis::Z)] = -1.0;
  } else {
    c.sign[static_cast<int>(PauliAxis::X)] = -1.0;
    c.sign[static_cast<int>(PauliAxis::Z)] = -1.0;
  }
  return c;
}

PauliConjugation PauliConjugation::for_pulse(const Pulse& p) {
  if (std::abs(p.angle - kPi / 2.0) < 1e-12) return quarter_turn(p.axis);
  if (std::abs(p.angle - kPi) < 1e-12) return half_turn(p.axis);
  throw std::invalid_argument(
      "PauliConjugation: only quarter- and half-turn pulses close over "
      "Pauli strings");
}

PauliString PauliConjugation::apply(const PauliString& t) const {
  PauliString out;
  out.coefficient = t.coefficient;
  for (auto [site, axis] : t.factors) {
    const int a = static_cast<int>(axis);
    out.factors.emplace(site, image[a]);
    out.coefficient *= sign[a];
  }
  return out;
}

OperatorSum PauliConjugation::apply(const OperatorSum& op) const {
  OperatorSum out(op.n_sites);
  out.terms.reserve(op.terms.size());
  for (const PauliString& t : op.terms) out.terms.push_back(apply(t));
  return out;
}

PauliConjugation compose(const PauliConjugation& outer,
                         const PauliConjugation& inner) {
  PauliConjugation g;
  for (int a = 0; a < 3; ++a) {
    const int mid = static_cast<int>(inner.image[a]);
    g.image[a] = outer.image[mid];
    g.sign[a] = inner.sign[a] * outer.sign[mid];
  }
  return g;
}

std::vector<TogglingFrame> toggling_frames(const OperatorSum& h,
                                           const PulseCycle& cycle) {
  if (!cycle.cyclic())
    throw std::invalid_argument(
        "toggling_frames: pulse product is not the identity");
  // Frame j covers the free interval after the first j pulses; for
  // T_j = P_j ... P_1 the conjugation by P_j acts innermost.
  std::vector<TogglingFrame> frames;
  PauliConjugation cumulative = PauliConjugation::identity();
  static const double kWeights[5] = {0.125, 0.25, 0.25, 0.25, 0.125};
  frames.push_back({cumulative, kWeights[0], h});
  for (int j = 0; j < 4; ++j) {
    cumulative =
        compose(cumulative, PauliConjugation::for_pulse(cycle.pulses[j]));
    frames.push_back({cumulative, kWeights[j + 1], cumulative.apply(h)});
  }
  return frames;
}

OperatorSum average_hamiltonian_zeroth(const OperatorSum& h,
                                       const PulseCycle& cycle) {
  OperatorSum avg(h.n_sites);
  for (const TogglingFrame& f : toggling_frames(h, cycle))
    avg += f.frame_hamiltonian.scaled(Complex{f.weight_fraction, 0.0});
  return avg.simplified();
}

CyclePropagator::CyclePropagator(OperatorSum h, PulseCycle cycle,
                                 EvolveMethod method)
    : cycle_(cycle), free_(std::move(h), method) {
  if (!cycle_.cyclic()) {
    static std::once_flag flag;
    std::call_once(flag, [] {
      std::cerr << "warning: pulse cycle is not cyclic; zeroth-order "
                   "averaging does not apply\n";
    });
  }
  for (int j = 0; j < 4; ++j)
    rotations_[j] =
        rotation_matrix(cycle_.pulses[j].axis, cycle_.pulses[j].angle);
}

void CyclePropagator::apply_cycle(StateVector& psi) const {
  const double dt = cycle_.delta_t;
  free_.apply(psi, dt / 2.0);
  for (int j = 0; j < 4; ++j) {
    CollectiveRotation rot{psi.n_sites, rotations_[j]};
    rot.apply(psi);
    free_.apply(psi, j == 3 ? dt / 2.0 : dt);
  }
}

Schedule schedule(double delta_t, double tau_p, int n_cycles) {
  if (delta_t <= 0.0 || tau_p < 0.0 || n_cycles < 0)
    throw std::invalid_argument("schedule: arguments must be positive");
  Schedule s;
  s.tau_c = 4.0 * delta_t + 4.0 * tau_p;
  s.total_wall = s.tau_c * n_cycles;
  s.effective_per_cycle = 4.0 * delta_t;
  s.total_effective = s.effective_per_cycle * n_cycles;
  return s;
}

int cycles_for_window(double window, double delta_t, double tau_p) {
  const double tau_c = 4.0 * delta_t + 4.0 * tau_p;
  if (window <= 0.0 || tau_c <= 0.0)
    throw std::invalid_argument("cycles_for_window: positive times required");
  return static_cast<int>(std::lround(window / tau_c));
}

}  // namespace spinforge
