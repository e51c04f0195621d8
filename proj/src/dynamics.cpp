#include "spinforge/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinforge {

void Trajectory::validate() const {
  if (times.size() != mz.size())
    throw std::runtime_error("Trajectory: times/mz size mismatch");
  if (!eof.empty() && eof.size() != times.size())
    throw std::runtime_error("Trajectory: times/eof size mismatch");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (times[i] <= times[i - 1])
      throw std::runtime_error("Trajectory: times not strictly increasing");
  for (double m : mz)
    if (m < -1.0 - 1e-9 || m > 1.0 + 1e-9)
      throw std::runtime_error("Trajectory: mz out of range");
}

StateVector product_state(int n_sites, Index excited_bits) {
  return StateVector::computational_basis(n_sites, excited_bits);
}

StateVector chain_initial_state(const ChainTopology& topo, SiteState carbon,
                                SiteState bath) {
  const Index bath_bits =
      bath == SiteState::Excited ? (Index{1} << (2 * topo.n_per_chain)) - 1
                                 : Index{0};
  return chain_initial_state_bits(topo, carbon, bath_bits);
}

StateVector chain_initial_state_bits(const ChainTopology& topo,
                                     SiteState carbon, Index bath_bits) {
  topo.validate();
  if (bath_bits >= (Index{1} << (2 * topo.n_per_chain)))
    throw std::invalid_argument("chain_initial_state_bits: bath bits out of "
                                "range");
  Index bits = bath_bits << 1;
  if (carbon == SiteState::Excited) bits |= 1;
  return product_state(topo.n_sites(), bits);
}

namespace {

OperatorSum carbon_sigma_z(int n_sites) {
  OperatorSum op(n_sites);
  op.add(PauliString(Complex{1.0, 0.0}, {{0, PauliAxis::Z}}));
  return op;
}

}  // namespace

Trajectory sample_trajectory(const Propagator& prop, StateVector psi,
                             double t_total, int n_samples, bool track_eof,
                             int eof_site_a, int eof_site_b) {
  if (n_samples < 2)
    throw std::invalid_argument("sample_trajectory: need at least 2 samples");
  if (t_total <= 0.0)
    throw std::invalid_argument("sample_trajectory: t_total must be > 0");
  const OperatorSum mz_op = carbon_sigma_z(psi.n_sites);
  const double dt = t_total / (n_samples - 1);

  Trajectory traj;
  traj.times.reserve(n_samples);
  traj.mz.reserve(n_samples);
  if (track_eof) traj.eof.reserve(n_samples);
  for (int k = 0; k < n_samples; ++k) {
    if (k > 0) prop.apply(psi, dt);
    traj.times.push_back(k * dt);
    traj.mz.push_back(expectation(psi, mz_op));
    if (track_eof) {
      DensityMatrix rho = partial_trace(psi, {eof_site_a, eof_site_b});
      traj.eof.push_back(entanglement_of_formation(rho));
    }
  }
  traj.validate();
  return traj;
}

Trajectory run_effective(const ChainTopology& topo,
                         const CouplingConstants& couplings,
                         const StateVector& psi0, double t_total,
                         const RunOptions& opts) {
  if (psi0.n_sites != topo.n_sites())
    throw std::invalid_argument("run_effective: state/topology mismatch");
  const OperatorSum h =
      build_effective_hamiltonian(topo, couplings, opts.convention);
  Propagator prop(h, opts.method, opts.krylov);
  return sample_trajectory(prop, psi0, t_total, opts.n_samples,
                           opts.track_eof, topo.carbon(),
                           topo.hydrogen(0, 1));
}

Trajectory run_pulsed(const ChainTopology& topo,
                      const CouplingConstants& couplings,
                      const PulseCycle& cycle, const StateVector& psi0,
                      int n_cycles, const RunOptions& opts) {
  if (psi0.n_sites != topo.n_sites())
    throw std::invalid_argument("run_pulsed: state/topology mismatch");
  if (n_cycles < 1)
    throw std::invalid_argument("run_pulsed: need at least one cycle");
  const OperatorSum h =
      build_natural_hamiltonian(topo, couplings, opts.convention);
  CyclePropagator u(h, cycle, opts.method);
  const OperatorSum mz_op = carbon_sigma_z(psi0.n_sites);
  const double tau_c = cycle.wall_time();

  StateVector psi = psi0;
  Trajectory traj;
  for (int n = 0; n <= n_cycles; ++n) {
    if (n > 0) u.apply_cycle(psi);
    traj.times.push_back(n * tau_c);
    traj.mz.push_back(expectation(psi, mz_op));
    if (opts.track_eof) {
      DensityMatrix rho =
          partial_trace(psi, {topo.carbon(), topo.hydrogen(0, 1)});
      traj.eof.push_back(entanglement_of_formation(rho));
    }
  }
  traj.validate();
  return traj;
}

namespace {

Eigen::Matrix4cd sigma_yy() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 3) = -1.0;
  m(1, 2) = 1.0;
  m(2, 1) = 1.0;
  m(3, 0) = -1.0;
  return m;
}

Eigen::Matrix4cd psd_sqrt(const Eigen::Matrix4cd& m, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m);
  if (es.eigenvalues().minCoeff() < -tol)
    throw std::invalid_argument("concurrence: density matrix has a negative "
                                "eigenvalue");
  Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
         es.eigenvectors().adjoint();
}

}  // namespace

double concurrence(const DensityMatrix& rho) {
  if (rho.n_sites != 2 || rho.mat.rows() != 4)
    throw std::invalid_argument("concurrence: need a two-qubit state");
  const Eigen::Matrix4cd r = rho.mat;
  const Eigen::Matrix4cd yy = sigma_yy();
  const Eigen::Matrix4cd sqrt_r = psd_sqrt(r, 1e-8);
  const Eigen::Matrix4cd flipped = yy * r.conjugate() * yy;
  const Eigen::Matrix4cd m = sqrt_r * flipped * sqrt_r;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m);
  Eigen::Vector4d lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  // ascending order: the largest is lam(3)
  const double c = lam(3) - lam(2) - lam(1) - lam(0);
  return std::clamp(c, 0.0, 1.0);
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double entanglement_of_formation(const DensityMatrix& rho) {
  const double c = concurrence(rho);
  const double x = (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))) / 2.0;
  return std::clamp(binary_entropy(x), 0.0, 1.0);
}

}  // namespace spinforge
