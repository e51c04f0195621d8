#include "spinforge/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

namespace spinforge {

std::array<Eigen::Matrix2cd, 4> pauli_basis() {
  const Complex i{0.0, 1.0};
  Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, -i, i, 0;
  sz << 1, 0, 0, -1;
  return {id, sx, sy, sz};
}

std::array<Eigen::Matrix2cd, 4> process_basis() {
  auto b = pauli_basis();
  b[2] *= Complex{0.0, 1.0};  // iSy
  return b;
}

std::array<Eigen::Matrix2cd, 4> probe_states() {
  const Complex i{0.0, 1.0};
  Eigen::Matrix2cd p0, p1, plus, plus_i;
  p0 << 1, 0, 0, 0;
  p1 << 0, 0, 0, 1;
  plus << 0.5, 0.5, 0.5, 0.5;
  plus_i << 0.5, -0.5 * i, 0.5 * i, 0.5;
  return {p0, p1, plus, plus_i};
}

namespace {

// Fixed generic mixed state for the held-out linearity check; seeded so the
// reconstruction is bit-reproducible.
Eigen::Matrix2cd held_out_state() {
  std::mt19937 rng(0x5eed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Matrix2cd g;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(r, c) = Complex{re, im};
    }
  Eigen::Matrix2cd rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

Eigen::Matrix2cd expand(const Eigen::Matrix4cd& chi,
                        const std::array<Eigen::Matrix2cd, 4>& basis,
                        const Eigen::Matrix2cd& rho) {
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      out += chi(m, n) * basis[m] * rho * basis[n].adjoint();
  return out;
}

// Eigendecomposition square root; negative weight beyond tol is an error.
Eigen::Matrix4cd psd_sqrt(const Eigen::Matrix4cd& m, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m);
  Eigen::Vector4d lam = es.eigenvalues();
  const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  for (int k = 0; k < 4; ++k) {
    if (lam(k) < -tol * scale)
      throw std::invalid_argument(
          "process_fidelity: matrix not positive semidefinite");
    lam(k) = std::sqrt(std::max(0.0, lam(k)));
  }
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double completeness_residual(const Eigen::Matrix4cd& chi,
                             const std::array<Eigen::Matrix2cd, 4>& basis) {
  Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      s += chi(m, n) * basis[n].adjoint() * basis[m];
  return (s - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
}

void ProcessMatrix::validate(double tol) const {
  if ((chi - chi.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw std::runtime_error("ProcessMatrix: chi not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(chi,
                                                     Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol)
    throw std::runtime_error("ProcessMatrix: chi not positive semidefinite");
  if (completeness_residual(chi, process_basis()) > tol)
    throw std::runtime_error("ProcessMatrix: completeness relation violated");
}

Eigen::Matrix4cd reconstruct_chi_in_basis(
    const Channel& channel, const std::array<Eigen::Matrix2cd, 4>& basis) {
  const auto probes = probe_states();
  Eigen::MatrixXcd a(16, 16);
  Eigen::VectorXcd b(16);
  for (int j = 0; j < 4; ++j) {
    const DensityMatrix out = channel(DensityMatrix{1, probes[j]});
    if (out.n_sites != 1 || out.mat.rows() != 2 || out.mat.cols() != 2)
      throw std::invalid_argument(
          "reconstruct_chi: channel must map one qubit to one qubit");
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) {
        const Eigen::Matrix2cd block = basis[m] * probes[j] * basis[n].adjoint();
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c)
            a(j * 4 + r * 2 + c, m * 4 + n) = block(r, c);
      }
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) b(j * 4 + r * 2 + c) = out.mat(r, c);
  }
  const Eigen::VectorXcd x = a.colPivHouseholderQr().solve(b);
  Eigen::Matrix4cd chi;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) chi(m, n) = x(m * 4 + n);
  chi = (0.5 * (chi + chi.adjoint())).eval();

  const Eigen::Matrix2cd rho_h = held_out_state();
  const DensityMatrix mapped = channel(DensityMatrix{1, rho_h});
  const double residual =
      (mapped.mat - expand(chi, basis, rho_h)).cwiseAbs().maxCoeff();
  if (residual >= 1e-10)
    throw std::runtime_error(
        "reconstruct_chi: held-out residual too large; channel is not a "
        "linear trace-preserving map");
  return chi;
}

ProcessMatrix reconstruct_chi(const Channel& channel) {
  ProcessMatrix pm;
  pm.chi = reconstruct_chi_in_basis(channel, process_basis());
  pm.validate();
  return pm;
}

ProcessMatrix chi_from_kraus(const std::vector<Eigen::Matrix2cd>& kraus) {
  const auto basis = process_basis();
  ProcessMatrix pm;
  for (const auto& k : kraus) {
    Eigen::Vector4cd coeff;
    for (int m = 0; m < 4; ++m)
      coeff(m) = (basis[m].adjoint() * k).trace() / 2.0;
    pm.chi += coeff * coeff.adjoint();
  }
  return pm;
}

double process_fidelity(const ProcessMatrix& a, const ProcessMatrix& b) {
  auto normalized = [](const Eigen::Matrix4cd& c) {
    Eigen::Matrix4cd h = 0.5 * (c + c.adjoint());
    const double tr = h.trace().real();
    if (!(tr > 0.0))
      throw std::invalid_argument("process_fidelity: non-positive trace");
    return Eigen::Matrix4cd(h / tr);
  };
  const Eigen::Matrix4cd an = normalized(a.chi);
  const Eigen::Matrix4cd bn = normalized(b.chi);
  const Eigen::Matrix4cd ra = psd_sqrt(an, 1e-8);
  psd_sqrt(bn, 1e-8);  // PSD check on the second argument too
  const Eigen::Matrix4cd m = ra * bn * ra;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(
      Eigen::Matrix4cd(0.5 * (m + m.adjoint())), Eigen::EigenvaluesOnly);
  double root_sum = 0.0;
  for (int k = 0; k < 4; ++k)
    root_sum += std::sqrt(std::max(0.0, es.eigenvalues()(k)));
  return std::clamp(root_sum * root_sum, 0.0, 1.0);
}

Channel unitary_channel(const Eigen::Matrix2cd& u) {
  return [u](const DensityMatrix& rho) {
    return DensityMatrix{1, u * rho.mat * u.adjoint()};
  };
}

Channel kraus_channel(std::vector<Eigen::Matrix2cd> kraus) {
  return [ks = std::move(kraus)](const DensityMatrix& rho) {
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    for (const auto& k : ks) out += k * rho.mat * k.adjoint();
    return DensityMatrix{1, out};
  };
}

Channel engineered_relaxation_channel(const ChainTopology& topo,
                                      const CouplingConstants& couplings,
                                      double delta_t, double tau_p,
                                      int n_cycles, SiteState bath,
                                      SpinConvention convention,
                                      EvolveMethod method) {
  topo.validate();
  if (n_cycles < 1)
    throw std::invalid_argument(
        "engineered_relaxation_channel: need at least one cycle");
  const OperatorSum h =
      build_natural_hamiltonian(topo, couplings, convention);
  auto prop = std::make_shared<CyclePropagator>(
      h, PulseCycle::four_pulse_xy(delta_t, tau_p), method);
  const int n_sites = topo.n_sites();
  Index bath_bits = 0;
  if (bath == SiteState::Excited)
    bath_bits = (Index{1} << (n_sites - 1)) - 1;

  return [prop, n_sites, bath_bits, n_cycles](const DensityMatrix& rho_in) {
    if (rho_in.n_sites != 1)
      throw std::invalid_argument(
          "engineered_relaxation_channel: one-qubit input expected");
    const Eigen::Matrix2cd herm =
        0.5 * (rho_in.mat + rho_in.mat.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(herm);
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    for (int k = 0; k < 2; ++k) {
      const double p = es.eigenvalues()(k);
      if (p < 1e-14) continue;
      StateVector psi(n_sites);
      psi.amp[(bath_bits << 1) | 0] = es.eigenvectors()(0, k);
      psi.amp[(bath_bits << 1) | 1] = es.eigenvectors()(1, k);
      for (int c = 0; c < n_cycles; ++c) prop->apply_cycle(psi);
      out += p * partial_trace(psi, {0}).mat;
    }
    return DensityMatrix{1, out};
  };
}

}  // namespace spinforge
