#include "spinforge/thermo.hpp"

#include <cmath>
#include <stdexcept>

namespace spinforge {

MachineUnitary machine_unitary_from_name(const std::string& name) {
  if (name == "Ux") return MachineUnitary::Ux;
  if (name == "Uy") return MachineUnitary::Uy;
  if (name == "Upi") return MachineUnitary::Upi;
  if (name == "UI") return MachineUnitary::UI;
  throw std::invalid_argument("machine unitary must be Ux, Uy, Upi or UI");
}

std::string machine_unitary_name(MachineUnitary u) {
  switch (u) {
    case MachineUnitary::Ux: return "Ux";
    case MachineUnitary::Uy: return "Uy";
    case MachineUnitary::Upi: return "Upi";
    case MachineUnitary::UI: return "UI";
  }
  throw std::logic_error("machine_unitary_name: bad value");
}

Eigen::Matrix2cd machine_unitary(MachineUnitary u) {
  constexpr double kPi = 3.14159265358979323846;
  switch (u) {
    case MachineUnitary::Ux:
      return rotation_matrix(RotationAxis::PlusX, kPi / 2.0);
    case MachineUnitary::Uy:
      return rotation_matrix(RotationAxis::PlusY, kPi / 2.0);
    case MachineUnitary::Upi:
      return rotation_matrix(RotationAxis::PlusX, kPi);
    case MachineUnitary::UI:
      return rotation_matrix(RotationAxis::PlusY, 2.0 * kPi);
  }
  throw std::logic_error("machine_unitary: bad value");
}

namespace {

void require_single_site(const OperatorSum& h1, const char* who) {
  if (h1.n_sites != 1)
    throw std::invalid_argument(std::string(who) +
                                ": expected a single-site Hamiltonian");
}

}  // namespace

DensityMatrix thermal_state(const OperatorSum& h1, InverseTemperature beta) {
  require_single_site(h1, "thermal_state");
  if (!h1.is_hermitian(1e-12))
    throw std::invalid_argument("thermal_state: Hamiltonian not Hermitian");
  if (!std::isfinite(beta.beta))
    throw std::invalid_argument("thermal_state: beta must be finite");
  const Eigen::Matrix2cd hm = to_dense(h1);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(hm);
  // exp(-beta E_k), shifted so the largest weight is exactly 1
  Eigen::Vector2d logw = -beta.beta * es.eigenvalues();
  const double shift = logw.maxCoeff();
  Eigen::Vector2d w = (logw.array() - shift).exp().matrix();
  w /= w.sum();
  Eigen::Matrix2cd rho = es.eigenvectors() * w.asDiagonal() *
                         es.eigenvectors().adjoint();
  DensityMatrix out{1, rho};
  out.validate();
  return out;
}

double transition_probability(const Eigen::Matrix2cd& u) {
  if ((u.adjoint() * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() >
      1e-10)
    throw std::invalid_argument("transition_probability: input not unitary");
  return std::norm(u(1, 0));
}

double zeeman_gap(const OperatorSum& h1) {
  require_single_site(h1, "zeeman_gap");
  const Eigen::Matrix2cd hm = to_dense(h1);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(hm, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(1) - es.eigenvalues()(0);
}

MachineRecord work_and_heat(const DensityMatrix& rho1,
                            const Eigen::Matrix2cd& u,
                            const OperatorSum& h1) {
  require_single_site(h1, "work_and_heat");
  if (rho1.n_sites != 1)
    throw std::invalid_argument("work_and_heat: expected a one-qubit state");
  rho1.validate(1e-8);
  const Eigen::Matrix2cd h = to_dense(h1);
  const double h_scale = std::max(1e-300, h.cwiseAbs().maxCoeff());
  if ((rho1.mat * h - h * rho1.mat).cwiseAbs().maxCoeff() > 1e-8 * h_scale)
    throw std::invalid_argument(
        "work_and_heat: initial state does not commute with H1");

  MachineRecord rec;
  rec.xi = transition_probability(u);
  const Eigen::Matrix2cd rho2 = u * rho1.mat * u.adjoint();
  rec.work = ((rho2 - rho1.mat) * h).trace().real();
  rec.heat = -rec.work;
  if (rec.work != 0.0 || rec.heat != 0.0)
    rec.efficiency = std::abs(rec.work / rec.heat);
  return rec;
}

double closed_form_work(double gap, double beta, double xi) {
  return gap * xi * std::tanh(beta * gap / 2.0);
}

namespace {

MachineResult run_machine_analytic(const MachineConfig& config) {
  const OperatorSum h1 = build_zeeman(config.zeeman, config.convention);
  const DensityMatrix rho1 = thermal_state(h1, config.beta);
  MachineResult result;
  result.record = work_and_heat(rho1, machine_unitary(config.unitary), h1);
  return result;
}

MachineResult run_machine_simulated(const MachineConfig& config) {
  config.topo.validate();
  const OperatorSum h1 = build_zeeman(config.zeeman, config.convention);
  // single sigma_z term: <H1> = coeff * mz
  const double e_coeff = h1.terms[0].coefficient.real();
  const OperatorSum h =
      build_natural_hamiltonian(config.topo, config.couplings,
                                config.convention);
  const PulseCycle cycle =
      PulseCycle::four_pulse_xy(config.delta_t, config.tau_p);
  CyclePropagator u_cycle(h, cycle, config.method);
  const int n_cycles =
      cycles_for_window(config.stroke_window, config.delta_t, config.tau_p);
  if (n_cycles < 1)
    throw std::invalid_argument("run_machine: stroke window shorter than one "
                                "cycle");

  OperatorSum mz_op(config.topo.n_sites());
  mz_op.add(PauliString(Complex{1.0, 0.0}, {{0, PauliAxis::Z}}));

  StateVector psi = chain_initial_state(config.topo, SiteState::Ground,
                                        SiteState::Excited);
  const double tau_c = cycle.wall_time();

  MachineResult result;
  Trajectory& traj = result.excited_population;
  auto sample = [&](double t) {
    const double mz = expectation(psi, mz_op);
    traj.times.push_back(t);
    traj.mz.push_back(mz);
    return e_coeff * mz;
  };

  double energy = sample(0.0);
  const double e_start = energy;
  for (int n = 1; n <= n_cycles; ++n) {
    u_cycle.apply_cycle(psi);
    energy = sample(n * tau_c);
  }
  const double e_hot = energy;
  result.ledger.heat_thermalization = e_hot - e_start;
  result.unitary_sample = traj.times.size() - 1;

  const double t1 = n_cycles * tau_c;
  const double stroke_width = config.tau_p > 0.0 ? config.tau_p
                                                 : config.delta_t;
  apply_single_qubit(psi, config.topo.carbon(),
                     machine_unitary(config.unitary));
  energy = sample(t1 + stroke_width);
  const double e_after_u = energy;
  result.ledger.work_unitary = e_after_u - e_hot;

  for (int n = 1; n <= n_cycles; ++n) {
    u_cycle.apply_cycle(psi);
    energy = sample(t1 + stroke_width + n * tau_c);
  }
  result.ledger.heat_rethermalization = energy - e_after_u;

  // P_e = (1 - mz) / 2
  for (double& v : traj.mz) v = (1.0 - v) / 2.0;
  // the mz slot now stores P_e; still within the validated range
  traj.validate();

  result.record.xi = transition_probability(machine_unitary(config.unitary));
  result.record.work = result.ledger.work_unitary;
  result.record.heat = result.ledger.heat_rethermalization;
  if (result.record.heat != 0.0)
    result.record.efficiency =
        std::abs(result.record.work / result.record.heat);
  return result;
}

}  // namespace

MachineResult run_machine(const MachineConfig& config) {
  return config.simulated ? run_machine_simulated(config)
                          : run_machine_analytic(config);
}

}  // namespace spinforge
