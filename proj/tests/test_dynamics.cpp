#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "spinforge/dynamics.hpp"

using namespace spinforge;

namespace {

constexpr double kPi = 3.14159265358979323846;

DensityMatrix werner(double p) {
  // p |Psi-><Psi-| + (1-p) I/4, C = max(0, (3p-1)/2)
  Eigen::Vector4cd psi;
  psi << 0.0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0;
  Eigen::Matrix4cd rho = p * (psi * psi.adjoint()) +
                         (1.0 - p) / 4.0 * Eigen::Matrix4cd::Identity();
  return DensityMatrix{2, rho};
}

}  // namespace

TEST_CASE("product and chain initial states") {
  const auto psi = product_state(3, 0b101);
  for (Index i = 0; i < 8; ++i)
    CHECK(std::abs(psi.amp[i] - (i == 0b101 ? 1.0 : 0.0)) == 0.0);

  ChainTopology topo{2};  // sites: carbon 0, chain a {1,2}, chain b {3,4}
  const auto up = chain_initial_state(topo, SiteState::Excited,
                                      SiteState::Ground);
  CHECK(std::abs(up.amp[0b00001] - 1.0) == 0.0);
  const auto inverted = chain_initial_state(topo, SiteState::Ground,
                                            SiteState::Excited);
  CHECK(std::abs(inverted.amp[0b11110] - 1.0) == 0.0);
  // bath bit 0 is the first hydrogen of chain a (site 1)
  const auto one_h = chain_initial_state_bits(topo, SiteState::Ground, 0b0001);
  CHECK(std::abs(one_h.amp[0b00010] - 1.0) == 0.0);
  const auto far_h = chain_initial_state_bits(topo, SiteState::Excited, 0b1000);
  CHECK(std::abs(far_h.amp[0b10001] - 1.0) == 0.0);
}

TEST_CASE("trajectory validation rejects bad series") {
  Trajectory t;
  t.times = {0.0, 1.0, 1.0};
  t.mz = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS(t.validate(), std::exception);
  t.times = {0.0, 1.0};
  CHECK_THROWS_AS(t.validate(), std::exception);  // length mismatch
  t.mz = {0.0, 1.5};
  CHECK_THROWS_AS(t.validate(), std::exception);  // out of range
  t.mz = {0.0, -1.0};
  CHECK_NOTHROW(t.validate());
}

TEST_CASE("two-spin flip-flop bond transfers at t = pi / j_eff") {
  // j (2 Sz Iz + Sx Ix + Sy Iy) on exactly two sites: the zz part is
  // constant in the one-excitation sector, the flip-flop element is j / 2,
  // so the excitation crosses at t = pi / j.
  const double j = 550.0;
  OperatorSum h(2);
  auto bond = [&](PauliAxis a, double w) {
    PauliString t = spin_op2(a, 0, a, 1, SpinConvention::SpinHalf);
    t.coefficient *= w * j;
    h.add(std::move(t));
  };
  bond(PauliAxis::Z, 2.0);
  bond(PauliAxis::X, 1.0);
  bond(PauliAxis::Y, 1.0);
  const Propagator prop(h, EvolveMethod::Dense);
  const double t_swap = kPi / j;
  const auto traj = sample_trajectory(prop, product_state(2, 0b01),
                                      2.0 * t_swap, 3, false, 0, 1);
  traj.validate();
  CHECK(traj.mz.front() == doctest::Approx(-1.0));
  CHECK(traj.mz[1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(traj.mz[2] == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("three-site star matches the detuned Rabi closed form") {
  // carbon coupled to one hydrogen per chain. In the one-excitation sector
  // the zz terms detune the carbon by -j against the symmetric hydrogen
  // state, the coupling is j / sqrt(2), so
  //   <sigma_z>(t) = -1 + (4/3) sin^2(Omega t),  Omega = j sqrt(3) / 2.
  const double j = 550.0;
  ChainTopology topo{1};
  const auto couplings = CouplingConstants::from_effective(j, 0.0);
  const auto psi0 = chain_initial_state(topo, SiteState::Excited,
                                        SiteState::Ground);
  RunOptions opts;
  opts.n_samples = 40;
  const double omega = j * std::sqrt(3.0) / 2.0;
  const auto traj =
      run_effective(topo, couplings, psi0, 2.0 * kPi / omega, opts);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double s = std::sin(omega * traj.times[k]);
    CHECK(traj.mz[k] ==
          doctest::Approx(-1.0 + (4.0 / 3.0) * s * s).epsilon(1e-9));
  }
}

TEST_CASE("pauli convention scales bilinear couplings four-fold") {
  // the same couplings attach to sigma operators instead of S = sigma / 2,
  // so the trajectory is the spin-half one played four times faster
  ChainTopology topo{2};
  const auto couplings = CouplingConstants::from_effective(550.0, 980.0);
  const auto psi0 = chain_initial_state(topo, SiteState::Excited,
                                        SiteState::Ground);
  RunOptions half, pauli;
  half.n_samples = pauli.n_samples = 50;
  half.convention = SpinConvention::SpinHalf;
  pauli.convention = SpinConvention::Pauli;
  const auto a = run_effective(topo, couplings, psi0, 4.0 * 5e-3, half);
  const auto b = run_effective(topo, couplings, psi0, 5e-3, pauli);
  for (std::size_t k = 0; k < a.mz.size(); ++k)
    CHECK(a.mz[k] == doctest::Approx(b.mz[k]).epsilon(1e-8));
}

TEST_CASE("dense and krylov propagation agree") {
  ChainTopology topo{2};
  const auto couplings = CouplingConstants::from_effective(550.0, 980.0);
  const auto psi0 = chain_initial_state(topo, SiteState::Excited,
                                        SiteState::Ground);
  RunOptions dense, krylov;
  dense.n_samples = krylov.n_samples = 20;
  dense.method = EvolveMethod::Dense;
  krylov.method = EvolveMethod::Krylov;
  const auto a = run_effective(topo, couplings, psi0, 8e-3, dense);
  const auto b = run_effective(topo, couplings, psi0, 8e-3, krylov);
  for (std::size_t k = 0; k < a.mz.size(); ++k)
    CHECK(a.mz[k] == doctest::Approx(b.mz[k]).epsilon(1e-8));
}

TEST_CASE("pulsed run approaches the effective run as delta_t shrinks") {
  ChainTopology topo{1};
  const auto couplings = CouplingConstants::from_effective(550.0, 980.0);
  const auto psi0 = chain_initial_state(topo, SiteState::Excited,
                                        SiteState::Ground);
  const double window = 2e-3;
  RunOptions opts;
  opts.n_samples = 2;
  const auto eff = run_effective(topo, couplings, psi0, window, opts);

  double prev = 1e9;
  for (double dt : {40e-6, 4e-6, 0.4e-6}) {
    const auto cycle = PulseCycle::four_pulse_xy(dt, 0.0);
    const int n = cycles_for_window(window, dt, 0.0);
    const auto pulsed = run_pulsed(topo, couplings, cycle, psi0, n, opts);
    const double dev = std::abs(pulsed.mz.back() - eff.mz.back());
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("spin-flip symmetry of the excitation-conserving model") {
  // flipping every site maps the one-excitation sector onto the
  // one-hole sector; carbon <sigma_z> changes sign but follows the same
  // envelope
  ChainTopology topo{2};
  const auto couplings = CouplingConstants::from_effective(550.0, 980.0);
  RunOptions opts;
  opts.n_samples = 30;
  const auto up = run_effective(
      topo, couplings,
      chain_initial_state(topo, SiteState::Excited, SiteState::Ground), 4e-3,
      opts);
  const auto down = run_effective(
      topo, couplings,
      chain_initial_state(topo, SiteState::Ground, SiteState::Excited), 4e-3,
      opts);
  for (std::size_t k = 0; k < up.mz.size(); ++k)
    CHECK(up.mz[k] == doctest::Approx(-down.mz[k]).epsilon(1e-9));
}

TEST_CASE("concurrence of reference states") {
  // Bell state
  Eigen::Vector4cd bell;
  bell << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
  DensityMatrix rho_bell{2, bell * bell.adjoint()};
  CHECK(concurrence(rho_bell) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(entanglement_of_formation(rho_bell) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // product state
  DensityMatrix rho_prod{2, Eigen::Matrix4cd::Zero()};
  rho_prod.mat(0, 0) = 1.0;
  CHECK(concurrence(rho_prod) == doctest::Approx(0.0));
  CHECK(entanglement_of_formation(rho_prod) == doctest::Approx(0.0));

  // Werner states: C = (3p - 1) / 2 above p = 1/3, zero below
  CHECK(concurrence(werner(0.8)) == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(concurrence(werner(0.2)) == doctest::Approx(0.0));
  const double c = 0.7;
  const double ef =
      binary_entropy((1.0 + std::sqrt(1.0 - c * c)) / 2.0);
  CHECK(entanglement_of_formation(werner(0.8)) ==
        doctest::Approx(ef).epsilon(1e-10));
}

TEST_CASE("binary entropy endpoints and midpoint") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("eof tracking matches a direct partial-trace computation") {
  ChainTopology topo{2};
  const auto couplings = CouplingConstants::from_effective(550.0, 980.0);
  const auto psi0 = chain_initial_state(topo, SiteState::Excited,
                                        SiteState::Ground);
  RunOptions opts;
  opts.n_samples = 10;
  opts.track_eof = true;
  const auto traj = run_effective(topo, couplings, psi0, 3e-3, opts);
  REQUIRE(traj.eof.size() == traj.times.size());
  // recompute the final sample by evolving separately
  const auto h = build_effective_hamiltonian(topo, couplings,
                                             SpinConvention::SpinHalf);
  Propagator prop(h, EvolveMethod::Dense);
  StateVector psi = psi0;
  prop.apply(psi, 3e-3);
  const auto rho = partial_trace(psi, {topo.carbon(), topo.hydrogen(0, 1)});
  CHECK(traj.eof.back() ==
        doctest::Approx(entanglement_of_formation(rho)).epsilon(1e-6));
  CHECK(traj.eof.front() == doctest::Approx(0.0));
}
