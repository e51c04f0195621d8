#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include <Eigen/Dense>

#include "spinforge/thermo.hpp"

using namespace spinforge;

namespace {

constexpr double kOmega = 2.0 * 3.14159265358979323846 * 125.7e6;  // rad/s

OperatorSum zeeman_half() {
  return build_zeeman(ZeemanParams{kOmega}, SpinConvention::SpinHalf);
}

}  // namespace

TEST_CASE("unitary names round trip") {
  for (auto u : {MachineUnitary::Ux, MachineUnitary::Uy, MachineUnitary::Upi,
                 MachineUnitary::UI})
    CHECK(machine_unitary_from_name(machine_unitary_name(u)) == u);
  CHECK_THROWS_AS(machine_unitary_from_name("Uz"), std::exception);
}

TEST_CASE("transition probabilities of the four strokes") {
  CHECK(transition_probability(machine_unitary(MachineUnitary::UI)) ==
        doctest::Approx(0.0));
  CHECK(transition_probability(machine_unitary(MachineUnitary::Upi)) ==
        doctest::Approx(1.0));
  CHECK(transition_probability(machine_unitary(MachineUnitary::Ux)) ==
        doctest::Approx(0.5));
  CHECK(transition_probability(machine_unitary(MachineUnitary::Uy)) ==
        doctest::Approx(0.5));
  // UI is a 2 pi Bloch turn: identity up to global phase
  const auto ui = machine_unitary(MachineUnitary::UI);
  CHECK((ui + Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(transition_probability(2.0 * Eigen::Matrix2cd::Identity()),
                  std::exception);
}

TEST_CASE("zeeman gap tracks the convention's z operator") {
  // -(hbar omega / 2) S_z: the gap is hbar omega with sigma operators and
  // half that with S = sigma / 2
  const double hw = ZeemanParams{}.hbar * kOmega;
  CHECK(zeeman_gap(zeeman_half()) == doctest::Approx(hw / 2.0).epsilon(1e-12));
  CHECK(zeeman_gap(build_zeeman(ZeemanParams{kOmega},
                                SpinConvention::Pauli)) ==
        doctest::Approx(hw).epsilon(1e-12));
  // ground state is |0>
  const auto cold = thermal_state(zeeman_half(), InverseTemperature{1e30});
  CHECK(cold.mat(0, 0).real() == doctest::Approx(1.0));
}

TEST_CASE("thermal state limits") {
  const auto h1 = zeeman_half();
  const double gap = zeeman_gap(h1);

  // beta = 0: maximally mixed
  const auto mixed = thermal_state(h1, InverseTemperature{0.0});
  CHECK((mixed.mat - 0.5 * Eigen::Matrix2cd::Identity()).cwiseAbs()
            .maxCoeff() < 1e-15);

  // large positive beta: ground state |0>
  const auto cold = thermal_state(h1, InverseTemperature{1e30});
  CHECK(cold.mat(0, 0).real() == doctest::Approx(1.0));
  CHECK(std::abs(cold.mat(1, 1)) < 1e-15);

  // large negative beta: fully inverted
  const auto hot = thermal_state(h1, InverseTemperature{-1e30});
  CHECK(hot.mat(1, 1).real() == doctest::Approx(1.0));

  // finite beta: Gibbs ratio exp(-beta gap), populations diagonal
  const double beta = 5e25;
  const auto rho = thermal_state(h1, InverseTemperature{beta});
  CHECK(std::abs(rho.mat(0, 1)) < 1e-16);
  CHECK(rho.mat(1, 1).real() / rho.mat(0, 0).real() ==
        doctest::Approx(std::exp(-beta * gap)).epsilon(1e-10));

  // inverted sign flips the population ordering
  const auto inv = thermal_state(h1, InverseTemperature{-beta});
  CHECK(inv.mat(1, 1).real() > inv.mat(0, 0).real());
  CHECK(rho.mat(0, 0).real() > rho.mat(1, 1).real());

  CHECK_THROWS_AS(
      thermal_state(h1, InverseTemperature{
                            std::numeric_limits<double>::infinity()}),
      std::exception);
  OperatorSum two(2);
  two.add(PauliString(Complex{1.0, 0.0}, {{0, PauliAxis::Z}}));
  CHECK_THROWS_AS(thermal_state(two, InverseTemperature{1.0}),
                  std::exception);
}

TEST_CASE("work matches the closed form for every stroke") {
  const auto h1 = zeeman_half();
  const double gap = zeeman_gap(h1);
  for (double beta : {5e25, -5e25, 1e24, -3e26}) {
    const auto rho1 = thermal_state(h1, InverseTemperature{beta});
    for (auto u : {MachineUnitary::Ux, MachineUnitary::Uy,
                   MachineUnitary::Upi, MachineUnitary::UI}) {
      const auto rec = work_and_heat(rho1, machine_unitary(u), h1);
      const double want = closed_form_work(gap, beta, rec.xi);
      CHECK(rec.work == doctest::Approx(want).epsilon(1e-10));
      CHECK(rec.heat == doctest::Approx(-want).epsilon(1e-10));
      if (u == MachineUnitary::UI) {
        CHECK(rec.work == 0.0);
        CHECK(!rec.efficiency.has_value());
      } else {
        REQUIRE(rec.efficiency.has_value());
        CHECK(*rec.efficiency == doctest::Approx(1.0).epsilon(1e-12));
        // work is extracted exactly when the population is inverted
        CHECK((rec.work < 0.0) == (beta < 0.0));
      }
    }
  }
}

TEST_CASE("work_and_heat rejects states that do not commute with H1") {
  const auto h1 = zeeman_half();
  Eigen::Matrix2cd coherent;
  coherent << 0.5, 0.5, 0.5, 0.5;
  CHECK_THROWS_AS(
      work_and_heat(DensityMatrix{1, coherent},
                    machine_unitary(MachineUnitary::Upi), h1),
      std::exception);
}

TEST_CASE("analytic machine run wraps the closed forms") {
  MachineConfig mc;
  mc.beta = InverseTemperature{-5e25};
  mc.unitary = MachineUnitary::Upi;
  const auto r = run_machine(mc);
  const auto h1 = zeeman_half();
  const double gap = zeeman_gap(h1);
  CHECK(r.record.xi == doctest::Approx(1.0));
  CHECK(r.record.work ==
        doctest::Approx(closed_form_work(gap, -5e25, 1.0)).epsilon(1e-10));
  CHECK(r.record.work < 0.0);
  REQUIRE(r.record.efficiency.has_value());
  CHECK(*r.record.efficiency == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.excited_population.times.empty());
}

TEST_CASE("simulated machine bookkeeping at a small size") {
  MachineConfig mc;
  mc.simulated = true;
  mc.topo = ChainTopology{1};
  mc.beta = InverseTemperature{-5e25};
  mc.delta_t = 2e-6;
  mc.tau_p = 0.0;
  mc.stroke_window = 160e-6;  // 20 cycles of 8 us
  mc.method = EvolveMethod::Dense;

  for (auto u : {MachineUnitary::UI, MachineUnitary::Upi,
                 MachineUnitary::Ux}) {
    mc.unitary = u;
    const auto r = run_machine(mc);
    const auto& t = r.excited_population;
    t.validate();
    // 1 initial + 20 thermalization + 1 stroke + 20 rethermalization
    REQUIRE(t.times.size() == 42);
    CHECK(r.unitary_sample == 20);
    for (double p : t.mz) {
      CHECK(p >= -1e-12);
      CHECK(p <= 1.0 + 1e-12);
    }
    CHECK(t.mz.front() == doctest::Approx(0.0));  // carbon starts in |0>

    const double pe_before = t.mz[r.unitary_sample];
    const double pe_after = t.mz[r.unitary_sample + 1];
    const double gap = zeeman_gap(zeeman_half());
    if (u == MachineUnitary::UI) {
      CHECK(pe_after == doctest::Approx(pe_before).epsilon(1e-12));
      CHECK(r.ledger.work_unitary == doctest::Approx(0.0));
    } else if (u == MachineUnitary::Upi) {
      // full flip: P_e -> 1 - P_e, work = -gap (2 P_e - 1)
      CHECK(pe_after == doctest::Approx(1.0 - pe_before).epsilon(1e-10));
      CHECK(r.ledger.work_unitary ==
            doctest::Approx(-gap * (2.0 * pe_before - 1.0)).epsilon(1e-9));
    } else {
      // half stroke: P_e -> 1/2 up to the coherence it picks up
      CHECK(r.record.xi == doctest::Approx(0.5));
    }
    // bath contact heat equals the carbon energy change gap (P_e' - P_e)
    CHECK(r.ledger.heat_thermalization ==
          doctest::Approx(gap * (pe_before - t.mz.front()))
              .epsilon(1e-9));
    CHECK(r.ledger.heat_rethermalization ==
          doctest::Approx(gap * (t.mz.back() - pe_after)).epsilon(1e-9));
  }
}

TEST_CASE("closed form work sign structure") {
  const double gap = 1.0;
  CHECK(closed_form_work(gap, -2.0, 1.0) < 0.0);
  CHECK(closed_form_work(gap, 2.0, 1.0) > 0.0);
  CHECK(closed_form_work(gap, 0.0, 1.0) == 0.0);
  CHECK(closed_form_work(gap, -2.0, 0.0) == 0.0);
  // magnitude doubles with xi: pi stroke extracts twice the half stroke
  CHECK(closed_form_work(gap, -2.0, 1.0) ==
        doctest::Approx(2.0 * closed_form_work(gap, -2.0, 0.5)));
}
