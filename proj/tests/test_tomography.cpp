#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include <Eigen/Dense>

#include "spinforge/tomography.hpp"

using namespace spinforge;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<Eigen::Matrix2cd> relaxation_kraus(double gamma) {
  // amplitude damping toward |0>; gamma = 1 is complete relaxation
  Eigen::Matrix2cd k1 = Eigen::Matrix2cd::Zero();
  k1(0, 0) = 1.0;
  k1(1, 1) = std::sqrt(1.0 - gamma);
  Eigen::Matrix2cd k2 = Eigen::Matrix2cd::Zero();
  k2(0, 1) = std::sqrt(gamma);
  return {k1, k2};
}

}  // namespace

TEST_CASE("process basis is orthonormal under the trace pairing") {
  const auto basis = process_basis();
  CHECK((basis[0] - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <
        1e-15);
  CHECK((basis[1] - pauli_matrix(PauliAxis::X)).cwiseAbs().maxCoeff() <
        1e-15);
  CHECK((basis[2] - Complex{0.0, 1.0} * pauli_matrix(PauliAxis::Y))
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  CHECK((basis[3] - pauli_matrix(PauliAxis::Z)).cwiseAbs().maxCoeff() <
        1e-15);
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      const Complex tr = (basis[m].adjoint() * basis[n]).trace();
      CHECK(std::abs(tr - (m == n ? 2.0 : 0.0)) < 1e-15);
    }
}

TEST_CASE("probe states are the standard informationally complete four") {
  const auto probes = probe_states();
  for (const auto& p : probes) {
    CHECK(std::abs(p.trace() - 1.0) < 1e-15);
    CHECK((p - p.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-15);  // pure
  }
  CHECK(probes[0](0, 0).real() == doctest::Approx(1.0));
  CHECK(probes[1](1, 1).real() == doctest::Approx(1.0));
  CHECK(probes[2](0, 1).real() == doctest::Approx(0.5));
  CHECK(probes[3](0, 1).imag() == doctest::Approx(-0.5));
}

TEST_CASE("identity channel reconstructs to chi_00 = 1") {
  const auto chi =
      reconstruct_chi(unitary_channel(Eigen::Matrix2cd::Identity()));
  CHECK(std::abs(chi.chi(0, 0) - 1.0) < 1e-12);
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      if (m || n) CHECK(std::abs(chi.chi(m, n)) < 1e-12);
  chi.validate();
}

TEST_CASE("bit flip concentrates on the sigma_x element") {
  const auto chi = reconstruct_chi(unitary_channel(pauli_matrix(PauliAxis::X)));
  CHECK(std::abs(chi.chi(1, 1) - 1.0) < 1e-12);
  CHECK(std::abs(chi.chi(0, 0)) < 1e-12);
  chi.validate();
}

TEST_CASE("unitary channels give rank-one chi with unit trace") {
  const auto u = rotation_matrix(RotationAxis::PlusY, 0.813);
  const auto chi = reconstruct_chi(unitary_channel(u));
  chi.validate();
  CHECK(std::abs(chi.chi.trace() - 1.0) < 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(chi.chi);
  CHECK(es.eigenvalues()(3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(es.eigenvalues()(2)) < 1e-12);
}

TEST_CASE("complete relaxation has the known chi") {
  const auto chi = chi_from_kraus(relaxation_kraus(1.0));
  chi.validate();
  // both Kraus vectors contribute weight 1/4 blocks: {I,Z} and {X,iY}
  for (int m : {0, 3})
    for (int n : {0, 3})
      CHECK(std::abs(chi.chi(m, n) - 0.25) < 1e-14);
  for (int m : {1, 2})
    for (int n : {1, 2})
      CHECK(std::abs(chi.chi(m, n) - 0.25) < 1e-14);
  for (int m : {0, 3})
    for (int n : {1, 2}) {
      CHECK(std::abs(chi.chi(m, n)) < 1e-14);
      CHECK(std::abs(chi.chi(n, m)) < 1e-14);
    }
}

TEST_CASE("reconstruction matches chi_from_kraus for amplitude damping") {
  for (double gamma : {0.0, 0.35, 0.8, 1.0}) {
    const auto kraus = relaxation_kraus(gamma);
    const auto direct = chi_from_kraus(kraus);
    const auto fitted = reconstruct_chi(kraus_channel(kraus));
    CHECK((direct.chi - fitted.chi).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(completeness_residual(fitted.chi, process_basis()) < 1e-12);
  }
}

TEST_CASE("basis change to plain paulis is the diagonal phase twist") {
  const auto kraus = relaxation_kraus(0.6);
  const auto chi_proc = reconstruct_chi(kraus_channel(kraus)).chi;
  const auto chi_pauli =
      reconstruct_chi_in_basis(kraus_channel(kraus), pauli_basis());
  Eigen::Matrix4cd d = Eigen::Matrix4cd::Identity();
  d(2, 2) = Complex{0.0, 1.0};
  CHECK((chi_pauli - d * chi_proc * d.adjoint()).cwiseAbs().maxCoeff() <
        1e-10);
  CHECK(completeness_residual(chi_pauli, pauli_basis()) < 1e-10);
}

TEST_CASE("process fidelity separates and normalizes") {
  const auto id = reconstruct_chi(unitary_channel(Eigen::Matrix2cd::Identity()));
  const auto flip = reconstruct_chi(unitary_channel(pauli_matrix(PauliAxis::X)));
  CHECK(process_fidelity(id, id) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(process_fidelity(flip, flip) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(process_fidelity(id, flip) == doctest::Approx(0.0));
  // fidelity against a partially relaxing channel sits strictly between
  const auto part = chi_from_kraus(relaxation_kraus(0.5));
  const double f = process_fidelity(part, chi_from_kraus(relaxation_kraus(1.0)));
  CHECK(f > 0.5);
  CHECK(f < 1.0);
}

TEST_CASE("validate rejects broken process matrices") {
  ProcessMatrix bad;
  bad.chi(0, 0) = 2.0;  // breaks completeness
  CHECK_THROWS_AS(bad.validate(), std::exception);
  ProcessMatrix neg;
  neg.chi(0, 0) = 1.5;
  neg.chi(3, 3) = -0.5;  // indefinite
  CHECK_THROWS_AS(neg.validate(), std::exception);
}

TEST_CASE("reconstruction rejects a non linear map") {
  // stretches the Bloch vector to unit length: identity on the pure
  // probes, not linear on mixed states
  Channel sharpen = [](const DensityMatrix& rho) {
    Eigen::Vector3d r;
    for (int k = 0; k < 3; ++k)
      r(k) = (rho.mat * pauli_matrix(static_cast<PauliAxis>(k)))
                 .trace()
                 .real();
    if (r.norm() > 1e-12) r /= r.norm();
    Eigen::Matrix2cd out = 0.5 * Eigen::Matrix2cd::Identity();
    for (int k = 0; k < 3; ++k)
      out += 0.5 * r(k) * pauli_matrix(static_cast<PauliAxis>(k));
    return DensityMatrix{1, out};
  };
  CHECK_THROWS_AS(reconstruct_chi(sharpen), std::exception);
}

TEST_CASE("engineered relaxation channel is trace preserving and partial") {
  ChainTopology topo{1};
  const auto couplings = CouplingConstants::from_effective(550.0, 0.0);
  const auto channel = engineered_relaxation_channel(
      topo, couplings, 2e-6, 0.0, 120, SiteState::Ground,
      SpinConvention::SpinHalf, EvolveMethod::Dense);
  const auto chi = reconstruct_chi(channel);
  chi.validate();
  // neither the identity nor complete relaxation at this short window
  const auto id = reconstruct_chi(unitary_channel(Eigen::Matrix2cd::Identity()));
  const auto full = chi_from_kraus(relaxation_kraus(1.0));
  const double f_id = process_fidelity(chi, id);
  const double f_full = process_fidelity(chi, full);
  CHECK(f_id < 0.999);
  CHECK(f_full < 0.999);
  CHECK(f_full > 0.1);
  // excited input sheds population toward the ground-state bath
  Eigen::Matrix2cd excited = Eigen::Matrix2cd::Zero();
  excited(1, 1) = 1.0;
  const auto out = channel(DensityMatrix{1, excited});
  CHECK(out.mat(0, 0).real() > 0.05);
  CHECK(out.mat(1, 1).real() < 0.95);
}
