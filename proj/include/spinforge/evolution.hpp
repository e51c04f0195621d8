#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "spinforge/spin_algebra.hpp"

namespace spinforge {

// Auto picks a dense eigendecomposition up to 12 sites and a Krylov
// (Lanczos) action above. Dense can be forced at larger sizes; past the
// eigendecomposition limit it falls back to a materialized-matrix Taylor
// action, which stays independent of the Krylov code path.
enum class EvolveMethod { Auto, Dense, Krylov };

struct KrylovOptions {
  double tol = 1e-12;      // subspace-leak tolerance per inner step
  int m_max = 40;          // subspace dimension cap
  double theta = 2.0;      // target ||H|| * dt per inner step, rad
  std::size_t memory_budget_bytes = std::size_t{3} << 30;
};

// Action of exp(-i H t) on a state. H coefficients are angular frequencies,
// so hbar never enters. Caches (eigendecomposition, dense matrix, Krylov
// workspace) make apply non-reentrant: share across time steps, not threads.
class Propagator {
 public:
  explicit Propagator(OperatorSum h, EvolveMethod method = EvolveMethod::Auto,
                      KrylovOptions opts = KrylovOptions{});

  // psi <- exp(-i H t) psi. Checks |norm - 1| < 1e-10 afterwards, then
  // renormalizes.
  void apply(StateVector& psi, double t) const;

  EvolveMethod resolved_method() const { return method_; }
  const OperatorSum& hamiltonian() const { return h_; }

 private:
  void apply_dense(StateVector& psi, double t) const;
  void apply_taylor(StateVector& psi, double t) const;
  void apply_krylov(StateVector& psi, double t) const;
  // One Lanczos step over exp(-i H dt); false when m_cap was not enough.
  bool lanczos_step(StateVector& psi, double dt) const;

  OperatorSum h_;
  double h_norm_ = 0.0;
  EvolveMethod method_ = EvolveMethod::Auto;
  KrylovOptions opts_;
  int m_cap_ = 0;

  static constexpr Index kDenseEigMaxDim = 4096;

  mutable std::optional<Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>> eig_;
  mutable std::optional<Eigen::MatrixXcd> dense_;
  mutable std::vector<std::vector<Complex>> basis_;
  mutable std::vector<Complex> work_;
};

StateVector evolve(const StateVector& psi, const OperatorSum& h, double t,
                   EvolveMethod method = EvolveMethod::Auto);

}  // namespace spinforge
