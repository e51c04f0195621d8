#include "spinforge/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinforge {

namespace {

// exp(-i T dt) e1 for a real symmetric tridiagonal T.
Eigen::VectorXcd expm_tridiag_e1(const std::vector<double>& alpha,
                                 const std::vector<double>& beta, double dt) {
  const int m = static_cast<int>(alpha.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) t(i, i) = alpha[i];
  for (int i = 0; i + 1 < m; ++i) {
    t(i, i + 1) = beta[i];
    t(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  Eigen::VectorXcd phases(m);
  for (int k = 0; k < m; ++k)
    phases(k) = std::exp(Complex{0.0, -es.eigenvalues()(k) * dt}) *
                es.eigenvectors()(0, k);
  return es.eigenvectors() * phases;
}

void check_and_renormalize(StateVector& psi) {
  const double n = psi.norm();
  if (std::abs(n - 1.0) > 1e-10)
    throw std::runtime_error("Propagator: evolution step lost unitarity");
  const double inv = 1.0 / n;
  const std::int64_t d = static_cast<std::int64_t>(psi.dim());
  Complex* a = psi.amp.data();
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < d; ++i) a[i] *= inv;
}

}  // namespace

Propagator::Propagator(OperatorSum h, EvolveMethod method, KrylovOptions opts)
    : h_(std::move(h)), method_(method), opts_(opts) {
  if (!h_.is_hermitian(1e-12))
    throw std::invalid_argument("Propagator: Hamiltonian is not Hermitian");
  h_norm_ = h_.one_norm();
  if (method_ == EvolveMethod::Auto)
    method_ = h_.n_sites <= 12 ? EvolveMethod::Dense : EvolveMethod::Krylov;
  const std::size_t per_vector = h_.dim() * sizeof(Complex);
  const std::size_t by_memory =
      std::max<std::size_t>(5, opts_.memory_budget_bytes / per_vector);
  m_cap_ = static_cast<int>(std::min<std::size_t>(
      {static_cast<std::size_t>(opts_.m_max), by_memory, h_.dim()}));
}

void Propagator::apply(StateVector& psi, double t) const {
  if (psi.n_sites != h_.n_sites)
    throw std::invalid_argument("Propagator::apply: dimension mismatch");
  if (t == 0.0 || h_norm_ == 0.0) return;
  switch (method_) {
    case EvolveMethod::Dense:
      if (h_.dim() <= kDenseEigMaxDim)
        apply_dense(psi, t);
      else
        apply_taylor(psi, t);
      break;
    case EvolveMethod::Krylov:
      apply_krylov(psi, t);
      break;
    case EvolveMethod::Auto:
      throw std::logic_error("Propagator: unresolved method");
  }
  check_and_renormalize(psi);
}

void Propagator::apply_dense(StateVector& psi, double t) const {
  if (!eig_) {
    eig_.emplace(to_dense(h_));
    if (eig_->info() != Eigen::Success)
      throw std::runtime_error("Propagator: eigendecomposition failed");
  }
  Eigen::Map<Eigen::VectorXcd> v(psi.amp.data(),
                                 static_cast<Eigen::Index>(psi.dim()));
  Eigen::VectorXcd w = eig_->eigenvectors().adjoint() * v;
  for (Eigen::Index k = 0; k < w.size(); ++k)
    w(k) *= std::exp(Complex{0.0, -eig_->eigenvalues()(k) * t});
  v = eig_->eigenvectors() * w;
}

void Propagator::apply_taylor(StateVector& psi, double t) const {
  if (!dense_) dense_.emplace(to_dense(h_));
  const int n_sub = std::max(1, static_cast<int>(
                                    std::ceil(std::abs(t) * h_norm_ / 0.5)));
  const double dt = t / n_sub;
  Eigen::Map<Eigen::VectorXcd> v(psi.amp.data(),
                                 static_cast<Eigen::Index>(psi.dim()));
  Eigen::VectorXcd term(v.size()), acc(v.size()), tmp(v.size());
  for (int s = 0; s < n_sub; ++s) {
    term = v;
    acc = v;
    for (int k = 1; k <= 60; ++k) {
      tmp.noalias() = *dense_ * term;
      term = (Complex{0.0, -dt} / static_cast<double>(k)) * tmp;
      acc += term;
      if (term.norm() < 1e-16 * acc.norm()) break;
    }
    v = acc;
  }
}

void Propagator::apply_krylov(StateVector& psi, double t) const {
  const double sign = t < 0.0 ? -1.0 : 1.0;
  double remaining = std::abs(t);
  double dt_target = std::min(remaining, opts_.theta / h_norm_);
  int shrinks = 0;
  while (remaining > 0.0) {
    const double dt = std::min(remaining, dt_target);
    if (lanczos_step(psi, sign * dt)) {
      remaining -= dt;
    } else {
      dt_target *= 0.5;
      if (++shrinks > 60)
        throw std::runtime_error("Propagator: Krylov step failed to converge");
    }
  }
}

bool Propagator::lanczos_step(StateVector& psi, double dt) const {
  const Index dim = psi.dim();
  const std::int64_t d = static_cast<std::int64_t>(dim);
  const double breakdown = 1e-14 * std::max(1.0, h_norm_);

  if (basis_.empty()) basis_.emplace_back(dim);
  if (work_.size() != dim) work_.assign(dim, Complex{0.0, 0.0});
  std::copy(psi.amp.begin(), psi.amp.end(), basis_[0].begin());

  std::vector<double> alpha, beta;
  Eigen::VectorXcd u;
  int m_used = 0;
  double prev_err = 1.0;

  for (int j = 0; j < m_cap_; ++j) {
    Complex* w = work_.data();
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < d; ++i) w[i] = Complex{0.0, 0.0};
    apply_operator_accumulate(h_, basis_[j].data(), w, dim);

    const Complex* vj = basis_[j].data();
    alpha.push_back(deterministic_sum(d, [&](std::int64_t i) {
                      return std::conj(vj[i]) * w[i];
                    }).real());
    {
      const double aj = alpha[j];
      const double bj1 = j > 0 ? beta[j - 1] : 0.0;
      const Complex* vk = j > 0 ? basis_[j - 1].data() : nullptr;
#pragma omp parallel for schedule(static)
      for (std::int64_t i = 0; i < d; ++i) {
        w[i] -= aj * vj[i];
        if (vk != nullptr) w[i] -= bj1 * vk[i];
      }
    }
    for (int k = 0; k <= j; ++k) {
      const Complex* vk = basis_[k].data();
      const Complex c =
          deterministic_sum(d, [&](std::int64_t i) {
            return std::conj(vk[i]) * w[i];
          });
#pragma omp parallel for schedule(static)
      for (std::int64_t i = 0; i < d; ++i) w[i] -= c * vk[i];
    }
    const double bj = std::sqrt(deterministic_sum_real(
        d, [&](std::int64_t i) { return std::norm(w[i]); }));
    beta.push_back(bj);

    u = expm_tridiag_e1(alpha, beta, dt);
    const double err = std::abs(bj * dt * u(j));
    const bool happy = bj <= breakdown;
    if (happy || (err <= opts_.tol && prev_err <= opts_.tol)) {
      m_used = j + 1;
      break;
    }
    prev_err = err;
    if (j + 1 == m_cap_) return false;

    if (static_cast<int>(basis_.size()) < j + 2)
      basis_.emplace_back(dim);
    Complex* vnext = basis_[j + 1].data();
    const double inv = 1.0 / bj;
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < d; ++i) vnext[i] = w[i] * inv;
  }
  if (m_used == 0) return false;

  Complex* out = psi.amp.data();
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < d; ++i) {
    Complex s{0.0, 0.0};
    for (int k = 0; k < m_used; ++k) s += u(k) * basis_[k][i];
    out[i] = s;
  }
  return true;
}

StateVector evolve(const StateVector& psi, const OperatorSum& h, double t,
                   EvolveMethod method) {
  StateVector out = psi;
  Propagator(h, method).apply(out, t);
  return out;
}

}  // namespace spinforge
