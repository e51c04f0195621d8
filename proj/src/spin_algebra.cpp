#include "spinforge/spin_algebra.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spinforge {

double spin_factor(SpinConvention conv) {
  return conv == SpinConvention::SpinHalf ? 0.5 : 1.0;
}

int PauliString::max_site() const {
  return factors.empty() ? -1 : factors.rbegin()->first;
}

PauliString spin_op(PauliAxis axis, int site, SpinConvention conv) {
  if (site < 0) throw std::invalid_argument("spin_op: negative site");
  return PauliString(Complex{spin_factor(conv), 0.0}, {{site, axis}});
}

PauliString spin_op2(PauliAxis a, int site_a, PauliAxis b, int site_b,
                     SpinConvention conv) {
  if (site_a < 0 || site_b < 0 || site_a == site_b)
    throw std::invalid_argument("spin_op2: sites must be distinct and >= 0");
  double f = spin_factor(conv);
  return PauliString(Complex{f * f, 0.0}, {{site_a, a}, {site_b, b}});
}

void OperatorSum::add(PauliString term) {
  if (term.max_site() >= n_sites)
    throw std::invalid_argument("OperatorSum::add: site index " +
                                std::to_string(term.max_site()) +
                                " out of range for " +
                                std::to_string(n_sites) + " sites");
  terms.push_back(std::move(term));
}

OperatorSum& OperatorSum::operator+=(const OperatorSum& other) {
  if (other.n_sites != n_sites)
    throw std::invalid_argument("OperatorSum::operator+=: size mismatch");
  terms.insert(terms.end(), other.terms.begin(), other.terms.end());
  return *this;
}

OperatorSum OperatorSum::scaled(Complex c) const {
  OperatorSum out(n_sites);
  out.terms = terms;
  for (PauliString& t : out.terms) t.coefficient *= c;
  return out;
}

OperatorSum OperatorSum::simplified() const {
  std::map<std::map<int, PauliAxis>, Complex> merged;
  for (const PauliString& t : terms) merged[t.factors] += t.coefficient;
  OperatorSum out(n_sites);
  for (auto& [factors, c] : merged) {
    if (c.real() == 0.0 && c.imag() == 0.0) continue;
    out.terms.emplace_back(c, factors);
  }
  return out;
}

bool OperatorSum::is_hermitian(double tol) const {
  for (const PauliString& t : simplified().terms) {
    if (std::abs(t.coefficient.imag()) >
        tol * std::max(1.0, std::abs(t.coefficient)))
      return false;
  }
  return true;
}

double OperatorSum::one_norm() const {
  double s = 0.0;
  for (const PauliString& t : terms) s += std::abs(t.coefficient);
  return s;
}

StateVector StateVector::computational_basis(int n_sites, Index bits) {
  StateVector psi(n_sites);
  if (bits >= psi.dim())
    throw std::invalid_argument("computational_basis: bits out of range");
  psi.amp[bits] = Complex{1.0, 0.0};
  return psi;
}

double StateVector::norm() const {
  double s = deterministic_sum_real(
      static_cast<std::int64_t>(dim()),
      [&](std::int64_t i) { return std::norm(amp[static_cast<Index>(i)]); });
  return std::sqrt(s);
}

void StateVector::normalize() {
  double n = norm();
  if (n == 0.0) throw std::runtime_error("StateVector::normalize: zero norm");
  const double inv = 1.0 / n;
  const std::int64_t d = static_cast<std::int64_t>(dim());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < d; ++i) amp[static_cast<Index>(i)] *= inv;
}

void DensityMatrix::validate(double tol) const {
  const auto d = Index{1} << n_sites;
  if (mat.rows() != static_cast<Eigen::Index>(d) ||
      mat.cols() != static_cast<Eigen::Index>(d))
    throw std::runtime_error("DensityMatrix: dimension mismatch");
  double scale = std::max(1.0, mat.cwiseAbs().maxCoeff());
  if ((mat - mat.adjoint()).cwiseAbs().maxCoeff() > tol * scale)
    throw std::runtime_error("DensityMatrix: not Hermitian");
  if (std::abs(mat.trace() - Complex{1.0, 0.0}) > tol)
    throw std::runtime_error("DensityMatrix: trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat,
                                                     Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol)
    throw std::runtime_error("DensityMatrix: negative eigenvalue");
}

namespace {

struct CompiledTerm {
  Index xmask = 0;   // sites with X or Y: source index is i ^ xmask
  Index yzmask = 0;  // sites with Y or Z: sign from source-bit parity
  Complex c;         // coefficient times i^(number of Y factors)
};

std::vector<CompiledTerm> compile(const OperatorSum& op) {
  static const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::vector<CompiledTerm> out;
  out.reserve(op.terms.size());
  for (const PauliString& t : op.terms) {
    CompiledTerm ct;
    int n_y = 0;
    for (auto [site, axis] : t.factors) {
      const Index bit = Index{1} << site;
      switch (axis) {
        case PauliAxis::X: ct.xmask |= bit; break;
        case PauliAxis::Y: ct.xmask |= bit; ct.yzmask |= bit; ++n_y; break;
        case PauliAxis::Z: ct.yzmask |= bit; break;
      }
    }
    ct.c = t.coefficient * kIPow[n_y & 3];
    out.push_back(ct);
  }
  return out;
}

}  // namespace

void apply_operator_accumulate(const OperatorSum& op, const Complex* x,
                               Complex* y, Index dim) {
  if (dim != op.dim())
    throw std::invalid_argument("apply_operator_accumulate: dimension mismatch");
  const std::int64_t d = static_cast<std::int64_t>(dim);
  for (const CompiledTerm& t : compile(op)) {
    const Index xmask = t.xmask;
    const Index yzmask = t.yzmask;
    const Complex c = t.c;
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < d; ++i) {
      const Index j = static_cast<Index>(i) ^ xmask;
      const Complex v = c * x[j];
      y[i] += (std::popcount(j & yzmask) & 1) ? -v : v;
    }
  }
}

StateVector apply_operator(const OperatorSum& op, const StateVector& psi) {
  if (op.n_sites != psi.n_sites)
    throw std::invalid_argument("apply_operator: dimension mismatch");
  StateVector out(psi.n_sites);
  apply_operator_accumulate(op, psi.amp.data(), out.amp.data(), psi.dim());
  return out;
}

double expectation(const StateVector& psi, const OperatorSum& op,
                   double imag_tol) {
  if (op.n_sites != psi.n_sites)
    throw std::invalid_argument("expectation: dimension mismatch");
  if (!op.is_hermitian(1e-12))
    throw std::invalid_argument("expectation: operator is not Hermitian");
  const Complex* x = psi.amp.data();
  Complex acc{0.0, 0.0};
  for (const CompiledTerm& t : compile(op)) {
    const Index xmask = t.xmask;
    const Index yzmask = t.yzmask;
    const Complex c = t.c;
    acc += deterministic_sum(
        static_cast<std::int64_t>(psi.dim()), [&](std::int64_t i) {
          const Index j = static_cast<Index>(i) ^ xmask;
          const Complex v = c * x[j];
          return std::conj(x[i]) *
                 ((std::popcount(j & yzmask) & 1) ? -v : v);
        });
  }
  if (std::abs(acc.imag()) > imag_tol)
    throw std::runtime_error("expectation: imaginary residue above tolerance");
  return acc.real();
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.n_sites != b.n_sites)
    throw std::invalid_argument("inner_product: dimension mismatch");
  const Complex* pa = a.amp.data();
  const Complex* pb = b.amp.data();
  return deterministic_sum(
      static_cast<std::int64_t>(a.dim()),
      [&](std::int64_t i) { return std::conj(pa[i]) * pb[i]; });
}

namespace {

std::vector<Index> keep_scatter_table(const std::vector<int>& keep,
                                      int n_sites) {
  if (keep.empty() || keep.size() > 3)
    throw std::invalid_argument("partial_trace: keep 1 to 3 sites");
  Index seen = 0;
  for (int s : keep) {
    if (s < 0 || s >= n_sites)
      throw std::invalid_argument("partial_trace: kept site out of range");
    const Index bit = Index{1} << s;
    if (seen & bit)
      throw std::invalid_argument("partial_trace: duplicate kept site");
    seen |= bit;
  }
  const Index k_dim = Index{1} << keep.size();
  std::vector<Index> scatter(k_dim, 0);
  for (Index r = 0; r < k_dim; ++r)
    for (std::size_t b = 0; b < keep.size(); ++b)
      if (r & (Index{1} << b)) scatter[r] |= Index{1} << keep[b];
  return scatter;
}

}  // namespace

DensityMatrix partial_trace(const StateVector& psi,
                            const std::vector<int>& keep) {
  const auto scatter = keep_scatter_table(keep, psi.n_sites);
  const Index k_dim = Index{1} << keep.size();
  Index keep_mask = 0;
  for (int s : keep) keep_mask |= Index{1} << s;

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(k_dim, k_dim);
  std::vector<Complex> v(k_dim);
  for (Index e = 0; e < psi.dim(); ++e) {
    if (e & keep_mask) continue;
    for (Index r = 0; r < k_dim; ++r) v[r] = psi.amp[e | scatter[r]];
    for (Index r = 0; r < k_dim; ++r)
      for (Index c = 0; c < k_dim; ++c) rho(r, c) += v[r] * std::conj(v[c]);
  }
  return DensityMatrix{static_cast<int>(keep.size()), std::move(rho)};
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep) {
  const auto scatter = keep_scatter_table(keep, rho.n_sites);
  const Index k_dim = Index{1} << keep.size();
  Index keep_mask = 0;
  for (int s : keep) keep_mask |= Index{1} << s;

  const Index dim = Index{1} << rho.n_sites;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(k_dim, k_dim);
  for (Index e = 0; e < dim; ++e) {
    if (e & keep_mask) continue;
    for (Index r = 0; r < k_dim; ++r)
      for (Index c = 0; c < k_dim; ++c)
        out(r, c) += rho.mat(e | scatter[r], e | scatter[c]);
  }
  return DensityMatrix{static_cast<int>(keep.size()), std::move(out)};
}

void apply_single_qubit(StateVector& psi, int site,
                        const Eigen::Matrix2cd& u) {
  if (site < 0 || site >= psi.n_sites)
    throw std::invalid_argument("apply_single_qubit: site out of range");
  const Index bit = Index{1} << site;
  const Complex u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
  Complex* a = psi.amp.data();
  const std::int64_t d = static_cast<std::int64_t>(psi.dim());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < d; ++i) {
    if (static_cast<Index>(i) & bit) continue;
    const Complex lo = a[i];
    const Complex hi = a[i | bit];
    a[i] = u00 * lo + u01 * hi;
    a[i | bit] = u10 * lo + u11 * hi;
  }
}

Eigen::Matrix2cd pauli_matrix(PauliAxis a) {
  Eigen::Matrix2cd m;
  switch (a) {
    case PauliAxis::X: m << 0, 1, 1, 0; break;
    case PauliAxis::Y: m << Complex{0, 0}, Complex{0, -1}, Complex{0, 1},
                            Complex{0, 0}; break;
    case PauliAxis::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

Eigen::MatrixXcd to_dense(const OperatorSum& op) {
  if (op.n_sites > 13)
    throw std::invalid_argument("to_dense: more than 13 sites");
  const Index dim = op.dim();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  static const Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (const PauliString& t : op.terms) {
    Index xmask = 0, yzmask = 0;
    int n_y = 0;
    for (auto [site, axis] : t.factors) {
      const Index bit = Index{1} << site;
      if (axis != PauliAxis::Z) xmask |= bit;
      if (axis != PauliAxis::X) yzmask |= bit;
      if (axis == PauliAxis::Y) ++n_y;
    }
    const Complex c = t.coefficient * kIPow[n_y & 3];
    for (Index j = 0; j < dim; ++j) {
      const Index i = j ^ xmask;
      m(i, j) += (std::popcount(j & yzmask) & 1) ? -c : c;
    }
  }
  return m;
}

}  // namespace spinforge
