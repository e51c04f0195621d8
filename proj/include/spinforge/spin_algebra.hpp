#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "spinforge/threading.hpp"

namespace spinforge {

using Index = std::uint64_t;

// Whether site operators are sigma/2 (SpinHalf) or bare sigma (Pauli).
// In SpinHalf mode exp(-i*theta*S_a) rotates the Bloch vector by theta.
enum class SpinConvention { SpinHalf, Pauli };

// Magnitude of a single site operator relative to the Pauli matrix.
double spin_factor(SpinConvention conv);

enum class PauliAxis : std::uint8_t { X = 0, Y = 1, Z = 2 };

// One tensor-product term: coefficient times Pauli factors on listed sites,
// identity elsewhere. Coefficients of Hamiltonian terms are in rad/s.
struct PauliString {
  Complex coefficient{1.0, 0.0};
  std::map<int, PauliAxis> factors;

  PauliString() = default;
  PauliString(Complex c, std::map<int, PauliAxis> f)
      : coefficient(c), factors(std::move(f)) {}

  int max_site() const;
  bool is_identity() const { return factors.empty(); }
};

// Single site operator S_a = spin_factor * sigma_a.
PauliString spin_op(PauliAxis axis, int site, SpinConvention conv);
// Two-site product S_a(i) S_b(j); carries spin_factor^2.
PauliString spin_op2(PauliAxis a, int site_a, PauliAxis b, int site_b,
                     SpinConvention conv);

// Weighted sum of PauliStrings over a fixed number of sites.
struct OperatorSum {
  int n_sites = 0;
  std::vector<PauliString> terms;

  OperatorSum() = default;
  explicit OperatorSum(int n) : n_sites(n) {}

  void add(PauliString term);
  OperatorSum& operator+=(const OperatorSum& other);
  OperatorSum scaled(Complex c) const;

  // Merges terms with identical factor maps and drops exact zeros.
  OperatorSum simplified() const;

  // Pauli strings are Hermitian and linearly independent, so after merging
  // the operator is Hermitian iff every coefficient is real.
  bool is_hermitian(double tol = 0.0) const;

  // Sum of |coefficient|: an upper bound on the spectral norm.
  double one_norm() const;

  Index dim() const { return Index{1} << n_sites; }
};

// Pure state over 2^n basis states. Bit k of an index is the state of site
// k; |0> is the sigma_z = +1 eigenstate.
struct StateVector {
  int n_sites = 0;
  std::vector<Complex> amp;

  StateVector() = default;
  explicit StateVector(int n)
      : n_sites(n), amp(Index{1} << n, Complex{0.0, 0.0}) {}

  static StateVector computational_basis(int n_sites, Index bits);

  Index dim() const { return Index{1} << n_sites; }
  double norm() const;
  void normalize();
};

// Dense mixed state on a small number of sites (1-3 for reduced states).
struct DensityMatrix {
  int n_sites = 0;
  Eigen::MatrixXcd mat;

  // Hermitian, unit trace, eigenvalues >= -tol.
  void validate(double tol = 1e-10) const;
};

// op |psi>, matrix-free. Never materializes the 2^n x 2^n matrix.
StateVector apply_operator(const OperatorSum& op, const StateVector& psi);

// y += op x over raw amplitude arrays of length dim (dim = 2^op.n_sites).
void apply_operator_accumulate(const OperatorSum& op, const Complex* x,
                               Complex* y, Index dim);

// <psi| op |psi> for Hermitian op; asserts the imaginary residue is below
// tol before discarding it.
double expectation(const StateVector& psi, const OperatorSum& op,
                   double imag_tol = 1e-10);

Complex inner_product(const StateVector& a, const StateVector& b);

// Reduced density matrix on the kept sites (1 to 3 of them). Kept sites map
// to the output index in the order given: keep[0] is bit 0.
DensityMatrix partial_trace(const StateVector& psi,
                            const std::vector<int>& keep);
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep);

// In-place action of a 2x2 matrix on one site.
void apply_single_qubit(StateVector& psi, int site,
                        const Eigen::Matrix2cd& u);

// Dense construction, for oracle checks and small-system eigensolves.
Eigen::Matrix2cd pauli_matrix(PauliAxis a);
Eigen::MatrixXcd to_dense(const OperatorSum& op);

}  // namespace spinforge
