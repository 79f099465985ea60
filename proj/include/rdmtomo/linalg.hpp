#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdmtomo {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

[[noreturn]] inline void fail_arg(const std::string& msg) {
  throw std::invalid_argument(msg);
}

bool is_hermitian(const Matrix& m, double tol = kHermitianTol);

/// Normalized pure state. Qubit 0 is the most significant bit of the
/// computational basis index, so |q0 q1 ... q_{n-1}> maps to the integer
/// written in the same order.
struct Ket {
  int num_qubits = 0;
  Vector amps;

  Ket(int n, Vector a);
  int dim() const { return 1 << num_qubits; }
};

/// Hermitian unit-trace operator on n qubits. Positivity is checked
/// separately (validate_psd) so noise-perturbed marginals stay representable.
struct DensityMatrix {
  int num_qubits = 0;
  Matrix mat;

  DensityMatrix(int n, Matrix m);
  static DensityMatrix from_ket(const Ket& k);
  int dim() const { return 1 << num_qubits; }
  void validate_psd(double tol = kPsdTol) const;
};

/// Real coefficients of the Pauli-string expansion, indexed base-4 with the
/// digit for qubit 0 most significant (0=I, 1=X, 2=Y, 3=Z). Normalization:
/// coeffs[i] = Tr(rho B_i) / 2^n, so pauli_assemble sums coeffs[i] * B_i
/// including the identity term.
struct PauliCoefficients {
  int num_qubits = 0;
  RealVector coeffs;
};

struct EigResult {
  RealVector eigenvalues;  // descending
  Matrix eigenvectors;     // orthonormal columns, same order
};

enum class Subsystem { First, Second };

/// Reduced state on the kept qubits, in the order given.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

Matrix partial_transpose(const DensityMatrix& rho2, Subsystem subsystem);

/// Cyclic complex Jacobi eigensolver for Hermitian matrices of dimension
/// <= 32. Off-diagonal Frobenius norm driven below 1e-13 (relative to the
/// input scale), at most 100 sweeps.
EigResult hermitian_eig(const Matrix& m);

/// |Tr(rho sigma)| / (sqrt(Tr rho^2) sqrt(Tr sigma^2)).
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

PauliCoefficients pauli_expand(const DensityMatrix& rho);
/// Same expansion for any Hermitian operator (not necessarily unit trace).
PauliCoefficients pauli_expand_matrix(int n, const Matrix& m);
Matrix pauli_assemble(const PauliCoefficients& pc);

/// Projector onto the n-qubit symmetric (bosonic) subspace; rank n+1.
Matrix symmetric_projector(int n);

/// Permutation unitary exchanging qubits i and j.
Matrix swap_matrix(int n, int i, int j);

Matrix kron(const Matrix& a, const Matrix& b);

double purity(const DensityMatrix& rho);

/// Von Neumann entropy in bits.
double entropy_bits(const DensityMatrix& rho);

// Sparse Pauli-string machinery. A string index encodes one tensor product
// of {I,X,Y,Z}; strings act on basis states as B|b> = phase(b) |b ^ flip>.
int pauli_flip_mask(int n, long string_index);
Complex pauli_phase(int n, long string_index, int basis);
Matrix pauli_string_matrix(int n, long string_index);
int pauli_weight(int n, long string_index);
std::vector<long> pauli_strings_up_to_weight(int n, int max_weight);

}  // namespace rdmtomo
