#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "rdmtomo/linalg.hpp"
#include "rdmtomo/states.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace rdmtomo;
using oracles::max_abs_diff;

namespace {

DensityMatrix basis_state_4q(int idx) {
  Vector v = Vector::Zero(16);
  v(idx) = 1.0;
  return DensityMatrix::from_ket(Ket(4, v));
}

}  // namespace

TEST_CASE("partial_trace: product state reduces to the kept factors") {
  const DensityMatrix rho = basis_state_4q(0);  // |0000>
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      const DensityMatrix reduced = partial_trace(rho, {i, j});
      Matrix expected = Matrix::Zero(4, 4);
      expected(0, 0) = 1.0;
      CHECK(max_abs_diff(reduced.mat, expected) <= 1e-14);
    }
}

TEST_CASE("partial_trace: GHZ-type marginals are the two-point mixture") {
  const double alpha = 0.6, beta = 0.8;
  Vector v = Vector::Zero(16);
  v(0) = alpha;
  v(15) = beta;
  const DensityMatrix rho = DensityMatrix::from_ket(Ket(4, v));
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = alpha * alpha;
  expected(3, 3) = beta * beta;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      CHECK(max_abs_diff(partial_trace(rho, {i, j}).mat, expected) <= 1e-14);
}

TEST_CASE("partial_trace: agrees with the Kronecker-product oracle") {
  oracles::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix rho = oracles::random_density(16, rng);
    const DensityMatrix dm(4, rho);
    // random ordered pair, order matters
    int i = rng.index(4), j = rng.index(4);
    if (i == j) j = (j + 1) % 4;
    const Matrix expected = oracles::partial_trace_bruteforce(rho, 4, {i, j});
    CHECK(max_abs_diff(partial_trace(dm, {i, j}).mat, expected) <= 1e-12);
  }
}

TEST_CASE("partial_trace: single-qubit marginals and trace preservation") {
  oracles::Rng rng(12);
  const Matrix rho = oracles::random_density(16, rng);
  const DensityMatrix dm(4, rho);
  for (int q = 0; q < 4; ++q) {
    const DensityMatrix reduced = partial_trace(dm, {q});
    CHECK(std::abs(reduced.mat.trace().real() - 1.0) <= 1e-12);
    CHECK(max_abs_diff(reduced.mat, oracles::partial_trace_bruteforce(rho, 4, {q})) <=
          1e-12);
  }
}

TEST_CASE("partial_trace: linearity on random inputs") {
  oracles::Rng rng(13);
  const Matrix rho = oracles::random_density(16, rng);
  const Matrix sigma = oracles::random_density(16, rng);
  const double a = 0.3, b = 0.7;
  const Matrix mix = a * rho + b * sigma;
  const Matrix lhs = oracles::partial_trace_bruteforce(mix, 4, {1, 3});
  const Matrix rhs = a * partial_trace(DensityMatrix(4, rho), {1, 3}).mat +
                     b * partial_trace(DensityMatrix(4, sigma), {1, 3}).mat;
  CHECK(max_abs_diff(lhs, rhs) <= 1e-12);
}

TEST_CASE("partial_trace: rejects bad keep lists") {
  const DensityMatrix rho = basis_state_4q(0);
  CHECK_THROWS_AS(partial_trace(rho, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(rho, {0, 4}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(rho, {-1}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(rho, {}), std::invalid_argument);
}

TEST_CASE("partial_transpose: identity is a fixed point") {
  const DensityMatrix rho(2, Matrix::Identity(4, 4) / 4.0);
  CHECK(max_abs_diff(partial_transpose(rho, Subsystem::Second), rho.mat) == 0.0);
  CHECK(max_abs_diff(partial_transpose(rho, Subsystem::First), rho.mat) == 0.0);
}

TEST_CASE("partial_transpose: Bell state witness eigenvalue is -1/2") {
  Vector v = Vector::Zero(4);
  v(0) = 1.0 / std::sqrt(2.0);
  v(3) = 1.0 / std::sqrt(2.0);
  const DensityMatrix bell = DensityMatrix::from_ket(Ket(2, v));
  const Matrix pt = partial_transpose(bell, Subsystem::Second);
  Eigen::SelfAdjointEigenSolver<Matrix> es(pt);  // independent eigensolver
  CHECK(es.eigenvalues().minCoeff() == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("partial_transpose: diagonal GHZ marginal is unchanged and PPT") {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 0.36;
  m(3, 3) = 0.64;
  const DensityMatrix rho(2, m);
  const Matrix pt = partial_transpose(rho, Subsystem::Second);
  CHECK(max_abs_diff(pt, m) == 0.0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(pt);
  CHECK(es.eigenvalues().minCoeff() >= 0.0);
}

TEST_CASE("partial_transpose: preserves Hermiticity and trace, rejects wrong size") {
  oracles::Rng rng(21);
  const Matrix rho = oracles::random_density(4, rng);
  const Matrix pt = partial_transpose(DensityMatrix(2, rho), Subsystem::First);
  CHECK(is_hermitian(pt, 1e-13));
  CHECK(std::abs(pt.trace().real() - 1.0) <= 1e-13);
  CHECK_THROWS_AS(partial_transpose(basis_state_4q(0), Subsystem::First),
                  std::invalid_argument);
}

TEST_CASE("hermitian_eig: identity spectrum") {
  const EigResult eig = hermitian_eig(Matrix::Identity(4, 4));
  for (int i = 0; i < 4; ++i) CHECK(eig.eigenvalues(i) == doctest::Approx(1.0));
}

TEST_CASE("hermitian_eig: closed-form roots of the shared-RDM block pattern") {
  oracles::Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const double a = rng.uniform(), b = rng.uniform();
    const double c = rng.normal() * 0.3, d = rng.uniform() * 0.5;
    const Matrix m = oracles::block_pattern_matrix(a, b, c, d);
    const auto expected = oracles::block_pattern_eigenvalues(a, b, c, d);
    const EigResult eig = hermitian_eig(m);
    for (int i = 0; i < 4; ++i)
      CHECK(eig.eigenvalues(i) == doctest::Approx(expected[i]).epsilon(1e-10));
  }
}

TEST_CASE("hermitian_eig: resynthesis, orthonormality and eigen-equation") {
  oracles::Rng rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix m = oracles::random_hermitian(16, rng);
    const EigResult eig = hermitian_eig(m);

    const Matrix resynth = eig.eigenvectors * eig.eigenvalues.asDiagonal() *
                           eig.eigenvectors.adjoint();
    CHECK(max_abs_diff(resynth, m) <= 1e-10);
    CHECK(max_abs_diff(eig.eigenvectors.adjoint() * eig.eigenvectors,
                       Matrix::Identity(16, 16)) <= 1e-10);
    for (int k = 0; k < 16; ++k) {
      const Vector mv = m * eig.eigenvectors.col(k);
      const Vector lv = eig.eigenvalues(k) * eig.eigenvectors.col(k);
      CHECK((mv - lv).cwiseAbs().maxCoeff() <= 1e-9);
      if (k > 0) CHECK(eig.eigenvalues(k - 1) >= eig.eigenvalues(k));
    }
    CHECK(std::abs(eig.eigenvalues.sum() - m.trace().real()) <= 1e-10);
  }
}

TEST_CASE("hermitian_eig: matches an independent solver on random input") {
  oracles::Rng rng(33);
  const Matrix m = oracles::random_hermitian(16, rng);
  const EigResult eig = hermitian_eig(m);
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  for (int i = 0; i < 16; ++i)
    CHECK(eig.eigenvalues(i) == doctest::Approx(es.eigenvalues()(15 - i)).epsilon(1e-11));
}

TEST_CASE("hermitian_eig: rejects non-Hermitian input") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eig(m), std::invalid_argument);
}

TEST_CASE("fidelity: self-fidelity is 1") {
  oracles::Rng rng(41);
  const DensityMatrix rho(4, oracles::random_density(16, rng));
  CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fidelity: GHZ plus/minus overlap is (alpha^2 - beta^2)^2") {
  for (double alpha = 0.1; alpha < 0.95; alpha += 0.1) {
    const double beta = std::sqrt(1.0 - alpha * alpha);
    const DensityMatrix plus = ghz(GhzParams::make(alpha, beta, GhzSign::Plus));
    const DensityMatrix minus = ghz(GhzParams::make(alpha, beta, GhzSign::Minus));
    const double expected = std::pow(alpha * alpha - beta * beta, 2);
    CHECK(fidelity(plus, minus) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("fidelity: orthogonal pure states score 0") {
  CHECK(fidelity(basis_state_4q(0), basis_state_4q(15)) == doctest::Approx(0.0));
}

TEST_CASE("fidelity: symmetric, and rejects mismatched or degenerate input") {
  oracles::Rng rng(42);
  const DensityMatrix rho(4, oracles::random_density(16, rng));
  const DensityMatrix sigma(4, oracles::random_density(16, rng));
  CHECK(std::abs(fidelity(rho, sigma) - fidelity(sigma, rho)) <= 1e-12);
  const DensityMatrix small(2, oracles::random_density(4, rng));
  CHECK_THROWS_AS(fidelity(rho, small), std::invalid_argument);
}

TEST_CASE("pauli_expand: maximally mixed state has only the identity term") {
  const DensityMatrix rho(4, Matrix::Identity(16, 16) / 16.0);
  const PauliCoefficients pc = pauli_expand(rho);
  CHECK(pc.coeffs(0) == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
  for (long s = 1; s < 256; ++s) CHECK(std::abs(pc.coeffs(s)) <= 1e-14);
}

TEST_CASE("pauli_expand: single-qubit |0><0| has Z coefficient 1/2") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  const PauliCoefficients pc = pauli_expand(DensityMatrix(1, m));
  CHECK(pc.coeffs(0) == doctest::Approx(0.5));   // identity
  CHECK(pc.coeffs(3) == doctest::Approx(0.5));   // Z
  CHECK(std::abs(pc.coeffs(1)) <= 1e-14);        // X
  CHECK(std::abs(pc.coeffs(2)) <= 1e-14);        // Y
}

TEST_CASE("pauli round trip is exact on random states") {
  oracles::Rng rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = (trial % 2 == 0) ? 4 : 2;
    const Matrix rho = oracles::random_density(1 << n, rng);
    const DensityMatrix dm(n, rho);
    const Matrix back = pauli_assemble(pauli_expand(dm));
    CHECK(max_abs_diff(back, rho) <= 1e-12);
    CHECK(is_hermitian(back, 1e-12));
  }
}

TEST_CASE("pauli_string_matrix: agrees with explicit Kronecker products") {
  const Matrix sx = (Matrix(2, 2) << 0, 1, 1, 0).finished();
  const Matrix sy = (Matrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
  const Matrix sz = (Matrix(2, 2) << 1, 0, 0, -1).finished();
  const Matrix id = Matrix::Identity(2, 2);
  const Matrix table[4] = {id, sx, sy, sz};
  oracles::Rng rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    const long s = rng.index(256);
    Matrix expected = Matrix::Identity(1, 1);
    for (int q = 0; q < 4; ++q)
      expected = oracles::kron(expected, table[(s >> (2 * (3 - q))) & 3]);
    CHECK(max_abs_diff(pauli_string_matrix(4, s), expected) == 0.0);
  }
}

TEST_CASE("pauli_strings_up_to_weight: 66 local strings on 4 qubits") {
  CHECK(pauli_strings_up_to_weight(4, 2).size() == 66);
  CHECK(pauli_strings_up_to_weight(2, 2).size() == 15);
}

TEST_CASE("symmetric_projector: two-qubit projector annihilates the singlet") {
  const Matrix p = symmetric_projector(2);
  CHECK(max_abs_diff(p * p, p) <= 1e-12);
  CHECK(is_hermitian(p, 1e-12));
  Vector singlet = Vector::Zero(4);
  singlet(1) = 1.0 / std::sqrt(2.0);
  singlet(2) = -1.0 / std::sqrt(2.0);
  CHECK((p * singlet).cwiseAbs().maxCoeff() <= 1e-14);
  const EigResult eig = hermitian_eig(p);
  int rank = 0;
  for (int i = 0; i < 4; ++i)
    if (eig.eigenvalues(i) > 0.5) ++rank;
  CHECK(rank == 3);
}

TEST_CASE("symmetric_projector: four-qubit projector has rank 5") {
  const Matrix p = symmetric_projector(4);
  CHECK(max_abs_diff(p * p, p) <= 1e-12);
  const EigResult eig = hermitian_eig(p);
  int rank = 0;
  for (int i = 0; i < 16; ++i)
    if (eig.eigenvalues(i) > 0.5) ++rank;
  CHECK(rank == 5);
}

TEST_CASE("symmetric_projector: invariant under every swap") {
  const Matrix p = symmetric_projector(4);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const Matrix s = swap_matrix(4, i, j);
      CHECK(max_abs_diff(p * s, p) <= 1e-12);
      CHECK(max_abs_diff(s * p, p) <= 1e-12);
    }
}

TEST_CASE("Ket and DensityMatrix validate their invariants") {
  Vector bad = Vector::Ones(16);
  CHECK_THROWS_AS(Ket(4, bad), std::invalid_argument);
  Matrix not_herm = Matrix::Zero(4, 4);
  not_herm(0, 1) = 1.0;
  not_herm(0, 0) = 1.0;
  CHECK_THROWS_AS(DensityMatrix(2, not_herm), std::invalid_argument);
  Matrix wrong_trace = Matrix::Identity(4, 4);
  CHECK_THROWS_AS(DensityMatrix(2, wrong_trace), std::invalid_argument);
}

TEST_CASE("entropy_bits: pure states score 0, uniform mixtures score n") {
  CHECK(entropy_bits(basis_state_4q(3)) == doctest::Approx(0.0).epsilon(1e-10));
  const DensityMatrix mixed(4, Matrix::Identity(16, 16) / 16.0);
  CHECK(entropy_bits(mixed) == doctest::Approx(4.0).epsilon(1e-12));
}
