#include "rdmtomo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rdmtomo {

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Ket::Ket(int n, Vector a) : num_qubits(n), amps(std::move(a)) {
  if (n < 1 || n > 16) fail_arg("Ket: unsupported qubit count");
  if (amps.size() != dim()) fail_arg("Ket: amplitude vector has wrong length");
  const double norm2 = amps.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-12) fail_arg("Ket: state is not normalized");
}

DensityMatrix::DensityMatrix(int n, Matrix m) : num_qubits(n), mat(std::move(m)) {
  if (n < 1 || n > 16) fail_arg("DensityMatrix: unsupported qubit count");
  if (mat.rows() != dim() || mat.cols() != dim())
    fail_arg("DensityMatrix: matrix has wrong dimension");
  if (!is_hermitian(mat, kHermitianTol)) fail_arg("DensityMatrix: matrix is not Hermitian");
  if (std::abs(mat.trace().real() - 1.0) > kTraceTol ||
      std::abs(mat.trace().imag()) > kTraceTol)
    fail_arg("DensityMatrix: trace is not 1");
}

DensityMatrix DensityMatrix::from_ket(const Ket& k) {
  Matrix m = k.amps * k.amps.adjoint();
  // Outer products carry O(eps) Hermiticity error only through rounding;
  // symmetrize so downstream 1e-12 gates see an exact ket-bra.
  m = (m + m.adjoint().eval()) / 2.0;
  m /= m.trace().real();
  return DensityMatrix(k.num_qubits, std::move(m));
}

void DensityMatrix::validate_psd(double tol) const {
  const EigResult eig = hermitian_eig(mat);
  if (eig.eigenvalues.minCoeff() < -tol)
    fail_arg("DensityMatrix: matrix is not positive semidefinite");
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  const int n = rho.num_qubits;
  if (keep.empty()) fail_arg("partial_trace: keep list is empty");
  std::vector<bool> seen(n, false);
  for (int q : keep) {
    if (q < 0 || q >= n) fail_arg("partial_trace: qubit index out of range");
    if (seen[q]) fail_arg("partial_trace: duplicate qubit index");
    seen[q] = true;
  }
  const int m = static_cast<int>(keep.size());
  std::vector<int> env;
  for (int q = 0; q < n; ++q)
    if (!seen[q]) env.push_back(q);

  const int rdim = 1 << m;
  const int edim = 1 << (n - m);
  // full_index(r, e): scatter the reduced bits to keep[] positions and the
  // environment bits to the remaining positions; qubit q holds bit (n-1-q).
  auto full_index = [&](int r, int e) {
    int idx = 0;
    for (int t = 0; t < m; ++t)
      idx |= ((r >> (m - 1 - t)) & 1) << (n - 1 - keep[t]);
    for (int s = 0; s < n - m; ++s)
      idx |= ((e >> (n - m - 1 - s)) & 1) << (n - 1 - env[s]);
    return idx;
  };

  Matrix out = Matrix::Zero(rdim, rdim);
  for (int r = 0; r < rdim; ++r)
    for (int c = 0; c < rdim; ++c) {
      Complex sum = 0.0;
      for (int e = 0; e < edim; ++e) sum += rho.mat(full_index(r, e), full_index(c, e));
      out(r, c) = sum;
    }
  return DensityMatrix(m, std::move(out));
}

Matrix partial_transpose(const DensityMatrix& rho2, Subsystem subsystem) {
  if (rho2.num_qubits != 2) fail_arg("partial_transpose: expected a two-qubit state");
  Matrix out(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
          // rows (a,b), cols (c,d); transpose one tensor factor
          if (subsystem == Subsystem::Second)
            out(2 * a + b, 2 * c + d) = rho2.mat(2 * a + d, 2 * c + b);
          else
            out(2 * a + b, 2 * c + d) = rho2.mat(2 * c + b, 2 * a + d);
        }
  return out;
}

EigResult hermitian_eig(const Matrix& m) {
  const Eigen::Index dim = m.rows();
  if (dim != m.cols()) fail_arg("hermitian_eig: matrix is not square");
  if (!is_hermitian(m, 1e-10)) fail_arg("hermitian_eig: matrix is not Hermitian");

  Matrix a = (m + m.adjoint().eval()) / 2.0;  // exact Hermitian working copy
  Matrix v = Matrix::Identity(dim, dim);

  const double scale = std::max(1.0, a.norm());
  const double tol = 1e-13 * scale;

  auto off_norm = [&]() {
    double s = 0.0;
    for (Eigen::Index p = 0; p < dim; ++p)
      for (Eigen::Index q = p + 1; q < dim; ++q) s += 2.0 * std::norm(a(p, q));
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && off_norm() > tol; ++sweep) {
    for (Eigen::Index p = 0; p < dim; ++p) {
      for (Eigen::Index q = p + 1; q < dim; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const Complex phase = apq / mag;  // e^{i phi}

        // Rotation angle from t^2 - 2 tau t - 1 = 0 (stable small root).
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0) ? -1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex spq = s * phase;         // U(p,q) = -s e^{i phi}
        const Complex sqp = s * std::conj(phase);

        // a <- U^dagger a U  with U = [[c, -spq], [sqp, c]] on (p,q)
        for (Eigen::Index i = 0; i < dim; ++i) {
          const Complex aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip + sqp * aiq;
          a(i, q) = -spq * aip + c * aiq;
        }
        for (Eigen::Index i = 0; i < dim; ++i) {
          const Complex api = a(p, i), aqi = a(q, i);
          a(p, i) = c * api + std::conj(sqp) * aqi;
          a(q, i) = -std::conj(spq) * api + c * aqi;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = Complex(a(p, p).real(), 0.0);
        a(q, q) = Complex(a(q, q).real(), 0.0);

        for (Eigen::Index i = 0; i < dim; ++i) {
          const Complex vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip + sqp * viq;
          v(i, q) = -spq * vip + c * viq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() > a(j, j).real(); });

  EigResult result;
  result.eigenvalues.resize(dim);
  result.eigenvectors.resize(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    result.eigenvalues(k) = a(order[k], order[k]).real();
    result.eigenvectors.col(k) = v.col(order[k]);
  }
  return result;
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.num_qubits != sigma.num_qubits) fail_arg("fidelity: dimension mismatch");
  const double pr = purity(rho);
  const double ps = purity(sigma);
  if (pr <= 0.0 || ps <= 0.0) fail_arg("fidelity: zero-purity argument");
  const double overlap = std::abs((rho.mat * sigma.mat).trace());
  return overlap / (std::sqrt(pr) * std::sqrt(ps));
}

int pauli_flip_mask(int n, long string_index) {
  int mask = 0;
  for (int q = 0; q < n; ++q) {
    const int g = static_cast<int>((string_index >> (2 * (n - 1 - q))) & 3);
    if (g == 1 || g == 2) mask |= 1 << (n - 1 - q);
  }
  return mask;
}

Complex pauli_phase(int n, long string_index, int basis) {
  Complex ph = 1.0;
  for (int q = 0; q < n; ++q) {
    const int g = static_cast<int>((string_index >> (2 * (n - 1 - q))) & 3);
    const int bit = (basis >> (n - 1 - q)) & 1;
    if (g == 2) ph *= bit ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
    else if (g == 3 && bit) ph = -ph;
  }
  return ph;
}

Matrix pauli_string_matrix(int n, long string_index) {
  const int d = 1 << n;
  const int flip = pauli_flip_mask(n, string_index);
  Matrix out = Matrix::Zero(d, d);
  for (int b = 0; b < d; ++b) out(b ^ flip, b) = pauli_phase(n, string_index, b);
  return out;
}

int pauli_weight(int n, long string_index) {
  int w = 0;
  for (int q = 0; q < n; ++q)
    if (((string_index >> (2 * q)) & 3) != 0) ++w;
  return w;
}

std::vector<long> pauli_strings_up_to_weight(int n, int max_weight) {
  std::vector<long> out;
  const long total = 1L << (2 * n);
  for (long s = 1; s < total; ++s)
    if (pauli_weight(n, s) <= max_weight) out.push_back(s);
  return out;
}

PauliCoefficients pauli_expand_matrix(int n, const Matrix& m) {
  const int d = 1 << n;
  if (m.rows() != d || m.cols() != d) fail_arg("pauli_expand: matrix has wrong dimension");
  const long total = 1L << (2 * n);
  PauliCoefficients pc;
  pc.num_qubits = n;
  pc.coeffs.resize(total);
  for (long s = 0; s < total; ++s) {
    const int flip = pauli_flip_mask(n, s);
    Complex tr = 0.0;
    for (int b = 0; b < d; ++b) tr += pauli_phase(n, s, b) * m(b, b ^ flip);
    pc.coeffs(s) = tr.real() / d;
  }
  return pc;
}

PauliCoefficients pauli_expand(const DensityMatrix& rho) {
  return pauli_expand_matrix(rho.num_qubits, rho.mat);
}

Matrix pauli_assemble(const PauliCoefficients& pc) {
  const int n = pc.num_qubits;
  const int d = 1 << n;
  const long total = 1L << (2 * n);
  if (pc.coeffs.size() != total) fail_arg("pauli_assemble: coefficient vector has wrong length");
  Matrix out = Matrix::Zero(d, d);
  for (long s = 0; s < total; ++s) {
    const double w = pc.coeffs(s);
    if (w == 0.0) continue;
    const int flip = pauli_flip_mask(n, s);
    for (int b = 0; b < d; ++b) out(b ^ flip, b) += w * pauli_phase(n, s, b);
  }
  return out;
}

Matrix symmetric_projector(int n) {
  if (n < 1 || n > 5) fail_arg("symmetric_projector: supported for 1..5 qubits");
  const int d = 1 << n;
  Matrix sum = Matrix::Zero(d, d);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  long count = 0;
  do {
    for (int b = 0; b < d; ++b) {
      int target = 0;
      for (int q = 0; q < n; ++q) {
        const int bit = (b >> (n - 1 - q)) & 1;
        target |= bit << (n - 1 - perm[q]);
      }
      sum(target, b) += 1.0;
    }
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum / static_cast<double>(count);
}

Matrix swap_matrix(int n, int i, int j) {
  if (i < 0 || i >= n || j < 0 || j >= n || i == j) fail_arg("swap_matrix: bad qubit pair");
  const int d = 1 << n;
  Matrix out = Matrix::Zero(d, d);
  for (int b = 0; b < d; ++b) {
    const int bi = (b >> (n - 1 - i)) & 1;
    const int bj = (b >> (n - 1 - j)) & 1;
    int t = b & ~(1 << (n - 1 - i)) & ~(1 << (n - 1 - j));
    t |= bi << (n - 1 - j);
    t |= bj << (n - 1 - i);
    out(t, b) = 1.0;
  }
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double purity(const DensityMatrix& rho) { return (rho.mat * rho.mat).trace().real(); }

double entropy_bits(const DensityMatrix& rho) {
  const EigResult eig = hermitian_eig(rho.mat);
  double s = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const double lam = eig.eigenvalues(i);
    if (lam > 1e-15) s -= lam * std::log2(lam);
  }
  return s;
}

}  // namespace rdmtomo
