#include "rdmtomo/states.hpp"

#include <cmath>

namespace rdmtomo {

namespace {

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

SymmetricParams SymmetricParams::from_coeffs(double c0, double c2, double c4) {
  const double norm2 = c0 * c0 + c2 * c2 + c4 * c4;
  if (std::abs(norm2 - 1.0) > 1e-10)
    fail_arg("SymmetricParams: coefficients are not normalized");
  SymmetricParams p;
  p.c0 = c0;
  p.c2 = c2;
  p.c4 = c4;
  return p;
}

SymmetricParams SymmetricParams::from_angles(double theta, double t) {
  const double st = std::sin(t), ct = std::cos(t);
  const double sth = std::sin(theta), cth = std::cos(theta);
  SymmetricParams p;
  p.c0 = (st - sth * ct) / std::sqrt(2.0);
  p.c2 = cth * ct;
  p.c4 = -(sth * ct + st) / std::sqrt(2.0);
  p.source = std::make_pair(theta, t);
  return p;
}

GhzParams GhzParams::from_alpha(double alpha, GhzSign sign) {
  if (alpha < 0.0 || alpha > 1.0) fail_arg("GhzParams: alpha must lie in [0, 1]");
  return make(alpha, std::sqrt(std::max(0.0, 1.0 - alpha * alpha)), sign);
}

GhzParams GhzParams::make(double alpha, double beta, GhzSign sign) {
  if (alpha < 0.0 || alpha > 1.0 || beta < 0.0 || beta > 1.0)
    fail_arg("GhzParams: amplitudes must lie in [0, 1]");
  if (std::abs(alpha * alpha + beta * beta - 1.0) > 1e-12)
    fail_arg("GhzParams: amplitudes are not normalized");
  GhzParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.sign = sign;
  return p;
}

WParams WParams::make(double a, double b, double c, double d) {
  if (std::abs(a * a + b * b + c * c + d * d - 1.0) > 1e-12)
    fail_arg("WParams: amplitudes are not normalized");
  WParams p;
  p.a = a;
  p.b = b;
  p.c = c;
  p.d = d;
  return p;
}

WParams WParams::from_grid_a(double a) {
  const double rem = 1.0 - 2.0 * a * a;
  if (rem < 0.0) fail_arg("WParams: grid amplitude too large");
  const double c = std::sqrt(rem / 2.0);
  return make(a, a, c, c);
}

Ket dicke(int n, int j) {
  if (n < 1 || n > 16) fail_arg("dicke: unsupported qubit count");
  if (j < 0 || j > n) fail_arg("dicke: zero-count out of range");
  const int d = 1 << n;
  const double amp = 1.0 / std::sqrt(static_cast<double>(binomial(n, j)));
  Vector v = Vector::Zero(d);
  for (int b = 0; b < d; ++b) {
    const int ones = __builtin_popcount(static_cast<unsigned>(b));
    if (n - ones == j) v(b) = amp;
  }
  return Ket(n, std::move(v));
}

Ket psi_s(const SymmetricParams& p) {
  const double norm2 = p.c0 * p.c0 + p.c2 * p.c2 + p.c4 * p.c4;
  if (std::abs(norm2 - 1.0) > 1e-10) fail_arg("psi_s: parameters are not normalized");
  Vector v = p.c0 * dicke(4, 0).amps + p.c2 * dicke(4, 2).amps + p.c4 * dicke(4, 4).amps;
  v /= v.norm();
  return Ket(4, std::move(v));
}

Ket ghz_ket(const GhzParams& p) {
  if (p.sign == GhzSign::Mixed) fail_arg("ghz_ket: mixed variant has no ket form");
  Vector v = Vector::Zero(16);
  v(0) = p.alpha;
  v(15) = (p.sign == GhzSign::Plus) ? p.beta : -p.beta;
  return Ket(4, std::move(v));
}

DensityMatrix ghz(const GhzParams& p) {
  if (p.sign == GhzSign::Mixed) {
    Matrix m = Matrix::Zero(16, 16);
    m(0, 0) = p.alpha * p.alpha;
    m(15, 15) = p.beta * p.beta;
    return DensityMatrix(4, std::move(m));
  }
  return DensityMatrix::from_ket(ghz_ket(p));
}

Ket w_state(const WParams& p) {
  Vector v = Vector::Zero(16);
  v(1) = p.a;   // |0001>
  v(2) = p.b;   // |0010>
  v(4) = p.c;   // |0100>
  v(8) = p.d;   // |1000>
  return Ket(4, std::move(v));
}

std::vector<double> class_c_time_grid() {
  const double pi = std::acos(-1.0);
  std::vector<double> grid;
  for (int k = 1; k <= 11; ++k) {
    if (k == 6) continue;  // t = pi/2
    grid.push_back(pi / 6.0 + k * pi / 18.0);
  }
  return grid;
}

std::vector<double> w_amplitude_grid() { return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}; }

std::vector<double> ghz_alpha_grid() {
  return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
}

}  // namespace rdmtomo
