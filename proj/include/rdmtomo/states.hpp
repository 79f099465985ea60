#pragma once

#include "rdmtomo/linalg.hpp"

#include <optional>
#include <vector>

namespace rdmtomo {

/// Real coefficient triple (c0, c2, c4) on the unit sphere, optionally
/// derived from the two-angle parametrization
///   c0 = (sin t - sin theta cos t) / sqrt(2)
///   c2 = cos theta cos t
///   c4 = -(sin theta cos t + sin t) / sqrt(2)
struct SymmetricParams {
  double c0 = 0.0;
  double c2 = 0.0;
  double c4 = 0.0;
  std::optional<std::pair<double, double>> source;  // (theta, t), radians

  static SymmetricParams from_coeffs(double c0, double c2, double c4);
  static SymmetricParams from_angles(double theta, double t);
};

enum class GhzSign { Plus, Minus, Mixed };

struct GhzParams {
  double alpha = 1.0;
  double beta = 0.0;
  GhzSign sign = GhzSign::Plus;

  static GhzParams from_alpha(double alpha, GhzSign sign);
  static GhzParams make(double alpha, double beta, GhzSign sign);
};

struct WParams {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

  static WParams make(double a, double b, double c, double d);
  /// Experimental grid convention: a = b, c = d, c fixed by normalization
  /// (positive branch).
  static WParams from_grid_a(double a);
};

/// Equal-weight symmetrization of a basis string with j zeros and n-j ones.
Ket dicke(int n, int j);

/// c0|w0> + c2|w2> + c4|w4> on 4 qubits, renormalized.
Ket psi_s(const SymmetricParams& p);

/// GHZ-type 4-qubit state: pure alpha|0000> +/- beta|1111>, or the classical
/// mixture of |0000> and |1111> for GhzSign::Mixed.
DensityMatrix ghz(const GhzParams& p);

/// Pure GHZ ket (Plus or Minus only).
Ket ghz_ket(const GhzParams& p);

/// a|0001> + b|0010> + c|0100> + d|1000>.
Ket w_state(const WParams& p);

inline constexpr double kClassCTheta = 0.2617993877991494;  // pi/12

/// The ten-point experimental t grid: pi/6 + k pi/18 for k = 1..11,
/// excluding t = pi/2.
std::vector<double> class_c_time_grid();

/// W-family grid a in {0.1, ..., 0.6}.
std::vector<double> w_amplitude_grid();

/// GHZ-family grid alpha in {0.1, ..., 0.9}.
std::vector<double> ghz_alpha_grid();

}  // namespace rdmtomo
