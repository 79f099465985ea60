#include "rdmtomo/uniqueness.hpp"

#include <algorithm>
#include <cmath>

namespace rdmtomo {

namespace {

constexpr double kDistinctTol = 1e-8;   // eigenvalues closer than this are degenerate
constexpr double kGhzTypeTol = 1e-10;   // |c2| below this is GHZ-type
constexpr double kPtOracleTol = 1e-10;  // PPT verdict threshold on min PT eigenvalue

Matrix symmetric_basis_embedding() {
  // columns |00>, (|01>+|10>)/sqrt(2), |11>
  Matrix bs = Matrix::Zero(4, 3);
  bs(0, 0) = 1.0;
  bs(1, 1) = 1.0 / std::sqrt(2.0);
  bs(2, 1) = 1.0 / std::sqrt(2.0);
  bs(3, 2) = 1.0;
  return bs;
}

}  // namespace

RdmSet all_2rdms(const DensityMatrix& state) {
  const int n = state.num_qubits;
  if (n < 2) fail_arg("all_2rdms: state must have at least two qubits");
  RdmSet out;
  out.num_qubits = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      out.pairs.emplace(QubitPair{i, j}, partial_trace(state, {i, j}));
  return out;
}

double RdmSpectrum::min_gap() const {
  return std::min(eigenvalues[0] - eigenvalues[1], eigenvalues[1] - eigenvalues[2]);
}

SymmetricRdmForm closed_form_rdm(const SymmetricParams& p) {
  SymmetricRdmForm f;
  f.a = p.c0 * p.c0 + p.c2 * p.c2 / 6.0;
  f.b = p.c4 * p.c4 + p.c2 * p.c2 / 6.0;
  f.c = (p.c0 + p.c4) * p.c2 / std::sqrt(6.0);
  f.d = p.c2 * p.c2 / 3.0;
  return f;
}

Matrix SymmetricRdmForm::assemble() const {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = b;
  m(3, 3) = a;
  m(0, 3) = c;
  m(3, 0) = c;
  m(1, 1) = d;
  m(1, 2) = d;
  m(2, 1) = d;
  m(2, 2) = d;
  return m;
}

DensityMatrix exact_rdm(const SymmetricParams& p) {
  return partial_trace(DensityMatrix::from_ket(psi_s(p)), {0, 1});
}

UdpVerdict udp_condition(const SymmetricParams& p) {
  const DensityMatrix rdm = exact_rdm(p);

  const Matrix q = Matrix::Identity(4, 4) - symmetric_projector(2);
  const double anti_weight = (q * rdm.mat).trace().real();

  const Matrix bs = symmetric_basis_embedding();
  const Matrix block = bs.adjoint() * rdm.mat * bs;  // 3x3 symmetric-subspace block
  const EigResult eig = hermitian_eig(block);

  UdpVerdict v;
  v.spectrum.eigenvalues = {eig.eigenvalues(0), eig.eigenvalues(1), eig.eigenvalues(2),
                            anti_weight};
  v.spectrum.symmetric_support = anti_weight <= 1e-10;
  v.holds = v.spectrum.min_gap() > kDistinctTol &&
            v.spectrum.eigenvalues[2] > kDistinctTol;
  return v;
}

PptVerdict ppt_test(const SymmetricParams& p) {
  const DensityMatrix rdm = exact_rdm(p);
  const Matrix pt = partial_transpose(rdm, Subsystem::Second);
  const EigResult eig = hermitian_eig(pt);

  PptVerdict v;
  v.min_pt_eigenvalue = eig.eigenvalues(eig.eigenvalues.size() - 1);
  v.inequalities_hold = v.min_pt_eigenvalue >= -kPtOracleTol;

  const SymmetricRdmForm f = closed_form_rdm(p);
  // Printed pair: c2^4/9 <= (c0^2+c2^2/6)(c4^2+c2^2/6) and
  // c2/3 >= c0/sqrt(6) + c4/sqrt(6). The first is d^2 <= ab; the second is
  // the d >= c condition without the modulus, so it misreads half of the
  // sphere. The sign-fixed form takes |c| on both sides.
  const double lhs1 = std::pow(p.c2, 4) / 9.0;
  const bool ineq1 = lhs1 <= f.a * f.b;
  const bool ineq2_printed = p.c2 / 3.0 >= (p.c0 + p.c4) / std::sqrt(6.0);
  const bool ineq2_fixed = f.d >= std::abs(f.c);
  v.printed_form_holds = ineq1 && ineq2_printed;
  v.closed_form_holds = ineq1 && ineq2_fixed;
  return v;
}

const char* to_string(StateClass c) {
  switch (c) {
    case StateClass::A: return "A";
    case StateClass::B: return "B";
    case StateClass::C: return "C";
    default: return "Unknown";
  }
}

Classification classify(const SymmetricParams& p) {
  Classification r;
  r.udp = udp_condition(p);
  r.ppt = ppt_test(p);

  const DensityMatrix rdm = exact_rdm(p);
  const EigResult eig = hermitian_eig(rdm.mat);
  r.rdm_rank = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
    if (eig.eigenvalues(i) > kDistinctTol) ++r.rdm_rank;

  if (r.udp.holds && r.ppt.inequalities_hold && r.rdm_rank > 1) {
    r.label = StateClass::C;
    r.diagnostic = "non-degenerate spectrum, PPT marginal, rank > 1";
    return r;
  }
  const bool ghz_type = std::abs(p.c2) <= kGhzTypeTol && std::abs(p.c0) > kGhzTypeTol &&
                        std::abs(p.c4) > kGhzTypeTol;
  if (ghz_type) {
    r.label = StateClass::A;
    r.diagnostic = "GHZ-type (c2 = 0): phase variants and the classical "
                   "mixture share these 2-RDMs";
    return r;
  }
  r.label = StateClass::Unknown;
  if (r.rdm_rank <= 1)
    r.diagnostic = "rank-1 2-RDM (product state); no decision procedure applies";
  else if (!r.udp.holds)
    r.diagnostic = "degenerate or vanishing 2-RDM eigenvalues; the uniqueness "
                   "certificate does not apply";
  else
    r.diagnostic = "2-RDM is not PPT; no separability witness in this region";
  return r;
}

Matrix SeparableDecomposition::resynthesize_pair() const {
  Matrix sum = Matrix::Zero(4, 4);
  for (const auto& comp : components) sum += comp.weight * kron(comp.alpha, comp.alpha);
  return sum;
}

SeparableDecomposition separable_decomposition(const SymmetricParams& p) {
  const PptVerdict ppt = ppt_test(p);
  if (!ppt.inequalities_hold)
    fail_arg("separable_decomposition: 2-RDM is not PPT");

  const SymmetricRdmForm f = closed_form_rdm(p);
  if (f.a <= 0.0 || f.b <= 0.0)
    throw std::domain_error("separable_decomposition: degenerate filter (a*b = 0)");

  // e^{4 eps} = sqrt(a/b) equalizes the diagonal corners at sqrt(ab).
  const double eps = std::log(f.a / f.b) / 8.0;
  const double root_ab = std::sqrt(f.a * f.b);
  double dk[3] = {2.0 * f.c + 2.0 * f.d,        // x
                  2.0 * f.d - 2.0 * f.c,        // y
                  2.0 * root_ab - 2.0 * f.d};   // z
  for (double& w : dk) {
    if (w < -1e-10)
      throw std::domain_error("separable_decomposition: negative ensemble weight; "
                              "the marginal is not separable");
    if (w < 0.0) w = 0.0;  // clamp boundary noise
  }

  Matrix v_inv = Matrix::Zero(2, 2);
  v_inv(0, 0) = std::exp(-eps);
  v_inv(1, 1) = std::exp(eps);

  const Matrix sigma[3] = {pauli_string_matrix(1, 1), pauli_string_matrix(1, 2),
                           pauli_string_matrix(1, 3)};

  SeparableDecomposition dec;
  dec.filter_epsilon = eps;
  double total = 0.0;
  for (int k = 0; k < 3; ++k) {
    for (int s : {+1, -1}) {
      const Matrix proj = (Matrix::Identity(2, 2) + static_cast<double>(s) * sigma[k]) / 2.0;
      const Matrix m = v_inv * proj * v_inv;
      const double t = m.trace().real();
      SeparableComponent comp;
      comp.weight = (dk[k] / 2.0) * t * t;
      comp.alpha = m / t;
      total += comp.weight;
      dec.components.push_back(std::move(comp));
    }
  }
  // The weights sum to Tr(rho2) = 1 analytically; renormalize away the
  // clamping and rounding residue.
  for (auto& comp : dec.components) comp.weight /= total;
  return dec;
}

DensityMatrix build_counterexample(const SeparableDecomposition& dec) {
  Matrix sum = Matrix::Zero(16, 16);
  for (const auto& comp : dec.components) {
    if (comp.weight == 0.0) continue;
    const Matrix pair = kron(comp.alpha, comp.alpha);
    sum += comp.weight * kron(pair, pair);
  }
  sum = (sum + sum.adjoint().eval()) / 2.0;
  return DensityMatrix(4, std::move(sum));
}

namespace {

ScanRow evaluate_scan_point(double theta_s, double phi_s, const SymmetricParams& p,
                            const Classification& cls) {
  ScanRow row;
  row.theta_sphere = theta_s;
  row.phi_sphere = phi_s;
  row.c0 = p.c0;
  row.c2 = p.c2;
  row.c4 = p.c4;
  row.label = cls.label;
  row.min_pt_eig = cls.ppt.min_pt_eigenvalue;
  row.min_eigen_gap = cls.udp.spectrum.min_gap();
  return row;
}

void tally(ScanReport& report, const Classification& cls) {
  switch (cls.label) {
    case StateClass::C: ++report.count_c; break;
    case StateClass::A: ++report.count_a; break;
    default: ++report.count_unknown; break;
  }
  if (std::abs(cls.ppt.min_pt_eigenvalue) <= 1e-9) {
    ++report.boundary_skipped;
    return;
  }
  if (!cls.ppt.closed_form_matches_oracle()) ++report.closed_form_mismatches;
  if (cls.ppt.printed_form_holds != cls.ppt.inequalities_hold)
    ++report.printed_form_mismatches;
}

}  // namespace

ScanReport scan_region(int resolution) {
  if (resolution < 8) fail_arg("scan_region: resolution must be at least 8");
  const double pi = std::acos(-1.0);

  ScanReport report;
  for (int i = 0; i <= resolution; ++i) {
    const double theta_s = i * pi / resolution;
    const bool pole = (i == 0 || i == resolution);
    const int longitudes = pole ? 1 : 2 * resolution;
    for (int j = 0; j < longitudes; ++j) {
      const double phi_s = pole ? 0.0 : j * pi / resolution;
      const double c0 = std::sin(theta_s) * std::cos(phi_s);
      const double c2 = std::sin(theta_s) * std::sin(phi_s);
      const double c4 = std::cos(theta_s);
      const double norm = std::sqrt(c0 * c0 + c2 * c2 + c4 * c4);
      const SymmetricParams p = SymmetricParams::from_coeffs(c0 / norm, c2 / norm, c4 / norm);
      const Classification cls = classify(p);
      report.rows.push_back(evaluate_scan_point(theta_s, phi_s, p, cls));
      tally(report, cls);
    }
  }

  report.curve_all_class_c = true;
  for (double t : class_c_time_grid()) {
    const SymmetricParams p = SymmetricParams::from_angles(kClassCTheta, t);
    const Classification cls = classify(p);
    const double theta_s = std::acos(std::clamp(p.c4, -1.0, 1.0));
    const double phi_s = std::atan2(p.c2, p.c0);
    report.curve_rows.push_back(evaluate_scan_point(theta_s, phi_s, p, cls));
    if (cls.label != StateClass::C) report.curve_all_class_c = false;
  }
  return report;
}

}  // namespace rdmtomo
