#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "rdmtomo/linalg.hpp"
#include "rdmtomo/states.hpp"
#include "rdmtomo/uniqueness.hpp"

#include <cmath>

using namespace rdmtomo;
using oracles::max_abs_diff;

namespace {

const double kPi = std::acos(-1.0);

SymmetricParams grid_point(double t) {
  return SymmetricParams::from_angles(kClassCTheta, t);
}

// rejection-sample parameters that classify as C
std::vector<SymmetricParams> sample_class_c(int count, std::uint64_t seed) {
  oracles::Rng rng(seed);
  std::vector<SymmetricParams> out;
  while (static_cast<int>(out.size()) < count) {
    const auto [x, y, z] = oracles::random_sphere_point(rng);
    const SymmetricParams p = SymmetricParams::from_coeffs(x, y, z);
    if (classify(p).label == StateClass::C) out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("all_2rdms: product state and pair count") {
  Vector v = Vector::Zero(16);
  v(0) = 1.0;
  const RdmSet rdms = all_2rdms(DensityMatrix::from_ket(Ket(4, v)));
  CHECK(rdms.pairs.size() == 6);
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = 1.0;
  for (const auto& [pq, rdm] : rdms.pairs) CHECK(max_abs_diff(rdm.mat, expected) <= 1e-14);
  Matrix one = Matrix::Identity(2, 2) / 2.0;
  CHECK_THROWS_AS(all_2rdms(DensityMatrix(1, one)), std::invalid_argument);
}

TEST_CASE("all_2rdms: psi_s marginals equal the closed form on every pair") {
  const SymmetricParams p = grid_point(kPi / 3.0);
  const RdmSet rdms = all_2rdms(DensityMatrix::from_ket(psi_s(p)));
  const Matrix expected = closed_form_rdm(p).assemble();
  for (const auto& [pq, rdm] : rdms.pairs) CHECK(max_abs_diff(rdm.mat, expected) <= 1e-12);
}

TEST_CASE("udp_condition: GHZ-type point is degenerate") {
  const UdpVerdict v = udp_condition(grid_point(kPi / 2.0));
  CHECK_FALSE(v.holds);
  CHECK(v.spectrum.eigenvalues[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(v.spectrum.eigenvalues[1] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(std::abs(v.spectrum.eigenvalues[3]) <= 1e-10);
  CHECK(v.spectrum.symmetric_support);
}

TEST_CASE("udp_condition: |w2> point has the {2/3, 1/6, 1/6, 0} spectrum") {
  const UdpVerdict v = udp_condition(SymmetricParams::from_coeffs(0.0, 1.0, 0.0));
  CHECK_FALSE(v.holds);
  CHECK(v.spectrum.eigenvalues[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(v.spectrum.eigenvalues[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
  CHECK(v.spectrum.eigenvalues[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
  CHECK(std::abs(v.spectrum.eigenvalues[3]) <= 1e-10);
}

TEST_CASE("udp_condition: holds on all ten experimental grid points") {
  for (double t : class_c_time_grid()) {
    const UdpVerdict v = udp_condition(grid_point(t));
    CHECK(v.holds);
    CHECK(v.spectrum.symmetric_support);
    // eigenvalues sum to 1 and stay nonnegative
    double sum = 0.0;
    for (double ev : v.spectrum.eigenvalues) {
      CHECK(ev >= -1e-10);
      sum += ev;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("ppt_test: diagonal GHZ-type marginal is trivially PPT") {
  const PptVerdict v = ppt_test(SymmetricParams::from_coeffs(
      1.0 / std::sqrt(2.0), 0.0, -1.0 / std::sqrt(2.0)));
  CHECK(v.inequalities_hold);
  CHECK(v.closed_form_holds);
  CHECK(v.min_pt_eigenvalue >= -1e-12);
}

TEST_CASE("ppt_test: class-C grid point passes both routes") {
  const PptVerdict v = ppt_test(grid_point(kPi / 3.0));
  CHECK(v.inequalities_hold);
  CHECK(v.closed_form_holds);
  CHECK(v.printed_form_holds);
  CHECK(v.min_pt_eigenvalue >= 0.0);
  CHECK(v.min_pt_eigenvalue == doctest::Approx(0.0416667).epsilon(1e-4));
}

TEST_CASE("ppt_test: |w2> point fails, inequality 1 reads 1/9 > 1/36") {
  const SymmetricParams p = SymmetricParams::from_coeffs(0.0, 1.0, 0.0);
  const SymmetricRdmForm f = closed_form_rdm(p);
  CHECK(std::pow(p.c2, 4) / 9.0 > f.a * f.b);  // 1/9 vs 1/36
  const PptVerdict v = ppt_test(p);
  CHECK_FALSE(v.inequalities_hold);
  CHECK_FALSE(v.closed_form_holds);
  CHECK(v.min_pt_eigenvalue == doctest::Approx(-1.0 / 6.0).epsilon(1e-9));
}

TEST_CASE("classify: grid point, GHZ-type point, product point") {
  CHECK(classify(grid_point(kPi / 3.0)).label == StateClass::C);
  CHECK(classify(grid_point(kPi / 2.0)).label == StateClass::A);
  const Classification product = classify(SymmetricParams::from_coeffs(1.0, 0.0, 0.0));
  CHECK(product.label == StateClass::Unknown);
  CHECK(product.rdm_rank == 1);
  CHECK(product.diagnostic.find("rank-1") != std::string::npos);
}

TEST_CASE("classify: all ten experimental points are class C") {
  for (double t : class_c_time_grid()) CHECK(classify(grid_point(t)).label == StateClass::C);
}

TEST_CASE("classify: antipodal points classify identically") {
  oracles::Rng rng(61);
  for (int trial = 0; trial < 25; ++trial) {
    const auto [x, y, z] = oracles::random_sphere_point(rng);
    const Classification a = classify(SymmetricParams::from_coeffs(x, y, z));
    const Classification b = classify(SymmetricParams::from_coeffs(-x, -y, -z));
    CHECK(a.label == b.label);
  }
}

TEST_CASE("separable_decomposition: weight identity d0 = dx + dy + dz") {
  oracles::Rng rng(62);
  int checked = 0;
  while (checked < 25) {
    const auto [x, y, z] = oracles::random_sphere_point(rng);
    const SymmetricParams p = SymmetricParams::from_coeffs(x, y, z);
    const SymmetricRdmForm f = closed_form_rdm(p);
    if (!ppt_test(p).inequalities_hold || f.a <= 0.0 || f.b <= 0.0) continue;
    const double d0 = 2.0 * std::sqrt(f.a * f.b) + 2.0 * f.d;
    const double dx = 2.0 * f.c + 2.0 * f.d;
    const double dy = 2.0 * f.d - 2.0 * f.c;
    const double dz = 2.0 * std::sqrt(f.a * f.b) - 2.0 * f.d;
    CHECK(std::abs(d0 - (dx + dy + dz)) <= 1e-15);
    ++checked;
  }
}

TEST_CASE("separable_decomposition: GHZ-type point reduces to two z-components") {
  const double alpha = 0.6, beta = 0.8;  // c4 = alpha, c0 = beta, c2 = 0
  const SymmetricParams p = SymmetricParams::from_coeffs(beta, 0.0, alpha);
  const SeparableDecomposition dec = separable_decomposition(p);
  CHECK(dec.components.size() == 6);
  // x and y weights vanish with c = d = 0
  CHECK(std::abs(dec.components[0].weight) <= 1e-15);
  CHECK(std::abs(dec.components[1].weight) <= 1e-15);
  CHECK(std::abs(dec.components[2].weight) <= 1e-15);
  CHECK(std::abs(dec.components[3].weight) <= 1e-15);
  // z components are |0><0| and |1><1| with weights b = alpha^2, a = beta^2
  Matrix zero = Matrix::Zero(2, 2);
  zero(0, 0) = 1.0;
  Matrix one = Matrix::Zero(2, 2);
  one(1, 1) = 1.0;
  CHECK(dec.components[4].weight == doctest::Approx(alpha * alpha).epsilon(1e-12));
  CHECK(max_abs_diff(dec.components[4].alpha, zero) <= 1e-13);
  CHECK(dec.components[5].weight == doctest::Approx(beta * beta).epsilon(1e-12));
  CHECK(max_abs_diff(dec.components[5].alpha, one) <= 1e-13);
}

TEST_CASE("separable_decomposition: resynthesis reproduces the exact marginal") {
  const SymmetricParams p = grid_point(kPi / 3.0);
  const SeparableDecomposition dec = separable_decomposition(p);
  const Matrix brute = oracles::partial_trace_bruteforce(
      DensityMatrix::from_ket(psi_s(p)).mat, 4, {0, 1});
  CHECK(max_abs_diff(dec.resynthesize_pair(), brute) <= 1e-10);

  double total = 0.0;
  for (const auto& comp : dec.components) {
    CHECK(comp.weight >= 0.0);
    total += comp.weight;
    const double tr2 = (comp.alpha * comp.alpha).trace().real();
    CHECK(tr2 == doctest::Approx(1.0).epsilon(1e-10));  // pure component
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("separable_decomposition: error paths") {
  // |w0> point: b = 0, filter undefined
  CHECK_THROWS_AS(separable_decomposition(SymmetricParams::from_coeffs(1.0, 0.0, 0.0)),
                  std::domain_error);
  // |w2> point: not PPT
  CHECK_THROWS_AS(separable_decomposition(SymmetricParams::from_coeffs(0.0, 1.0, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("build_counterexample: single-component ensemble gives a product state") {
  SeparableDecomposition dec;
  SeparableComponent comp;
  comp.weight = 1.0;
  comp.alpha = Matrix::Zero(2, 2);
  comp.alpha(0, 0) = 1.0;
  dec.components.push_back(comp);
  const DensityMatrix rho4 = build_counterexample(dec);
  Matrix expected = Matrix::Zero(16, 16);
  expected(0, 0) = 1.0;
  CHECK(max_abs_diff(rho4.mat, expected) <= 1e-14);
}

TEST_CASE("build_counterexample: GHZ-type point reconstructs the classical mixture") {
  const double alpha = 0.6, beta = 0.8;
  const SymmetricParams p = SymmetricParams::from_coeffs(beta, 0.0, alpha);
  const DensityMatrix rho4 = build_counterexample(separable_decomposition(p));
  const DensityMatrix mix = ghz(GhzParams::make(alpha, beta, GhzSign::Mixed));
  CHECK(max_abs_diff(rho4.mat, mix.mat) <= 1e-12);
}

TEST_CASE("build_counterexample: same marginals, clearly different global state") {
  const SymmetricParams p = grid_point(kPi / 3.0);
  const DensityMatrix rho_psi = DensityMatrix::from_ket(psi_s(p));
  const DensityMatrix rho4 = build_counterexample(separable_decomposition(p));
  const RdmSet targets = all_2rdms(rho_psi);
  for (const auto& [pq, target] : targets.pairs) {
    const DensityMatrix reduced = partial_trace(rho4, {pq.first, pq.second});
    CHECK(max_abs_diff(reduced.mat, target.mat) <= 1e-10);
  }
  const double f = fidelity(rho_psi, rho4);
  CHECK(f < 0.99);
  CHECK(f == doctest::Approx(0.5778106287335534).epsilon(1e-6));
}

TEST_CASE("counterexample properties on random class-C points") {
  const auto points = sample_class_c(10, 63);
  for (const SymmetricParams& p : points) {
    const DensityMatrix rho_psi = DensityMatrix::from_ket(psi_s(p));
    const DensityMatrix rho4 = build_counterexample(separable_decomposition(p));
    const RdmSet targets = all_2rdms(rho_psi);
    for (const auto& [pq, target] : targets.pairs)
      CHECK(max_abs_diff(partial_trace(rho4, {pq.first, pq.second}).mat, target.mat) <=
            1e-10);
    // permutation invariance of the counterexample
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        const Matrix s = swap_matrix(4, i, j);
        CHECK(max_abs_diff(s * rho4.mat * s, rho4.mat) <= 1e-10);
      }
    CHECK(fidelity(rho_psi, rho4) < 1.0 - 1e-6);
    // class C re-asserts its three component certificates
    const Classification cls = classify(p);
    CHECK(cls.udp.holds);
    CHECK(cls.ppt.inequalities_hold);
    CHECK(cls.rdm_rank >= 2);
  }
}

TEST_CASE("scan_region: small grid sanity and the experimental curve") {
  const ScanReport report = scan_region(16);
  CHECK(report.rows.size() == 2 + 15 * 32);
  CHECK(report.count_c > 0);
  CHECK(report.count_unknown > 0);
  CHECK(report.count_c + report.count_a + report.count_unknown ==
        static_cast<long>(report.rows.size()));
  CHECK(report.closed_form_mismatches == 0);
  CHECK(report.curve_rows.size() == 10);
  CHECK(report.curve_all_class_c);
  for (const auto& row : report.curve_rows) {
    CHECK(row.label == StateClass::C);
    CHECK(row.min_pt_eig > 0.0);
    CHECK(row.min_eigen_gap > 1e-8);
  }
  CHECK_THROWS_AS(scan_region(7), std::invalid_argument);
}

TEST_CASE("Eq.(5) family: marginals agree at every alpha while fidelities differ") {
  for (double alpha : ghz_alpha_grid()) {
    const double beta = std::sqrt(1.0 - alpha * alpha);
    const DensityMatrix plus = ghz(GhzParams::make(alpha, beta, GhzSign::Plus));
    const DensityMatrix minus = ghz(GhzParams::make(alpha, beta, GhzSign::Minus));
    const DensityMatrix mixed = ghz(GhzParams::make(alpha, beta, GhzSign::Mixed));
    const RdmSet rp = all_2rdms(plus), rm = all_2rdms(minus), rx = all_2rdms(mixed);
    for (const auto& [pq, rdm] : rp.pairs) {
      CHECK(max_abs_diff(rdm.mat, rm.pairs.at(pq).mat) <= 1e-12);
      CHECK(max_abs_diff(rdm.mat, rx.pairs.at(pq).mat) <= 1e-12);
    }
    const double expected = std::pow(alpha * alpha - beta * beta, 2);
    CHECK(fidelity(plus, minus) == doctest::Approx(expected).epsilon(1e-9));
  }
}
