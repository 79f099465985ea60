#include "rdmtomo/io.hpp"
#include "rdmtomo/linalg.hpp"
#include "rdmtomo/noise.hpp"
#include "rdmtomo/reconstruction.hpp"
#include "rdmtomo/states.hpp"
#include "rdmtomo/uniqueness.hpp"

#include <CLI11.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace rdmtomo;

constexpr int kExitOk = 0;
constexpr int kExitArgument = 1;
constexpr int kExitLoad = 2;
constexpr int kExitNotConverged = 3;

struct ClassifyArgs {
  double theta = kClassCTheta;
  double t = 0.0;
  bool have_t = false;
  std::vector<double> coeffs;
  double ghz_alpha = -1.0;
  double w_a = -1.0;
  std::string in_path;
  std::string preset;
  std::string out_path;
};

struct CounterexampleArgs {
  double theta = kClassCTheta;
  double t = 0.0;
  bool have_t = false;
  std::vector<double> coeffs;
  std::string preset;
  std::string out_psi = "psi_s.json";
  std::string out_rho4 = "rho4.json";
  std::string out_dir = ".";
  std::string report_path;
};

struct ReconstructArgs {
  std::string in_path;
  std::string mode = "pure";
  int restarts = 20;
  std::uint64_t seed = 1;
  double tolerance = -1.0;
  std::string out_path;
  std::string reference_path;
};

struct StabilityArgs {
  std::string family;
  double param = 0.5;
  bool have_param = false;
  double theta = kClassCTheta;
  double t = 0.0;
  bool have_t = false;
  double c = 0.11;
  int d = 16;
  int samples = 90;
  std::uint64_t seed = 1;
  std::string mode = "pure";
  int restarts = 20;
  std::string scope = "pair";
  std::string out_csv;
  std::string out_json;
};

struct ScanArgs {
  int resolution = 64;
  std::string out_path;
};

struct CountArgs {
  int n = 4;
};

struct MakeStateArgs {
  std::string family;
  std::string kind = "ket";
  std::string out_path;
  double alpha = -1.0;
  double beta = -1.0;
  std::string sign = "plus";
  std::vector<double> w_amps;
  double w_a = -1.0;
  double theta = kClassCTheta;
  double t = 0.0;
  bool have_t = false;
  std::vector<double> coeffs;
  int n = 4;
  int j = 0;
  bool have_j = false;
};

SymmetricParams symmetric_params_from(double theta, double t, bool have_t,
                                      const std::vector<double>& coeffs) {
  if (!coeffs.empty()) {
    if (coeffs.size() != 3) fail_arg("expected exactly three coefficients c0 c2 c4");
    return SymmetricParams::from_coeffs(coeffs[0], coeffs[1], coeffs[2]);
  }
  if (!have_t) fail_arg("provide either --t (with optional --theta) or --coeffs");
  return SymmetricParams::from_angles(theta, t);
}

void print_classification(const SymmetricParams& p, const Classification& cls) {
  std::printf("class: %s\n", to_string(cls.label));
  std::printf("c0 c2 c4: %.12g %.12g %.12g\n", p.c0, p.c2, p.c4);
  const auto& ev = cls.udp.spectrum.eigenvalues;
  std::printf("2-RDM eigenvalues (symmetric block): %.12g %.12g %.12g\n", ev[0], ev[1],
              ev[2]);
  std::printf("antisymmetric weight: %.3g\n", ev[3]);
  std::printf("min eigenvalue gap: %.12g\n", cls.udp.spectrum.min_gap());
  std::printf("udp condition: %s\n", cls.udp.holds ? "holds" : "fails");
  std::printf("min PT eigenvalue: %.12g\n", cls.ppt.min_pt_eigenvalue);
  std::printf("ppt oracle: %s  closed-form: %s  printed-form: %s\n",
              cls.ppt.inequalities_hold ? "PPT" : "NPT",
              cls.ppt.closed_form_holds ? "holds" : "fails",
              cls.ppt.printed_form_holds ? "holds" : "fails");
  std::printf("2-RDM rank: %d\n", cls.rdm_rank);
  std::printf("note: %s\n", cls.diagnostic.c_str());
}

void write_classification_json(const std::string& path, const SymmetricParams& p,
                               const Classification& cls) {
  const auto& ev = cls.udp.spectrum.eigenvalues;
  char buf[1024];
  std::snprintf(buf, sizeof(buf),
                "{\n"
                "  \"class\": \"%s\",\n"
                "  \"c0\": %.17g,\n  \"c2\": %.17g,\n  \"c4\": %.17g,\n"
                "  \"eigenvalues\": [%.17g, %.17g, %.17g, %.17g],\n"
                "  \"min_gap\": %.17g,\n"
                "  \"udp_holds\": %s,\n"
                "  \"min_pt_eigenvalue\": %.17g,\n"
                "  \"ppt_oracle\": %s,\n"
                "  \"rank\": %d\n"
                "}\n",
                to_string(cls.label), p.c0, p.c2, p.c4, ev[0], ev[1], ev[2], ev[3],
                cls.udp.spectrum.min_gap(), cls.udp.holds ? "true" : "false",
                cls.ppt.min_pt_eigenvalue, cls.ppt.inequalities_hold ? "true" : "false",
                cls.rdm_rank);
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw LoadError("cannot open '" + path + "' for writing");
  std::fputs(buf, f);
  std::fclose(f);
}

std::optional<SymmetricParams> symmetric_family_of(const Ket& psi) {
  if (psi.num_qubits != 4) return std::nullopt;
  Complex cj[5];
  double weight = 0.0;
  for (int j = 0; j <= 4; ++j) {
    cj[j] = dicke(4, j).amps.dot(psi.amps);
    weight += std::norm(cj[j]);
  }
  Complex anchor = cj[0];
  for (int j : {2, 4})
    if (std::abs(cj[j]) > std::abs(anchor)) anchor = cj[j];
  if (std::abs(anchor) == 0.0) return std::nullopt;
  const Complex phase = std::conj(anchor) / std::abs(anchor);
  const Complex c0 = cj[0] * phase, c2 = cj[2] * phase, c4 = cj[4] * phase;
  if (std::abs(weight - 1.0) > 1e-8 || std::abs(cj[1]) > 1e-8 || std::abs(cj[3]) > 1e-8 ||
      std::abs(c0.imag()) > 1e-8 || std::abs(c2.imag()) > 1e-8 ||
      std::abs(c4.imag()) > 1e-8)
    return std::nullopt;
  const double norm = std::sqrt(std::norm(c0) + std::norm(c2) + std::norm(c4));
  return SymmetricParams::from_coeffs(c0.real() / norm, c2.real() / norm,
                                      c4.real() / norm);
}

bool is_w_family(const Ket& psi) {
  if (psi.num_qubits != 4) return false;
  double weight = 0.0;
  for (int idx : {1, 2, 4, 8}) weight += std::norm(psi.amps(idx));
  return std::abs(weight - 1.0) <= 1e-8;
}

int run_classify(const ClassifyArgs& args) {
  if (!args.preset.empty()) {
    if (args.preset == "paper-classC") {
      for (double t : class_c_time_grid()) {
        const SymmetricParams p = SymmetricParams::from_angles(kClassCTheta, t);
        const Classification cls = classify(p);
        std::printf("t=%.6f  class=%s  min_gap=%.6f  min_pt=%.6f\n", t,
                    to_string(cls.label), cls.udp.spectrum.min_gap(),
                    cls.ppt.min_pt_eigenvalue);
      }
      return kExitOk;
    }
    if (args.preset == "paper-GHZ") {
      for (double alpha : ghz_alpha_grid()) {
        const double beta = std::sqrt(1.0 - alpha * alpha);
        const Classification cls =
            classify(SymmetricParams::from_coeffs(beta, 0.0, alpha));
        std::printf("alpha=%.1f  class=%s\n", alpha, to_string(cls.label));
      }
      return kExitOk;
    }
    if (args.preset == "paper-W") {
      for (double a : w_amplitude_grid())
        std::printf("a=%.1f  class=B  (W family, unique among all states)\n", a);
      return kExitOk;
    }
    fail_arg("unknown preset '" + args.preset + "'");
  }

  if (args.ghz_alpha >= 0.0) {
    const GhzParams g = GhzParams::from_alpha(args.ghz_alpha, GhzSign::Plus);
    // alpha|0000> + beta|1111> sits in the symmetric family at c2 = 0.
    const SymmetricParams p = SymmetricParams::from_coeffs(g.beta, 0.0, g.alpha);
    const Classification cls = classify(p);
    print_classification(p, cls);
    if (!args.out_path.empty()) write_classification_json(args.out_path, p, cls);
    return kExitOk;
  }

  if (args.w_a >= 0.0) {
    WParams::from_grid_a(args.w_a);  // validates
    std::printf("class: B\n");
    std::printf("w amplitudes: a=b=%.12g, c=d=%.12g\n", args.w_a,
                std::sqrt((1.0 - 2.0 * args.w_a * args.w_a) / 2.0));
    std::printf("note: the W family is uniquely determined among all states; "
                "assigned by citation, not computed\n");
    return kExitOk;
  }

  if (!args.in_path.empty()) {
    const StateFile file = load_state_file(args.in_path);
    const Ket psi = [&]() -> Ket {
      if (file.is_ket()) return std::get<Ket>(file.payload);
      if (file.is_density()) {
        const DensityMatrix& rho = std::get<DensityMatrix>(file.payload);
        if (purity(rho) < 1.0 - 1e-8)
          fail_arg("classification needs a pure state; input purity is below 1");
        const EigResult eig = hermitian_eig(rho.mat);
        Vector top = eig.eigenvectors.col(0);
        return Ket(rho.num_qubits, top / top.norm());
      }
      fail_arg("cannot classify an rdmset file; pass a ket or density state");
    }();
    if (const auto p = symmetric_family_of(psi)) {
      const Classification cls = classify(*p);
      print_classification(*p, cls);
      if (!args.out_path.empty()) write_classification_json(args.out_path, *p, cls);
      return kExitOk;
    }
    if (is_w_family(psi)) {
      std::printf("class: B\n");
      std::printf("note: W-type (weight-1) state, uniquely determined among all "
                  "states by citation\n");
      return kExitOk;
    }
    std::printf("class: Unknown\n");
    std::printf("note: state lies outside the GHZ, W and symmetric (c0,c2,c4) "
                "families; no decision procedure applies\n");
    return kExitOk;
  }

  const SymmetricParams p =
      symmetric_params_from(args.theta, args.t, args.have_t, args.coeffs);
  const Classification cls = classify(p);
  print_classification(p, cls);
  if (!args.out_path.empty()) write_classification_json(args.out_path, p, cls);
  return kExitOk;
}

struct CounterexampleRow {
  double t = 0.0;
  double max_rdm_distance = 0.0;
  double fidelity = 0.0;
};

CounterexampleRow emit_counterexample(const SymmetricParams& p, const std::string& psi_path,
                                      const std::string& rho4_path) {
  const Ket psi = psi_s(p);
  const DensityMatrix rho_psi = DensityMatrix::from_ket(psi);
  const RdmSet targets = all_2rdms(rho_psi);
  const DensityMatrix rho4 = build_counterexample(separable_decomposition(p));

  CounterexampleRow row;
  row.t = p.source ? p.source->second : std::nan("");
  for (const auto& [pq, target] : targets.pairs) {
    const DensityMatrix reduced = partial_trace(rho4, {pq.first, pq.second});
    row.max_rdm_distance =
        std::max(row.max_rdm_distance, (reduced.mat - target.mat).cwiseAbs().maxCoeff());
  }
  row.fidelity = fidelity(rho_psi, rho4);

  StateFileMeta meta;
  meta.family = "psis";
  char params[128];
  std::snprintf(params, sizeof(params), "{\"c0\": %.17g, \"c2\": %.17g, \"c4\": %.17g}",
                p.c0, p.c2, p.c4);
  meta.params_json = params;
  save_state_file(psi_path, psi, meta);
  meta.family = "psis-counterexample";
  save_state_file(rho4_path, rho4, meta);
  return row;
}

int run_counterexample(const CounterexampleArgs& args) {
  namespace fs = std::filesystem;
  if (!args.preset.empty()) {
    if (args.preset != "paper-classC") fail_arg("unknown preset '" + args.preset + "'");
    fs::create_directories(args.out_dir);
    std::string report = "t,max_rdm_distance,fidelity\n";
    int k = 0;
    for (double t : class_c_time_grid()) {
      const SymmetricParams p = SymmetricParams::from_angles(kClassCTheta, t);
      char psi_name[64], rho_name[64];
      std::snprintf(psi_name, sizeof(psi_name), "psi_s_%02d.json", k);
      std::snprintf(rho_name, sizeof(rho_name), "rho4_%02d.json", k);
      const CounterexampleRow row = emit_counterexample(
          p, (fs::path(args.out_dir) / psi_name).string(),
          (fs::path(args.out_dir) / rho_name).string());
      char line[160];
      std::snprintf(line, sizeof(line), "%.12g,%.3g,%.12g\n", row.t,
                    row.max_rdm_distance, row.fidelity);
      report += line;
      std::printf("t=%.6f  max RDM distance=%.3g  fidelity(psi_s, rho4)=%.6f\n", t,
                  row.max_rdm_distance, row.fidelity);
      ++k;
    }
    if (!args.report_path.empty()) {
      std::FILE* f = std::fopen(args.report_path.c_str(), "wb");
      if (!f) throw LoadError("cannot open '" + args.report_path + "' for writing");
      std::fputs(report.c_str(), f);
      std::fclose(f);
    }
    return kExitOk;
  }

  const SymmetricParams p =
      symmetric_params_from(args.theta, args.t, args.have_t, args.coeffs);
  const Classification cls = classify(p);
  if (cls.label != StateClass::C) {
    std::printf("refused: the requested point is not class C\n");
    print_classification(p, cls);
    if (cls.label == StateClass::A)
      std::printf("suggestion: the classical mixture "
                  "|c4|^2 |0000><0000| + |c0|^2 |1111><1111| already shares these "
                  "2-RDMs\n");
    return kExitArgument;
  }
  const CounterexampleRow row = emit_counterexample(p, args.out_psi, args.out_rho4);
  std::printf("wrote %s and %s\n", args.out_psi.c_str(), args.out_rho4.c_str());
  std::printf("max RDM distance: %.3g\n", row.max_rdm_distance);
  std::printf("fidelity(psi_s, rho4): %.6f\n", row.fidelity);
  return kExitOk;
}

int run_reconstruct(const ReconstructArgs& args) {
  const StateFile file = load_state_file(args.in_path);
  if (!file.is_rdmset()) fail_arg("reconstruct needs an rdmset input file");
  const RdmSet& targets = std::get<RdmSet>(file.payload);
  const int n = targets.num_qubits;
  const std::size_t expected = static_cast<std::size_t>(n) * (n - 1) / 2;
  if (targets.pairs.size() != expected)
    fail_arg("unsupported input: expected all " + std::to_string(expected) +
             " qubit pairs, found " + std::to_string(targets.pairs.size()));

  ReconstructionResult result = [&] {
    if (args.mode == "pure") {
      PureOptions opts;
      opts.restarts = args.restarts;
      opts.seed = args.seed;
      if (args.tolerance > 0.0) opts.tolerance = args.tolerance;
      return reconstruct_pure(targets, opts);
    }
    if (args.mode == "maxent") {
      MaxentOptions opts;
      if (args.tolerance > 0.0) opts.tolerance = args.tolerance;
      return reconstruct_maxent(targets, opts);
    }
    fail_arg("unknown mode '" + args.mode + "' (expected pure or maxent)");
  }();

  std::printf("mode: %s\n", args.mode.c_str());
  std::printf("residual: %.6g\n", result.residual);
  std::printf("restarts used: %d\n", result.restarts_used);
  std::printf("converged: %s\n", result.converged ? "yes" : "no");
  std::printf("purity: %.9f\n", purity(result.state));
  std::printf("entropy (bits): %.6f\n", entropy_bits(result.state));

  if (!args.reference_path.empty()) {
    const StateFile ref = load_state_file(args.reference_path);
    DensityMatrix rho_ref = ref.is_ket()
                                ? DensityMatrix::from_ket(std::get<Ket>(ref.payload))
                                : std::get<DensityMatrix>(ref.payload);
    std::printf("fidelity to reference: %.6f\n", fidelity(result.state, rho_ref));
  }
  if (!args.out_path.empty()) save_reconstruction(args.out_path, result);
  return result.converged ? kExitOk : kExitNotConverged;
}

int run_stability(const StabilityArgs& args) {
  const Ket source = [&]() -> Ket {
    if (args.family == "w") {
      if (!args.have_param)
        fail_arg("--param (the W amplitude a) is required for --family w");
      return w_state(WParams::from_grid_a(args.param));
    }
    if (args.family == "psis") {
      if (!args.have_t) fail_arg("--t is required for --family psis");
      return psi_s(SymmetricParams::from_angles(args.theta, args.t));
    }
    fail_arg("unknown family '" + args.family + "' (expected w or psis)");
  }();

  NoiseConfig cfg;
  cfg.c = args.c;
  cfg.d = args.d;
  cfg.seed = args.seed;
  cfg.samples = args.samples;

  StabilityOptions opts;
  opts.mode = (args.mode == "maxent") ? ReconstructionMode::Maxent
                                      : ReconstructionMode::Pure;
  if (args.mode != "pure" && args.mode != "maxent")
    fail_arg("unknown mode '" + args.mode + "'");
  opts.scope = (args.scope == "global") ? NoiseScope::Global : NoiseScope::PerPair;
  if (args.scope != "pair" && args.scope != "global")
    fail_arg("unknown scope '" + args.scope + "'");
  opts.restarts = args.restarts;

  const StabilityResult result = stability_study(source, cfg, opts);
  std::printf("samples: %zu\n", result.samples.size());
  std::printf("fidelity mean: %.6f  min: %.6f  max: %.6f  stddev: %.6f\n", result.mean,
              result.min, result.max, result.stddev);
  if (!args.out_csv.empty()) write_stability_csv(args.out_csv, result);
  if (!args.out_json.empty()) write_stability_summary_json(args.out_json, result);
  return kExitOk;
}

int run_scan(const ScanArgs& args) {
  const ScanReport report = scan_region(args.resolution);
  std::printf("grid points: %zu\n", report.rows.size());
  std::printf("class C: %ld  class A: %ld  unknown: %ld\n", report.count_c,
              report.count_a, report.count_unknown);
  std::printf("closed-form vs oracle mismatches: %ld\n", report.closed_form_mismatches);
  std::printf("printed-form vs oracle mismatches: %ld\n", report.printed_form_mismatches);
  std::printf("boundary band skipped: %ld\n", report.boundary_skipped);
  std::printf("experimental curve points in class C: %s\n",
              report.curve_all_class_c ? "10/10" : "NO");
  if (!args.out_path.empty()) write_scan_csv(args.out_path, report);
  return kExitOk;
}

int run_count(const CountArgs& args) {
  if (args.n < 2) fail_arg("--n must be at least 2");
  if (args.n > 30) fail_arg("--n too large for exact counting");
  const long long full = (1LL << (2 * args.n)) - 1;  // 4^n - 1
  const long long local = 3LL * args.n + 9LL * args.n * (args.n - 1) / 2;
  std::printf("full QST observables (4^n - 1): %lld\n", full);
  std::printf("weight-<=2 Pauli observables (3n + 9 C(n,2)): %lld\n", local);
  std::printf("ratio: %.6g\n", static_cast<double>(full) / static_cast<double>(local));
  return kExitOk;
}

int run_make_state(const MakeStateArgs& args) {
  if (args.out_path.empty()) fail_arg("--out is required");

  StateFileMeta meta;
  meta.family = args.family;

  auto write_any = [&](const Ket* ket, const DensityMatrix* rho) {
    if (args.kind == "ket") {
      if (!ket) fail_arg("this family/sign combination has no ket form");
      save_state_file(args.out_path, *ket, meta);
    } else if (args.kind == "density") {
      if (rho) save_state_file(args.out_path, *rho, meta);
      else save_state_file(args.out_path, DensityMatrix::from_ket(*ket), meta);
    } else if (args.kind == "rdmset") {
      const DensityMatrix full = rho ? *rho : DensityMatrix::from_ket(*ket);
      save_state_file(args.out_path, all_2rdms(full), meta);
    } else {
      fail_arg("unknown kind '" + args.kind + "'");
    }
  };

  char params[160];
  if (args.family == "ghz") {
    if (args.alpha < 0.0) fail_arg("--alpha is required for ghz");
    GhzSign sign = GhzSign::Plus;
    if (args.sign == "minus") sign = GhzSign::Minus;
    else if (args.sign == "mixed") sign = GhzSign::Mixed;
    else if (args.sign != "plus") fail_arg("unknown sign '" + args.sign + "'");
    const GhzParams g = (args.beta >= 0.0) ? GhzParams::make(args.alpha, args.beta, sign)
                                           : GhzParams::from_alpha(args.alpha, sign);
    std::snprintf(params, sizeof(params),
                  "{\"alpha\": %.17g, \"beta\": %.17g, \"sign\": \"%s\"}", g.alpha,
                  g.beta, args.sign.c_str());
    meta.params_json = params;
    const DensityMatrix rho = ghz(g);
    if (sign == GhzSign::Mixed) {
      write_any(nullptr, &rho);
    } else {
      const Ket ket = ghz_ket(g);
      write_any(&ket, &rho);
    }
    return kExitOk;
  }
  if (args.family == "w") {
    WParams w{};
    if (!args.w_amps.empty()) {
      if (args.w_amps.size() != 4) fail_arg("--amps needs four values a b c d");
      w = WParams::make(args.w_amps[0], args.w_amps[1], args.w_amps[2], args.w_amps[3]);
    } else if (args.w_a >= 0.0) {
      w = WParams::from_grid_a(args.w_a);
    } else {
      fail_arg("provide --amps a b c d or --a for the grid convention");
    }
    std::snprintf(params, sizeof(params),
                  "{\"a\": %.17g, \"b\": %.17g, \"c\": %.17g, \"d\": %.17g}", w.a, w.b,
                  w.c, w.d);
    meta.params_json = params;
    const Ket ket = w_state(w);
    write_any(&ket, nullptr);
    return kExitOk;
  }
  if (args.family == "psis") {
    const SymmetricParams p =
        symmetric_params_from(args.theta, args.t, args.have_t, args.coeffs);
    std::snprintf(params, sizeof(params),
                  "{\"c0\": %.17g, \"c2\": %.17g, \"c4\": %.17g}", p.c0, p.c2, p.c4);
    meta.params_json = params;
    const Ket ket = psi_s(p);
    write_any(&ket, nullptr);
    return kExitOk;
  }
  if (args.family == "dicke") {
    if (!args.have_j) fail_arg("--j (zero count) is required for dicke");
    std::snprintf(params, sizeof(params), "{\"n\": %d, \"j\": %d}", args.n, args.j);
    meta.params_json = params;
    const Ket ket = dicke(args.n, args.j);
    write_any(&ket, nullptr);
    return kExitOk;
  }
  fail_arg("unknown family '" + args.family + "' (expected ghz, w, psis or dicke)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-qubit-marginal tomography toolkit for 4-qubit states"};
  app.require_subcommand(1);

  ClassifyArgs classify_args;
  auto* cmd_classify = app.add_subcommand(
      "classify", "Classify a state by the uniqueness of its 2-RDM description");
  cmd_classify->add_option("--theta", classify_args.theta, "family angle theta (radians)");
  cmd_classify->add_option("--t", classify_args.t, "family angle t (radians)")
      ->each([&](const std::string&) { classify_args.have_t = true; });
  cmd_classify->add_option("--coeffs", classify_args.coeffs,
                           "explicit coefficients c0 c2 c4")->expected(3);
  cmd_classify->add_option("--ghz-alpha", classify_args.ghz_alpha,
                           "GHZ-family alpha (class A check)");
  cmd_classify->add_option("--w-a", classify_args.w_a, "W-family grid amplitude");
  cmd_classify->add_option("--in", classify_args.in_path, "state file to classify");
  cmd_classify->add_option("--preset", classify_args.preset,
                           "paper-classC | paper-GHZ | paper-W");
  cmd_classify->add_option("--out", classify_args.out_path, "JSON report path");

  CounterexampleArgs cex_args;
  auto* cmd_cex = app.add_subcommand(
      "counterexample", "Emit psi_s and the mixed state sharing its 2-RDMs");
  cmd_cex->add_option("--theta", cex_args.theta, "family angle theta (radians)");
  cmd_cex->add_option("--t", cex_args.t, "family angle t (radians)")
      ->each([&](const std::string&) { cex_args.have_t = true; });
  cmd_cex->add_option("--coeffs", cex_args.coeffs, "explicit coefficients c0 c2 c4")
      ->expected(3);
  cmd_cex->add_option("--preset", cex_args.preset, "paper-classC batch");
  cmd_cex->add_option("--out-psi", cex_args.out_psi, "output path for psi_s");
  cmd_cex->add_option("--out-rho4", cex_args.out_rho4, "output path for rho4");
  cmd_cex->add_option("--out-dir", cex_args.out_dir, "directory for batch output");
  cmd_cex->add_option("--report", cex_args.report_path, "CSV report path");

  ReconstructArgs rec_args;
  auto* cmd_rec = app.add_subcommand("reconstruct",
                                     "Recover a global state from an rdmset file");
  cmd_rec->add_option("--in", rec_args.in_path, "rdmset state file")->required();
  cmd_rec->add_option("--mode", rec_args.mode, "pure | maxent");
  cmd_rec->add_option("--restarts", rec_args.restarts, "pure-mode restarts");
  cmd_rec->add_option("--seed", rec_args.seed, "optimizer seed");
  cmd_rec->add_option("--tolerance", rec_args.tolerance, "convergence tolerance");
  cmd_rec->add_option("--out", rec_args.out_path, "reconstruction JSON path");
  cmd_rec->add_option("--reference", rec_args.reference_path,
                      "state file to report fidelity against");

  StabilityArgs stab_args;
  auto* cmd_stab = app.add_subcommand("stability",
                                      "Noise-perturbed reconstruction study");
  cmd_stab->add_option("--family", stab_args.family, "w | psis")->required();
  cmd_stab->add_option("--param", stab_args.param, "W amplitude a")
      ->each([&](const std::string&) { stab_args.have_param = true; });
  cmd_stab->add_option("--theta", stab_args.theta, "psis theta (radians)");
  cmd_stab->add_option("--t", stab_args.t, "psis t (radians)")
      ->each([&](const std::string&) { stab_args.have_t = true; });
  cmd_stab->add_option("--c", stab_args.c, "error percentage (default 0.11)");
  cmd_stab->add_option("--d", stab_args.d, "Pauli-dimension parameter (default 16)");
  cmd_stab->add_option("--samples", stab_args.samples, "noise draws (default 90)");
  cmd_stab->add_option("--seed", stab_args.seed, "base seed");
  cmd_stab->add_option("--mode", stab_args.mode, "pure | maxent");
  cmd_stab->add_option("--restarts", stab_args.restarts, "pure-mode restarts");
  cmd_stab->add_option("--scope", stab_args.scope,
                       "pair (per-RDM noise) | global (255-coefficient noise)");
  cmd_stab->add_option("--out-csv", stab_args.out_csv, "per-sample CSV path");
  cmd_stab->add_option("--out-json", stab_args.out_json, "summary JSON path");

  ScanArgs scan_args;
  auto* cmd_scan = app.add_subcommand("scan", "Classify a sphere grid of (c0,c2,c4)");
  cmd_scan->add_option("--resolution", scan_args.resolution, "latitude count (>= 8)");
  cmd_scan->add_option("--out", scan_args.out_path, "CSV output path");

  CountArgs count_args;
  auto* cmd_count = app.add_subcommand("count", "Observable counting");
  cmd_count->add_option("--n", count_args.n, "qubit count");

  MakeStateArgs make_args;
  auto* cmd_make = app.add_subcommand("make-state", "Write a state file");
  cmd_make->add_option("--family", make_args.family, "ghz | w | psis | dicke")->required();
  cmd_make->add_option("--kind", make_args.kind, "ket | density | rdmset");
  cmd_make->add_option("--out", make_args.out_path, "output path")->required();
  cmd_make->add_option("--alpha", make_args.alpha, "ghz alpha");
  cmd_make->add_option("--beta", make_args.beta, "ghz beta (default sqrt(1-alpha^2))");
  cmd_make->add_option("--sign", make_args.sign, "ghz sign: plus | minus | mixed");
  cmd_make->add_option("--amps", make_args.w_amps, "w amplitudes a b c d")->expected(4);
  cmd_make->add_option("--a", make_args.w_a, "w grid amplitude (a=b, c=d fixed)");
  cmd_make->add_option("--theta", make_args.theta, "psis theta (radians)");
  cmd_make->add_option("--t", make_args.t, "psis t (radians)")
      ->each([&](const std::string&) { make_args.have_t = true; });
  cmd_make->add_option("--coeffs", make_args.coeffs, "psis coefficients c0 c2 c4")
      ->expected(3);
  cmd_make->add_option("--n", make_args.n, "dicke qubit count");
  cmd_make->add_option("--j", make_args.j, "dicke zero count")
      ->each([&](const std::string&) { make_args.have_j = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitArgument;
  }

  try {
    if (cmd_classify->parsed()) return run_classify(classify_args);
    if (cmd_cex->parsed()) return run_counterexample(cex_args);
    if (cmd_rec->parsed()) return run_reconstruct(rec_args);
    if (cmd_stab->parsed()) return run_stability(stab_args);
    if (cmd_scan->parsed()) return run_scan(scan_args);
    if (cmd_count->parsed()) return run_count(count_args);
    if (cmd_make->parsed()) return run_make_state(make_args);
  } catch (const LoadError& e) {
    std::fprintf(stderr, "load error: %s\n", e.what());
    return kExitLoad;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "argument error: %s\n", e.what());
    return kExitArgument;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "argument error: %s\n", e.what());
    return kExitArgument;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitArgument;
  }
  return kExitArgument;
}
