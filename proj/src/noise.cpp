#include "rdmtomo/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rdmtomo {

namespace {

void check_config(const NoiseConfig& cfg) {
  if (cfg.c < 0.0) fail_arg("NoiseConfig: error percentage must be nonnegative");
  if (cfg.d < 1) fail_arg("NoiseConfig: Pauli-dimension parameter must be positive");
  if (cfg.samples < 1) fail_arg("NoiseConfig: sample count must be positive");
}

Matrix perturb_coefficients(const DensityMatrix& rho, double sigma, GaussianSampler& rng) {
  PauliCoefficients pc = pauli_expand(rho);
  for (Eigen::Index s = 1; s < pc.coeffs.size(); ++s)  // identity term untouched
    pc.coeffs(s) += sigma * rng.normal();
  return pauli_assemble(pc);
}

}  // namespace

RdmSet perturb_rdms(const RdmSet& targets, const NoiseConfig& cfg) {
  check_config(cfg);
  GaussianSampler rng(cfg.seed);
  const double sigma = cfg.sigma();
  RdmSet out;
  out.num_qubits = targets.num_qubits;
  for (const auto& [pq, rdm] : targets.pairs)
    out.pairs.emplace(pq, DensityMatrix(2, perturb_coefficients(rdm, sigma, rng)));
  return out;
}

RdmSet perturb_global(const DensityMatrix& state, const NoiseConfig& cfg) {
  check_config(cfg);
  GaussianSampler rng(cfg.seed);
  const Matrix noisy = perturb_coefficients(state, cfg.sigma(), rng);
  return all_2rdms(DensityMatrix(state.num_qubits, noisy));
}

DensityMatrix project_physical(const Matrix& rho) {
  if (rho.rows() != rho.cols()) fail_arg("project_physical: matrix is not square");
  if (!is_hermitian(rho, 1e-10)) fail_arg("project_physical: matrix is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-10)
    fail_arg("project_physical: trace is not 1");

  int n = 0;
  for (Eigen::Index x = rho.rows(); x > 1; x >>= 1) ++n;

  const EigResult eig = hermitian_eig((rho + rho.adjoint().eval()) / 2.0);

  // Euclidean projection of the spectrum onto the probability simplex;
  // eigenvalues arrive sorted descending.
  const Eigen::Index d = eig.eigenvalues.size();
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    cumulative += eig.eigenvalues(k);
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (eig.eigenvalues(k) - candidate > 0.0) theta = candidate;
  }
  RealVector clipped(d);
  for (Eigen::Index k = 0; k < d; ++k)
    clipped(k) = std::max(eig.eigenvalues(k) - theta, 0.0);
  clipped /= clipped.sum();

  Matrix out = eig.eigenvectors * clipped.asDiagonal() * eig.eigenvectors.adjoint();
  out = (out + out.adjoint().eval()) / 2.0;
  return DensityMatrix(n, std::move(out));
}

StabilityResult stability_study(const Ket& source, const NoiseConfig& cfg,
                                const StabilityOptions& opts) {
  check_config(cfg);
  const DensityMatrix rho_source = DensityMatrix::from_ket(source);
  const RdmSet exact = all_2rdms(rho_source);

  StabilityResult result;
  result.config = cfg;
  result.samples.reserve(cfg.samples);

  for (int s = 0; s < cfg.samples; ++s) {
    const std::uint64_t sample_seed = derive_sample_seed(cfg.seed, s);
    NoiseConfig draw = cfg;
    draw.seed = sample_seed;

    RdmSet noisy = (opts.scope == NoiseScope::PerPair) ? perturb_rdms(exact, draw)
                                                       : perturb_global(rho_source, draw);
    RdmSet repaired;
    repaired.num_qubits = noisy.num_qubits;
    for (const auto& [pq, rdm] : noisy.pairs)
      repaired.pairs.emplace(pq, project_physical(rdm.mat));

    ReconstructionResult rec = [&] {
      if (opts.mode == ReconstructionMode::Pure) {
        PureOptions popts;
        popts.restarts = opts.restarts;
        popts.seed = sample_seed;
        return reconstruct_pure(repaired, popts);
      }
      MaxentOptions mopts;
      mopts.tolerance = opts.maxent_tolerance;
      mopts.max_iterations = opts.maxent_iterations;
      return reconstruct_maxent(repaired, mopts);
    }();

    StabilitySample sample;
    sample.index = s;
    sample.residual = rec.residual;
    sample.fidelity = fidelity(rec.state, rho_source);
    sample.converged = rec.converged;
    result.samples.push_back(sample);
  }

  std::vector<double> f;
  f.reserve(result.samples.size());
  for (const auto& s : result.samples) f.push_back(s.fidelity);
  result.mean = std::accumulate(f.begin(), f.end(), 0.0) / f.size();
  result.min = *std::min_element(f.begin(), f.end());
  result.max = *std::max_element(f.begin(), f.end());
  double var = 0.0;
  for (double x : f) var += (x - result.mean) * (x - result.mean);
  result.stddev = f.size() > 1 ? std::sqrt(var / (f.size() - 1)) : 0.0;
  return result;
}

}  // namespace rdmtomo
