#pragma once

#include "rdmtomo/linalg.hpp"
#include "rdmtomo/reconstruction.hpp"
#include "rdmtomo/rng.hpp"
#include "rdmtomo/uniqueness.hpp"

#include <cstdint>
#include <vector>

namespace rdmtomo {

/// Gaussian coefficient-noise model: every non-identity Pauli coefficient
/// receives independent additive noise of standard deviation c / (3 d).
struct NoiseConfig {
  double c = 0.11;  // error percentage (dimensionless)
  int d = 16;       // Pauli-dimension parameter (16 for 4 qubits)
  std::uint64_t seed = 1;
  int samples = 90;

  double sigma() const { return c / (3.0 * d); }
};

/// Independent per-pair coefficient noise; Hermiticity and trace preserved
/// exactly, positivity not.
RdmSet perturb_rdms(const RdmSet& targets, const NoiseConfig& cfg);

/// Alternative scope: perturb the global 255-coefficient expansion, then
/// trace down to the pair marginals.
RdmSet perturb_global(const DensityMatrix& state, const NoiseConfig& cfg);

/// Nearest (Frobenius) positive-semidefinite unit-trace matrix: simplex
/// projection of the spectrum.
DensityMatrix project_physical(const Matrix& rho);

enum class ReconstructionMode { Pure, Maxent };
enum class NoiseScope { PerPair, Global };

struct StabilitySample {
  int index = 0;
  double residual = 0.0;
  double fidelity = 0.0;
  bool converged = false;
};

struct StabilityResult {
  std::vector<StabilitySample> samples;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double stddev = 0.0;
  NoiseConfig config;
};

struct StabilityOptions {
  ReconstructionMode mode = ReconstructionMode::Pure;
  NoiseScope scope = NoiseScope::PerPair;
  int restarts = 20;            // pure mode
  double maxent_tolerance = 1e-6;
  int maxent_iterations = 500;
};

/// For each sample: perturb, repair physicality per entry, reconstruct,
/// score fidelity against the source. Per-sample seeds are derived from the
/// base seed, so the study is reproducible and samples are independent.
StabilityResult stability_study(const Ket& source, const NoiseConfig& cfg,
                                const StabilityOptions& opts);

}  // namespace rdmtomo
