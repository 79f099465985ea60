#pragma once

#include "rdmtomo/linalg.hpp"
#include "rdmtomo/uniqueness.hpp"

#include <cstdint>
#include <optional>

namespace rdmtomo {

struct ReconstructionResult {
  DensityMatrix state;
  double residual = 0.0;
  int restarts_used = 0;
  bool converged = false;
  std::uint64_t seed = 0;
};

/// Root-sum-square Frobenius distance between the candidate's two-qubit
/// marginals and the targets.
double rdm_residual(const DensityMatrix& candidate, const RdmSet& targets);

struct PureOptions {
  int restarts = 20;
  std::uint64_t seed = 1;
  double tolerance = 1e-8;  // residual at which a restart counts as converged
  int max_iterations = 500;
  // Inconsistent (noisy) targets bottom out on an almost-flat residual
  // valley; a restart stalls once the relative improvement across the
  // window drops below this. Consistent targets reach the tolerance first.
  double stall_improvement = 1e-4;
  int stall_window = 50;
};

/// Best-of-restarts damped least-squares descent over unit state vectors,
/// renormalized after every accepted step. Deterministic given (targets,
/// restarts, seed); the returned state is pure with the largest-magnitude
/// amplitude made real positive.
ReconstructionResult reconstruct_pure(const RdmSet& targets, int restarts = 20,
                                      std::uint64_t seed = 1);
ReconstructionResult reconstruct_pure(const RdmSet& targets, const PureOptions& opts);

struct MaxentOptions {
  double tolerance = 1e-6;
  int max_iterations = 500;
};

/// Gibbs-family search: rho(H) = e^-H / Tr(e^-H) with H a traceless sum of
/// weight-<=2 Pauli terms, started from H = 0 (the maximally mixed state)
/// and driven to minimize the RDM residual.
ReconstructionResult reconstruct_maxent(const RdmSet& targets, double tolerance = 1e-6);
ReconstructionResult reconstruct_maxent(const RdmSet& targets, const MaxentOptions& opts);

/// Searches for a mixed state with the same 2-RDMs as psi but fidelity
/// bounded away from 1. Returns the separable-ensemble construction when psi
/// lies in the symmetric (c0, c2, c4) family with a PPT marginal, otherwise
/// falls back to the max-entropy search. Absence is not a uniqueness
/// certificate.
std::optional<DensityMatrix> witness_not_uda(const Ket& psi, const RdmSet& targets);

}  // namespace rdmtomo
