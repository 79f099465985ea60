#pragma once

#include "rdmtomo/linalg.hpp"
#include "rdmtomo/states.hpp"

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace rdmtomo {

using QubitPair = std::pair<int, int>;

/// All C(n,2) two-qubit marginals of an n-qubit state, keyed by (i, j)
/// with i < j. Entries are Hermitian and unit trace; they need not be
/// jointly compatible (noisy sets are legal inputs downstream).
struct RdmSet {
  int num_qubits = 0;
  std::map<QubitPair, DensityMatrix> pairs;
};

RdmSet all_2rdms(const DensityMatrix& state);

/// Spectrum of the shared 2-RDM, split into the three symmetric-subspace
/// eigenvalues (descending) and the antisymmetric (singlet) weight.
struct RdmSpectrum {
  std::array<double, 4> eigenvalues{};  // lam1 >= lam2 >= lam3, then lam_anti
  bool symmetric_support = false;

  double min_gap() const;       // smallest gap among the three symmetric ones
  double second_largest() const { return eigenvalues[1]; }
};

struct UdpVerdict {
  bool holds = false;
  RdmSpectrum spectrum;
};

/// Eigenvalue non-degeneracy certificate: the three symmetric eigenvalues
/// are pairwise distinct (gap > 1e-8) and each exceeds 1e-8.
UdpVerdict udp_condition(const SymmetricParams& p);

/// Entries of the shared 2-RDM in the natural basis (|00>,|01>,|10>,|11>):
///   [ b 0 0 c ]
///   [ 0 d d 0 ]      a = c0^2 + c2^2/6   b = c4^2 + c2^2/6
///   [ 0 d d 0 ]      c = (c0 + c4) c2 / sqrt(6)   d = c2^2 / 3
///   [ c 0 0 a ]
struct SymmetricRdmForm {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

  Matrix assemble() const;
};

SymmetricRdmForm closed_form_rdm(const SymmetricParams& p);

/// Exact shared 2-RDM obtained by tracing the constructed state.
DensityMatrix exact_rdm(const SymmetricParams& p);

struct PptVerdict {
  bool inequalities_hold = false;  // the oracle verdict (authoritative)
  double min_pt_eigenvalue = 0.0;
  bool closed_form_holds = false;  // d^2 <= ab and d >= |c| (sign-fixed form)
  bool printed_form_holds = false; // the literal inequality pair, diagnostic
  bool closed_form_matches_oracle() const {
    return closed_form_holds == inequalities_hold;
  }
};

/// PPT test with a dual route: evaluates the closed-form inequalities and
/// the partial-transpose minimum-eigenvalue oracle on the exact 2-RDM. The
/// boolean verdict is always the oracle's.
PptVerdict ppt_test(const SymmetricParams& p);

enum class StateClass { A, B, C, Unknown };

const char* to_string(StateClass c);

struct Classification {
  StateClass label = StateClass::Unknown;
  UdpVerdict udp;
  PptVerdict ppt;
  int rdm_rank = 0;
  std::string diagnostic;
};

/// Steps 1-3 composition: C iff non-degenerate spectrum, PPT marginal and
/// rank > 1; A iff GHZ-type (c2 = 0 with both c0, c4 nonzero); Unknown
/// otherwise (no decision procedure exists outside these regions).
Classification classify(const SymmetricParams& p);

struct SeparableComponent {
  double weight = 0.0;
  Matrix alpha;  // 2x2 pure single-qubit projector
};

/// Product-state ensemble {(p_i, alpha_i)} with sum_i p_i alpha_i (x) alpha_i
/// equal to the target 2-RDM.
struct SeparableDecomposition {
  std::vector<SeparableComponent> components;
  double filter_epsilon = 0.0;

  Matrix resynthesize_pair() const;  // sum p_i alpha_i (x) alpha_i
};

/// Filter construction: conjugate the 2-RDM into Bell-diagonal form with
/// V = diag(e^eps, e^-eps), split into the six (I +/- sigma_k)/2 product
/// projectors, and pull back through V^-1.
SeparableDecomposition separable_decomposition(const SymmetricParams& p);

/// rho4 = sum_i p_i alpha_i^(x4); every 2-RDM equals the decomposition target.
DensityMatrix build_counterexample(const SeparableDecomposition& dec);

struct ScanRow {
  double theta_sphere = 0.0;
  double phi_sphere = 0.0;
  double c0 = 0.0, c2 = 0.0, c4 = 0.0;
  StateClass label = StateClass::Unknown;
  double min_pt_eig = 0.0;
  double min_eigen_gap = 0.0;
};

struct ScanReport {
  std::vector<ScanRow> rows;
  std::vector<ScanRow> curve_rows;   // the ten experimental points
  long count_c = 0;
  long count_a = 0;
  long count_unknown = 0;
  long closed_form_mismatches = 0;   // vs oracle, boundary band excluded
  long printed_form_mismatches = 0;  // literal inequalities vs oracle
  long boundary_skipped = 0;         // |min PT eigenvalue| <= 1e-9
  bool curve_all_class_c = false;
};

/// Latitude-longitude scan of the unit (c0,c2,c4) sphere; single-sample
/// poles. Grid points are classified independently and merged by index.
ScanReport scan_region(int resolution);

}  // namespace rdmtomo
