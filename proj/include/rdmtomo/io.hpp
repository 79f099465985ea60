#pragma once

#include "rdmtomo/linalg.hpp"
#include "rdmtomo/noise.hpp"
#include "rdmtomo/reconstruction.hpp"
#include "rdmtomo/uniqueness.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace rdmtomo {

/// Raised when a state file cannot be parsed or violates its invariants.
struct LoadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StateFileMeta {
  std::string family;          // "ghz", "w", "psis", "dicke", "" when unknown
  std::string params_json;     // family parameters, serialized JSON object
  std::optional<std::uint64_t> seed;
};

struct StateFile {
  std::variant<std::monostate, Ket, DensityMatrix, RdmSet> payload;
  StateFileMeta meta;

  bool is_ket() const { return std::holds_alternative<Ket>(payload); }
  bool is_density() const { return std::holds_alternative<DensityMatrix>(payload); }
  bool is_rdmset() const { return std::holds_alternative<RdmSet>(payload); }
};

void save_state_file(const std::string& path, const Ket& k, const StateFileMeta& meta = {});
void save_state_file(const std::string& path, const DensityMatrix& rho,
                     const StateFileMeta& meta = {});
void save_state_file(const std::string& path, const RdmSet& rdms,
                     const StateFileMeta& meta = {});

StateFile load_state_file(const std::string& path);

void save_reconstruction(const std::string& path, const ReconstructionResult& result);

void write_scan_csv(const std::string& path, const ScanReport& report);
void write_stability_csv(const std::string& path, const StabilityResult& result);
void write_stability_summary_json(const std::string& path, const StabilityResult& result);

}  // namespace rdmtomo
