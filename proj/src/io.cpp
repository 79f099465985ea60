#include "rdmtomo/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace rdmtomo {

namespace {

using nlohmann::ordered_json;

ordered_json complex_to_json(const Complex& z) {
  return ordered_json::array({z.real(), z.imag()});
}

Complex complex_from_json(const ordered_json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw LoadError("state file: complex entries must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

ordered_json vector_to_json(const Vector& v) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

Vector vector_from_json(const ordered_json& j) {
  if (!j.is_array()) throw LoadError("state file: ket payload must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = complex_from_json(j[i]);
  return v;
}

ordered_json matrix_to_json(const Matrix& m) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

Matrix matrix_from_json(const ordered_json& j) {
  if (!j.is_array() || j.empty()) throw LoadError("state file: matrix payload must be an array");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Matrix m(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows)
      throw LoadError("state file: matrix payload is not square");
    for (Eigen::Index c = 0; c < rows; ++c) m(r, c) = complex_from_json(row[c]);
  }
  return m;
}

ordered_json meta_to_json(const StateFileMeta& meta) {
  ordered_json out;
  out["family"] = meta.family;
  if (!meta.params_json.empty()) {
    out["params"] = ordered_json::parse(meta.params_json);
  } else {
    out["params"] = ordered_json::object();
  }
  if (meta.seed) out["seed"] = *meta.seed;
  return out;
}

StateFileMeta meta_from_json(const ordered_json& doc) {
  StateFileMeta meta;
  if (!doc.contains("metadata")) return meta;
  const auto& m = doc.at("metadata");
  if (m.contains("family") && m["family"].is_string()) meta.family = m["family"];
  if (m.contains("params")) meta.params_json = m["params"].dump();
  if (m.contains("seed") && m["seed"].is_number_unsigned())
    meta.seed = m["seed"].get<std::uint64_t>();
  return meta;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw LoadError("write to '" + path + "' failed");
}

ordered_json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Translate the byte offset into a line number for the error message.
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    throw LoadError("'" + path + "' line " + std::to_string(line) + ": " + e.what());
  }
}

int qubits_from_doc(const ordered_json& doc) {
  if (!doc.contains("n") || !doc["n"].is_number_integer())
    throw LoadError("state file: missing qubit count 'n'");
  return doc["n"].get<int>();
}

ordered_json header(int n, const char* kind, const StateFileMeta& meta) {
  ordered_json doc;
  doc["n"] = n;
  doc["kind"] = kind;
  doc["payload"] = nullptr;
  doc["metadata"] = meta_to_json(meta);
  return doc;
}

}  // namespace

void save_state_file(const std::string& path, const Ket& k, const StateFileMeta& meta) {
  ordered_json doc = header(k.num_qubits, "ket", meta);
  doc["payload"] = vector_to_json(k.amps);
  write_text(path, doc.dump(2) + "\n");
}

void save_state_file(const std::string& path, const DensityMatrix& rho,
                     const StateFileMeta& meta) {
  ordered_json doc = header(rho.num_qubits, "density", meta);
  doc["payload"] = matrix_to_json(rho.mat);
  write_text(path, doc.dump(2) + "\n");
}

void save_state_file(const std::string& path, const RdmSet& rdms,
                     const StateFileMeta& meta) {
  ordered_json doc = header(rdms.num_qubits, "rdmset", meta);
  ordered_json pairs = ordered_json::array();
  for (const auto& [pq, rdm] : rdms.pairs) {
    ordered_json entry;
    entry["i"] = pq.first;
    entry["j"] = pq.second;
    entry["mat"] = matrix_to_json(rdm.mat);
    pairs.push_back(std::move(entry));
  }
  doc["payload"] = ordered_json{{"pairs", std::move(pairs)}};
  write_text(path, doc.dump(2) + "\n");
}

StateFile load_state_file(const std::string& path) {
  const ordered_json doc = read_json(path);
  if (!doc.contains("kind") || !doc["kind"].is_string())
    throw LoadError("'" + path + "': missing 'kind'");
  if (!doc.contains("payload")) throw LoadError("'" + path + "': missing 'payload'");
  const std::string kind = doc["kind"];
  const int n = qubits_from_doc(doc);

  StateFile file;
  file.meta = meta_from_json(doc);
  try {
    if (kind == "ket") {
      file.payload = Ket(n, vector_from_json(doc["payload"]));
    } else if (kind == "density") {
      DensityMatrix rho(n, matrix_from_json(doc["payload"]));
      rho.validate_psd();
      file.payload = std::move(rho);
    } else if (kind == "rdmset") {
      const auto& payload = doc["payload"];
      if (!payload.contains("pairs") || !payload["pairs"].is_array())
        throw LoadError("'" + path + "': rdmset payload must contain 'pairs'");
      RdmSet set;
      set.num_qubits = n;
      for (const auto& entry : payload["pairs"]) {
        if (!entry.contains("i") || !entry.contains("j") || !entry.contains("mat"))
          throw LoadError("'" + path + "': rdmset pair entries need i, j, mat");
        const int i = entry["i"].get<int>();
        const int j = entry["j"].get<int>();
        if (i < 0 || j >= n || i >= j)
          throw LoadError("'" + path + "': invalid qubit pair (" + std::to_string(i) +
                          ", " + std::to_string(j) + ")");
        if (set.pairs.count({i, j}))
          throw LoadError("'" + path + "': duplicate qubit pair");
        set.pairs.emplace(QubitPair{i, j}, DensityMatrix(2, matrix_from_json(entry["mat"])));
      }
      file.payload = std::move(set);
    } else {
      throw LoadError("'" + path + "': unknown kind '" + kind + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw LoadError("'" + path + "': " + e.what());
  }
  return file;
}

void save_reconstruction(const std::string& path, const ReconstructionResult& result) {
  ordered_json doc;
  doc["state"] = ordered_json{{"n", result.state.num_qubits},
                              {"kind", "density"},
                              {"payload", matrix_to_json(result.state.mat)}};
  doc["residual"] = result.residual;
  doc["restarts_used"] = result.restarts_used;
  doc["converged"] = result.converged;
  doc["seed"] = result.seed;
  write_text(path, doc.dump(2) + "\n");
}

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace

void write_scan_csv(const std::string& path, const ScanReport& report) {
  std::ostringstream out;
  out << "theta_sphere,phi_sphere,c0,c2,c4,class,min_pt_eig,min_eigen_gap\n";
  auto emit = [&](const ScanRow& row) {
    out << format_double(row.theta_sphere) << ',' << format_double(row.phi_sphere) << ','
        << format_double(row.c0) << ',' << format_double(row.c2) << ','
        << format_double(row.c4) << ',' << to_string(row.label) << ','
        << format_double(row.min_pt_eig) << ',' << format_double(row.min_eigen_gap)
        << '\n';
  };
  for (const auto& row : report.rows) emit(row);
  for (const auto& row : report.curve_rows) emit(row);
  write_text(path, out.str());
}

void write_stability_csv(const std::string& path, const StabilityResult& result) {
  std::ostringstream out;
  out << "sample_index,residual,fidelity,converged\n";
  for (const auto& s : result.samples)
    out << s.index << ',' << format_double(s.residual) << ','
        << format_double(s.fidelity) << ',' << (s.converged ? 1 : 0) << '\n';
  write_text(path, out.str());
}

void write_stability_summary_json(const std::string& path, const StabilityResult& result) {
  ordered_json doc;
  doc["mean"] = result.mean;
  doc["min"] = result.min;
  doc["max"] = result.max;
  doc["stddev"] = result.stddev;
  doc["config"] = ordered_json{{"c", result.config.c},
                               {"d", result.config.d},
                               {"seed", result.config.seed},
                               {"samples", result.config.samples}};
  write_text(path, doc.dump(2) + "\n");
}

}  // namespace rdmtomo
