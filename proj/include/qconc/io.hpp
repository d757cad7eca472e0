#pragma once

// State files and machine-readable reports.
//
// State file (JSON):
//   {"kind": "pure" | "density", "dim": N, "data": [[[re, im], ...], ...]}
// "pure" data is the N x N coefficient matrix A, "density" data the
// N^2 x N^2 matrix, both row-major.
//
// Reports serialize with sorted keys and %.17g floats; non-finite numbers
// are written as null.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qconc/mixed.hpp"

namespace qconc::io {

inline constexpr std::string_view kVersion = "0.1.0";

enum class StateKind { Pure, Density };

using LoadedState = std::variant<PureState, DensityMatrix>;

/// FNV-1a 64-bit digest as 16 hex digits.
inline std::string digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

namespace detail {

inline ComplexMatrix parse_matrix(const nlohmann::json& data, Eigen::Index rows) {
  if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != rows) {
    throw Error(ErrorCode::ParseError, "data must be an array of " + std::to_string(rows) + " rows");
  }
  ComplexMatrix m(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = data[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) {
      throw Error(ErrorCode::ParseError, "row " + std::to_string(i) + " must hold " +
                                             std::to_string(rows) + " entries");
    }
    for (Eigen::Index j = 0; j < rows; ++j) {
      const auto& entry = row[static_cast<std::size_t>(j)];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number()) {
        throw Error(ErrorCode::ParseError, "entries must be [re, im] number pairs");
      }
      m(i, j) = Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  return m;
}

}  // namespace detail

/// Parses and validates a state file body.
inline LoadedState parse_state(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object() || !doc.contains("kind") || !doc.contains("dim") || !doc.contains("data")) {
    throw Error(ErrorCode::ParseError, "state file needs kind, dim and data");
  }
  if (!doc["kind"].is_string() || !doc["dim"].is_number_integer()) {
    throw Error(ErrorCode::ParseError, "kind must be a string and dim an integer");
  }
  const std::string kind = doc["kind"].get<std::string>();
  const auto dim = doc["dim"].get<long long>();
  if (dim < 2 || dim > 10) throw Error(ErrorCode::ParseError, "dim must lie in 2..10");
  const auto n = static_cast<Eigen::Index>(dim);
  try {
    if (kind == "pure") {
      return PureState::from_coefficients(detail::parse_matrix(doc["data"], n), 1e-8);
    }
    if (kind == "density") {
      return DensityMatrix::validate(detail::parse_matrix(doc["data"], n * n), n, 1e-8);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    throw Error(ErrorCode::ValidationError, e.what());
  }
  throw Error(ErrorCode::ParseError, "kind must be \"pure\" or \"density\"");
}

inline LoadedState load_state(const std::string& path) { return parse_state(read_file(path)); }

/// Loads a file and promotes a pure state to its density matrix if needed.
inline DensityMatrix load_density(const std::string& path) {
  auto state = load_state(path);
  if (auto* psi = std::get_if<PureState>(&state)) return DensityMatrix::pure(*psi);
  return std::get<DensityMatrix>(std::move(state));
}

inline PureState load_pure(const std::string& path) {
  auto state = load_state(path);
  if (auto* psi = std::get_if<PureState>(&state)) return *psi;
  throw Error(ErrorCode::ValidationError, path + " holds a density matrix, a pure state is required");
}

inline std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

/// One matrix row per line.
inline std::string state_json(std::string_view kind, const ComplexMatrix& m, Eigen::Index dim) {
  std::ostringstream os;
  os << "{\n  \"kind\": \"" << kind << "\",\n  \"dim\": " << dim << ",\n  \"data\": [\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << "    [";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      os << (j ? ", [" : "[") << format_number(m(i, j).real()) << ", " << format_number(m(i, j).imag()) << "]";
    }
    os << (i + 1 < m.rows() ? "],\n" : "]\n");
  }
  os << "  ]\n}\n";
  return os.str();
}

}  // namespace detail

inline std::string state_file(const PureState& psi) { return detail::state_json("pure", psi.coeffs(), psi.dim()); }

inline std::string state_file(const DensityMatrix& rho) {
  return detail::state_json("density", rho.matrix(), rho.dim());
}

struct Report {
  std::string command;
  std::string input_digest;
  std::map<std::string, double> results;
  std::map<std::string, bool> flags;
  std::map<std::string, std::string> text;
  std::vector<std::string> warnings;
  std::string version{kVersion};

  friend bool operator==(const Report&, const Report&) = default;
};

inline std::string serialize(const Report& r) {
  auto quote = [](const std::string& s) { return nlohmann::json(s).dump(); };
  std::ostringstream os;
  os << "{\n  \"command\": " << quote(r.command) << ",\n  \"flags\": {";
  bool first = true;
  for (const auto& [k, v] : r.flags) {
    os << (first ? "\n    " : ",\n    ") << quote(k) << ": " << (v ? "true" : "false");
    first = false;
  }
  os << (first ? "}" : "\n  }") << ",\n  \"input_digest\": " << quote(r.input_digest)
     << ",\n  \"results\": {";
  first = true;
  for (const auto& [k, v] : r.results) {
    os << (first ? "\n    " : ",\n    ") << quote(k) << ": " << format_number(v);
    first = false;
  }
  os << (first ? "}" : "\n  }") << ",\n  \"text\": {";
  first = true;
  for (const auto& [k, v] : r.text) {
    os << (first ? "\n    " : ",\n    ") << quote(k) << ": " << quote(v);
    first = false;
  }
  os << (first ? "}" : "\n  }") << ",\n  \"version\": " << quote(r.version) << ",\n  \"warnings\": [";
  first = true;
  for (const auto& w : r.warnings) {
    os << (first ? "" : ", ") << quote(w);
    first = false;
  }
  os << "]\n}\n";
  return os.str();
}

inline Report parse_report(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  Report r;
  try {
    r.command = doc.at("command").get<std::string>();
    r.input_digest = doc.at("input_digest").get<std::string>();
    r.version = doc.at("version").get<std::string>();
    for (const auto& [k, v] : doc.at("flags").items()) r.flags[k] = v.get<bool>();
    for (const auto& [k, v] : doc.at("results").items()) {
      r.results[k] = v.is_null() ? std::nan("") : v.get<double>();
    }
    for (const auto& [k, v] : doc.at("text").items()) r.text[k] = v.get<std::string>();
    for (const auto& w : doc.at("warnings")) r.warnings.push_back(w.get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return r;
}

}  // namespace qconc::io
