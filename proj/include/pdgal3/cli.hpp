// Command surface: system files, JSON reports and the pdgal3 commands.
#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pdgal3/galois3.hpp"

namespace pdgal3::cli {

inline constexpr const char* kSchema = "pdgal3/1";

enum ExitCode { kOk = 0, kParseError = 1, kUnsupported = 2 };

/// Input the commands cannot handle (wrong dimension, missing certificate).
struct Unsupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  int max_order = 4;
  int m_bound = 12;
  int series_order = 8;
};

struct SystemFile {
  RMatrix matrix;
  std::optional<FlagCertificate> flag;
  /// Entries present in the file's "config" object.
  std::optional<int> max_order, m_bound, series_order;
};

/// Bracketed literal such as "[[t/x, 1], [0, 0]]".
RMatrix parse_matrix_literal(const std::string& text);
RMatrix matrix_from_json(const nlohmann::json& j);
/// Rows of expression strings; every entry is re-parsed to check the
/// printer round-trip.
nlohmann::json matrix_to_json(const RMatrix& m);

SystemFile system_from_json(const nlohmann::json& j);
nlohmann::json system_to_json(const RMatrix& m);
/// A path to a system file, or a matrix literal.
SystemFile load_system(const std::string& arg);

nlohmann::json group_to_json(const GroupDescription& g);

/// Config resolution: defaults, then PDGAL3_MAX_ORDER, then the file, then
/// command-line flags.
Config resolve(const Config& flags, const std::vector<std::string>& set_flags, const SystemFile* file);

nlohmann::json analyze(const SystemFile& sys, const Config& cfg);
nlohmann::json construct(const std::string& op, const std::vector<std::string>& inputs);
nlohmann::json check(const std::string& kind, const std::vector<std::string>& args, const Config& cfg);

/// Entry point; returns the exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace pdgal3::cli
