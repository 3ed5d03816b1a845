#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "wiretap/channel.hpp"
#include "wiretap/rates.hpp"

namespace wiretap::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Parameters of one command invocation. `params` holds the command-specific
/// section of the config file; flags fill the remaining fields.
struct RunConfig {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  std::optional<std::uint64_t> seed;
  std::string output_path;
  unsigned threads = 1;
  LogConvention convention = LogConvention::full;

  /// Seed or ConfigError for commands that draw random numbers.
  [[nodiscard]] std::uint64_t require_seed() const;
};

/// Reads a JSON config file. A top-level "seed" is moved into RunConfig::seed.
RunConfig load_config(const std::string& command, const std::string& path);
RunConfig config_from_json(const std::string& command, nlohmann::json doc);

/// FNV-1a over command, canonical params and convention. Seed and thread
/// count are excluded.
std::uint64_t config_hash(const RunConfig& cfg);

LogConvention parse_convention(const std::string& text);
std::string convention_name(LogConvention conv);

/// Matrix as a list of rows; each entry is [re, im] or a plain real number.
ComplexMat parse_matrix(const nlohmann::json& j, const char* what);
nlohmann::json matrix_to_json(const ComplexMat& m);

// Typed field access with ConfigError on missing or malformed values.
double get_double(const nlohmann::json& j, const char* key);
double get_double(const nlohmann::json& j, const char* key, double fallback);
int get_int(const nlohmann::json& j, const char* key);
int get_int(const nlohmann::json& j, const char* key, int fallback);
std::vector<double> get_doubles(const nlohmann::json& j, const char* key);
std::vector<int> get_ints(const nlohmann::json& j, const char* key);

}  // namespace wiretap::cli
