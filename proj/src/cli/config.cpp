#include "wiretap/cli/config.hpp"

#include <fstream>

#include "wiretap/errors.hpp"

namespace wiretap::cli {

using nlohmann::json;

std::uint64_t RunConfig::require_seed() const {
  if (!seed) throw ConfigError(command + ": a seed is required (--seed, WIRETAP_SEED or \"seed\" in the config)");
  return *seed;
}

RunConfig config_from_json(const std::string& command, json doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  RunConfig cfg;
  cfg.command = command;
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ConfigError("config: seed must be a non-negative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
    doc.erase("seed");
  }
  cfg.params = std::move(doc);
  return cfg;
}

RunConfig load_config(const std::string& command, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }
  return config_from_json(command, std::move(doc));
}

std::uint64_t config_hash(const RunConfig& cfg) {
  const std::string text = cfg.command + "\n" + cfg.params.dump() + "\n" + convention_name(cfg.convention);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

LogConvention parse_convention(const std::string& text) {
  if (text == "full") return LogConvention::full;
  if (text == "half") return LogConvention::half;
  throw ConfigError("convention must be 'full' or 'half', got '" + text + "'");
}

std::string convention_name(LogConvention conv) { return conv == LogConvention::half ? "half" : "full"; }

ComplexMat parse_matrix(const json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty())
    throw ConfigError(std::string(what) + ": expected a non-empty list of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ConfigError(std::string(what) + ": rows differ in length");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& e = row[static_cast<std::size_t>(c)];
      if (e.is_number()) {
        m(r, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw ConfigError(std::string(what) + ": entries must be numbers or [re, im] pairs");
      }
    }
  }
  if (!m.allFinite()) throw ConfigError(std::string(what) + ": non-finite entry");
  return m;
}

json matrix_to_json(const ComplexMat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

namespace {

const json& field(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("config: missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

double get_double(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number()) throw ConfigError(std::string("config: '") + key + "' must be a number");
  return v.get<double>();
}

double get_double(const json& j, const char* key, double fallback) {
  return j.contains(key) ? get_double(j, key) : fallback;
}

int get_int(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number_integer()) throw ConfigError(std::string("config: '") + key + "' must be an integer");
  return v.get<int>();
}

int get_int(const json& j, const char* key, int fallback) { return j.contains(key) ? get_int(j, key) : fallback; }

std::vector<double> get_doubles(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) throw ConfigError(std::string("config: '") + key + "' must be a number or a list");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(std::string("config: '") + key + "' must contain numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<int> get_ints(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (v.is_number_integer()) return {v.get<int>()};
  if (!v.is_array()) throw ConfigError(std::string("config: '") + key + "' must be an integer or a list");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) throw ConfigError(std::string("config: '") + key + "' must contain integers");
    out.push_back(e.get<int>());
  }
  return out;
}

}  // namespace wiretap::cli
