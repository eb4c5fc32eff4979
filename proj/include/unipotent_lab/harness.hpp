#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace ulab {

inline constexpr const char* kSchemaVersion = "unipotent-lab/run/v1";
inline constexpr const char* kCodeVersion = "ulab-1";
inline constexpr const char* kCacheEnv = "UNIPOTENT_LAB_CACHE";

struct GridPoint {
  int n = 0;
  std::uint32_t q = 0;
  std::uint32_t l = 0;
};

struct AffinePoint {
  int n = 0;
  std::uint32_t q = 0;
  int m = 2;
};

struct ExperimentConfig {
  std::vector<GridPoint> grid;
  std::vector<AffinePoint> affine;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::string format = "json";
  std::optional<std::filesystem::path> cache_dir;
  std::uint64_t max_group_order = 10000;  // pipeline bound; GL3(F3) = 11232 lies above it
  std::uint64_t annihilator_bound = 12000;
  std::uint64_t truncated_bound = 100000;
  int truncation_level = 2;

  /// Throws ConfigError on any invalid field.
  void validate() const;
  nlohmann::json to_json() const;
};

/// Flat `key = value` lines; values are JSON literals (arrays, numbers, strings) or bare words.
/// `#` starts a comment. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& file);

/// Content-addressed artifact store; each file carries a checksum header.
class Cache {
 public:
  explicit Cache(std::filesystem::path dir);

  static std::string key(const std::string& constructor, const nlohmann::json& params,
                         const std::string& version = kCodeVersion);
  std::optional<std::string> get(const std::string& key);
  /// Write-to-temp then rename. I/O failures become warnings.
  void put(const std::string& key, const std::string& artifact);

  const std::filesystem::path& dir() const { return dir_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> warnings_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

std::uint64_t fnv1a(const std::string& data);

/// Every suite of one grid point; each suite object has "status": pass | fail | skipped.
nlohmann::json run_point(const GridPoint& p, const ExperimentConfig& cfg);
nlohmann::json run_affine_point(const AffinePoint& p, const ExperimentConfig& cfg);

struct RunReport {
  nlohmann::json json;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;
  int exit_code() const { return failed ? 1 : 0; }
};

RunReport run(const ExperimentConfig& cfg);

/// Drops every "timing_ms" member, recursively.
nlohmann::json strip_timing(nlohmann::json j);
/// json: the report; csv: decomposition matrices, one block per grid point. Throws ConfigError.
std::string emit(const RunReport& report, const std::string& format);

}  // namespace ulab
