#pragma once

// Batch front door: configuration, per-stage artifacts and the report.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypgeo/hyperbolic.hpp"

namespace hypgeo {

struct RunConfig {
  std::string surface = "punctured_torus";
  std::vector<double> T{6.0, 8.0, 9.0, 10.0};
  int cells = 25;
  double core_eps = 0.2;
  double delta_pos = 1e-7;
  std::string profile;
  std::uint64_t seed = 20240601;
  std::filesystem::path cache_dir = "cache";
  std::filesystem::path out_dir = "out";
  bool include_powers = true;
  bool unsigned_winding = true;
  int fixture_n_max = 30;
  int direction_bins = 8;
  std::vector<double> cusp_r{0.5, 0.25, 0.125};
  HPoint arc_start{-0.3, 0.9};
  double arc_direction = 0.4;
  double arc_length = 1.0;
  bool force = false;
};

/// Reads a JSON config; unknown keys are a ConfigError.
RunConfig load_config(const std::filesystem::path& path);
void apply_json(RunConfig& config, const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& config);

/// Checks ranges, fills the tolerance profile, creates and probes the
/// directories. Throws ConfigError.
void validate_config(RunConfig& config);

/// Artifact locations; names embed surface, T and the profile hash.
struct ArtifactNames {
  const RunConfig& config;

  std::filesystem::path cache(double T) const;
  std::filesystem::path crossings(double T) const;
  std::filesystem::path totals(double T) const;
  std::filesystem::path excursion_table(double T) const;
  std::filesystem::path excursion_summary(double T) const;
  std::filesystem::path cells(double T) const;
  std::filesystem::path enumeration_summary() const;
  std::filesystem::path liouville() const;
  std::filesystem::path fixture() const;
  std::filesystem::path cusp_mass() const;
  std::filesystem::path convergence() const;
  std::filesystem::path report() const;
};

std::string format_T(double T);

void cmd_enumerate(const RunConfig& config);
void cmd_intersect(const RunConfig& config);
void cmd_excursions(const RunConfig& config);
void cmd_liouville_check(const RunConfig& config);
void cmd_report(const RunConfig& config);
void cmd_all(const RunConfig& config);

/// "key = value" lines; '#' comments and '[section]' headers are skipped,
/// keys are prefixed by nothing (sections are for readers only).
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

}  // namespace hypgeo
