#pragma once

// Closed geodesics of length <= T as unoriented primitive conjugacy classes.

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "hypgeo/hyperbolic.hpp"
#include "hypgeo/surface.hpp"
#include "hypgeo/words.hpp"

namespace hypgeo {

struct ClosedGeodesicClass {
  CyclicWord word;
  /// Representative of the primitive root.
  MoebiusMap matrix;
  double length = 0.0;
  /// Largest k with k * length <= T (1 when powers are excluded).
  int max_power = 1;

  /// Sum of k over k = 1..max_power.
  long long power_weight() const { return static_cast<long long>(max_power) * (max_power + 1) / 2; }
};

struct EnumerateOptions {
  bool include_powers = true;
  std::size_t max_tiles = 50'000'000;
};

struct EnumerationStats {
  std::size_t tiles = 0;
  std::size_t borderline_excluded = 0;
  std::size_t longest_tile_word = 0;
};

/// Sorted by (length, word). Throws ResourceError when the tile guard trips.
std::vector<ClosedGeodesicClass> enumerate_classes(const SurfaceSpec& spec, double T,
                                                   const EnumerateOptions& options = {},
                                                   EnumerationStats* stats = nullptr);

/// Primitive root of a free-group word class, with k_max at cutoff T.
ClosedGeodesicClass make_class(const SurfaceSpec& spec, std::string_view word, double T, bool include_powers = true);

MoebiusMap word_to_matrix(std::string_view word, const SurfaceSpec& spec);

int max_power(double length, double T);

/// Sum over classes of sum_{k <= k_max} k * length.
double count_length(const std::vector<ClosedGeodesicClass>& classes);

/// Number of orbit points h * z0 (z0 moved into F first) within distance T.
std::size_t orbit_count(const HPoint& z0, double T, const SurfaceSpec& spec, std::size_t max_tiles = 200'000'000);

struct CacheHeader {
  int version = 0;
  std::string surface;
  std::string profile;
  double T = 0.0;
  bool include_powers = true;
  std::size_t count = 0;
};

inline constexpr int cache_version = 1;

/// Identifier of the active tolerance profile.
std::string tolerance_profile();

void cache_save(const std::vector<ClosedGeodesicClass>& classes, const CacheHeader& header,
                const std::filesystem::path& path);

/// Throws CacheError on a version, surface, profile, T or power-mode
/// mismatch, or on any truncation or parse failure.
std::vector<ClosedGeodesicClass> cache_load(const std::filesystem::path& path, const CacheHeader& expected);

}  // namespace hypgeo
