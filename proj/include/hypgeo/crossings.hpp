#pragma once

// Transverse crossings among segment chains in the fundamental polygon.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "hypgeo/chains.hpp"
#include "hypgeo/enumerator.hpp"

namespace hypgeo {

inline constexpr double near_tangent_angle = 1e-7;

struct CrossingRecord {
  HPoint point;
  std::uint32_t class_i = 0;
  std::uint32_t class_j = 0;
  std::uint32_t pass_i = 0;
  std::uint32_t pass_j = 0;
  /// Directions of travel of the two chains at the point.
  double dir_i = 0.0;
  double dir_j = 0.0;
  /// Angle from the first tangent line to the second, in (0, pi).
  double angle = 0.0;
  /// Product of the power weights of the two classes.
  long long weight = 1;
  int multiplicity = 1;
  bool near_tangent = false;
};

struct SegmentHit {
  HPoint point;
  double angle = 0.0;
  double dir1 = 0.0;
  double dir2 = 0.0;
};

/// Crossing of two segments, with endpoints included up to tol::geom in arc
/// length. Collinear segments never cross.
std::optional<SegmentHit> segment_crossing(const GeodesicSegment& s1, const GeodesicSegment& s2);

struct CrossingOptions {
  /// Per class id; missing entries count as 1.
  std::vector<long long> power_weights;
  /// Grid cell size in (x, log y); 0 selects the clamped median segment length.
  double cell_size = 0.0;
};

struct CrossingStats {
  std::size_t segments = 0;
  std::size_t cells = 0;
  std::size_t pair_tests = 0;
  std::size_t boundary_duplicates = 0;
  double cell_size = 0.0;
};

/// Every transverse crossing among the chains, once per point of the
/// surface: crossings on the polygon boundary are reported at the copy on
/// the lowest-index side. Sorted by (class_i, class_j, pass_i, pass_j, x, y).
std::vector<CrossingRecord> find_crossings(const std::vector<SegmentChain>& chains, const SurfaceSpec& spec,
                                           const CrossingOptions& options = {}, CrossingStats* stats = nullptr);

/// Same contract as find_crossings, by testing all segment pairs.
std::vector<CrossingRecord> brute_force_crossings(const std::vector<SegmentChain>& chains, const SurfaceSpec& spec,
                                                  const CrossingOptions& options = {});

/// Crossings of every chain with a probe chain whose segments lie in the
/// interior of the polygon. class_i is the chain's id, class_j the probe's.
std::vector<CrossingRecord> crossings_with_probe(const std::vector<SegmentChain>& chains, const SegmentChain& probe);

/// Ordered-convention total: each record contributes 2 * weight.
double weighted_total(const std::vector<CrossingRecord>& records, std::size_t class_count);

/// Weights K_i of the classes in order.
std::vector<long long> power_weights(const std::vector<ClosedGeodesicClass>& classes);

/// Merges records of the same class pair whose points lie within delta.
std::vector<CrossingRecord> multiplicity_collapse(const std::vector<CrossingRecord>& records, double delta = 1e-7);

void write_crossings_csv(const std::vector<CrossingRecord>& records, const std::filesystem::path& path);
std::vector<CrossingRecord> read_crossings_csv(const std::filesystem::path& path);

}  // namespace hypgeo
