#pragma once

// A closed geodesic flattened into the fundamental polygon.

#include <cstdint>
#include <string>
#include <vector>

#include "hypgeo/hyperbolic.hpp"
#include "hypgeo/surface.hpp"

namespace hypgeo {

struct GeodesicSegment {
  std::uint32_t class_id = 0;
  std::uint32_t pass = 0;
  OrientedGeodesic geodesic;
  /// Arc coordinates of the entry and exit points along `geodesic`.
  double t0 = 0.0;
  double t1 = 0.0;
  HPoint start;
  HPoint end;
  int entry_side = -1;
  int exit_side = -1;

  double length() const { return t1 - t0; }
};

struct SegmentChain {
  std::uint32_t class_id = 0;
  std::vector<GeodesicSegment> segments;
  /// Letters of the sides crossed, in order; a cyclic conjugate of the class word.
  std::string letters;
  double length = 0.0;
  /// Group element whose axis carries the first segment.
  MoebiusMap representative;
};

/// Follows the axis of g through F from side to side until one period has
/// been traversed. Throws NumericalInstabilityError on persistent degeneracy.
SegmentChain trace_chain(const MoebiusMap& g, std::uint32_t class_id, const SurfaceSpec& spec);

/// A chain holding one geodesic arc inside F, given by its endpoints.
SegmentChain arc_chain(const HPoint& from, const HPoint& to, std::uint32_t class_id);

}  // namespace hypgeo
