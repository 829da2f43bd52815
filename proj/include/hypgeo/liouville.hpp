#pragma once

// Liouville measure on the space of unoriented geodesics of H.

#include <cstdint>
#include <vector>

#include "hypgeo/hyperbolic.hpp"
#include "hypgeo/surface.hpp"

namespace hypgeo {

/// Closed arc of the boundary circle traversed from lo in the positive
/// direction (increasing x, through infinity if needed) up to hi.
struct BoundaryArc {
  BoundaryPoint lo;
  BoundaryPoint hi;
};

struct BoundaryBox {
  BoundaryArc first;
  BoundaryArc second;
};

/// Measure of the geodesics with one endpoint in each arc. Throws
/// std::domain_error when the arcs overlap or touch.
double box_measure(const BoundaryBox& box);

BoundaryBox apply(const MoebiusMap& g, const BoundaryBox& box);

struct ArcMeasure {
  double quadrature = 0.0;
  double boxes = 0.0;
  int refinements = 0;  // dyadic level at which the box sums settled
};

/// Measure of the geodesics crossing the arc from p to q, by integrating
/// 1/2 sin(theta) over the arc and independently by summing box measures.
ArcMeasure arc_crossing_measure(const HPoint& p, const HPoint& q);

struct SurfaceConstants {
  double liouville_length = 0.0;      // l_X(L_X)
  double liouville_self = 0.0;        // i(L_X, L_X)
  double pushforward_factor = 0.0;    // pi / 2
};

SurfaceConstants surface_constants(const SurfaceSpec& spec);

/// Rectangle of (arc coordinate, angle) along a reference geodesic. The
/// angle is measured counterclockwise from the direction of travel.
struct LiouvilleWindow {
  OrientedGeodesic reference{BoundaryPoint::at(0.0), BoundaryPoint::infinity()};
  double x0 = 0.0;
  double x1 = 1.0;
  double theta0 = 0.0;
  double theta1 = 3.141592653589793;
};

struct LiouvilleSample {
  double x = 0.0;
  double theta = 0.0;
  BoundaryGeodesic geodesic{BoundaryPoint::at(0.0), BoundaryPoint::infinity()};
};

/// Geodesics with density 1/2 sin(theta) dtheta dx in the window.
std::vector<LiouvilleSample> sample_liouville(const LiouvilleWindow& window, std::size_t count, std::uint64_t seed);

/// Geodesic through z with Euclidean tangent direction phi.
BoundaryGeodesic geodesic_with_direction(const HPoint& z, double phi);

/// (1 - cos theta) / 2 on [0, pi].
double angle_cdf(double theta);

}  // namespace hypgeo
