#pragma once

// Upper half-plane primitives: Moebius maps, boundary points, geodesics,
// distances and transverse crossings.

#include <array>
#include <cmath>
#include <optional>
#include <string>

namespace hypgeo {

namespace tol {
/// Algebraic identities (determinants, exact matrix relations).
inline constexpr double alg = 1e-12;
/// Geometric predicates (point on side, point on geodesic).
inline constexpr double geom = 1e-9;
/// Width of the band around |trace| = 2 treated as parabolic.
inline constexpr double parabolic_band = 1e-10;
}  // namespace tol

struct HPoint {
  double x = 0.0;
  double y = 1.0;
};

/// A point of R u {inf}. Infinity is an explicit state, never a large float.
struct BoundaryPoint {
  double x = 0.0;
  bool infinite = false;

  static constexpr BoundaryPoint at(double v) { return {v, false}; }
  static constexpr BoundaryPoint infinity() { return {0.0, true}; }

  friend bool operator==(const BoundaryPoint& p, const BoundaryPoint& q) {
    if (p.infinite || q.infinite) return p.infinite == q.infinite;
    return p.x == q.x;
  }
};

bool approx_equal(const BoundaryPoint& p, const BoundaryPoint& q, double eps);

enum class MapKind { identity, elliptic, parabolic, hyperbolic };

std::string to_string(MapKind kind);

/// Element of PSL(2,R). Entries are rescaled to unit determinant and the
/// sign is fixed so the first nonzero entry is positive; g and -g compare equal.
class MoebiusMap {
 public:
  MoebiusMap() = default;
  MoebiusMap(double a, double b, double c, double d);

  static MoebiusMap identity() { return {}; }

  double a() const { return m_[0]; }
  double b() const { return m_[1]; }
  double c() const { return m_[2]; }
  double d() const { return m_[3]; }
  const std::array<double, 4>& entries() const { return m_; }

  double trace() const { return m_[0] + m_[3]; }
  double det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

  MoebiusMap inverse() const;
  MoebiusMap operator*(const MoebiusMap& rhs) const;

  HPoint apply(const HPoint& z) const;
  BoundaryPoint apply(const BoundaryPoint& p) const;

  friend bool operator==(const MoebiusMap& g, const MoebiusMap& h) { return g.m_ == h.m_; }

 private:
  std::array<double, 4> m_{1.0, 0.0, 0.0, 1.0};
};

bool approx_equal(const MoebiusMap& g, const MoebiusMap& h, double eps);

/// Unoriented geodesic of H given by its two endpoints, stored sorted
/// (finite ascending, infinity last) so equality is swap-invariant.
class BoundaryGeodesic {
 public:
  BoundaryGeodesic(BoundaryPoint p, BoundaryPoint q);

  const BoundaryPoint& first() const { return e_[0]; }
  const BoundaryPoint& second() const { return e_[1]; }

  bool is_vertical() const { return e_[1].infinite; }
  /// Real part of the vertical line (only when is_vertical()).
  double foot() const { return e_[0].x; }
  double center() const { return 0.5 * (e_[0].x + e_[1].x); }
  double radius() const { return 0.5 * (e_[1].x - e_[0].x); }

  friend bool operator==(const BoundaryGeodesic& g, const BoundaryGeodesic& h) {
    return g.e_[0] == h.e_[0] && g.e_[1] == h.e_[1];
  }

 private:
  std::array<BoundaryPoint, 2> e_;
};

bool approx_equal(const BoundaryGeodesic& g, const BoundaryGeodesic& h, double eps);

/// Geodesic traversed from `from` towards `to`. Points along it carry an
/// arc-length coordinate t (t = 0 at the apex, or at y = 1 on vertical lines).
struct OrientedGeodesic {
  BoundaryPoint from;
  BoundaryPoint to;

  BoundaryGeodesic unoriented() const { return {from, to}; }
  double coordinate(const HPoint& z) const;
  HPoint point_at(double t) const;
  /// Euclidean angle of the unit tangent of travel at z, in (-pi, pi].
  double direction(const HPoint& z) const;
  OrientedGeodesic reversed() const { return {to, from}; }
};

/// Coordinate of the orthogonal projection of z onto geo.
double foot_coordinate(const OrientedGeodesic& geo, const HPoint& z);

OrientedGeodesic apply(const MoebiusMap& g, const OrientedGeodesic& geo);
BoundaryGeodesic apply(const MoebiusMap& g, const BoundaryGeodesic& geo);

/// Geodesic through two distinct points of H, oriented from p to q.
OrientedGeodesic geodesic_through(const HPoint& p, const HPoint& q);

MapKind classify(const MoebiusMap& g);

/// 2 arccosh(|tr|/2); throws std::domain_error unless g is hyperbolic.
double translation_length(const MoebiusMap& g);

/// Axis oriented from the repelling to the attracting fixed point.
OrientedGeodesic oriented_axis(const MoebiusMap& g);
BoundaryGeodesic axis(const MoebiusMap& g);

/// Hyperbolic translation along `along` by signed distance `distance`.
MoebiusMap translation_along(const OrientedGeodesic& along, double distance);

double hyp_distance(const HPoint& p, const HPoint& q);

/// sinh of the signed distance from z to the geodesic; positive on the side
/// away from the real axis for semicircles and on the right for vertical lines.
double signed_sinh_distance(const BoundaryGeodesic& geo, const HPoint& z);
double distance_to_line(const BoundaryGeodesic& geo, const HPoint& z);

struct LineCrossing {
  HPoint point;
  /// Angle from the first line to the second, counterclockwise, folded to (0, pi).
  double angle = 0.0;
};

/// Transverse crossing of two distinct geodesics; empty when unlinked or
/// asymptotic. Identical geodesics throw std::domain_error.
std::optional<LineCrossing> intersect_lines(const BoundaryGeodesic& g1, const BoundaryGeodesic& g2);

/// Unoriented angle between two tangent directions (radians), in [0, pi).
double fold_angle(double from_direction, double to_direction);

}  // namespace hypgeo
