#include "hypgeo/hyperbolic.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace hypgeo {

namespace {

// Exterior point of the arc cut by {p, q}: true when x lies strictly
// between p and q on the side of the circle that avoids infinity.
bool strictly_between(const BoundaryPoint& p, const BoundaryPoint& q, const BoundaryPoint& x) {
  if (x.infinite) return false;
  if (q.infinite) return x.x > p.x;
  if (p.infinite) return x.x > q.x;
  const double lo = std::min(p.x, q.x);
  const double hi = std::max(p.x, q.x);
  return x.x > lo && x.x < hi;
}

void unit_tangent(const BoundaryGeodesic& geo, const HPoint& z, double& tx, double& ty) {
  if (geo.is_vertical()) {
    tx = 0.0;
    ty = 1.0;
    return;
  }
  tx = z.y;
  ty = -(z.x - geo.center());
}

}  // namespace

bool approx_equal(const BoundaryPoint& p, const BoundaryPoint& q, double eps) {
  if (p.infinite || q.infinite) return p.infinite == q.infinite;
  return std::abs(p.x - q.x) <= eps * std::max(1.0, std::abs(p.x));
}

std::string to_string(MapKind kind) {
  switch (kind) {
    case MapKind::identity: return "identity";
    case MapKind::elliptic: return "elliptic";
    case MapKind::parabolic: return "parabolic";
    case MapKind::hyperbolic: return "hyperbolic";
  }
  return "unknown";
}

MoebiusMap::MoebiusMap(double a, double b, double c, double d) : m_{a, b, c, d} {
  const double det = a * d - b * c;
  if (!(det > 0.0) || !std::isfinite(det)) {
    throw std::domain_error("MoebiusMap: determinant must be positive and finite");
  }
  if (det != 1.0) {
    const double s = 1.0 / std::sqrt(det);
    for (double& v : m_) v *= s;
  }
  for (double v : m_) {
    if (v != 0.0) {
      if (v < 0.0) {
        for (double& w : m_) w = -w;
      }
      break;
    }
  }
  for (double& v : m_) {
    if (v == 0.0) v = 0.0;  // drop negative zeros
  }
}

MoebiusMap MoebiusMap::inverse() const { return {m_[3], -m_[1], -m_[2], m_[0]}; }

MoebiusMap MoebiusMap::operator*(const MoebiusMap& r) const {
  return {m_[0] * r.m_[0] + m_[1] * r.m_[2], m_[0] * r.m_[1] + m_[1] * r.m_[3],
          m_[2] * r.m_[0] + m_[3] * r.m_[2], m_[2] * r.m_[1] + m_[3] * r.m_[3]};
}

HPoint MoebiusMap::apply(const HPoint& z) const {
  const auto [a, b, c, d] = m_;
  const double re = c * z.x + d;
  const double im = c * z.y;
  const double den = re * re + im * im;
  const double num_re = (a * z.x + b) * re + a * z.y * im;
  return {num_re / den, z.y / den};
}

BoundaryPoint MoebiusMap::apply(const BoundaryPoint& p) const {
  const auto [a, b, c, d] = m_;
  if (p.infinite) {
    if (c == 0.0) return BoundaryPoint::infinity();
    return BoundaryPoint::at(a / c);
  }
  const double den = c * p.x + d;
  if (den == 0.0) return BoundaryPoint::infinity();
  return BoundaryPoint::at((a * p.x + b) / den);
}

bool approx_equal(const MoebiusMap& g, const MoebiusMap& h, double eps) {
  double same = 0.0;
  double flipped = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    same = std::max(same, std::abs(g.entries()[i] - h.entries()[i]));
    flipped = std::max(flipped, std::abs(g.entries()[i] + h.entries()[i]));
  }
  return std::min(same, flipped) <= eps;
}

BoundaryGeodesic::BoundaryGeodesic(BoundaryPoint p, BoundaryPoint q) : e_{p, q} {
  if (p == q) throw std::domain_error("BoundaryGeodesic: endpoints must differ");
  if (e_[0].infinite || (!e_[1].infinite && e_[1].x < e_[0].x)) std::swap(e_[0], e_[1]);
}

bool approx_equal(const BoundaryGeodesic& g, const BoundaryGeodesic& h, double eps) {
  return approx_equal(g.first(), h.first(), eps) && approx_equal(g.second(), h.second(), eps);
}

double OrientedGeodesic::coordinate(const HPoint& z) const {
  if (to.infinite) return std::log(z.y);
  if (from.infinite) return -std::log(z.y);
  const double m = 0.5 * (from.x + to.x);
  const double s = std::asinh((z.x - m) / z.y);
  return from.x < to.x ? s : -s;
}

HPoint OrientedGeodesic::point_at(double t) const {
  if (to.infinite) return {from.x, std::exp(t)};
  if (from.infinite) return {to.x, std::exp(-t)};
  const double m = 0.5 * (from.x + to.x);
  const double r = 0.5 * std::abs(to.x - from.x);
  const double sign = from.x < to.x ? 1.0 : -1.0;
  return {m + sign * r * std::tanh(t), r / std::cosh(t)};
}

double OrientedGeodesic::direction(const HPoint& z) const {
  if (to.infinite) return 0.5 * std::numbers::pi;
  if (from.infinite) return -0.5 * std::numbers::pi;
  const double m = 0.5 * (from.x + to.x);
  if (from.x < to.x) return std::atan2(-(z.x - m), z.y);
  return std::atan2(z.x - m, -z.y);
}

double foot_coordinate(const OrientedGeodesic& geo, const HPoint& z) {
  if (geo.to.infinite || geo.from.infinite) {
    const double x0 = geo.to.infinite ? geo.from.x : geo.to.x;
    const double t = 0.5 * std::log((z.x - x0) * (z.x - x0) + z.y * z.y);
    return geo.to.infinite ? t : -t;
  }
  const double m = 0.5 * (geo.from.x + geo.to.x);
  const double r = 0.5 * std::abs(geo.to.x - geo.from.x);
  const double u = z.x - m;
  const double t = std::atanh(2.0 * r * u / (u * u + z.y * z.y + r * r));
  return geo.from.x < geo.to.x ? t : -t;
}

OrientedGeodesic apply(const MoebiusMap& g, const OrientedGeodesic& geo) {
  return {g.apply(geo.from), g.apply(geo.to)};
}

BoundaryGeodesic apply(const MoebiusMap& g, const BoundaryGeodesic& geo) {
  return {g.apply(geo.first()), g.apply(geo.second())};
}

OrientedGeodesic geodesic_through(const HPoint& p, const HPoint& q) {
  if (p.x == q.x) {
    if (p.y == q.y) throw std::domain_error("geodesic_through: points coincide");
    const auto foot = BoundaryPoint::at(p.x);
    return q.y > p.y ? OrientedGeodesic{foot, BoundaryPoint::infinity()}
                     : OrientedGeodesic{BoundaryPoint::infinity(), foot};
  }
  const double m = ((q.x * q.x + q.y * q.y) - (p.x * p.x + p.y * p.y)) / (2.0 * (q.x - p.x));
  const double r = std::hypot(p.x - m, p.y);
  const auto lo = BoundaryPoint::at(m - r);
  const auto hi = BoundaryPoint::at(m + r);
  return q.x > p.x ? OrientedGeodesic{lo, hi} : OrientedGeodesic{hi, lo};
}

MapKind classify(const MoebiusMap& g) {
  if (std::abs(g.a() - 1.0) < tol::alg && std::abs(g.b()) < tol::alg && std::abs(g.c()) < tol::alg &&
      std::abs(g.d() - 1.0) < tol::alg) {
    return MapKind::identity;
  }
  const double tr = std::abs(g.trace());
  if (tr > 2.0 + tol::parabolic_band) return MapKind::hyperbolic;
  if (std::abs(tr - 2.0) <= tol::parabolic_band) return MapKind::parabolic;
  return MapKind::elliptic;
}

double translation_length(const MoebiusMap& g) {
  if (classify(g) != MapKind::hyperbolic) {
    throw std::domain_error("translation_length: map is not hyperbolic");
  }
  return 2.0 * std::acosh(0.5 * std::abs(g.trace()));
}

OrientedGeodesic oriented_axis(const MoebiusMap& g) {
  if (classify(g) != MapKind::hyperbolic) throw std::domain_error("axis: map is not hyperbolic");
  const auto [a, b, c, d] = g.entries();
  const double tr = a + d;
  const double disc = std::sqrt((tr - 2.0) * (tr + 2.0));
  // Attracting fixed points satisfy |c z + d| > 1.
  if (std::abs(c) <= 1e-13 * std::max({std::abs(a), std::abs(b), std::abs(d)})) {
    const auto finite = BoundaryPoint::at(b / (d - a));
    return a > d ? OrientedGeodesic{finite, BoundaryPoint::infinity()}
                 : OrientedGeodesic{BoundaryPoint::infinity(), finite};
  }
  // Roots of c z^2 + (d - a) z - b = 0, computed without cancellation.
  const double p = a - d;
  const double q = p >= 0.0 ? p + disc : p - disc;
  const double z1 = q / (2.0 * c);
  const double z2 = (q != 0.0) ? -2.0 * b / q : (p - disc) / (2.0 * c);
  const double m1 = std::abs(c * z1 + d);
  const double m2 = std::abs(c * z2 + d);
  return m1 > m2 ? OrientedGeodesic{BoundaryPoint::at(z2), BoundaryPoint::at(z1)}
                 : OrientedGeodesic{BoundaryPoint::at(z1), BoundaryPoint::at(z2)};
}

BoundaryGeodesic axis(const MoebiusMap& g) { return oriented_axis(g).unoriented(); }

MoebiusMap translation_along(const OrientedGeodesic& along, double distance) {
  const double e = std::exp(0.5 * distance);
  const MoebiusMap scale(e, 0.0, 0.0, 1.0 / e);
  // s maps 0 -> from and infinity -> to.
  MoebiusMap s;
  if (along.to.infinite) {
    s = MoebiusMap(1.0, along.from.x, 0.0, 1.0);
  } else if (along.from.infinite) {
    s = MoebiusMap(along.to.x, -1.0, 1.0, 0.0);
  } else if (along.to.x > along.from.x) {
    s = MoebiusMap(along.to.x, along.from.x, 1.0, 1.0);
  } else {
    s = MoebiusMap(-along.to.x, along.from.x, -1.0, 1.0);
  }
  return s * scale * s.inverse();
}

double hyp_distance(const HPoint& p, const HPoint& q) {
  const double chord = std::hypot(p.x - q.x, p.y - q.y);
  return 2.0 * std::asinh(chord / (2.0 * std::sqrt(p.y * q.y)));
}

double signed_sinh_distance(const BoundaryGeodesic& geo, const HPoint& z) {
  if (geo.is_vertical()) return (z.x - geo.foot()) / z.y;
  const double m = geo.center();
  const double r = geo.radius();
  const double dx = z.x - m;
  return ((dx - r) * (dx + r) + z.y * z.y) / (2.0 * r * z.y);
}

double distance_to_line(const BoundaryGeodesic& geo, const HPoint& z) {
  return std::asinh(std::abs(signed_sinh_distance(geo, z)));
}

double fold_angle(double from_direction, double to_direction) {
  double t = std::fmod(to_direction - from_direction, std::numbers::pi);
  if (t < 0.0) t += std::numbers::pi;
  return t;
}

std::optional<LineCrossing> intersect_lines(const BoundaryGeodesic& g1, const BoundaryGeodesic& g2) {
  if (g1 == g2) throw std::domain_error("intersect_lines: identical geodesics are not transverse");
  const auto& p = g1.first();
  const auto& q = g1.second();
  const auto& r = g2.first();
  const auto& s = g2.second();
  if (p == r || p == s || q == r || q == s) return std::nullopt;
  if (strictly_between(p, q, r) == strictly_between(p, q, s)) return std::nullopt;

  HPoint z;
  if (g1.is_vertical() && g2.is_vertical()) return std::nullopt;
  if (g1.is_vertical() || g2.is_vertical()) {
    const auto& line = g1.is_vertical() ? g1 : g2;
    const auto& circ = g1.is_vertical() ? g2 : g1;
    const double dx = line.foot() - circ.center();
    const double r0 = circ.radius();
    z = {line.foot(), std::sqrt(std::max(0.0, (r0 - dx) * (r0 + dx)))};
  } else {
    const double m1 = g1.center();
    const double r1 = g1.radius();
    const double m2 = g2.center();
    const double r2 = g2.radius();
    const double x = 0.5 * (m1 + m2) + 0.5 * (r1 - r2) * (r1 + r2) / (m2 - m1);
    const double dx = x - m1;
    z = {x, std::sqrt(std::max(0.0, (r1 - dx) * (r1 + dx)))};
  }
  if (!(z.y > 0.0)) return std::nullopt;
  double t1x, t1y, t2x, t2y;
  unit_tangent(g1, z, t1x, t1y);
  unit_tangent(g2, z, t2x, t2y);
  const double angle = fold_angle(std::atan2(t1y, t1x), std::atan2(t2y, t2x));
  return LineCrossing{z, angle};
}

}  // namespace hypgeo
