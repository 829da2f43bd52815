#include "hypgeo/liouville.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

namespace hypgeo {

namespace {

constexpr double kPi = std::numbers::pi;

// Position on the circle, infinity at pi.
double circle_angle(const BoundaryPoint& p) { return p.infinite ? kPi : 2.0 * std::atan(p.x); }

double offset(double from, double to) {
  double d = std::fmod(to - from, 2.0 * kPi);
  if (d < 0.0) d += 2.0 * kPi;
  return d;
}

// Cross-ratio minus one, with factors containing infinity cancelled.
double cross_excess(const BoundaryPoint& a, const BoundaryPoint& b, const BoundaryPoint& c, const BoundaryPoint& d) {
  if (a.infinite) return (d.x - c.x) / (c.x - b.x);
  if (b.infinite) return (d.x - c.x) / (a.x - d.x);
  if (c.infinite) return (b.x - a.x) / (a.x - d.x);
  if (d.infinite) return (b.x - a.x) / (c.x - b.x);
  return (b.x - a.x) * (d.x - c.x) / ((a.x - d.x) * (b.x - c.x));
}

double integrate(const std::function<double(double)>& f, double a, double b) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-13, &err);
}

// Orientation-preserving map sending the geodesic through p, q to the
// imaginary axis with p -> i and q above it.
MoebiusMap standard_frame(const HPoint& p, const HPoint& q) {
  const OrientedGeodesic g = geodesic_through(p, q);
  MoebiusMap m;
  if (g.to.infinite) {
    m = MoebiusMap(1.0, -g.from.x, 0.0, 1.0);
  } else if (g.from.infinite) {
    m = MoebiusMap(0.0, -1.0, 1.0, -g.to.x);
  } else if (g.to.x > g.from.x) {
    m = MoebiusMap(-1.0, g.from.x, 1.0, -g.to.x);
  } else {
    m = MoebiusMap(1.0, -g.from.x, 1.0, -g.to.x);
  }
  const double h = m.apply(p).y;
  return MoebiusMap(1.0, 0.0, 0.0, h) * m;
}

double quadrature_path(const HPoint& p, const HPoint& q) {
  const auto inner = [](double) { return integrate([](double th) { return 0.5 * std::sin(th); }, 0.0, kPi); };
  const OrientedGeodesic g = geodesic_through(p, q);
  if (g.from.infinite || g.to.infinite) {
    return std::abs(integrate([&](double y) { return inner(y) / y; }, std::min(p.y, q.y), std::max(p.y, q.y)));
  }
  const double m = 0.5 * (g.from.x + g.to.x);
  const double phi_p = std::atan2(p.y, p.x - m);
  const double phi_q = std::atan2(q.y, q.x - m);
  return integrate([&](double phi) { return inner(phi) / std::sin(phi); }, std::min(phi_p, phi_q),
                   std::max(phi_p, phi_q));
}

}  // namespace

double box_measure(const BoundaryBox& box) {
  const auto& [a, b] = box.first;
  const auto& [c, d] = box.second;
  const double ta = circle_angle(a);
  const double ob = offset(ta, circle_angle(b));
  const double oc = offset(ta, circle_angle(c));
  const double od = offset(ta, circle_angle(d));
  if (c == a || d == a || !(ob < oc) || !(oc <= od) || c == b) {
    throw std::domain_error("box_measure: arcs overlap");
  }
  if (a == b || c == d) return 0.0;
  return std::log1p(cross_excess(a, b, c, d));
}

BoundaryBox apply(const MoebiusMap& g, const BoundaryBox& box) {
  return {{g.apply(box.first.lo), g.apply(box.first.hi)}, {g.apply(box.second.lo), g.apply(box.second.hi)}};
}

ArcMeasure arc_crossing_measure(const HPoint& p, const HPoint& q) {
  ArcMeasure out;
  out.quadrature = quadrature_path(p, q);

  const MoebiusMap frame = standard_frame(p, q);
  const MoebiusMap back = frame.inverse();
  const double s = std::log(frame.apply(q).y);
  // Geodesics with endpoints u < 0 < v cross the segment iff 1 <= -uv <= e^{2s};
  // sliced in log v, the mass outside |log v| <= s + 20 is below e^{-40}.
  const double lo = -20.0;
  const double span = s + 40.0;
  const int base = static_cast<int>(std::ceil(span));
  const auto strips = [&](int level) {
    const int n = base << level;
    const double h = span / n;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      const double p0 = lo + k * h;
      const double pm = p0 + 0.5 * h;
      const BoundaryBox box{{BoundaryPoint::at(-std::exp(2.0 * s - pm)), BoundaryPoint::at(-std::exp(-pm))},
                            {BoundaryPoint::at(std::exp(p0)), BoundaryPoint::at(std::exp(p0 + h))}};
      sum += box_measure(apply(back, box));
    }
    return sum;
  };
  double prev_sum = strips(0);
  double prev_rich = prev_sum;
  for (int level = 1; level <= 10; ++level) {
    const double sum = strips(level);
    const double rich = (4.0 * sum - prev_sum) / 3.0;
    out.boxes = rich;
    out.refinements = level;
    if (level >= 2 && std::abs(rich - prev_rich) < 1e-7) break;
    prev_sum = sum;
    prev_rich = rich;
  }
  return out;
}

SurfaceConstants surface_constants(const SurfaceSpec& spec) {
  const double v = kPi * kPi * spec.euler_magnitude();
  return {v, v, 0.5 * kPi};
}

BoundaryGeodesic geodesic_with_direction(const HPoint& z, double phi) {
  const double c = std::cos(phi);
  if (std::abs(c) < 1e-15) return {BoundaryPoint::at(z.x), BoundaryPoint::infinity()};
  const double m = z.x + z.y * std::tan(phi);
  const double r = std::hypot(z.x - m, z.y);
  return {BoundaryPoint::at(m - r), BoundaryPoint::at(m + r)};
}

double angle_cdf(double theta) {
  if (theta <= 0.0) return 0.0;
  if (theta >= kPi) return 1.0;
  return 0.5 * (1.0 - std::cos(theta));
}

std::vector<LiouvilleSample> sample_liouville(const LiouvilleWindow& window, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double c0 = std::cos(window.theta0);
  const double c1 = std::cos(window.theta1);
  std::vector<LiouvilleSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    LiouvilleSample s;
    s.x = window.x0 + unit(rng) * (window.x1 - window.x0);
    s.theta = std::acos(std::clamp(c0 - unit(rng) * (c0 - c1), -1.0, 1.0));
    const HPoint z = window.reference.point_at(s.x);
    s.geodesic = geodesic_with_direction(z, window.reference.direction(z) + s.theta);
    out.push_back(s);
  }
  return out;
}

}  // namespace hypgeo
