#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "hypgeo/harness.hpp"
#include "hypgeo/liouville.hpp"
#include "hypgeo/surface.hpp"

using namespace hypgeo;

namespace {

constexpr double pi = std::numbers::pi;

BoundaryPoint at(double v) { return BoundaryPoint::at(v); }

// Midpoint rule for the density da db / (a - b)^2 over a product of intervals.
double density_integral(double a0, double a1, double b0, double b1, int n = 600) {
  const double ha = (a1 - a0) / n, hb = (b1 - b0) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = a0 + (i + 0.5) * ha;
    for (int j = 0; j < n; ++j) {
      const double b = b0 + (j + 0.5) * hb;
      s += 1.0 / ((a - b) * (a - b));
    }
  }
  return s * ha * hb;
}

MoebiusMap random_map(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double a = 0.0;
  while (std::abs(a) < 0.3) a = u(rng);
  const double b = u(rng), c = u(rng);
  return {a, b, c, (1.0 + b * c) / a};
}

HPoint walk(const HPoint& p, double phi, double s) {
  const BoundaryGeodesic g = geodesic_with_direction(p, phi);
  OrientedGeodesic og{g.first(), g.second()};
  if (std::abs(std::remainder(og.direction(p) - phi, 2.0 * pi)) > 1e-6) og = og.reversed();
  return og.point_at(og.coordinate(p) + s);
}

}  // namespace

TEST_CASE("box measure") {
  const double v = box_measure({{at(0), at(1)}, {at(2), at(3)}});
  CHECK(v == doctest::Approx(0.2876821).epsilon(1e-7));
  CHECK(std::abs(v - density_integral(0, 1, 2, 3)) < 1e-5);
  CHECK(box_measure({{at(0.5), at(0.5)}, {at(2), at(3)}}) == 0.0);
  const double split = box_measure({{at(0), at(0.5)}, {at(2), at(3)}}) + box_measure({{at(0.5), at(1)}, {at(2), at(3)}});
  CHECK(std::abs(v - split) < 1e-12);
  CHECK(std::abs(box_measure({{at(2), at(3)}, {at(0), at(1)}}) - v) < 1e-15);
  CHECK_THROWS_AS(box_measure({{at(0), at(2.5)}, {at(2), at(3)}}), std::domain_error);
}

TEST_CASE("infinite endpoints") {
  // [1, 2] x [3, inf]: the density integrates to the integral of da / (3 - a).
  const double v = box_measure({{at(1), at(2)}, {at(3), BoundaryPoint::infinity()}});
  CHECK(v == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  std::mt19937_64 rng(29);
  for (int k = 0; k < 20; ++k) {
    const MoebiusMap g = random_map(rng);
    const BoundaryBox box{{at(-1), at(0)}, {at(0.5), at(2)}};
    const BoundaryBox moved = apply(g, box);
    CHECK(std::abs(box_measure(moved) - box_measure(box)) < 1e-9);
  }
  const MoebiusMap to_inf(0, -1, 1, -2);  // sends 2 to infinity
  const BoundaryBox box{{at(-1), at(0)}, {at(0.5), at(2)}};
  const BoundaryBox moved = apply(to_inf, box);
  CHECK(moved.second.hi.infinite);
  CHECK(std::abs(box_measure(moved) - box_measure(box)) < 1e-12);
}

TEST_CASE("moebius invariance") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  double worst = 0.0;
  for (int m = 0; m < 20; ++m) {
    const MoebiusMap g = random_map(rng);
    for (int k = 0; k < 20; ++k) {
      std::array<double, 4> p{u(rng), u(rng), u(rng), u(rng)};
      std::sort(p.begin(), p.end());
      const BoundaryBox box{{at(p[0]), at(p[1])}, {at(p[2]), at(p[3])}};
      worst = std::max(worst, std::abs(box_measure(apply(g, box)) - box_measure(box)));
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("arc crossing measure") {
  const ArcMeasure unit = arc_crossing_measure({0, 1}, {0, std::exp(1.0)});
  CHECK(unit.quadrature == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(unit.boxes == doctest::Approx(1.0).epsilon(1e-7));

  const ArcMeasure tiny = arc_crossing_measure({0, 1}, {0, std::exp(1e-3)});
  CHECK(tiny.quadrature == doctest::Approx(1e-3).epsilon(1e-6));

  std::mt19937_64 rng(37);
  const MoebiusMap g = random_map(rng);
  const ArcMeasure moved = arc_crossing_measure(g.apply(HPoint{0, 1}), g.apply(HPoint{0, std::exp(1.0)}));
  CHECK(std::abs(moved.quadrature - unit.quadrature) < 1e-9);
  CHECK(std::abs(moved.boxes - unit.boxes) < 1e-7);

  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const HPoint p{4.0 * u(rng) - 2.0, std::exp(2.0 * u(rng) - 1.0)};
    const double s = 0.05 + 2.95 * u(rng);
    const HPoint q = walk(p, 2.0 * pi * u(rng), s);
    const ArcMeasure a = arc_crossing_measure(p, q);
    CHECK(std::abs(a.quadrature - s) < 1e-6);
    CHECK(std::abs(a.boxes - s) < 1e-6);
    CHECK(std::abs(a.boxes - a.quadrature) < 1e-6);
  }
}

TEST_CASE("surface constants") {
  const SurfaceConstants t = surface_constants(build_punctured_torus());
  CHECK(t.liouville_length == doctest::Approx(9.8696044).epsilon(1e-8));
  CHECK(t.liouville_self == t.liouville_length);
  CHECK(t.pushforward_factor == pi / 2);
  const SurfaceConstants o = surface_constants(build_genus2_octagon());
  CHECK(o.liouville_length == doctest::Approx(19.7392088).epsilon(1e-8));
}

TEST_CASE("sampler") {
  LiouvilleWindow w;
  const auto s = sample_liouville(w, 100000, 41);
  std::vector<double> th;
  for (const auto& x : s) th.push_back(x.theta);
  std::sort(th.begin(), th.end());
  double ks = 0.0;
  for (std::size_t k = 0; k < th.size(); ++k) {
    const double f = 0.5 * (1.0 - std::cos(th[k]));
    ks = std::max({ks, std::abs(f - double(k) / th.size()), std::abs(f - double(k + 1) / th.size())});
  }
  CHECK(ks < 0.01);

  const auto again = sample_liouville(w, 1000, 41);
  for (std::size_t k = 0; k < again.size(); ++k) {
    CHECK(again[k].x == s[k].x);
    CHECK(again[k].theta == s[k].theta);
    CHECK(again[k].geodesic == s[k].geodesic);
  }

  LiouvilleWindow flat;
  flat.x0 = flat.x1 = 0.3;
  const HPoint z = flat.reference.point_at(0.3);
  for (const auto& x : sample_liouville(flat, 500, 43)) CHECK(distance_to_line(x.geodesic, z) < 1e-9);
}

TEST_CASE("geodesic with direction") {
  const BoundaryGeodesic v = geodesic_with_direction({0.5, 1.0}, pi / 2);
  CHECK(v.is_vertical());
  CHECK(v.foot() == doctest::Approx(0.5));
  const BoundaryGeodesic h = geodesic_with_direction({0.0, 1.0}, 0.0);
  CHECK(h.first().x == doctest::Approx(-1.0));
  CHECK(h.second().x == doctest::Approx(1.0));
  CHECK(angle_cdf(pi / 2) == doctest::Approx(0.5));
}
