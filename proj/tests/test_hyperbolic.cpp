#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "hypgeo/hyperbolic.hpp"

using namespace hypgeo;

namespace {

// Composite Simpson rule; enough for smooth integrands on short intervals.
template <class F>
double simpson(F f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

MoebiusMap random_map(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double a = 0.0;
  while (std::abs(a) < 0.3) a = u(rng);
  const double b = u(rng), c = u(rng);
  return {a, b, c, (1.0 + b * c) / a};
}

HPoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {2.0 * u(rng), std::exp(u(rng))};
}

bool on_line(const BoundaryGeodesic& g, const HPoint& z) {
  if (g.is_vertical()) return std::abs(z.x - g.foot()) < 1e-9;
  return std::abs(std::hypot(z.x - g.center(), z.y) - g.radius()) < 1e-9;
}

}  // namespace

TEST_CASE("classify by trace") {
  CHECK(classify({2, 1, 1, 1}) == MapKind::hyperbolic);
  CHECK(classify({1, 1, 0, 1}) == MapKind::parabolic);
  CHECK(classify({0, 1, -1, 0}) == MapKind::elliptic);
  CHECK(classify({1, 0, 0, 1}) == MapKind::identity);
  CHECK(classify({-1, 0, 0, -1}) == MapKind::identity);
}

TEST_CASE("normalization and sign") {
  const MoebiusMap g(4, 2, 2, 2);
  CHECK(std::abs(g.det() - 1.0) < 1e-12);
  const MoebiusMap h(-2, -1, -1, -1);
  CHECK(approx_equal(h, MoebiusMap(2, 1, 1, 1), 1e-15));
  CHECK(h.a() > 0.0);
  std::mt19937_64 rng(7);
  for (int k = 0; k < 100; ++k) {
    const MoebiusMap p = random_map(rng) * random_map(rng) * random_map(rng);
    CHECK(std::abs(p.det() - 1.0) < 1e-12);
  }
}

TEST_CASE("translation length") {
  const MoebiusMap g(2, 1, 1, 1);
  const double ell = translation_length(g);
  CHECK(ell == doctest::Approx(1.9248473).epsilon(1e-7));
  // Independent: d(z, gz) minimized over points of the fixed-point circle.
  const double lo = (1.0 - std::sqrt(5.0)) / 2.0, hi = (1.0 + std::sqrt(5.0)) / 2.0;
  const double m = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
  double best = 1e9;
  for (int k = 1; k < 2000; ++k) {
    const double phi = std::numbers::pi * k / 2000.0;
    const HPoint z{m + r * std::cos(phi), r * std::sin(phi)};
    best = std::min(best, hyp_distance(z, g.apply(z)));
  }
  CHECK(std::abs(best - ell) < 1e-9);
  CHECK(translation_length(g * g) == doctest::Approx(2.0 * ell).epsilon(1e-12));
  std::mt19937_64 rng(3);
  const MoebiusMap h = random_map(rng);
  CHECK(translation_length(h * g * h.inverse()) == doctest::Approx(ell).epsilon(1e-10));
  CHECK_THROWS_AS(translation_length({1, 1, 0, 1}), std::domain_error);
}

TEST_CASE("axis endpoints") {
  const BoundaryGeodesic ax = axis({2, 1, 1, 1});
  CHECK(ax.first().x == doctest::Approx(-0.6180340).epsilon(1e-7));
  CHECK(ax.second().x == doctest::Approx(1.6180340).epsilon(1e-7));
  const MoebiusMap g(2, 1, 1, 1);
  for (const BoundaryPoint& p : {ax.first(), ax.second()}) {
    // c z^2 + (d - a) z - b = 0
    CHECK(std::abs(p.x * p.x - p.x - 1.0) < 1e-12);
    CHECK(std::abs(g.apply(p).x - p.x) < 1e-9);
  }
  const BoundaryGeodesic diag = axis({3, 0, 0, 1.0 / 3.0});
  CHECK(diag.first() == BoundaryPoint::at(0.0));
  CHECK(diag.second().infinite);
  CHECK(axis(g) == axis(g.inverse()));
  CHECK_THROWS_AS(axis({0, 1, -1, 0}), std::domain_error);
}

TEST_CASE("distance") {
  const double oracle = simpson([](double y) { return 1.0 / y; }, 1.0, 2.0);
  CHECK(std::abs(hyp_distance({0, 1}, {0, 2}) - oracle) < 1e-12);
  CHECK(hyp_distance({0.3, 0.7}, {0.3, 0.7}) == 0.0);
  CHECK(hyp_distance({0, 1}, {1, 1}) == doctest::Approx(std::acosh(1.5)).epsilon(1e-12));
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const MoebiusMap g = random_map(rng);
    const HPoint p = random_point(rng), q = random_point(rng);
    CHECK(std::abs(hyp_distance(g.apply(p), g.apply(q)) - hyp_distance(p, q)) < 1e-9);
    CHECK(hyp_distance(p, q) == doctest::Approx(hyp_distance(q, p)));
  }
}

TEST_CASE("apply") {
  const HPoint t = MoebiusMap(1, 1, 0, 1).apply(HPoint{0, 1});
  CHECK(t.x == doctest::Approx(1.0));
  CHECK(t.y == doctest::Approx(1.0));
  const HPoint r = MoebiusMap(0, 1, -1, 0).apply(HPoint{0, 1});
  CHECK(std::abs(r.x) < 1e-15);
  CHECK(r.y == doctest::Approx(1.0));
  CHECK(MoebiusMap(2, 1, 1, 1).apply(BoundaryPoint::at(0.0)).x == doctest::Approx(1.0));
  CHECK(MoebiusMap(2, 1, 1, 1).apply(BoundaryPoint::infinity()).x == doctest::Approx(2.0));
  CHECK(MoebiusMap(1, 0, 1, 1).apply(BoundaryPoint::at(-1.0)).infinite);
}

TEST_CASE("axis fidelity") {
  std::mt19937_64 rng(5);
  int tested = 0;
  while (tested < 100) {
    const MoebiusMap g = random_map(rng);
    if (classify(g) != MapKind::hyperbolic) continue;
    const OrientedGeodesic ax = oriented_axis(g);
    const HPoint p = ax.point_at(std::uniform_real_distribution<double>(-1, 1)(rng));
    CHECK(std::abs(hyp_distance(p, g.apply(p)) - translation_length(g)) < 1e-8);
    ++tested;
  }
}

TEST_CASE("intersect lines") {
  const auto x = intersect_lines({BoundaryPoint::at(-1), BoundaryPoint::at(1)},
                                 {BoundaryPoint::at(0), BoundaryPoint::infinity()});
  REQUIRE(x);
  CHECK(std::abs(x->point.x) < 1e-15);
  CHECK(x->point.y == doctest::Approx(1.0));
  CHECK(x->angle == doctest::Approx(std::numbers::pi / 2));

  CHECK_FALSE(intersect_lines({BoundaryPoint::at(0), BoundaryPoint::infinity()},
                              {BoundaryPoint::at(2), BoundaryPoint::at(3)}));

  const BoundaryGeodesic g1{BoundaryPoint::at(-1), BoundaryPoint::at(1)};
  const BoundaryGeodesic g2{BoundaryPoint::at(0.5), BoundaryPoint::infinity()};
  const auto y = intersect_lines(g1, g2);
  REQUIRE(y);
  CHECK(y->point.x == doctest::Approx(0.5));
  CHECK(y->point.y == doctest::Approx(std::sqrt(0.75)));
  CHECK(on_line(g1, y->point));
  CHECK(on_line(g2, y->point));

  CHECK_THROWS_AS(intersect_lines(g1, g1), std::domain_error);
}

TEST_CASE("crossing invariance") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int tested = 0;
  while (tested < 100) {
    const BoundaryGeodesic g1{BoundaryPoint::at(u(rng)), BoundaryPoint::at(u(rng))};
    const BoundaryGeodesic g2{BoundaryPoint::at(u(rng)), BoundaryPoint::at(u(rng))};
    const auto x = intersect_lines(g1, g2);
    if (!x) continue;
    const MoebiusMap g = random_map(rng);
    const auto y = intersect_lines(apply(g, g1), apply(g, g2));
    REQUIRE(y);
    CHECK(hyp_distance(y->point, g.apply(x->point)) < 1e-9);
    CHECK(std::abs(y->angle - x->angle) < 1e-9);
    ++tested;
  }
}

TEST_CASE("geodesic coordinates") {
  const HPoint p{0.2, 0.5}, q{1.1, 0.9};
  const OrientedGeodesic g = geodesic_through(p, q);
  const double tp = g.coordinate(p), tq = g.coordinate(q);
  CHECK(tq > tp);
  CHECK(tq - tp == doctest::Approx(hyp_distance(p, q)).epsilon(1e-12));
  const HPoint back = g.point_at(tp);
  CHECK(hyp_distance(back, p) < 1e-12);
}
