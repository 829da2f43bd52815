#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hypgeo/errors.hpp"
#include "hypgeo/harness.hpp"

using namespace hypgeo;

namespace {

constexpr double pi = std::numbers::pi;

// Hyperbolic area by a midpoint grid in (x, u = 1 / y), where dx dy / y^2 = dx du.
std::vector<double> grid_areas(const CellPartition& p, int nx, double du, double u_max) {
  std::vector<double> out(p.cell_count() + 1, 0.0);
  const double dx = 2.0 / nx;
  for (int i = 0; i < nx; ++i) {
    const double x = -1.0 + (i + 0.5) * dx;
    for (double u = 0.5 * du; u < u_max; u += du) {
      const HPoint z{x, 1.0 / u};
      if (!p.in_core(z)) continue;
      const auto cell = p.locate(z);
      out[cell ? *cell : p.cell_count()] += dx * du;
    }
  }
  return out;
}

// One interior point per cell.
std::vector<HPoint> cell_points(const CellPartition& p) {
  std::vector<HPoint> pts(p.cell_count(), HPoint{0, -1});
  for (int i = 0; i < 400; ++i) {
    for (int j = 1; j < 400; ++j) {
      const HPoint z{-1.0 + (i + 0.5) / 200.0, 0.05 * j};
      const auto c = p.locate(z);
      if (c && pts[*c].y < 0) pts[*c] = z;
    }
  }
  return pts;
}

}  // namespace

TEST_CASE("partition areas") {
  const SurfaceSpec t = build_punctured_torus();
  const CellPartition p(t, 25, 0.2);
  CHECK(p.cell_count() == 25);
  CHECK(std::abs(p.expected_core_area() - (2.0 * pi - 0.2)) < 1e-12);
  CHECK(std::abs(p.core_area() - p.expected_core_area()) < 1e-8);
  double sum = 0.0;
  for (int k = 0; k < 25; ++k) {
    sum += p.area(k);
    CHECK(p.area(k) == doctest::Approx(p.core_area() / 25).epsilon(1e-8));
  }
  CHECK(sum == doctest::Approx(p.core_area()).epsilon(1e-12));

  const auto g = grid_areas(p, 1000, 0.02, 250.0);
  CHECK(g.back() == 0.0);
  double total = 0.0;
  for (int k = 0; k < 25; ++k) {
    total += g[k];
    CHECK(g[k] == doctest::Approx(p.area(k)).epsilon(0.03));
  }
  CHECK(total == doctest::Approx(p.core_area()).epsilon(5e-3));
}

TEST_CASE("partition config") {
  const SurfaceSpec t = build_punctured_torus();
  CHECK_THROWS_AS(CellPartition(t, 24, 0.2), ConfigError);
  CHECK_THROWS_AS(CellPartition(t, 25, 0.0), ConfigError);
  CHECK_THROWS_AS(CellPartition(t, 25, 1.5), ConfigError);
  const CellPartition p(t, 25, 0.2);
  CHECK_FALSE(p.in_core({0.0, 100.0}));
  CHECK_FALSE(p.in_core({0.0, 0.001}));
  CHECK_FALSE(p.locate({3.0, 1.0}));
  CHECK(p.in_core({0.1, 0.9}));
}

TEST_CASE("total variation") {
  const SurfaceSpec t = build_punctured_torus();
  const CellPartition p(t, 25, 0.2);
  const auto pts = cell_points(p);
  std::vector<CrossingRecord> uniform;
  for (const auto& z : pts) {
    REQUIRE(z.y > 0);
    CrossingRecord r;
    r.point = z;
    r.weight = 4;
    uniform.push_back(r);
  }
  CHECK(spatial_tv(uniform, p) < 1e-8);
  std::vector<CrossingRecord> lumped{uniform.front()};
  CHECK(spatial_tv(lumped, p) == doctest::Approx(1.0 - 1.0 / 25).epsilon(1e-8));
  CrossingRecord outside;
  outside.point = {0.0, 100.0};
  CHECK_THROWS_AS(spatial_tv({outside}, p), std::domain_error);
  const auto w = cell_weights(uniform, p);
  for (double x : w) CHECK(x == 4.0);
}

TEST_CASE("ks statistics") {
  const SurfaceSpec t = build_punctured_torus();
  const CellPartition p(t, 25, 0.2);
  std::vector<CrossingRecord> flat;
  for (int k = 0; k < 200; ++k) {
    CrossingRecord r;
    r.point = {0.1, 0.9};
    r.angle = pi / 2;
    flat.push_back(r);
  }
  const KsResult ks = angle_ks(flat, p);
  CHECK(ks.ks == doctest::Approx(0.5));
  CHECK(ks.count == 200);
  CHECK_FALSE(ks.low_count);

  std::vector<std::pair<double, double>> samples;
  for (int k = 0; k < 1000; ++k) samples.emplace_back((k + 0.5) / 1000.0, 1.0);
  CHECK(weighted_ks(samples, [](double x) { return x; }) == doctest::Approx(0.0005).epsilon(1e-6));
}

TEST_CASE("growth law") {
  const SurfaceSpec t = build_punctured_torus();
  std::vector<GrowthRow> rows;
  for (double T : {6.0, 8.0, 10.0}) {
    GrowthRow r;
    r.T = T;
    r.length = std::exp(T);
    r.ordered_total = std::exp(2.0 * T) / (pi * pi);
    rows.push_back(r);
  }
  const auto out = growth_law(rows, t);
  for (const auto& r : out) {
    CHECK(r.r == doctest::Approx(1.0));
    CHECK(r.r_crude == doctest::Approx(1.0));
  }
  rows.pop_back();
  CHECK_THROWS(growth_law(rows, t));
}

TEST_CASE("fixture family") {
  const SurfaceSpec t = build_punctured_torus();
  const FixtureFit f = fixture_family(t, 10);
  REQUIRE(f.rows.size() == 11);
  CHECK(f.brute_force_agrees);
  for (const auto& r : f.rows) {
    if (r.n <= 5) CHECK(r.brute_force == r.self_crossings);
  }
  CHECK(f.crossing_slope >= 0.8);
  CHECK(f.crossing_slope <= 2.2);
  CHECK(f.length_offset_range < 1.0);
}

TEST_CASE("arc outside the core") {
  const SurfaceSpec t = build_punctured_torus();
  const CellPartition p(t, 25, 0.2);
  CHECK_THROWS_AS(arc_equidistribution({0.0, 20.0}, {0.0, 50.0}, {}, {}, p, t), std::domain_error);
}
