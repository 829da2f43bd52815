#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "hypgeo/chains.hpp"
#include "hypgeo/crossings.hpp"
#include "hypgeo/enumerator.hpp"
#include "hypgeo/errors.hpp"
#include "hypgeo/excursions.hpp"

using namespace hypgeo;

namespace {

std::string fixture_word(const SurfaceSpec& spec, int n, std::string w = "a") {
  for (int k = 0; k < n; ++k) w += spec.cusps.at(0).parabolic_word;
  return w;
}

}  // namespace

TEST_CASE("short class avoids small horoballs") {
  const SurfaceSpec t = build_punctured_torus();
  const auto c = make_class(t, "a", 3.0);
  const SegmentChain chain = trace_chain(c.matrix, 0, t);
  CHECK(decompose_excursions(chain, t, 0.1).empty());
}

TEST_CASE("fixture windings") {
  const SurfaceSpec t = build_punctured_torus();
  for (int n = 1; n <= 10; ++n) {
    const auto c = make_class(t, fixture_word(t, n), 100.0, false);
    const SegmentChain chain = trace_chain(c.matrix, 0, t);
    const auto ex = decompose_excursions(chain, t, 1.0);
    INFO("n = " << n);
    if (n >= 2) REQUIRE_FALSE(ex.empty());
    int dominant = 0;
    double total = 0.0;
    for (const auto& e : ex) {
      dominant = std::max(dominant, e.winding);
      total += e.length;
      CHECK(e.winding == static_cast<int>(std::floor(std::abs(e.delta_x))));
      CHECK(std::abs(e.length - e.piece_length) < 1e-8);
    }
    CHECK(std::abs(dominant - n) <= 1);
    CHECK(total <= c.length + 1e-9);
  }
}

TEST_CASE("length grows like 2 log n") {
  const SurfaceSpec t = build_punctured_torus();
  std::vector<std::vector<ExcursionRecord>> per_class;
  for (int n = 2; n <= 12; ++n) {
    const auto c = make_class(t, fixture_word(t, n), 100.0, false);
    per_class.push_back(decompose_excursions(trace_chain(c.matrix, 0, t), t, 1.0));
  }
  const double c_fit = fit_excursion_constant(per_class);
  CHECK(std::isfinite(c_fit));
  for (const auto& list : per_class) {
    for (const auto& e : list) {
      CHECK(e.length >= 2.0 * std::log(std::max(e.winding, 1)) + c_fit - 1e-12);
    }
  }
}

TEST_CASE("histogram with powers") {
  const SurfaceSpec t = build_punctured_torus();
  const std::vector<ClosedGeodesicClass> classes{make_class(t, fixture_word(t, 5), 60.0)};
  REQUIRE(classes[0].max_power >= 2);
  std::vector<std::vector<ExcursionRecord>> per_class{
      decompose_excursions(trace_chain(classes[0].matrix, 0, t), t, 1.0)};
  const auto hist = excursion_histogram(per_class, classes);
  long long total = 0;
  for (const auto& [n, e] : hist) {
    CHECK(e >= 0);
    total += e;
  }
  CHECK(total == static_cast<long long>(per_class[0].size()) * classes[0].power_weight());
  int top = 0;
  for (const auto& e : per_class[0]) top = std::max(top, e.winding);
  REQUIRE(top >= 4);
  CHECK(hist.at(top) >= classes[0].power_weight());
}

TEST_CASE("histogram slope") {
  std::map<int, long long> hist;
  for (int n = 1; n <= 30; ++n) hist[n] = std::llround(1e6 / (n * n));
  hist[0] = 5;
  CHECK(histogram_slope(hist, 2, 20) == doctest::Approx(-2.0).epsilon(1e-3));
}

TEST_CASE("excursion pairs obey the crossing bound") {
  const SurfaceSpec t = build_punctured_torus();
  const auto classes = enumerate_classes(t, 8.0);
  std::vector<SegmentChain> chains;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    chains.push_back(trace_chain(classes[k].matrix, static_cast<std::uint32_t>(k), t));
  }
  const auto records = find_crossings(chains, t);
  std::vector<std::vector<ExcursionRecord>> per_class;
  for (const auto& ch : chains) per_class.push_back(decompose_excursions(ch, t, 1.0));
  const PairCheck pc = check_excursion_pairs(per_class, records, chains, t, 1.0);
  CHECK(pc.pairs > 0);
  CHECK(pc.violations == 0);
  CHECK(pc.worst_excess <= 0);

  // Fixture pair with windings (1, n): crossings grow at most with slope 2.
  std::vector<int> counts;
  for (int n = 2; n <= 8; ++n) {
    const std::vector<ClosedGeodesicClass> two{make_class(t, fixture_word(t, 2), 100.0, false),
                                               make_class(t, fixture_word(t, n, "aa"), 100.0, false)};
    std::vector<SegmentChain> ch{trace_chain(two[0].matrix, 0, t), trace_chain(two[1].matrix, 1, t)};
    const auto rec = find_crossings(ch, t);
    std::vector<std::vector<ExcursionRecord>> pc2{decompose_excursions(ch[0], t, 1.0),
                                                  decompose_excursions(ch[1], t, 1.0)};
    int best = 0;
    for (const auto& e1 : pc2[0]) {
      for (const auto& e2 : pc2[1]) {
        const int k = excursion_pair_crossings(e1, e2, rec, ch, t, 1.0);
        CHECK(k <= 2 * std::min(e1.winding, e2.winding) + 2);
        best = std::max(best, k);
      }
    }
    counts.push_back(best);
  }
  for (std::size_t k = 1; k < counts.size(); ++k) CHECK(counts[k] - counts[k - 1] <= 2);
}

TEST_CASE("cusp mass") {
  const SurfaceSpec t = build_punctured_torus();
  const auto classes = enumerate_classes(t, 8.0);
  std::vector<SegmentChain> chains;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    chains.push_back(trace_chain(classes[k].matrix, static_cast<std::uint32_t>(k), t));
  }
  CrossingOptions opt;
  opt.power_weights = power_weights(classes);
  const auto records = find_crossings(chains, t, opt);
  const CuspMass big = cusp_crossing_mass(records, t, 0.5, 8.0);
  const CuspMass small = cusp_crossing_mass(records, t, 0.25, 8.0);
  const CuspMass tiny = cusp_crossing_mass(records, t, 1e-6, 8.0);
  CHECK(big.ratio >= small.ratio);
  CHECK(tiny.mass == 0.0);
  CHECK(big.ratio == doctest::Approx(big.mass / std::exp(16.0)));
}
