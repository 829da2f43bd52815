#include "hypgeo/harness.hpp"

#include <spdlog/spdlog.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hypgeo/errors.hpp"
#include "hypgeo/liouville.hpp"
#include "hypgeo/words.hpp"

namespace hypgeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void circle_meets(double x1, double y1, double r1, double x2, double y2, double r2, std::vector<double>& out) {
  const double dx = x2 - x1;
  const double dy = y2 - y1;
  const double d = std::hypot(dx, dy);
  if (d == 0.0 || d > r1 + r2 || d < std::abs(r1 - r2)) return;
  const double a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
  const double h = std::sqrt(std::max(0.0, r1 * r1 - a * a));
  const double px = x1 + a * dx / d;
  out.push_back(px + h * dy / d);
  out.push_back(px - h * dy / d);
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

CellPartition::CellPartition(const SurfaceSpec& spec, int cells, double eps_core) : spec_(spec), eps_(eps_core) {
  columns_ = static_cast<int>(std::lround(std::sqrt(static_cast<double>(cells))));
  if (cells <= 0 || columns_ * columns_ != cells) {
    throw ConfigError("cell count must be a positive perfect square, got " + std::to_string(cells));
  }
  if (!(eps_core > 0.0 && eps_core <= 1.0)) throw ConfigError("core epsilon must lie in (0, 1]");

  xmin_ = kInf;
  xmax_ = -kInf;
  for (const auto& v : spec.vertices) {
    if (v.ideal && v.boundary.infinite) continue;
    const double x = v.ideal ? v.boundary.x : v.point.x;
    xmin_ = std::min(xmin_, x);
    xmax_ = std::max(xmax_, x);
    breaks_.push_back(x);
  }
  for (const auto& s : spec.sides) {
    if (s.line.is_vertical()) continue;
    const Circle c{s.line.center(), 0.0, s.line.radius()};
    (s.inward > 0.0 ? floors_ : ceilings_).push_back(c);
  }
  roof_ = kInf;
  const double h = 1.0 / eps_core;
  for (const auto& cusp : spec.cusps) {
    for (const auto& g : cusp.to_infinity) {
      if (std::abs(g.c()) < 1e-14) {
        roof_ = std::min(roof_, h * cusp.width * g.d() * g.d());
      } else {
        const double rho = 1.0 / (2.0 * h * cusp.width * g.c() * g.c());
        disks_.push_back({-g.d() / g.c(), rho, rho});
      }
    }
  }

  std::vector<Circle> all = floors_;
  all.insert(all.end(), ceilings_.begin(), ceilings_.end());
  all.insert(all.end(), disks_.begin(), disks_.end());
  for (std::size_t i = 0; i < all.size(); ++i) {
    breaks_.push_back(all[i].cx - all[i].r);
    breaks_.push_back(all[i].cx + all[i].r);
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      circle_meets(all[i].cx, all[i].cy, all[i].r, all[j].cx, all[j].cy, all[j].r, breaks_);
    }
    if (std::isfinite(roof_) && std::abs(roof_ - all[i].cy) < all[i].r) {
      const double w = std::sqrt(all[i].r * all[i].r - (roof_ - all[i].cy) * (roof_ - all[i].cy));
      breaks_.push_back(all[i].cx - w);
      breaks_.push_back(all[i].cx + w);
    }
  }
  breaks_.erase(std::remove_if(breaks_.begin(), breaks_.end(), [&](double x) { return !(x > xmin_ && x < xmax_); }),
                breaks_.end());
  breaks_.push_back(xmin_);
  breaks_.push_back(xmax_);
  std::sort(breaks_.begin(), breaks_.end());
  breaks_.erase(std::unique(breaks_.begin(), breaks_.end(), [](double p, double q) { return q - p < 1e-12; }),
                breaks_.end());

  const double total = integrate(xmin_, xmax_);
  cuts_.push_back(xmin_);
  for (int k = 1; k < columns_; ++k) {
    const double target = total / columns_;
    double lo = cuts_.back();
    double hi = xmax_;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      (integrate(cuts_.back(), mid) < target ? lo : hi) = mid;
    }
    cuts_.push_back(0.5 * (lo + hi));
  }
  cuts_.push_back(xmax_);
  for (int i = 0; i < columns_; ++i) {
    const double col = integrate(cuts_[i], cuts_[i + 1]);
    for (int j = 0; j < columns_; ++j) areas_.push_back(col / columns_);
  }
  for (double a : areas_) core_area_ += a;
  expected_area_ = hypgeo::area(spec) - eps_core * static_cast<double>(spec.cusps.size());
  if (std::abs(core_area_ - expected_area_) > 1e-8) {
    throw ConsistencyError("CellPartition: core area " + std::to_string(core_area_) +
                           " disagrees with Gauss-Bonnet " + std::to_string(expected_area_));
  }
}

double CellPartition::lower(double x) const {
  double y = 0.0;
  for (const auto& c : floors_) {
    const double dx = x - c.cx;
    if (std::abs(dx) < c.r) y = std::max(y, std::sqrt(c.r * c.r - dx * dx));
  }
  for (bool moved = true; moved;) {
    moved = false;
    for (const auto& d : disks_) {
      const double dx = x - d.cx;
      if (std::abs(dx) >= d.r) continue;
      const double half = std::sqrt(d.r * d.r - dx * dx);
      if (d.cy - half <= y && y < d.cy + half) {
        y = d.cy + half;
        moved = true;
      }
    }
  }
  return y;
}

double CellPartition::upper(double x) const {
  double y = roof_;
  for (const auto& c : ceilings_) {
    const double dx = x - c.cx;
    y = std::abs(dx) < c.r ? std::min(y, std::sqrt(c.r * c.r - dx * dx)) : 0.0;
  }
  return y;
}

double CellPartition::slice_measure(double x) const {
  const double lo = lower(x);
  const double hi = upper(x);
  if (!(hi > lo)) return 0.0;
  return 1.0 / lo - 1.0 / hi;
}

double CellPartition::integrate(double a, double b) const {
  double sum = 0.0;
  const auto f = [this](double x) { return slice_measure(x); };
  boost::math::quadrature::tanh_sinh<double> rule;
  double left = a;
  for (double br : breaks_) {
    if (br <= left) continue;
    if (br >= b) break;
    sum += rule.integrate(f, left, br, 1e-13);
    left = br;
  }
  if (b > left) sum += rule.integrate(f, left, b, 1e-13);
  return sum;
}

bool CellPartition::in_core(const HPoint& z) const {
  constexpr double slack = 1e-9;
  if (!(z.x >= xmin_ - slack && z.x <= xmax_ + slack)) return false;
  const double x = std::clamp(z.x, xmin_, xmax_);
  if (z.y < lower(x) * (1.0 - slack) || z.y > upper(x) * (1.0 + slack)) return false;
  for (const auto& cusp : spec_.cusps) {
    if (cusp.height(z) > 1.0 / eps_) return false;
  }
  return true;
}

std::optional<int> CellPartition::locate(const HPoint& z) const {
  if (!in_core(z)) return std::nullopt;
  const double x = std::clamp(z.x, xmin_, xmax_);
  int col = static_cast<int>(std::upper_bound(cuts_.begin() + 1, cuts_.end() - 1, x) - (cuts_.begin() + 1));
  col = std::clamp(col, 0, columns_ - 1);
  const double lo = lower(x);
  const double hi = upper(x);
  double f = 0.0;
  if (hi > lo) f = (1.0 / lo - 1.0 / z.y) / (1.0 / lo - 1.0 / hi);
  const int row = std::clamp(static_cast<int>(std::floor(std::clamp(f, 0.0, 1.0) * columns_)), 0, columns_ - 1);
  return col * columns_ + row;
}

std::vector<double> cell_weights(const std::vector<CrossingRecord>& records, const CellPartition& partition) {
  std::vector<double> w(partition.cell_count(), 0.0);
  for (const auto& r : records) {
    if (const auto c = partition.locate(r.point)) w[*c] += static_cast<double>(r.weight);
  }
  return w;
}

double spatial_tv(const std::vector<CrossingRecord>& records, const CellPartition& partition) {
  const std::vector<double> w = cell_weights(records, partition);
  double total = 0.0;
  for (double v : w) total += v;
  if (!(total > 0.0)) throw std::domain_error("spatial_tv: no crossing lies in the core");
  double tv = 0.0;
  for (int c = 0; c < partition.cell_count(); ++c) tv += std::abs(w[c] / total - partition.area(c) / partition.core_area());
  return 0.5 * tv;
}

double weighted_ks(std::vector<std::pair<double, double>> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::domain_error("weighted_ks: no samples");
  std::sort(samples.begin(), samples.end());
  double total = 0.0;
  for (const auto& s : samples) total += s.second;
  double cum = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size();) {
    const double v = samples[i].first;
    double group = 0.0;
    std::size_t j = i;
    for (; j < samples.size() && samples[j].first == v; ++j) group += samples[j].second;
    const double f = cdf(v);
    worst = std::max({worst, std::abs(f - cum / total), std::abs((cum + group) / total - f)});
    cum += group;
    i = j;
  }
  return worst;
}

KsResult angle_ks(const std::vector<CrossingRecord>& records, const CellPartition& partition) {
  std::vector<std::pair<double, double>> samples;
  for (const auto& r : records) {
    if (r.near_tangent || !partition.in_core(r.point)) continue;
    samples.emplace_back(r.angle, static_cast<double>(r.weight));
  }
  KsResult out;
  out.count = samples.size();
  out.low_count = out.count < 100;
  if (out.low_count) spdlog::warn("angle_ks: only {} records in the core", out.count);
  if (samples.empty()) return out;
  out.ks = weighted_ks(std::move(samples), angle_cdf);
  return out;
}

std::vector<GrowthRow> growth_law(const std::vector<GrowthRow>& rows, const SurfaceSpec& spec) {
  if (rows.size() < 3) throw std::domain_error("growth_law: need at least three values of T");
  const double c = std::numbers::pi * std::numbers::pi * spec.euler_magnitude();
  std::vector<GrowthRow> out = rows;
  for (auto& r : out) {
    r.r = r.ordered_total * c / (r.length * r.length);
    r.r_crude = r.ordered_total * c / std::exp(2.0 * r.T);
  }
  return out;
}

FootprintResult footprint_tv(const std::vector<SegmentChain>& chains, const std::vector<long long>& weights,
                             const CellPartition& partition, int direction_bins, double step) {
  if (direction_bins <= 0) throw std::domain_error("footprint_tv: direction_bins must be positive");
  const int cells = partition.cell_count();
  std::vector<double> mass(static_cast<std::size_t>(cells) * direction_bins, 0.0);
  FootprintResult out;
  out.direction_mass.assign(direction_bins, 0.0);
  double total = 0.0;
  for (const auto& chain : chains) {
    const double k = chain.class_id < weights.size() ? static_cast<double>(weights[chain.class_id]) : 1.0;
    for (const auto& s : chain.segments) {
      const int m = std::max(1, static_cast<int>(std::ceil(s.length() / step)));
      const double dt = s.length() / m;
      for (int i = 0; i < m; ++i) {
        const HPoint z = s.geodesic.point_at(s.t0 + (i + 0.5) * dt);
        const auto cell = partition.locate(z);
        if (!cell) continue;
        double phi = std::fmod(s.geodesic.direction(z), std::numbers::pi);
        if (phi < 0.0) phi += std::numbers::pi;
        const int bin = std::clamp(static_cast<int>(phi / std::numbers::pi * direction_bins), 0, direction_bins - 1);
        mass[static_cast<std::size_t>(*cell) * direction_bins + bin] += k * dt;
        out.direction_mass[bin] += k * dt;
        total += k * dt;
      }
    }
  }
  if (!(total > 0.0)) throw std::domain_error("footprint_tv: no chain meets the core");
  double tv = 0.0;
  for (int c = 0; c < cells; ++c) {
    const double ref = partition.area(c) / partition.core_area() / direction_bins;
    for (int b = 0; b < direction_bins; ++b) tv += std::abs(mass[static_cast<std::size_t>(c) * direction_bins + b] / total - ref);
  }
  out.tv = 0.5 * tv;
  const auto [lo, hi] = std::minmax_element(out.direction_mass.begin(), out.direction_mass.end());
  out.direction_ratio = *lo > 0.0 ? *hi / *lo : kInf;
  return out;
}

ArcResult arc_equidistribution(const HPoint& p, const HPoint& q, const std::vector<SegmentChain>& chains,
                               const std::vector<long long>& weights, const CellPartition& partition,
                               const SurfaceSpec& spec) {
  const OrientedGeodesic g = geodesic_through(p, q);
  const double t0 = g.coordinate(p);
  const double t1 = g.coordinate(q);
  for (int i = 0; i <= 256; ++i) {
    const HPoint z = g.point_at(t0 + (t1 - t0) * i / 256.0);
    if (!partition.in_core(z)) throw std::domain_error("arc_equidistribution: arc enters the cusp region");
    for (const auto& s : spec.sides) {
      if (s.inward * signed_sinh_distance(s.line, z) <= 10.0 * tol::geom) {
        throw std::domain_error("arc_equidistribution: arc leaves the polygon interior");
      }
    }
  }
  const SegmentChain probe = arc_chain(p, q, std::numeric_limits<std::uint32_t>::max());
  const GeodesicSegment& seg = probe.segments.front();
  std::vector<std::pair<double, double>> samples;
  ArcResult out;
  out.length = seg.length();
  for (const auto& r : crossings_with_probe(chains, probe)) {
    const double k = r.class_i < weights.size() ? static_cast<double>(weights[r.class_i]) : 1.0;
    const double u = (seg.geodesic.coordinate(r.point) - seg.t0) / seg.length();
    samples.emplace_back(u, k);
    out.crossing_weight += k;
  }
  double ell = 0.0;
  for (const auto& c : chains) {
    ell += (c.class_id < weights.size() ? static_cast<double>(weights[c.class_id]) : 1.0) * c.length;
  }
  out.ks.count = samples.size();
  out.ks.low_count = samples.size() < 100;
  if (!samples.empty()) {
    out.ks.ks = weighted_ks(std::move(samples), [](double u) { return std::clamp(u, 0.0, 1.0); });
  }
  out.density = ell > 0.0 ? out.crossing_weight / (out.length * ell) : 0.0;
  return out;
}

FixtureFit fixture_family(const SurfaceSpec& spec, int n_max, const std::string& w) {
  if (spec.cusps.empty()) throw std::domain_error("fixture_family: surface has no cusp");
  if (n_max < 0 || n_max > 30) throw std::domain_error("fixture_family: n_max must lie in [0, 30]");
  const std::string c = spec.cusps.front().parabolic_word;
  FixtureFit fit;
  std::vector<double> ns, ss;
  double lo = kInf, hi = -kInf;
  std::string word = w;
  for (int n = 0; n <= n_max; ++n, word += c) {
    const std::string reduced = cyclic_reduce(word);
    const MoebiusMap m = evaluate_word(reduced, spec);
    if (classify(m) != MapKind::hyperbolic) {
      spdlog::info("fixture_family: skipping n={} ({} is not hyperbolic)", n, reduced);
      continue;
    }
    FixtureRow row;
    row.n = n;
    row.word = reduced;
    row.length = translation_length(m);
    const std::vector<SegmentChain> chain{trace_chain(m, 0, spec)};
    CrossingOptions options;
    options.power_weights = {1};
    row.self_crossings = static_cast<long long>(find_crossings(chain, spec, options).size());
    if (n <= 5) {
      row.brute_force = static_cast<long long>(brute_force_crossings(chain, spec, options).size());
      if (row.brute_force != row.self_crossings) fit.brute_force_agrees = false;
    }
    if (n >= 5) {
      const double off = row.length - 2.0 * std::log(static_cast<double>(n));
      lo = std::min(lo, off);
      hi = std::max(hi, off);
      ns.push_back(n);
      ss.push_back(static_cast<double>(row.self_crossings));
    }
    fit.rows.push_back(row);
  }
  fit.length_offset_range = ns.empty() ? 0.0 : hi - lo;
  fit.crossing_slope = ns.size() >= 2 ? least_squares_slope(ns, ss) : std::numeric_limits<double>::quiet_NaN();
  return fit;
}

}  // namespace hypgeo
