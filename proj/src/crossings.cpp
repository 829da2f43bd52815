#include "hypgeo/crossings.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hypgeo/errors.hpp"

namespace hypgeo {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double boundary_band = 1e-7;

double wrap_direction(double d) {
  d = std::remainder(d, 2.0 * pi);
  return d <= -pi ? d + 2.0 * pi : d;
}

double circular_gap(double a, double b) { return std::abs(std::remainder(a - b, 2.0 * pi)); }

struct RawHit {
  std::uint32_t ci, si, cj, sj;  // chain index and segment index
  SegmentHit hit;
};

// Orders the pair so the result does not depend on input order.
bool pair_first(const GeodesicSegment& a, const GeodesicSegment& b) {
  if (a.class_id != b.class_id) return a.class_id < b.class_id;
  return a.pass < b.pass;
}

CrossingRecord make_record(const GeodesicSegment& a, const GeodesicSegment& b, const SegmentHit& h) {
  CrossingRecord r;
  r.point = h.point;
  r.class_i = a.class_id;
  r.class_j = b.class_id;
  r.pass_i = a.pass;
  r.pass_j = b.pass;
  r.dir_i = h.dir1;
  r.dir_j = h.dir2;
  r.angle = h.angle;
  r.near_tangent = r.angle < near_tangent_angle || pi - r.angle < near_tangent_angle;
  return r;
}

struct Copy {
  HPoint z;
  double d1, d2;
  int side;  // lowest side the copy lies on, or a large value
};

// Moves a crossing on the polygon boundary to its preferred copy. Returns
// false when the point is interior.
bool canonicalize(CrossingRecord& r, const SurfaceSpec& spec) {
  const int none = static_cast<int>(spec.sides.size());
  const auto near_sides = [&](const HPoint& z) {
    std::vector<int> out;
    for (std::size_t k = 0; k < spec.sides.size(); ++k) {
      if (std::abs(signed_sinh_distance(spec.sides[k].line, z)) < boundary_band) out.push_back(static_cast<int>(k));
    }
    return out;
  };
  std::vector<Copy> copies;
  const auto first = near_sides(r.point);
  if (first.empty()) return false;
  copies.push_back({r.point, r.dir_i, r.dir_j, first.front()});
  for (std::size_t q = 0; q < copies.size() && copies.size() < 32; ++q) {
    const Copy c = copies[q];
    for (int k : near_sides(c.z)) {
      const MoebiusMap& g = spec.sides[k].pairing;
      const HPoint w = g.apply(c.z);
      if (std::any_of(copies.begin(), copies.end(), [&](const Copy& o) { return hyp_distance(o.z, w) < 1e-6; })) {
        continue;
      }
      // Tangent directions rotate by arg g'(z) = -2 arg(cz + d).
      const double rot = -2.0 * std::atan2(g.c() * c.z.y, g.c() * c.z.x + g.d());
      const auto sides = near_sides(w);
      copies.push_back({w, wrap_direction(c.d1 + rot), wrap_direction(c.d2 + rot), sides.empty() ? none : sides.front()});
    }
  }
  const auto best = std::min_element(copies.begin(), copies.end(), [](const Copy& a, const Copy& b) {
    if (a.side != b.side) return a.side < b.side;
    if (a.z.x != b.z.x) return a.z.x < b.z.x;
    return a.z.y < b.z.y;
  });
  r.point = best->z;
  r.dir_i = best->d1;
  r.dir_j = best->d2;
  return true;
}

bool same_crossing(const CrossingRecord& a, const CrossingRecord& b) {
  if (a.class_i != b.class_i || a.class_j != b.class_j) return false;
  if (hyp_distance(a.point, b.point) > 1e-6) return false;
  const double tol = 1e-6;
  const bool direct = circular_gap(a.dir_i, b.dir_i) < tol && circular_gap(a.dir_j, b.dir_j) < tol;
  if (direct) return true;
  return a.class_i == a.class_j && circular_gap(a.dir_i, b.dir_j) < tol && circular_gap(a.dir_j, b.dir_i) < tol;
}

bool record_less(const CrossingRecord& a, const CrossingRecord& b) {
  if (a.class_i != b.class_i) return a.class_i < b.class_i;
  if (a.class_j != b.class_j) return a.class_j < b.class_j;
  if (a.pass_i != b.pass_i) return a.pass_i < b.pass_i;
  if (a.pass_j != b.pass_j) return a.pass_j < b.pass_j;
  if (a.point.x != b.point.x) return a.point.x < b.point.x;
  return a.point.y < b.point.y;
}

std::vector<CrossingRecord> finish(std::vector<CrossingRecord> records, const SurfaceSpec& spec,
                                   const CrossingOptions& options, std::size_t* duplicates) {
  std::vector<CrossingRecord> interior;
  std::vector<CrossingRecord> boundary;
  interior.reserve(records.size());
  for (auto& r : records) {
    if (canonicalize(r, spec)) {
      boundary.push_back(r);
    } else {
      interior.push_back(r);
    }
  }
  records.clear();
  records.shrink_to_fit();
  std::sort(boundary.begin(), boundary.end(), record_less);
  std::vector<char> dropped(boundary.size(), 0);
  std::size_t dup = 0;
  for (std::size_t a = 0; a < boundary.size(); ++a) {
    if (dropped[a]) continue;
    for (std::size_t b = a + 1; b < boundary.size(); ++b) {
      if (boundary[b].class_i != boundary[a].class_i || boundary[b].class_j != boundary[a].class_j) break;
      if (!dropped[b] && same_crossing(boundary[a], boundary[b])) {
        dropped[b] = 1;
        ++dup;
      }
    }
  }
  for (std::size_t a = 0; a < boundary.size(); ++a) {
    if (!dropped[a]) interior.push_back(boundary[a]);
  }
  for (auto& r : interior) {
    const auto w = [&](std::uint32_t id) {
      return id < options.power_weights.size() ? options.power_weights[id] : 1LL;
    };
    r.weight = w(r.class_i) * w(r.class_j);
  }
  std::sort(interior.begin(), interior.end(), record_less);
  if (duplicates) *duplicates = dup;
  return interior;
}

struct Box {
  double x0, x1, v0, v1;  // v = log y
};

Box segment_box(const GeodesicSegment& s) {
  const double pad = 1e-6;
  Box b;
  b.x0 = std::min(s.start.x, s.end.x) - pad;
  b.x1 = std::max(s.start.x, s.end.x) + pad;
  double ylo = std::min(s.start.y, s.end.y);
  double yhi = std::max(s.start.y, s.end.y);
  const auto& g = s.geodesic;
  if (!g.from.infinite && !g.to.infinite && s.t0 <= 0.0 && s.t1 >= 0.0) {
    yhi = std::max(yhi, 0.5 * std::abs(g.to.x - g.from.x));
  }
  b.v0 = std::log(ylo) - pad;
  b.v1 = std::log(yhi) + pad;
  return b;
}

}  // namespace

std::optional<SegmentHit> segment_crossing(const GeodesicSegment& s1, const GeodesicSegment& s2) {
  const auto l1 = s1.geodesic.unoriented();
  const auto l2 = s2.geodesic.unoriented();
  if (approx_equal(l1, l2, tol::geom)) return std::nullopt;
  const auto hit = intersect_lines(l1, l2);
  if (!hit) return std::nullopt;
  const double t1 = s1.geodesic.coordinate(hit->point);
  if (t1 < s1.t0 - tol::geom || t1 > s1.t1 + tol::geom) return std::nullopt;
  const double t2 = s2.geodesic.coordinate(hit->point);
  if (t2 < s2.t0 - tol::geom || t2 > s2.t1 + tol::geom) return std::nullopt;
  SegmentHit h;
  h.point = hit->point;
  h.dir1 = s1.geodesic.direction(hit->point);
  h.dir2 = s2.geodesic.direction(hit->point);
  h.angle = fold_angle(h.dir1, h.dir2);
  return h;
}

std::vector<CrossingRecord> brute_force_crossings(const std::vector<SegmentChain>& chains, const SurfaceSpec& spec,
                                                  const CrossingOptions& options) {
  std::vector<const GeodesicSegment*> all;
  for (const auto& c : chains) {
    for (const auto& s : c.segments) all.push_back(&s);
  }
  std::vector<CrossingRecord> raw;
  for (std::size_t a = 0; a < all.size(); ++a) {
    for (std::size_t b = a + 1; b < all.size(); ++b) {
      const GeodesicSegment* p = all[a];
      const GeodesicSegment* q = all[b];
      if (!pair_first(*p, *q)) std::swap(p, q);
      if (p->class_id == q->class_id && p->pass == q->pass) continue;
      if (const auto h = segment_crossing(*p, *q)) raw.push_back(make_record(*p, *q, *h));
    }
  }
  return finish(std::move(raw), spec, options, nullptr);
}

std::vector<CrossingRecord> find_crossings(const std::vector<SegmentChain>& chains, const SurfaceSpec& spec,
                                           const CrossingOptions& options, CrossingStats* stats) {
  std::vector<const GeodesicSegment*> segs;
  for (const auto& c : chains) {
    for (const auto& s : c.segments) segs.push_back(&s);
  }
  CrossingStats st;
  st.segments = segs.size();
  if (segs.empty()) {
    if (stats) *stats = st;
    return {};
  }
  std::vector<Box> boxes(segs.size());
  Box world{1e300, -1e300, 1e300, -1e300};
  std::vector<double> lengths(segs.size());
  for (std::size_t i = 0; i < segs.size(); ++i) {
    boxes[i] = segment_box(*segs[i]);
    world.x0 = std::min(world.x0, boxes[i].x0);
    world.x1 = std::max(world.x1, boxes[i].x1);
    world.v0 = std::min(world.v0, boxes[i].v0);
    world.v1 = std::max(world.v1, boxes[i].v1);
    lengths[i] = segs[i]->length();
  }
  double h = options.cell_size;
  if (h <= 0.0) {
    std::nth_element(lengths.begin(), lengths.begin() + lengths.size() / 2, lengths.end());
    h = std::clamp(lengths[lengths.size() / 2], 0.05, 1.0);
  }
  const double width = world.x1 - world.x0;
  const double height = world.v1 - world.v0;
  while ((width / h + 1.0) * (height / h + 1.0) > 4e6) h *= 2.0;
  st.cell_size = h;
  const auto nx = static_cast<std::size_t>(width / h) + 1;
  const auto nv = static_cast<std::size_t>(height / h) + 1;
  st.cells = nx * nv;
  const auto cell_x = [&](double x) { return std::min(nx - 1, static_cast<std::size_t>((x - world.x0) / h)); };
  const auto cell_v = [&](double v) { return std::min(nv - 1, static_cast<std::size_t>((v - world.v0) / h)); };

  // Compressed cell lists: count, prefix sum, fill.
  std::vector<std::size_t> start(st.cells + 1, 0);
  for (const auto& b : boxes) {
    for (std::size_t ix = cell_x(b.x0); ix <= cell_x(b.x1); ++ix) {
      for (std::size_t iv = cell_v(b.v0); iv <= cell_v(b.v1); ++iv) ++start[ix * nv + iv + 1];
    }
  }
  for (std::size_t c = 0; c < st.cells; ++c) start[c + 1] += start[c];
  std::vector<std::uint32_t> members(start.back());
  {
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const auto& b = boxes[i];
      for (std::size_t ix = cell_x(b.x0); ix <= cell_x(b.x1); ++ix) {
        for (std::size_t iv = cell_v(b.v0); iv <= cell_v(b.v1); ++iv) {
          members[fill[ix * nv + iv]++] = static_cast<std::uint32_t>(i);
        }
      }
    }
  }
  std::vector<CrossingRecord> raw;
  for (std::size_t c = 0; c < st.cells; ++c) {
    const std::size_t lo = start[c];
    const std::size_t hi = start[c + 1];
    for (std::size_t a = lo; a < hi; ++a) {
      const Box& ba = boxes[members[a]];
      for (std::size_t b = a + 1; b < hi; ++b) {
        const Box& bb = boxes[members[b]];
        if (ba.x1 < bb.x0 || bb.x1 < ba.x0 || ba.v1 < bb.v0 || bb.v1 < ba.v0) continue;
        const GeodesicSegment* p = segs[members[a]];
        const GeodesicSegment* q = segs[members[b]];
        if (!pair_first(*p, *q)) std::swap(p, q);
        if (p->class_id == q->class_id && p->pass == q->pass) continue;
        ++st.pair_tests;
        const auto hit = segment_crossing(*p, *q);
        if (!hit) continue;
        if (cell_x(hit->point.x) * nv + cell_v(std::log(hit->point.y)) != c) continue;
        raw.push_back(make_record(*p, *q, *hit));
      }
    }
  }
  auto out = finish(std::move(raw), spec, options, &st.boundary_duplicates);
  if (stats) *stats = st;
  return out;
}

std::vector<CrossingRecord> crossings_with_probe(const std::vector<SegmentChain>& chains, const SegmentChain& probe) {
  std::vector<CrossingRecord> out;
  for (const auto& c : chains) {
    for (const auto& s : c.segments) {
      for (const auto& p : probe.segments) {
        if (const auto h = segment_crossing(s, p)) out.push_back(make_record(s, p, *h));
      }
    }
  }
  std::sort(out.begin(), out.end(), record_less);
  return out;
}

std::vector<long long> power_weights(const std::vector<ClosedGeodesicClass>& classes) {
  std::vector<long long> w;
  w.reserve(classes.size());
  for (const auto& c : classes) w.push_back(c.power_weight());
  return w;
}

double weighted_total(const std::vector<CrossingRecord>& records, std::size_t class_count) {
  double total = 0.0;
  for (const auto& r : records) {
    if (r.class_i >= class_count || r.class_j >= class_count) {
      throw ConsistencyError("weighted_total: record refers to class " + std::to_string(std::max(r.class_i, r.class_j)) +
                             " but only " + std::to_string(class_count) + " classes are known");
    }
    total += 2.0 * static_cast<double>(r.weight);
  }
  return total;
}

std::vector<CrossingRecord> multiplicity_collapse(const std::vector<CrossingRecord>& records, double delta) {
  std::vector<CrossingRecord> sorted = records;
  std::sort(sorted.begin(), sorted.end(), [](const CrossingRecord& a, const CrossingRecord& b) {
    if (a.class_i != b.class_i) return a.class_i < b.class_i;
    if (a.class_j != b.class_j) return a.class_j < b.class_j;
    if (a.point.x != b.point.x) return a.point.x < b.point.x;
    return a.point.y < b.point.y;
  });
  std::vector<CrossingRecord> out;
  std::vector<char> used(sorted.size(), 0);
  for (std::size_t a = 0; a < sorted.size(); ++a) {
    if (used[a]) continue;
    CrossingRecord merged = sorted[a];
    for (std::size_t b = a + 1; b < sorted.size(); ++b) {
      if (sorted[b].class_i != merged.class_i || sorted[b].class_j != merged.class_j) break;
      if (sorted[b].point.x - sorted[a].point.x > delta) break;
      if (used[b]) continue;
      if (std::hypot(sorted[b].point.x - sorted[a].point.x, sorted[b].point.y - sorted[a].point.y) <= delta) {
        merged.weight += sorted[b].weight;
        merged.multiplicity += sorted[b].multiplicity;
        used[b] = 1;
      }
    }
    out.push_back(merged);
  }
  std::sort(out.begin(), out.end(), record_less);
  return out;
}

void write_crossings_csv(const std::vector<CrossingRecord>& records, const std::filesystem::path& path) {
  const auto tmp = path.string() + ".tmp";
  {
    std::FILE* f = std::fopen(tmp.c_str(), "w");
    if (!f) throw ResourceError("cannot write " + tmp);
    std::fputs("class_i,class_j,pass_i,pass_j,x,y,dir_i,dir_j,theta,weight,multiplicity,near_tangent\n", f);
    for (const auto& r : records) {
      std::fprintf(f, "%u,%u,%u,%u,%.17g,%.17g,%.17g,%.17g,%.17g,%lld,%d,%d\n", r.class_i, r.class_j, r.pass_i,
                   r.pass_j, r.point.x, r.point.y, r.dir_i, r.dir_j, r.angle, r.weight, r.multiplicity,
                   r.near_tangent ? 1 : 0);
    }
    if (std::fclose(f) != 0) throw ResourceError("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::vector<CrossingRecord> read_crossings_csv(const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.c_str(), "r");
  if (!f) throw MissingArtifactError("crossing table not found: " + path.string());
  std::vector<CrossingRecord> out;
  char line[1024];
  if (!std::fgets(line, sizeof line, f) || std::string(line).rfind("class_i,", 0) != 0) {
    std::fclose(f);
    throw CacheError(path.string() + ": missing header row");
  }
  std::size_t row = 1;
  while (std::fgets(line, sizeof line, f)) {
    ++row;
    CrossingRecord r;
    int flag = 0;
    const int n = std::sscanf(line, "%u,%u,%u,%u,%lf,%lf,%lf,%lf,%lf,%lld,%d,%d", &r.class_i, &r.class_j, &r.pass_i,
                              &r.pass_j, &r.point.x, &r.point.y, &r.dir_i, &r.dir_j, &r.angle, &r.weight,
                              &r.multiplicity, &flag);
    if (n != 12) {
      std::fclose(f);
      throw CacheError(path.string() + ": malformed row " + std::to_string(row));
    }
    r.near_tangent = flag != 0;
    out.push_back(r);
  }
  std::fclose(f);
  return out;
}

}  // namespace hypgeo
