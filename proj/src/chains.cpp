#include "hypgeo/chains.hpp"

#include <cmath>
#include <limits>

#include "hypgeo/errors.hpp"
#include "hypgeo/words.hpp"

namespace hypgeo {

namespace {

constexpr double kStep = 1e-8;

struct Clip {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  int lo_side = -1;
  int hi_side = -1;
  int hi_ties = 0;
};

// Parameter interval of geo inside the closed polygon.
Clip clip_to_polygon(const OrientedGeodesic& geo, const SurfaceSpec& spec) {
  Clip c;
  const auto line = geo.unoriented();
  std::vector<std::pair<int, double>> upper;
  for (std::size_t k = 0; k < spec.sides.size(); ++k) {
    const auto& s = spec.sides[k];
    if (approx_equal(line, s.line, tol::geom)) continue;
    const auto hit = intersect_lines(line, s.line);
    if (!hit) {
      if (s.inward * signed_sinh_distance(s.line, geo.point_at(0.0)) < 0.0) {
        c.lo = 1.0;
        c.hi = 0.0;
        return c;
      }
      continue;
    }
    const double t = geo.coordinate(hit->point);
    const double ahead = s.inward * signed_sinh_distance(s.line, geo.point_at(t + 1.0));
    if (ahead > 0.0) {
      if (t > c.lo) {
        c.lo = t;
        c.lo_side = static_cast<int>(k);
      }
    } else {
      upper.emplace_back(static_cast<int>(k), t);
      if (t < c.hi) {
        c.hi = t;
        c.hi_side = static_cast<int>(k);
      }
    }
  }
  for (const auto& [k, t] : upper) {
    if (std::abs(t - c.hi) < tol::geom) ++c.hi_ties;
  }
  return c;
}

}  // namespace

SegmentChain trace_chain(const MoebiusMap& g, std::uint32_t class_id, const SurfaceSpec& spec) {
  const double ell = translation_length(g);
  const OrientedGeodesic a0 = oriented_axis(g);
  const HPoint foot = a0.point_at(foot_coordinate(a0, spec.base_point));
  const DomainPoint start = normalize_to_domain(foot, spec);
  MoebiusMap m = start.h * g * start.h.inverse();
  OrientedGeodesic geo = oriented_axis(m);
  Clip clip = clip_to_polygon(geo, spec);
  if (!(clip.hi > clip.lo)) {
    throw NumericalInstabilityError("trace_chain: axis misses the fundamental polygon");
  }

  SegmentChain chain;
  chain.class_id = class_id;
  chain.representative = m;
  int entry_side = clip.lo_side;
  double lo = clip.lo;
  int degenerate = 0;
  const std::size_t guard = 100'000;
  while (true) {
    GeodesicSegment seg;
    seg.class_id = class_id;
    seg.pass = static_cast<std::uint32_t>(chain.segments.size());
    seg.geodesic = geo;
    seg.t0 = lo;
    seg.t1 = clip.hi;
    seg.start = geo.point_at(seg.t0);
    seg.end = geo.point_at(seg.t1);
    seg.entry_side = entry_side;
    seg.exit_side = clip.hi_side;
    chain.length += seg.length();
    chain.segments.push_back(seg);
    if (chain.length >= ell - 1e-7) break;
    if (chain.segments.size() > guard) {
      throw NumericalInstabilityError("trace_chain: segment guard exceeded");
    }

    if (clip.hi_ties == 1 && clip.hi_side >= 0) {
      const auto& s = spec.sides[clip.hi_side];
      const HPoint exit_point = s.pairing.apply(geo.point_at(clip.hi));
      m = s.pairing * m * s.neighbor;
      chain.letters.push_back(s.letter);
      geo = oriented_axis(m);
      clip = clip_to_polygon(geo, spec);
      entry_side = s.partner;
      lo = geo.coordinate(exit_point);
      if (!(clip.hi > lo)) {
        throw NumericalInstabilityError("trace_chain: empty segment after side crossing");
      }
    } else {
      // Vertex passage: step past the corner and relocate.
      if (++degenerate > 3 * static_cast<int>(spec.sides.size()) + static_cast<int>(chain.segments.size())) {
        throw NumericalInstabilityError("trace_chain: persistent vertex degeneracy");
      }
      const double t_exit = clip.hi;
      const DomainPoint next = normalize_to_domain(geo.point_at(t_exit + kStep), spec);
      const HPoint corner = next.h.apply(geo.point_at(t_exit));
      m = next.h * m * next.h.inverse();
      chain.letters += inverse_word(next.word);
      geo = oriented_axis(m);
      clip = clip_to_polygon(geo, spec);
      entry_side = -1;
      lo = std::max(clip.lo, geo.coordinate(corner));
      if (!(clip.hi > lo)) {
        throw NumericalInstabilityError("trace_chain: empty segment after vertex passage");
      }
    }
  }
  if (std::abs(chain.length - ell) > 1e-6) {
    throw NumericalInstabilityError("trace_chain: chain length " + std::to_string(chain.length) +
                                    " differs from translation length " + std::to_string(ell));
  }
  // The last exit leads back to the first tile.
  const auto& last = chain.segments.back();
  if (last.exit_side >= 0 && clip.hi_ties == 1) {
    chain.letters.push_back(spec.sides[last.exit_side].letter);
  } else {
    const DomainPoint next = normalize_to_domain(geo.point_at(clip.hi + kStep), spec);
    chain.letters += inverse_word(next.word);
  }
  return chain;
}

SegmentChain arc_chain(const HPoint& from, const HPoint& to, std::uint32_t class_id) {
  SegmentChain chain;
  chain.class_id = class_id;
  GeodesicSegment seg;
  seg.class_id = class_id;
  seg.geodesic = geodesic_through(from, to);
  seg.t0 = seg.geodesic.coordinate(from);
  seg.t1 = seg.geodesic.coordinate(to);
  seg.start = from;
  seg.end = to;
  chain.length = seg.length();
  chain.segments.push_back(seg);
  return chain;
}

}  // namespace hypgeo
