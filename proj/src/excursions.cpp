#include "hypgeo/excursions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "hypgeo/errors.hpp"

namespace hypgeo {

namespace {

struct Piece {
  std::uint32_t pass = 0;
  std::size_t vertex = 0;
  double t_start = 0.0;  // along the segment's own geodesic
  double t_end = 0.0;
  bool from_entry = false;
  bool to_exit = false;
  double radius = 0.0;  // normalized semicircle radius
  bool forward = true;  // travels towards increasing normalized x
};

std::vector<Piece> pieces_of(const SegmentChain& chain, const CuspData& cusp, double height) {
  std::vector<Piece> out;
  for (const auto& seg : chain.segments) {
    std::vector<Piece> here;
    for (std::size_t k = 0; k < cusp.to_infinity.size(); ++k) {
      const MoebiusMap sigma = cusp.normalizer * cusp.to_infinity[k];
      const OrientedGeodesic g = apply(sigma, seg.geodesic);
      if (g.from.infinite || g.to.infinite) continue;
      const double radius = 0.5 * std::abs(g.to.x - g.from.x);
      if (radius <= height) continue;
      const double tau = std::acosh(radius / height);
      const double s0 = g.coordinate(sigma.apply(seg.start));
      const double lo = std::max(s0, -tau);
      const double hi = std::min(s0 + seg.length(), tau);
      if (!(hi > lo)) continue;
      Piece p;
      p.pass = seg.pass;
      p.vertex = k;
      p.t_start = seg.t0 + (lo - s0);
      p.t_end = seg.t0 + (hi - s0);
      p.from_entry = lo == s0;
      p.to_exit = hi == s0 + seg.length();
      p.radius = radius;
      p.forward = g.to.x > g.from.x;
      here.push_back(p);
    }
    std::sort(here.begin(), here.end(), [](const Piece& a, const Piece& b) { return a.t_start < b.t_start; });
    out.insert(out.end(), here.begin(), here.end());
  }
  return out;
}

bool continues(const Piece& a, const Piece& b, std::size_t pass_count) {
  return a.to_exit && b.from_entry && b.pass == (a.pass + 1) % pass_count;
}

// (class, pass) -> excursion indices into a flat list.
using PassIndex = std::unordered_map<std::uint64_t, std::vector<std::uint32_t>>;

std::uint64_t pass_key(std::uint32_t cls, std::uint32_t pass) { return (std::uint64_t{cls} << 32) | pass; }

}  // namespace

bool ExcursionRecord::spans(std::uint32_t pass, std::uint32_t pass_count) const {
  if (pass >= pass_count) return false;
  if (first_pass <= last_pass) return pass >= first_pass && pass <= last_pass;
  return pass >= first_pass || pass <= last_pass;
}

std::vector<ExcursionRecord> decompose_excursions(const SegmentChain& chain, const SurfaceSpec& spec, double r,
                                                  std::size_t cusp_index) {
  if (cusp_index >= spec.cusps.size()) throw std::invalid_argument("decompose_excursions: surface has no such cusp");
  if (!(r > 0.0)) throw std::domain_error("decompose_excursions: r must be positive");
  const CuspData& cusp = spec.cusps[cusp_index];
  const double height = 1.0 / r;
  const std::vector<Piece> pieces = pieces_of(chain, cusp, height);
  std::vector<ExcursionRecord> out;
  if (pieces.empty()) return out;
  const std::size_t n = chain.segments.size();
  const std::size_t m = pieces.size();
  // Rotate so the scan starts at the beginning of an excursion.
  std::size_t first = 0;
  while (first < m && continues(pieces[(first + m - 1) % m], pieces[first], n)) ++first;
  if (first == m) {
    throw ConsistencyError("decompose_excursions: chain of class " + std::to_string(chain.class_id) +
                           " lies entirely inside the horoball");
  }
  std::size_t i = 0;
  while (i < m) {
    const Piece& head = pieces[(first + i) % m];
    ExcursionRecord e;
    e.class_id = chain.class_id;
    e.first_pass = head.pass;
    e.max_height = head.radius;
    e.entry = chain.segments[head.pass].geodesic.point_at(head.t_start);
    double sum = head.t_end - head.t_start;
    const Piece* tail = &head;
    std::size_t j = i + 1;
    while (j < m && continues(*tail, pieces[(first + j) % m], n)) {
      tail = &pieces[(first + j) % m];
      sum += tail->t_end - tail->t_start;
      ++j;
    }
    e.last_pass = tail->pass;
    e.exit = chain.segments[tail->pass].geodesic.point_at(tail->t_end);
    e.piece_length = sum;
    e.length = 2.0 * std::acosh(head.radius / height);
    const double dx = 2.0 * std::sqrt((head.radius - height) * (head.radius + height));
    e.delta_x = head.forward ? dx : -dx;
    e.winding = static_cast<int>(std::floor(dx + 1e-12));
    out.push_back(e);
    i = j;
  }
  return out;
}

std::map<int, long long> excursion_histogram(const std::vector<std::vector<ExcursionRecord>>& per_class,
                                             const std::vector<ClosedGeodesicClass>& classes) {
  std::map<int, long long> hist;
  for (std::size_t c = 0; c < per_class.size(); ++c) {
    const long long w = c < classes.size() ? classes[c].power_weight() : 1;
    for (const auto& e : per_class[c]) hist[e.winding] += w;
  }
  return hist;
}

int excursion_pair_crossings(const ExcursionRecord& e1, const ExcursionRecord& e2,
                             const std::vector<CrossingRecord>& records, const std::vector<SegmentChain>& chains,
                             const SurfaceSpec& spec, double r) {
  const double height = 1.0 / r;
  const auto count_of = [&](std::uint32_t cls) {
    return static_cast<std::uint32_t>(chains.at(cls).segments.size());
  };
  int count = 0;
  for (const auto& rec : records) {
    if (spec.cusps.front().height(rec.point) <= height) continue;
    const auto in = [&](const ExcursionRecord& e, std::uint32_t cls, std::uint32_t pass) {
      return e.class_id == cls && e.spans(pass, count_of(cls));
    };
    const bool direct = in(e1, rec.class_i, rec.pass_i) && in(e2, rec.class_j, rec.pass_j);
    const bool swapped = in(e2, rec.class_i, rec.pass_i) && in(e1, rec.class_j, rec.pass_j);
    if (direct || swapped) ++count;
  }
  return count;
}

PairCheck check_excursion_pairs(const std::vector<std::vector<ExcursionRecord>>& per_class,
                                const std::vector<CrossingRecord>& records, const std::vector<SegmentChain>& chains,
                                const SurfaceSpec& spec, double r) {
  const double height = 1.0 / r;
  std::vector<const ExcursionRecord*> flat;
  PassIndex index;
  for (std::size_t c = 0; c < per_class.size(); ++c) {
    const auto passes = static_cast<std::uint32_t>(chains.at(c).segments.size());
    for (const auto& e : per_class[c]) {
      const auto id = static_cast<std::uint32_t>(flat.size());
      flat.push_back(&e);
      for (std::uint32_t p = e.first_pass;; p = (p + 1) % passes) {
        index[pass_key(e.class_id, p)].push_back(id);
        if (p == e.last_pass) break;
      }
    }
  }
  const CuspData& cusp = spec.cusps.front();
  const auto locate = [&](std::uint32_t cls, std::uint32_t pass, const HPoint& z) -> long long {
    const auto it = index.find(pass_key(cls, pass));
    if (it == index.end()) return -1;
    if (it->second.size() == 1) return it->second.front();
    // Several excursions share the pass: pick the one whose height matches.
    const double h = cusp.height(z);
    long long best = -1;
    double gap = std::numeric_limits<double>::infinity();
    for (auto id : it->second) {
      const double d = std::abs(flat[id]->max_height - h);
      if (flat[id]->max_height >= h && d < gap) {
        gap = d;
        best = id;
      }
    }
    return best >= 0 ? best : it->second.front();
  };
  std::map<std::pair<long long, long long>, int> counts;
  for (const auto& rec : records) {
    if (cusp.height(rec.point) <= height) continue;
    long long a = locate(rec.class_i, rec.pass_i, rec.point);
    long long b = locate(rec.class_j, rec.pass_j, rec.point);
    if (a < 0 || b < 0) continue;
    if (a > b) std::swap(a, b);
    ++counts[{a, b}];
  }
  PairCheck out;
  for (const auto& [key, count] : counts) {
    const int n1 = flat[key.first]->winding;
    const int n2 = flat[key.second]->winding;
    const int bound = 2 * std::min(n1, n2) + 2;
    ++out.pairs;
    if (key.first == key.second) ++out.self_pairs;
    out.worst_excess = std::max(out.worst_excess, count - bound);
    if (count > bound) ++out.violations;
  }
  return out;
}

CuspMass cusp_crossing_mass(const std::vector<CrossingRecord>& records, const SurfaceSpec& spec, double r, double T) {
  CuspMass out;
  out.r = r;
  out.T = T;
  if (spec.cusps.empty()) return out;
  const double height = 1.0 / r;
  for (const auto& rec : records) {
    if (spec.cusps.front().height(rec.point) > height) out.mass += 2.0 * static_cast<double>(rec.weight);
  }
  out.ratio = out.mass / std::exp(2.0 * T);
  return out;
}

double fit_excursion_constant(const std::vector<std::vector<ExcursionRecord>>& per_class) {
  double c = std::numeric_limits<double>::infinity();
  for (const auto& list : per_class) {
    for (const auto& e : list) {
      if (e.winding >= 1) c = std::min(c, e.length - 2.0 * std::log(static_cast<double>(e.winding)));
    }
  }
  return c;
}

double histogram_slope(const std::map<int, long long>& hist, int lo, int hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int k = 0;
  for (const auto& [n, e] : hist) {
    if (n < lo || n > hi || e <= 0) continue;
    const double x = std::log(static_cast<double>(n));
    const double y = std::log(static_cast<double>(e));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++k;
  }
  if (k < 2) return std::numeric_limits<double>::quiet_NaN();
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace hypgeo
