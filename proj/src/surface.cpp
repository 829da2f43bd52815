#include "hypgeo/surface.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <deque>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>
#include <unordered_set>

#include "hypgeo/errors.hpp"
#include "hypgeo/words.hpp"

namespace hypgeo {

namespace {

constexpr double pi = std::numbers::pi;

BoundaryGeodesic side_line(const PolygonVertex& u, const PolygonVertex& v) {
  if (u.ideal && v.ideal) return {u.boundary, v.boundary};
  if (!u.ideal && !v.ideal) return geodesic_through(u.point, v.point).unoriented();
  throw ConfigError("polygon sides between finite and ideal vertices are not supported");
}

bool vertex_matches(const PolygonVertex& image_of, const MoebiusMap& g, const PolygonVertex& target) {
  if (image_of.ideal != target.ideal) return false;
  if (image_of.ideal) return approx_equal(g.apply(image_of.boundary), target.boundary, tol::geom);
  return hyp_distance(g.apply(image_of.point), target.point) < tol::geom;
}

// Interior angles at finite vertices, from the tangents of the two sides.
void fill_angles(SurfaceSpec& spec) {
  const std::size_t n = spec.vertices.size();
  for (std::size_t k = 0; k < n; ++k) {
    auto& v = spec.vertices[k];
    if (v.ideal) {
      v.angle = 0.0;
      continue;
    }
    const auto& prev = spec.vertices[(k + n - 1) % n];
    const auto& next = spec.vertices[(k + 1) % n];
    const double d1 = geodesic_through(v.point, prev.point).direction(v.point);
    const double d2 = geodesic_through(v.point, next.point).direction(v.point);
    double a = std::abs(d1 - d2);
    if (a > pi) a = 2.0 * pi - a;
    v.angle = a;
  }
}

void fill_sides(SurfaceSpec& spec, const std::vector<std::pair<int, char>>& pairing_letters) {
  const std::size_t n = spec.vertices.size();
  spec.sides.clear();
  for (std::size_t k = 0; k < n; ++k) {
    PolygonSide side;
    side.line = side_line(spec.vertices[k], spec.vertices[(k + 1) % n]);
    side.partner = pairing_letters[k].first;
    side.letter = pairing_letters[k].second;
    side.neighbor = spec.letter_matrix(side.letter);
    side.pairing = side.neighbor.inverse();
    side.inward = signed_sinh_distance(side.line, spec.base_point) > 0.0 ? 1.0 : -1.0;
    spec.sides.push_back(side);
  }
}

// Groups ideal vertices into cusp cycles and derives the normalizing maps.
void fill_cusps(SurfaceSpec& spec) {
  const int n = static_cast<int>(spec.vertices.size());
  std::vector<int> cycle_of(n, -1);
  for (int start = 0; start < n; ++start) {
    if (!spec.vertices[start].ideal || cycle_of[start] >= 0) continue;
    if (!spec.vertices[start].boundary.infinite) {
      throw ConfigError("cusp cycles must contain the vertex at infinity");
    }
    CuspData cusp;
    std::map<int, MoebiusMap> sigma;
    std::map<int, std::string> sigma_word;
    std::vector<std::pair<MoebiusMap, std::string>> loops;
    std::deque<int> queue{start};
    sigma[start] = MoebiusMap::identity();
    sigma_word[start] = "";
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int k = 0; k < n; ++k) {
        const auto& side = spec.sides[k];
        const int ends[2] = {k, (k + 1) % n};
        for (int e : ends) {
          if (e != v) continue;
          // pairing maps v onto a vertex w of the partner side.
          const int p = side.partner;
          const int pend[2] = {p, (p + 1) % n};
          for (int w : pend) {
            if (!vertex_matches(spec.vertices[v], side.pairing, spec.vertices[w])) continue;
            // sigma_w * w = infinity with sigma_w = sigma_v * neighbor.
            const MoebiusMap candidate = sigma[v] * side.neighbor;
            const std::string cand_word = free_reduce(sigma_word[v] + side.letter);
            if (!sigma.count(w)) {
              sigma[w] = candidate;
              sigma_word[w] = cand_word;
              queue.push_back(w);
            } else {
              // candidate^-1 * sigma_w fixes infinity.
              const MoebiusMap loop = sigma[w] * candidate.inverse();
              loops.emplace_back(loop, free_reduce(sigma_word[w] + inverse_word(cand_word)));
            }
          }
        }
      }
    }
    double best = 0.0;
    for (const auto& [g, w] : loops) {
      if (std::abs(g.c()) > tol::alg || classify(g) == MapKind::identity) continue;
      const double shift = g.b() / g.d();
      if (best == 0.0 || std::abs(shift) < std::abs(best) - tol::geom) {
        best = shift;
        cusp.parabolic = g;
        cusp.parabolic_word = w;
      }
    }
    if (best == 0.0) throw ConfigError("cusp cycle without parabolic stabilizer");
    if (best < 0.0) {
      cusp.parabolic = cusp.parabolic.inverse();
      cusp.parabolic_word = inverse_word(cusp.parabolic_word);
    }
    cusp.width = std::abs(best);
    const double s = std::sqrt(cusp.width);
    cusp.normalizer = MoebiusMap(1.0 / s, 0.0, 0.0, s);
    for (const auto& [v, g] : sigma) {
      cycle_of[v] = static_cast<int>(spec.cusps.size());
      cusp.vertex_cycle.push_back(v);
      cusp.to_infinity.push_back(g);
    }
    spec.cusps.push_back(cusp);
  }
  spec.cusp_count = static_cast<int>(spec.cusps.size());
}

// Max distance from the base point to F minus the horoballs N_p(1),
// sampled along the boundary of that region, plus a margin.
double compute_core_radius(const SurfaceSpec& spec) {
  double best = 0.0;
  for (const auto& v : spec.vertices) {
    if (!v.ideal) best = std::max(best, hyp_distance(spec.base_point, v.point));
  }
  if (spec.cusps.empty()) return best + 1e-6;
  const double span = 40.0;
  const int samples = 40000;
  for (const auto& side : spec.sides) {
    const OrientedGeodesic geo{side.line.first(), side.line.second()};
    for (int i = 0; i <= samples; ++i) {
      const double t = -span + 2.0 * span * i / samples;
      const HPoint z = geo.point_at(t);
      if (spec.cusp_height(z) <= 1.0) best = std::max(best, hyp_distance(spec.base_point, z));
    }
  }
  // Horocycle arcs at height 1 inside F.
  const auto& cusp = spec.cusps.front();
  for (std::size_t k = 0; k < cusp.vertex_cycle.size(); ++k) {
    const MoebiusMap back = (cusp.normalizer * cusp.to_infinity[k]).inverse();
    for (int i = 0; i <= samples; ++i) {
      const double x = -0.5 * span + span * i / samples;
      const HPoint z = back.apply(HPoint{x, 1.0});
      if (spec.contains(z)) best = std::max(best, hyp_distance(spec.base_point, z));
    }
  }
  return best + 0.05;
}

}  // namespace

double CuspData::height(const HPoint& z) const {
  double h = 0.0;
  for (const auto& g : to_infinity) h = std::max(h, g.apply(z).y / width);
  return h;
}

std::size_t CuspData::nearest_vertex(const HPoint& z) const {
  std::size_t best = 0;
  double h = -1.0;
  for (std::size_t k = 0; k < to_infinity.size(); ++k) {
    const double hk = to_infinity[k].apply(z).y;
    if (hk > h) {
      h = hk;
      best = k;
    }
  }
  return best;
}

MoebiusMap SurfaceSpec::letter_matrix(char letter) const {
  for (const auto& g : generators) {
    if (g.label == letter) return g.matrix;
    if (invert_letter(g.label) == letter) return g.matrix.inverse();
  }
  throw std::invalid_argument(std::string("unknown generator letter '") + letter + "'");
}

bool SurfaceSpec::is_letter(char letter) const {
  return std::any_of(generators.begin(), generators.end(),
                     [&](const Generator& g) { return g.label == letter || invert_letter(g.label) == letter; });
}

bool SurfaceSpec::contains(const HPoint& z) const {
  for (const auto& s : sides) {
    if (s.inward * signed_sinh_distance(s.line, z) < -tol::geom) return false;
  }
  return true;
}

double SurfaceSpec::distance_to_polygon(const HPoint& z) const {
  double worst = 0.0;
  for (const auto& s : sides) worst = std::max(worst, -s.inward * signed_sinh_distance(s.line, z));
  return worst > 0.0 ? std::asinh(worst) : 0.0;
}

double SurfaceSpec::cusp_height(const HPoint& z) const {
  return cusps.empty() ? 0.0 : cusps.front().height(z);
}

MoebiusMap evaluate_word(std::string_view word, const SurfaceSpec& spec) {
  MoebiusMap g;
  for (char c : word) g = g * spec.letter_matrix(c);
  return g;
}

SurfaceSpec build_punctured_torus() {
  SurfaceSpec spec;
  spec.name = "punctured_torus";
  spec.genus = 1;
  spec.generators = {{'a', MoebiusMap(1, 1, 1, 2)}, {'b', MoebiusMap(1, -1, -1, 2)}};
  const auto ideal = [](BoundaryPoint p) {
    PolygonVertex v;
    v.ideal = true;
    v.boundary = p;
    return v;
  };
  // Counterclockwise: infinity, -1, 0, 1.
  spec.vertices = {ideal(BoundaryPoint::infinity()), ideal(BoundaryPoint::at(-1.0)),
                   ideal(BoundaryPoint::at(0.0)), ideal(BoundaryPoint::at(1.0))};
  spec.base_point = {0.0, 1.0};
  spec.tree_tiling = true;
  // Side k joins vertex k and k+1. Tiles across sides: A^-1 F, B F, A F, B^-1 F.
  fill_sides(spec, {{2, 'A'}, {3, 'b'}, {0, 'a'}, {1, 'B'}});
  fill_angles(spec);
  fill_cusps(spec);
  spec.core_radius = compute_core_radius(spec);
  validate(spec);
  return spec;
}

SurfaceSpec build_genus2_octagon() {
  SurfaceSpec spec;
  spec.name = "genus2_octagon";
  spec.genus = 2;
  spec.base_point = {0.0, 1.0};
  // Regular octagon with interior angles pi/4: cosh R = cot^2(pi/8).
  const double cot = 1.0 / std::tan(pi / 8.0);
  const double circum = std::acosh(cot * cot);
  const double disk_r = std::tanh(0.5 * circum);
  const auto cayley = [](double re, double im) {
    // z = i (1 + w) / (1 - w)
    const double den = (1.0 - re) * (1.0 - re) + im * im;
    const double nr = -2.0 * im;
    const double ni = (1.0 - re * re - im * im);
    return HPoint{nr / den, ni / den};
  };
  for (int k = 0; k < 8; ++k) {
    const double ang = pi / 8.0 + k * pi / 4.0;
    PolygonVertex v;
    v.point = cayley(disk_r * std::cos(ang), disk_r * std::sin(ang));
    spec.vertices.push_back(v);
  }
  // Translation from the center through the midpoint of side k by twice the
  // inradius carries side k+4 onto side k.
  const char labels[4] = {'a', 'b', 'c', 'd'};
  for (int k = 0; k < 4; ++k) {
    // cosh(inradius) = cot(pi/8) for the regular octagon with angles pi/4.
    const double inradius = std::acosh(cot);
    const double ang = pi / 4.0 + k * pi / 4.0;
    const double mr = std::tanh(0.5 * inradius);
    const HPoint mid = cayley(mr * std::cos(ang), mr * std::sin(ang));
    const auto dir = geodesic_through(spec.base_point, mid);
    spec.generators.push_back({labels[k], translation_along(dir, 2.0 * inradius)});
  }
  std::vector<std::pair<int, char>> pairing;
  for (int k = 0; k < 8; ++k) {
    const char l = labels[k % 4];
    pairing.emplace_back((k + 4) % 8, k < 4 ? l : invert_letter(l));
  }
  fill_sides(spec, pairing);
  fill_angles(spec);
  spec.cusp_count = 0;
  spec.core_radius = compute_core_radius(spec);
  validate(spec);
  return spec;
}

const std::vector<std::string>& surface_names() {
  static const std::vector<std::string> names{"punctured_torus", "genus2_octagon"};
  return names;
}

SurfaceSpec build_surface(std::string_view name) {
  if (name == "punctured_torus") return build_punctured_torus();
  if (name == "genus2_octagon") return build_genus2_octagon();
  throw ConfigError("unknown surface '" + std::string(name) + "'; valid options: punctured_torus, genus2_octagon");
}

double area(const SurfaceSpec& spec) {
  const std::size_t k = spec.vertices.size();
  if (k < 3) throw std::domain_error("area: polygon needs at least 3 vertices");
  double angles = 0.0;
  for (const auto& v : spec.vertices) angles += v.ideal ? 0.0 : v.angle;
  return (static_cast<double>(k) - 2.0) * pi - angles;
}

DomainPoint normalize_to_domain(const HPoint& z, const SurfaceSpec& spec) {
  DomainPoint out{z, MoebiusMap::identity(), {}};
  constexpr int max_steps = 10'000;
  for (int step = 0; step < max_steps; ++step) {
    int violated = -1;
    for (std::size_t k = 0; k < spec.sides.size(); ++k) {
      const auto& s = spec.sides[k];
      if (s.inward * signed_sinh_distance(s.line, out.point) < -tol::geom) {
        violated = static_cast<int>(k);
        break;
      }
    }
    if (violated < 0) return out;
    const auto& s = spec.sides[violated];
    out.point = s.pairing.apply(out.point);
    out.h = s.pairing * out.h;
    out.word.insert(out.word.begin(), invert_letter(s.letter));
  }
  throw NumericalInstabilityError("normalize_to_domain: no convergence after 10000 steps");
}

void validate(const SurfaceSpec& spec) {
  const std::size_t n = spec.vertices.size();
  if (n < 3) throw ConfigError(spec.name + ": polygon needs at least 3 vertices");
  if (spec.euler_magnitude() <= 0) throw ConfigError(spec.name + ": 2g - 2 + n must be positive");
  for (const auto& g : spec.generators) {
    if (std::abs(g.matrix.det() - 1.0) > tol::alg) throw ConfigError(spec.name + ": generator not unimodular");
  }
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = spec.sides[k];
    const auto& p = spec.sides.at(static_cast<std::size_t>(s.partner));
    if (static_cast<std::size_t>(p.partner) != k) throw ConfigError(spec.name + ": side pairing is not an involution");
    if (!approx_equal(s.pairing * p.pairing, MoebiusMap::identity(), tol::alg)) {
      throw ConfigError(spec.name + ": paired maps are not mutually inverse");
    }
    const auto& u = spec.vertices[k];
    const auto& v = spec.vertices[(k + 1) % n];
    const auto& pu = spec.vertices[static_cast<std::size_t>(s.partner)];
    const auto& pv = spec.vertices[(static_cast<std::size_t>(s.partner) + 1) % n];
    const bool straight = vertex_matches(u, s.pairing, pu) && vertex_matches(v, s.pairing, pv);
    const bool crossed = vertex_matches(u, s.pairing, pv) && vertex_matches(v, s.pairing, pu);
    if (!straight && !crossed) throw ConfigError(spec.name + ": pairing does not map side onto partner");
    // The neighbor tile must lie across the side.
    const HPoint across = s.neighbor.apply(spec.base_point);
    if (s.inward * signed_sinh_distance(s.line, across) >= 0.0) {
      throw ConfigError(spec.name + ": neighbor tile on the wrong side");
    }
  }
  const double expected = 2.0 * pi * spec.euler_magnitude();
  if (std::abs(area(spec) - expected) > 1e-9) throw ConfigError(spec.name + ": area check failed");
  for (const auto& cusp : spec.cusps) {
    const MoebiusMap unit = cusp.normalizer * cusp.parabolic * cusp.normalizer.inverse();
    if (!approx_equal(unit, MoebiusMap(1, 1, 0, 1), tol::alg)) {
      throw ConfigError(spec.name + ": cusp normalizer does not produce z -> z + 1");
    }
    if (!approx_equal(evaluate_word(cusp.parabolic_word, spec), cusp.parabolic, tol::alg)) {
      throw ConfigError(spec.name + ": parabolic word mismatch");
    }
  }
}

std::string describe(const SurfaceSpec& spec) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "surface " << spec.name << "\n";
  os << "genus " << spec.genus << "\n";
  os << "cusps " << spec.cusp_count << "\n";
  os << "area " << area(spec) << "\n";
  for (const auto& g : spec.generators) {
    os << "generator " << g.label << " [[" << g.matrix.a() << ", " << g.matrix.b() << "], [" << g.matrix.c()
       << ", " << g.matrix.d() << "]] " << to_string(classify(g.matrix)) << "\n";
  }
  for (std::size_t k = 0; k < spec.vertices.size(); ++k) {
    const auto& v = spec.vertices[k];
    os << "vertex " << k << " ";
    if (v.ideal) {
      os << "ideal " << (v.boundary.infinite ? std::string("inf") : std::to_string(v.boundary.x));
    } else {
      os << "(" << v.point.x << ", " << v.point.y << ") angle " << v.angle;
    }
    os << "\n";
  }
  for (std::size_t k = 0; k < spec.sides.size(); ++k) {
    const auto& s = spec.sides[k];
    os << "side " << k << " partner " << s.partner << " letter " << s.letter << "\n";
  }
  for (const auto& c : spec.cusps) {
    os << "cusp width " << c.width << " parabolic_word " << c.parabolic_word << " cycle";
    for (int v : c.vertex_cycle) os << " " << v;
    os << "\n";
  }
  return os.str();
}

void walk_tiles(const SurfaceSpec& spec, const std::function<bool(const MoebiusMap&)>& keep,
                const std::function<bool(const MoebiusMap&, const std::string&)>& visit, std::size_t max_tiles) {
  const int nsides = static_cast<int>(spec.sides.size());
  std::size_t visited = 0;
  const auto guard = [&](const std::string& word) {
    if (++visited > max_tiles) {
      throw ResourceError("tile walk exceeded " + std::to_string(max_tiles) + " tiles at word length " +
                          std::to_string(word.size()));
    }
  };
  if (!keep(MoebiusMap::identity())) return;
  if (spec.tree_tiling) {
    struct Frame {
      MoebiusMap g;
      std::string word;
      int entered = -1;  // side of the tile through which we came back
    };
    std::vector<Frame> stack;
    stack.push_back({MoebiusMap::identity(), "", -1});
    while (!stack.empty()) {
      Frame f = std::move(stack.back());
      stack.pop_back();
      guard(f.word);
      if (!visit(f.g, f.word)) return;
      for (int k = nsides - 1; k >= 0; --k) {
        if (k == f.entered) continue;
        const auto& s = spec.sides[k];
        MoebiusMap h = f.g * s.neighbor;
        if (!keep(h)) continue;
        stack.push_back({h, f.word + s.letter, s.partner});
      }
    }
    return;
  }
  struct Key {
    std::array<long long, 4> v;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = 1469598103934665603ULL;
      for (long long x : k.v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ULL;
      return h;
    }
  };
  const auto key_of = [](const MoebiusMap& g) {
    Key k{};
    for (std::size_t i = 0; i < 4; ++i) k.v[i] = std::llround(g.entries()[i] * 1e6);
    // Sign fixed by the first entry that is clearly nonzero.
    for (long long x : k.v) {
      if (std::llabs(x) > 10) {
        if (x < 0) {
          for (auto& y : k.v) y = -y;
        }
        break;
      }
    }
    return k;
  };
  std::unordered_set<Key, KeyHash> seen;
  std::deque<std::pair<MoebiusMap, std::string>> queue;
  queue.emplace_back(MoebiusMap::identity(), "");
  seen.insert(key_of(MoebiusMap::identity()));
  while (!queue.empty()) {
    auto [g, word] = std::move(queue.front());
    queue.pop_front();
    guard(word);
    if (!visit(g, word)) return;
    for (int k = 0; k < nsides; ++k) {
      const auto& s = spec.sides[k];
      const MoebiusMap h = g * s.neighbor;
      if (!seen.insert(key_of(h)).second) continue;
      if (!keep(h)) continue;
      queue.emplace_back(h, word + s.letter);
    }
  }
}

void for_each_tile(const SurfaceSpec& spec, const HPoint& center, double radius,
                   const std::function<bool(const MoebiusMap&, const std::string&)>& visit,
                   std::size_t max_tiles) {
  walk_tiles(
      spec, [&](const MoebiusMap& g) { return spec.distance_to_polygon(g.inverse().apply(center)) <= radius; }, visit,
      max_tiles);
}

}  // namespace hypgeo
