#include "hypgeo/enumerator.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "hypgeo/chains.hpp"
#include "hypgeo/errors.hpp"

namespace hypgeo {

namespace {

using QuantKey = std::array<long long, 4>;

QuantKey quantize(const MoebiusMap& g) {
  QuantKey k{};
  for (std::size_t i = 0; i < 4; ++i) k[i] = std::llround(g.entries()[i] * 1e7);
  // -g is the same map; fix the sign by the first entry that is clearly nonzero.
  for (long long x : k) {
    if (std::llabs(x) > 100) {
      if (x < 0) {
        for (auto& y : k) y = -y;
      }
      break;
    }
  }
  return k;
}

bool is_root_in_group(const MoebiusMap& g, double ell, int k, const SurfaceSpec& spec) {
  const MoebiusMap v = translation_along(oriented_axis(g), ell / k);
  const DomainPoint dp = normalize_to_domain(v.apply(spec.base_point), spec);
  return hyp_distance(dp.point, spec.base_point) < 1e-7;
}

// Primitivity in a group that is not free on the side letters.
bool is_primitive_element(const MoebiusMap& g, double ell, const SurfaceSpec& spec) {
  const int kmax = static_cast<int>(std::floor(ell / 0.5));
  for (int k = 2; k <= kmax; ++k) {
    if (is_root_in_group(g, ell, k, spec)) return false;
  }
  return true;
}

// Least quantized matrix among the conjugates of g (and of g^-1) whose
// axis passes within rho + kKeySlack of the base point.
QuantKey conjugacy_key(const MoebiusMap& g, double ell, double rho, const SurfaceSpec& spec, MoebiusMap& best) {
  constexpr double kKeySlack = 0.25;
  rho += kKeySlack;
  const OrientedGeodesic ax = oriented_axis(g);
  const auto line = ax.unoriented();
  const double s0 = foot_coordinate(ax, spec.base_point);
  const double reach = rho + spec.core_radius;
  QuantKey out{};
  bool have = false;
  walk_tiles(
      spec,
      [&](const MoebiusMap& h) {
        const HPoint p = h.apply(spec.base_point);
        if (distance_to_line(line, p) > reach) return false;
        const double s = foot_coordinate(ax, p);
        return s > s0 - reach - 1.0 && s < s0 + ell + reach + 1.0;
      },
      [&](const MoebiusMap& h, const std::string&) {
        const HPoint p = h.apply(spec.base_point);
        if (distance_to_line(line, p) > rho) return true;
        const double s = foot_coordinate(ax, p);
        if (s < s0 - 1e-7 || s > s0 + ell + 1e-7) return true;
        const MoebiusMap c = h.inverse() * g * h;
        for (const MoebiusMap& cand : {c, c.inverse()}) {
          const QuantKey k = quantize(cand);
          if (!have || k < out) {
            out = k;
            best = cand;
            have = true;
          }
        }
        return true;
      },
      10'000'000);
  if (!have) throw ConsistencyError("conjugacy_key: no conjugate near the base point");
  return out;
}

std::vector<ClosedGeodesicClass> enumerate_free(const SurfaceSpec& spec, double T, const EnumerateOptions& options,
                                                EnumerationStats& stats) {
  std::unordered_set<std::string> words;
  for_each_tile(
      spec, spec.base_point, T + spec.core_radius,
      [&](const MoebiusMap& g, const std::string& word) {
        ++stats.tiles;
        stats.longest_tile_word = std::max(stats.longest_tile_word, word.size());
        if (word.empty()) return true;
        const double tr = std::abs(g.trace());
        if (tr <= 2.0 + tol::parabolic_band) {
          if (tr > 2.0) ++stats.borderline_excluded;
          return true;
        }
        if (translation_length(g) > T) return true;
        const std::string reduced = cyclic_reduce(word);
        if (!is_primitive_word(reduced)) return true;
        words.insert(canonical_form(reduced));
        return true;
      },
      options.max_tiles);
  std::vector<ClosedGeodesicClass> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(make_class(spec, w, T, options.include_powers));
  return out;
}

std::vector<ClosedGeodesicClass> enumerate_general(const SurfaceSpec& spec, double T,
                                                   const EnumerateOptions& options, EnumerationStats& stats) {
  const double rho = spec.core_radius;
  std::map<QuantKey, MoebiusMap> reps;
  for_each_tile(
      spec, spec.base_point, T + 2.0 * rho,
      [&](const MoebiusMap& g, const std::string& word) {
        ++stats.tiles;
        stats.longest_tile_word = std::max(stats.longest_tile_word, word.size());
        if (word.empty()) return true;
        const double tr = std::abs(g.trace());
        if (tr <= 2.0 + tol::parabolic_band) {
          if (tr > 2.0) ++stats.borderline_excluded;
          return true;
        }
        const double ell = translation_length(g);
        if (ell > T) return true;
        if (distance_to_line(axis(g), spec.base_point) > rho) return true;
        MoebiusMap best;
        const QuantKey key = conjugacy_key(g, ell, rho, spec, best);
        if (reps.count(key)) return true;
        if (!is_primitive_element(g, ell, spec)) return true;
        reps.emplace(key, best);
        return true;
      },
      options.max_tiles);
  std::vector<ClosedGeodesicClass> out;
  out.reserve(reps.size());
  std::uint32_t id = 0;
  for (const auto& [key, m] : reps) {
    ClosedGeodesicClass c;
    const SegmentChain chain = trace_chain(m, id++, spec);
    c.word = CyclicWord(canonical_form(cyclic_reduce(chain.letters)));
    c.matrix = m;
    c.length = translation_length(m);
    c.max_power = options.include_powers ? max_power(c.length, T) : 1;
    out.push_back(c);
  }
  return out;
}

}  // namespace

MoebiusMap word_to_matrix(std::string_view word, const SurfaceSpec& spec) { return evaluate_word(word, spec); }

int max_power(double length, double T) {
  if (!(length > 0.0)) throw std::domain_error("max_power: length must be positive");
  return static_cast<int>(std::floor(T / length + 1e-12));
}

ClosedGeodesicClass make_class(const SurfaceSpec& spec, std::string_view word, double T, bool include_powers) {
  ClosedGeodesicClass c;
  c.word = CyclicWord(word);
  c.matrix = evaluate_word(c.word.letters(), spec);
  if (classify(c.matrix) != MapKind::hyperbolic) {
    throw std::domain_error("make_class: word '" + std::string(word) + "' is not hyperbolic");
  }
  c.length = translation_length(c.matrix);
  c.max_power = include_powers ? std::max(1, max_power(c.length, T)) : 1;
  return c;
}

std::vector<ClosedGeodesicClass> enumerate_classes(const SurfaceSpec& spec, double T, const EnumerateOptions& options,
                                                   EnumerationStats* stats) {
  if (!(T > 0.0)) throw std::domain_error("enumerate_classes: T must be positive");
  EnumerationStats local;
  auto out = spec.tree_tiling ? enumerate_free(spec, T, options, local) : enumerate_general(spec, T, options, local);
  std::sort(out.begin(), out.end(), [](const ClosedGeodesicClass& a, const ClosedGeodesicClass& b) {
    if (a.length != b.length) return a.length < b.length;
    return a.word < b.word;
  });
  if (local.borderline_excluded > 0) {
    spdlog::warn("enumerate_classes: excluded {} elements with |trace| within {} of 2", local.borderline_excluded,
                 tol::parabolic_band);
  }
  spdlog::debug("enumerate_classes: T={} tiles={} classes={}", T, local.tiles, out.size());
  if (stats) *stats = local;
  return out;
}

double count_length(const std::vector<ClosedGeodesicClass>& classes) {
  double total = 0.0;
  for (const auto& c : classes) total += static_cast<double>(c.power_weight()) * c.length;
  return total;
}

std::size_t orbit_count(const HPoint& z0, double T, const SurfaceSpec& spec, std::size_t max_tiles) {
  if (T < 0.0) throw std::domain_error("orbit_count: T must be nonnegative");
  const HPoint z = normalize_to_domain(z0, spec).point;
  std::size_t count = 0;
  for_each_tile(
      spec, z, T,
      [&](const MoebiusMap& g, const std::string&) {
        if (hyp_distance(z, g.apply(z)) <= T) ++count;
        return true;
      },
      max_tiles);
  return count;
}

std::string tolerance_profile() {
  char buf[128];
  std::snprintf(buf, sizeof buf, "alg=%.0e;geom=%.0e;band=%.0e", tol::alg, tol::geom, tol::parabolic_band);
  // FNV-1a over the textual profile.
  std::uint64_t h = 1469598103934665603ULL;
  for (const char* p = buf; *p; ++p) h = (h ^ static_cast<unsigned char>(*p)) * 1099511628211ULL;
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return std::string(hex).substr(0, 12);
}

void cache_save(const std::vector<ClosedGeodesicClass>& classes, const CacheHeader& header,
                const std::filesystem::path& path) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::trunc);
    if (!os) throw CacheError("cache_save: cannot write " + tmp);
    char buf[512];
    os << "hypgeo-classes " << cache_version << "\n";
    os << "surface " << header.surface << "\n";
    os << "profile " << header.profile << "\n";
    std::snprintf(buf, sizeof buf, "T %.17g\n", header.T);
    os << buf;
    os << "include_powers " << (header.include_powers ? 1 : 0) << "\n";
    os << "count " << classes.size() << "\n";
    for (const auto& c : classes) {
      const auto& e = c.matrix.entries();
      std::snprintf(buf, sizeof buf, " %.17g %.17g %.17g %.17g %.17g %d\n", e[0], e[1], e[2], e[3], c.length,
                    c.max_power);
      os << c.word.letters() << buf;
    }
    os << "end\n";
    if (!os) throw CacheError("cache_save: write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::vector<ClosedGeodesicClass> cache_load(const std::filesystem::path& path, const CacheHeader& expected) {
  std::ifstream is(path);
  if (!is) throw MissingArtifactError("cache file not found: " + path.string());
  const auto fail = [&](const std::string& what) { throw CacheError(path.string() + ": " + what); };
  std::string tag;
  CacheHeader h;
  if (!(is >> tag >> h.version) || tag != "hypgeo-classes") fail("not a class cache");
  if (h.version != cache_version) fail("cache version " + std::to_string(h.version) + " is not supported");
  if (!(is >> tag >> h.surface) || tag != "surface") fail("missing surface");
  if (!(is >> tag >> h.profile) || tag != "profile") fail("missing profile");
  if (!(is >> tag >> h.T) || tag != "T") fail("missing T");
  int powers = 0;
  if (!(is >> tag >> powers) || tag != "include_powers") fail("missing include_powers");
  h.include_powers = powers != 0;
  if (!(is >> tag >> h.count) || tag != "count") fail("missing count");
  if (h.surface != expected.surface) fail("built for surface " + h.surface + ", expected " + expected.surface);
  if (h.profile != expected.profile) fail("built for tolerance profile " + h.profile);
  if (h.T != expected.T) {
    std::ostringstream os;
    os << "built for T=" << h.T << ", expected T=" << expected.T;
    fail(os.str());
  }
  if (h.include_powers != expected.include_powers) fail("power mode differs");
  std::vector<ClosedGeodesicClass> out;
  out.reserve(h.count);
  for (std::size_t i = 0; i < h.count; ++i) {
    std::string word;
    double a, b, c, d, len;
    int k;
    if (!(is >> word >> a >> b >> c >> d >> len >> k)) fail("truncated at record " + std::to_string(i));
    ClosedGeodesicClass cls;
    try {
      cls.word = CyclicWord(word);
      cls.matrix = MoebiusMap(a, b, c, d);
    } catch (const std::exception& e) {
      fail(std::string("bad record: ") + e.what());
    }
    cls.length = len;
    cls.max_power = k;
    out.push_back(std::move(cls));
  }
  if (!(is >> tag) || tag != "end") fail("missing end marker");
  return out;
}

}  // namespace hypgeo
