#include "hypgeo/pipeline.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "hypgeo/chains.hpp"
#include "hypgeo/crossings.hpp"
#include "hypgeo/enumerator.hpp"
#include "hypgeo/errors.hpp"
#include "hypgeo/excursions.hpp"
#include "hypgeo/harness.hpp"
#include "hypgeo/liouville.hpp"
#include "hypgeo/surface.hpp"

namespace hypgeo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.12g}", v);
}

// Writes through a temporary file so readers never see partial output.
class AtomicText {
 public:
  explicit AtomicText(fs::path path) : path_(std::move(path)), tmp_(path_.string() + ".tmp"), os_(tmp_) {
    if (!os_) throw ResourceError("cannot write " + tmp_.string());
  }
  std::ostream& out() { return os_; }
  void commit() {
    os_.close();
    if (!os_) throw ResourceError("write failed for " + tmp_.string());
    fs::rename(tmp_, path_);
  }

 private:
  fs::path path_;
  fs::path tmp_;
  std::ofstream os_;
};

void require(const fs::path& p) {
  if (!fs::exists(p)) throw MissingArtifactError("missing artifact: " + p.string());
}

CacheHeader header_for(const RunConfig& c, double T) {
  CacheHeader h;
  h.version = cache_version;
  h.surface = c.surface;
  h.profile = c.profile;
  h.T = T;
  h.include_powers = c.include_powers;
  return h;
}

std::vector<ClosedGeodesicClass> load_classes(const RunConfig& c, double T) {
  const ArtifactNames names{c};
  return cache_load(names.cache(T), header_for(c, T));
}

std::vector<SegmentChain> trace_all(const std::vector<ClosedGeodesicClass>& classes, const SurfaceSpec& spec) {
  std::vector<SegmentChain> chains;
  chains.reserve(classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i) {
    chains.push_back(trace_chain(classes[i].matrix, static_cast<std::uint32_t>(i), spec));
  }
  return chains;
}

bool skip_existing(const RunConfig& c, const fs::path& p, const char* stage) {
  if (c.force || !fs::exists(p)) return false;
  spdlog::info("{}: {} exists, skipping", stage, p.string());
  return true;
}

HPoint arc_end(const HPoint& start, double phi, double length) {
  const BoundaryGeodesic g = geodesic_with_direction(start, phi);
  OrientedGeodesic og{g.first(), g.second()};
  const double d = og.direction(start) - phi;
  if (std::abs(std::remainder(d, 2.0 * kPi)) > 1e-6) og = og.reversed();
  return og.point_at(og.coordinate(start) + length);
}

std::map<int, double> read_excursion_table(const fs::path& p) {
  std::ifstream is(p);
  if (!is) throw MissingArtifactError("missing artifact: " + p.string());
  std::string line;
  std::getline(is, line);
  std::map<int, double> out;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    int n;
    double e, norm;
    if (ls >> n >> e >> norm) out[n] = norm;
  }
  return out;
}

}  // namespace

std::string format_T(double T) { return fmt::format("{:g}", T); }

fs::path ArtifactNames::cache(double T) const {
  return config.cache_dir / fmt::format("classes_{}_T{}_{}.txt", config.surface, format_T(T), config.profile);
}
fs::path ArtifactNames::crossings(double T) const {
  return config.out_dir / fmt::format("crossings_{}_T{}_{}.csv", config.surface, format_T(T), config.profile);
}
fs::path ArtifactNames::totals(double T) const {
  return config.out_dir / fmt::format("totals_{}_T{}_{}.txt", config.surface, format_T(T), config.profile);
}
fs::path ArtifactNames::excursion_table(double T) const {
  return config.out_dir / fmt::format("excursions_{}_T{}_{}.tsv", config.surface, format_T(T), config.profile);
}
fs::path ArtifactNames::excursion_summary(double T) const {
  return config.out_dir / fmt::format("excursion_summary_{}_T{}_{}.txt", config.surface, format_T(T), config.profile);
}
fs::path ArtifactNames::cells(double T) const {
  return config.out_dir / fmt::format("cells_{}_T{}_{}.tsv", config.surface, format_T(T), config.profile);
}
fs::path ArtifactNames::enumeration_summary() const {
  return config.out_dir / fmt::format("enumerate_{}_{}.tsv", config.surface, config.profile);
}
fs::path ArtifactNames::liouville() const {
  return config.out_dir / fmt::format("liouville_{}_{}.txt", config.surface, config.profile);
}
fs::path ArtifactNames::fixture() const {
  return config.out_dir / fmt::format("fixture_{}_{}.tsv", config.surface, config.profile);
}
fs::path ArtifactNames::cusp_mass() const {
  return config.out_dir / fmt::format("cusp_mass_{}_{}.tsv", config.surface, config.profile);
}
fs::path ArtifactNames::convergence() const {
  return config.out_dir / fmt::format("convergence_{}_{}.tsv", config.surface, config.profile);
}
fs::path ArtifactNames::report() const {
  std::string ts;
  for (double T : config.T) ts += (ts.empty() ? "" : "-") + format_T(T);
  return config.out_dir / fmt::format("report_{}_T{}_{}.txt", config.surface, ts, config.profile);
}

void apply_json(RunConfig& c, const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "surface") c.surface = v.get<std::string>();
      else if (key == "T") c.T = v.get<std::vector<double>>();
      else if (key == "cells") c.cells = v.get<int>();
      else if (key == "core_eps") c.core_eps = v.get<double>();
      else if (key == "delta_pos") c.delta_pos = v.get<double>();
      else if (key == "tolerance_profile") c.profile = v.get<std::string>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "cache_dir") c.cache_dir = v.get<std::string>();
      else if (key == "out_dir") c.out_dir = v.get<std::string>();
      else if (key == "include_powers") c.include_powers = v.get<bool>();
      else if (key == "unsigned_winding") c.unsigned_winding = v.get<bool>();
      else if (key == "fixture_n_max") c.fixture_n_max = v.get<int>();
      else if (key == "direction_bins") c.direction_bins = v.get<int>();
      else if (key == "cusp_r") c.cusp_r = v.get<std::vector<double>>();
      else if (key == "arc") {
        const auto s = v.at("start").get<std::vector<double>>();
        if (s.size() != 2) throw ConfigError("arc.start must be [x, y]");
        c.arc_start = {s[0], s[1]};
        c.arc_direction = v.at("direction").get<double>();
        c.arc_length = v.at("length").get<double>();
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

RunConfig load_config(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config " + path.string());
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  RunConfig c;
  apply_json(c, j);
  return c;
}

json to_json(const RunConfig& c) {
  json j;
  j["surface"] = c.surface;
  j["T"] = c.T;
  j["cells"] = c.cells;
  j["core_eps"] = c.core_eps;
  j["delta_pos"] = c.delta_pos;
  j["tolerance_profile"] = c.profile;
  j["seed"] = c.seed;
  j["cache_dir"] = c.cache_dir.string();
  j["out_dir"] = c.out_dir.string();
  j["include_powers"] = c.include_powers;
  j["unsigned_winding"] = c.unsigned_winding;
  j["fixture_n_max"] = c.fixture_n_max;
  j["direction_bins"] = c.direction_bins;
  j["cusp_r"] = c.cusp_r;
  j["arc"] = {{"start", {c.arc_start.x, c.arc_start.y}}, {"direction", c.arc_direction}, {"length", c.arc_length}};
  return j;
}

void validate_config(RunConfig& c) {
  build_surface(c.surface);
  if (c.T.empty()) throw ConfigError("T list is empty");
  for (std::size_t i = 0; i < c.T.size(); ++i) {
    if (!(c.T[i] > 0.0) || !std::isfinite(c.T[i])) throw ConfigError("T values must be positive");
    if (i > 0 && !(c.T[i] > c.T[i - 1])) throw ConfigError("T values must be strictly increasing");
  }
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(c.cells))));
  if (c.cells <= 0 || side * side != c.cells) throw ConfigError("cells must be a positive perfect square");
  if (!(c.core_eps > 0.0 && c.core_eps <= 1.0)) throw ConfigError("core_eps must lie in (0, 1]");
  if (!(c.delta_pos >= 0.0)) throw ConfigError("delta_pos must be nonnegative");
  if (c.fixture_n_max < 5 || c.fixture_n_max > 30) throw ConfigError("fixture_n_max must lie in [5, 30]");
  if (c.direction_bins <= 0) throw ConfigError("direction_bins must be positive");
  for (double r : c.cusp_r) {
    if (!(r > 0.0 && r <= 1.0)) throw ConfigError("cusp_r values must lie in (0, 1]");
  }
  if (!(c.arc_start.y > 0.0) || !(c.arc_length >= 0.5 && c.arc_length <= 2.0)) {
    throw ConfigError("arc needs a start in H and a length in [0.5, 2]");
  }
  const std::string active = tolerance_profile();
  if (!c.profile.empty() && c.profile != active) {
    throw ConfigError("tolerance profile " + c.profile + " is not the built-in profile " + active);
  }
  c.profile = active;
  for (const fs::path& dir : {c.cache_dir, c.out_dir}) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path probe = dir / ".write_probe";
    std::ofstream os(probe);
    if (ec || !os) throw ConfigError("directory not writable: " + dir.string());
    os.close();
    fs::remove(probe, ec);
  }
}

std::map<std::string, std::string> read_key_values(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw MissingArtifactError("missing artifact: " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line[0] == '[') continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    kv[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return kv;
}

void cmd_enumerate(const RunConfig& c) {
  const SurfaceSpec spec = build_surface(c.surface);
  const ArtifactNames names{c};
  AtomicText summary(names.enumeration_summary());
  summary.out() << "T\tclasses\tlength\tlength_over_eT\n";
  for (double T : c.T) {
    const fs::path path = names.cache(T);
    std::vector<ClosedGeodesicClass> classes;
    bool hit = false;
    if (!c.force && fs::exists(path)) {
      try {
        classes = cache_load(path, header_for(c, T));
        hit = true;
        spdlog::info("enumerate: cache hit {}", path.string());
      } catch (const CacheError& e) {
        spdlog::warn("enumerate: discarding unusable cache ({})", e.what());
      }
    }
    if (!hit) {
      EnumerateOptions opt;
      opt.include_powers = c.include_powers;
      EnumerationStats st;
      classes = enumerate_classes(spec, T, opt, &st);
      cache_save(classes, header_for(c, T), path);
      spdlog::info("enumerate: T={} classes={} tiles={}", format_T(T), classes.size(), st.tiles);
    }
    const double len = count_length(classes);
    summary.out() << format_T(T) << '\t' << classes.size() << '\t' << num(len) << '\t' << num(len / std::exp(T))
                  << '\n';
    fmt::print("enumerate T={} classes={} length={} length/e^T={}\n", format_T(T), classes.size(), num(len),
               num(len / std::exp(T)));
  }
  summary.commit();
}

void cmd_intersect(const RunConfig& c) {
  const SurfaceSpec spec = build_surface(c.surface);
  const ArtifactNames names{c};
  for (double T : c.T) {
    const auto classes = load_classes(c, T);
    if (skip_existing(c, names.crossings(T), "intersect") && fs::exists(names.totals(T))) continue;
    const auto chains = trace_all(classes, spec);
    CrossingOptions opt;
    opt.power_weights = power_weights(classes);
    CrossingStats st;
    const auto records = find_crossings(chains, spec, opt, &st);
    const std::size_t points = c.delta_pos > 0.0 ? multiplicity_collapse(records, c.delta_pos).size() : records.size();
    write_crossings_csv(records, names.crossings(T));
    const double ordered = weighted_total(records, classes.size());
    AtomicText t(names.totals(T));
    t.out() << "T = " << format_T(T) << "\n"
            << "classes = " << classes.size() << "\n"
            << "segments = " << st.segments << "\n"
            << "crossing_records = " << records.size() << "\n"
            << "geometric_crossings = " << points << "\n"
            << "ordered_total = " << num(ordered) << "\n"
            << "length = " << num(count_length(classes)) << "\n"
            << "boundary_duplicates = " << st.boundary_duplicates << "\n";
    t.commit();
    fmt::print("intersect T={} segments={} records={} points={} ordered_total={}\n", format_T(T), st.segments,
               records.size(), points, num(ordered));
  }
}

void cmd_excursions(const RunConfig& c) {
  const SurfaceSpec spec = build_surface(c.surface);
  const ArtifactNames names{c};
  if (spec.cusps.empty()) {
    spdlog::info("excursions: surface {} has no cusp, nothing to do", c.surface);
    return;
  }
  for (double T : c.T) {
    if (skip_existing(c, names.excursion_summary(T), "excursions")) continue;
    const auto classes = load_classes(c, T);
    const auto records = read_crossings_csv(names.crossings(T));
    const auto chains = trace_all(classes, spec);
    std::vector<std::vector<ExcursionRecord>> per_class;
    per_class.reserve(chains.size());
    for (const auto& ch : chains) per_class.push_back(decompose_excursions(ch, spec, 1.0));
    std::map<int, long long> hist;
    if (c.unsigned_winding) {
      hist = excursion_histogram(per_class, classes);
    } else {
      for (std::size_t i = 0; i < per_class.size(); ++i) {
        for (const auto& e : per_class[i]) hist[static_cast<int>(std::floor(e.delta_x))] += classes[i].power_weight();
      }
    }
    const double len = count_length(classes);
    AtomicText table(names.excursion_table(T));
    table.out() << "n\tE_n\tE_n_over_length\n";
    for (const auto& [n, e] : hist) table.out() << n << '\t' << e << '\t' << num(e / len) << '\n';
    table.commit();

    const PairCheck pc = check_excursion_pairs(per_class, records, chains, spec, 1.0);
    const double c_fit = fit_excursion_constant(per_class);
    int max_n = 0;
    double max_piece_gap = 0.0;
    std::size_t total = 0;
    for (const auto& list : per_class) {
      for (const auto& e : list) {
        max_n = std::max(max_n, e.winding);
        max_piece_gap = std::max(max_piece_gap, std::abs(e.length - e.piece_length));
        ++total;
      }
    }
    AtomicText s(names.excursion_summary(T));
    s.out() << "T = " << format_T(T) << "\n"
            << "winding = " << (c.unsigned_winding ? "unsigned" : "signed") << "\n"
            << "length = " << num(len) << "\n"
            << "excursions = " << total << "\n"
            << "slope_2_20 = " << num(histogram_slope(hist, 2, 20)) << "\n"
            << "c_fit = " << num(c_fit) << "\n"
            << "max_winding = " << max_n << "\n"
            << "winding_bound = " << num(std::exp((T - c_fit) / 2.0) + 1.0) << "\n"
            << "piece_length_gap = " << num(max_piece_gap) << "\n"
            << "pair_count = " << pc.pairs << "\n"
            << "pair_self = " << pc.self_pairs << "\n"
            << "pair_violations = " << pc.violations << "\n"
            << "pair_worst_excess = " << pc.worst_excess << "\n";
    for (double r : c.cusp_r) {
      const CuspMass m = cusp_crossing_mass(records, spec, r, T);
      s.out() << "cusp_mass.r" << num(r) << " = " << num(m.mass) << "\n"
              << "cusp_ratio.r" << num(r) << " = " << num(m.ratio) << "\n";
    }
    s.commit();
    fmt::print("excursions T={} excursions={} slope={} c_fit={} pair_violations={}\n", format_T(T), total,
               num(histogram_slope(hist, 2, 20)), num(c_fit), pc.violations);
  }
}

void cmd_liouville_check(const RunConfig& c) {
  const SurfaceSpec spec = build_surface(c.surface);
  const ArtifactNames names{c};
  if (skip_existing(c, names.liouville(), "liouville-check")) return;
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto at = [](double v) { return BoundaryPoint::at(v); };

  const BoundaryBox example{{at(0), at(1)}, {at(2), at(3)}};
  const double ex = box_measure(example);
  const double additivity = std::abs(ex - box_measure({{at(0), at(0.5)}, {at(2), at(3)}}) -
                                     box_measure({{at(0.5), at(1)}, {at(2), at(3)}}));
  double invariance = 0.0;
  double symmetry = 0.0;
  for (int m = 0; m < 20; ++m) {
    double a = 0.0;
    while (std::abs(a) < 0.2) a = 3.0 * u(rng);
    const double b = 3.0 * u(rng);
    const double cc = 3.0 * u(rng);
    const MoebiusMap g(a, b, cc, (1.0 + b * cc) / a);
    for (int k = 0; k < 20; ++k) {
      std::array<double, 4> p{5 * u(rng), 5 * u(rng), 5 * u(rng), 5 * u(rng)};
      std::sort(p.begin(), p.end());
      const BoundaryBox box{{at(p[0]), at(p[1])}, {at(p[2]), at(p[3])}};
      const double v = box_measure(box);
      invariance = std::max(invariance, std::abs(box_measure(apply(g, box)) - v));
      symmetry = std::max(symmetry, std::abs(box_measure({box.second, box.first}) - v));
    }
  }
  double arc_err_quad = 0.0;
  double arc_err_box = 0.0;
  double arc_paths = 0.0;
  int max_level = 0;
  for (int k = 0; k < 50; ++k) {
    const HPoint p{2.0 * u(rng), std::exp(u(rng))};
    const double phi = kPi * (1.0 + u(rng));
    const double s = 0.05 + 2.95 * 0.5 * (1.0 + u(rng));
    const HPoint q = arc_end(p, phi, s);
    const double len = hyp_distance(p, q);
    const ArcMeasure a = arc_crossing_measure(p, q);
    arc_err_quad = std::max(arc_err_quad, std::abs(a.quadrature - len));
    arc_err_box = std::max(arc_err_box, std::abs(a.boxes - len));
    arc_paths = std::max(arc_paths, std::abs(a.boxes - a.quadrature));
    max_level = std::max(max_level, a.refinements);
  }
  const ArcMeasure unit = arc_crossing_measure({0.0, 1.0}, {0.0, std::exp(1.0)});
  const SurfaceConstants sc = surface_constants(spec);
  LiouvilleWindow window;
  const auto samples = sample_liouville(window, 100000, c.seed);
  std::vector<std::pair<double, double>> th;
  th.reserve(samples.size());
  for (const auto& s : samples) th.emplace_back(s.theta, 1.0);
  const double sampler_ks = weighted_ks(th, angle_cdf);

  AtomicText out(names.liouville());
  out.out() << "[liouville]\n"
            << "box_example = " << num(ex) << "\n"
            << "box_example_expected = " << num(std::log(4.0 / 3.0)) << "\n"
            << "box_additivity_error = " << num(additivity) << "\n"
            << "box_invariance_error = " << num(invariance) << "\n"
            << "box_symmetry_error = " << num(symmetry) << "\n"
            << "arc_unit_quadrature = " << num(unit.quadrature) << "\n"
            << "arc_unit_boxes = " << num(unit.boxes) << "\n"
            << "arc_error_quadrature = " << num(arc_err_quad) << "\n"
            << "arc_error_boxes = " << num(arc_err_box) << "\n"
            << "arc_path_gap = " << num(arc_paths) << "\n"
            << "arc_max_refinement = " << max_level << "\n"
            << "liouville_length = " << num(sc.liouville_length) << "\n"
            << "liouville_self = " << num(sc.liouville_self) << "\n"
            << "liouville_expected = " << num(kPi * kPi * spec.euler_magnitude()) << "\n"
            << "pushforward_factor = " << num(sc.pushforward_factor) << "\n"
            << "sampler_ks = " << num(sampler_ks) << "\n";
  out.commit();
  fmt::print("liouville-check box={} invariance={} arc_error={} sampler_ks={}\n", num(ex), num(invariance),
             num(std::max(arc_err_quad, arc_err_box)), num(sampler_ks));
}

void cmd_report(const RunConfig& c) {
  const SurfaceSpec spec = build_surface(c.surface);
  const ArtifactNames names{c};
  const bool cusped = !spec.cusps.empty();
  for (double T : c.T) {
    require(names.cache(T));
    require(names.crossings(T));
    require(names.totals(T));
    if (cusped) {
      require(names.excursion_table(T));
      require(names.excursion_summary(T));
    }
  }
  require(names.liouville());
  if (skip_existing(c, names.report(), "report")) return;

  const CellPartition partition(spec, c.cells, c.core_eps);
  const double chi = spec.euler_magnitude();
  const HPoint arc_q = arc_end(c.arc_start, c.arc_direction, c.arc_length);

  struct Row {
    double T = 0;
    std::size_t classes = 0;
    double length = 0;
    std::size_t geometric = 0;
    double ordered = 0;
    double spatial = 0;
    KsResult angle;
    FootprintResult footprint;
    std::optional<ArcResult> arc;
    std::optional<ArcResult> axis_arc;
  };
  std::vector<Row> rows;
  std::vector<GrowthRow> growth;
  for (double T : c.T) {
    Row row;
    row.T = T;
    const auto classes = load_classes(c, T);
    const auto weights = power_weights(classes);
    const auto chains = trace_all(classes, spec);
    row.classes = classes.size();
    row.length = count_length(classes);
    {
      const auto records = read_crossings_csv(names.crossings(T));
      row.geometric = std::stoull(read_key_values(names.totals(T)).at("geometric_crossings"));
      row.ordered = weighted_total(records, classes.size());
      row.spatial = records.empty() ? 1.0 : spatial_tv(records, partition);
      row.angle = angle_ks(records, partition);
      const auto cw = cell_weights(records, partition);
      AtomicText cells(names.cells(T));
      cells.out() << "cell\tarea\tweight\tnormalized_mass\treference_mass\n";
      const double ref = 1.0 / (2.0 * kPi * kPi * kPi * chi * chi);
      for (int k = 0; k < partition.cell_count(); ++k) {
        cells.out() << k << '\t' << num(partition.area(k)) << '\t' << num(cw[k]) << '\t'
                    << num(2.0 * cw[k] / (row.length * row.length)) << '\t' << num(partition.area(k) * ref) << '\n';
      }
      cells.commit();
    }
    if (chains.empty()) {
      row.footprint.tv = 1.0;
    } else {
      row.footprint = footprint_tv(chains, weights, partition, c.direction_bins);
    }
    try {
      row.arc = arc_equidistribution(c.arc_start, arc_q, chains, weights, partition, spec);
    } catch (const std::domain_error& e) {
      spdlog::warn("report: arc statistics skipped ({})", e.what());
    }
    try {
      row.axis_arc = arc_equidistribution({0.0, 1.0}, {0.0, std::exp(1.0)}, chains, weights, partition, spec);
    } catch (const std::domain_error&) {
    }
    growth.push_back({T, row.length, row.ordered, 0.0, 0.0});
    rows.push_back(std::move(row));
    spdlog::info("report: T={} done", format_T(T));
  }
  if (growth.size() >= 3) growth = growth_law(growth, spec);

  std::map<double, std::map<std::string, std::string>> exc;
  std::map<double, std::map<int, double>> exc_tables;
  if (cusped) {
    for (double T : c.T) {
      exc[T] = read_key_values(names.excursion_summary(T));
      exc_tables[T] = read_excursion_table(names.excursion_table(T));
    }
  }
  std::optional<FixtureFit> fixture;
  if (cusped) fixture = fixture_family(spec, c.fixture_n_max);
  const auto liou = read_key_values(names.liouville());

  AtomicText conv(names.convergence());
  conv.out() << "T\tclasses\tlength\tlength_over_eT\tgeometric_crossings\tordered_total\tr\tr_crude\tspatial_tv\t"
                "angle_ks\tangle_count\tfootprint_tv\tdirection_ratio\tarc_ks\tarc_count\tarc_density\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    const double rr = growth.size() >= 3 ? growth[i].r : std::numeric_limits<double>::quiet_NaN();
    const double rc = growth.size() >= 3 ? growth[i].r_crude : std::numeric_limits<double>::quiet_NaN();
    conv.out() << format_T(r.T) << '\t' << r.classes << '\t' << num(r.length) << '\t' << num(r.length / std::exp(r.T))
               << '\t' << r.geometric << '\t' << num(r.ordered) << '\t' << num(rr) << '\t' << num(rc) << '\t'
               << num(r.spatial) << '\t' << num(r.angle.ks) << '\t' << r.angle.count << '\t' << num(r.footprint.tv)
               << '\t' << num(r.footprint.direction_ratio) << '\t' << (r.arc ? num(r.arc->ks.ks) : "nan") << '\t'
               << (r.arc ? r.arc->ks.count : 0) << '\t' << (r.arc ? num(r.arc->density) : "nan") << '\n';
  }
  conv.commit();

  if (cusped) {
    AtomicText cm(names.cusp_mass());
    cm.out() << "r\tT\tmass\tratio\n";
    for (double r : c.cusp_r) {
      for (double T : c.T) {
        cm.out() << num(r) << '\t' << format_T(T) << '\t' << exc[T].at("cusp_mass.r" + num(r)) << '\t'
                 << exc[T].at("cusp_ratio.r" + num(r)) << '\n';
      }
    }
    cm.commit();
    AtomicText fx(names.fixture());
    fx.out() << "n\tword_length\tlength\tlength_minus_2logn\tself_crossings\tbrute_force\n";
    for (const auto& r : fixture->rows) {
      fx.out() << r.n << '\t' << r.word.size() << '\t' << num(r.length) << '\t'
               << (r.n >= 1 ? num(r.length - 2.0 * std::log(static_cast<double>(r.n))) : std::string("nan")) << '\t'
               << r.self_crossings << '\t' << r.brute_force << '\n';
    }
    fx.commit();
  }

  AtomicText rep(names.report());
  auto& o = rep.out();
  o << "# hypgeo convergence report\n\n[config]\n";
  o << "config = " << to_json(c).dump() << "\n\n[metadata]\n";
  o << "surface = " << c.surface << "\n"
    << "genus = " << spec.genus << "\n"
    << "cusps = " << spec.cusp_count << "\n"
    << "area = " << num(area(spec)) << "\n"
    << "cache_version = " << cache_version << "\n"
    << "tolerance_profile = " << c.profile << "\n"
    << "tolerances = " << fmt::format("alg={:g} geom={:g} band={:g}", tol::alg, tol::geom, tol::parabolic_band)
    << "\n"
    << "seed = " << c.seed << "\n"
    << "cells = " << partition.cell_count() << "\n"
    << "core_area = " << num(partition.core_area()) << "\n"
    << "core_area_expected = " << num(partition.expected_core_area()) << "\n"
    << "arc = " << fmt::format("({}, {}) -> ({}, {})", num(c.arc_start.x), num(c.arc_start.y), num(arc_q.x),
                               num(arc_q.y))
    << "\n\n";

  o << "[convergence]\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    const std::string t = "T" + format_T(r.T);
    o << "classes." << t << " = " << r.classes << "\n"
      << "length." << t << " = " << num(r.length) << "\n"
      << "length_over_eT." << t << " = " << num(r.length / std::exp(r.T)) << "\n"
      << "geometric_crossings." << t << " = " << r.geometric << "\n"
      << "ordered_total." << t << " = " << num(r.ordered) << "\n";
    if (growth.size() >= 3) {
      o << "growth_r." << t << " = " << num(growth[i].r) << "\n"
        << "growth_r_crude." << t << " = " << num(growth[i].r_crude) << "\n";
    }
    o << "spatial_tv." << t << " = " << num(r.spatial) << "\n"
      << "angle_ks." << t << " = " << num(r.angle.ks) << "\n"
      << "angle_count." << t << " = " << r.angle.count << "\n"
      << "footprint_tv." << t << " = " << num(r.footprint.tv) << "\n"
      << "direction_ratio." << t << " = " << num(r.footprint.direction_ratio) << "\n";
    if (r.arc) {
      o << "arc_ks." << t << " = " << num(r.arc->ks.ks) << "\n"
        << "arc_count." << t << " = " << r.arc->ks.count << "\n"
        << "arc_crossing_weight." << t << " = " << num(r.arc->crossing_weight) << "\n"
        << "arc_density." << t << " = " << num(r.arc->density) << "\n";
    }
    if (r.axis_arc) {
      o << "axis_arc_ks." << t << " = " << num(r.axis_arc->ks.ks) << "\n"
        << "axis_arc_count." << t << " = " << r.axis_arc->ks.count << "\n";
    }
  }
  o << "\n";

  if (cusped) {
    o << "[excursions]\n";
    for (double T : c.T) {
      const std::string t = "T" + format_T(T);
      for (const char* key : {"excursions", "slope_2_20", "c_fit", "max_winding", "winding_bound", "pair_count",
                              "pair_violations", "pair_worst_excess"}) {
        o << "excursion_" << key << "." << t << " = " << exc[T].at(key) << "\n";
      }
      for (double r : c.cusp_r) {
        o << "cusp_ratio.r" << num(r) << "." << t << " = " << exc[T].at("cusp_ratio.r" + num(r)) << "\n";
      }
    }
    for (std::size_t i = 1; i < c.T.size(); ++i) {
      const auto& a = exc_tables[c.T[i - 1]];
      const auto& b = exc_tables[c.T[i]];
      double worst = 1.0;
      for (int n = 0; n <= 10; ++n) {
        const double x = a.count(n) ? a.at(n) : 0.0;
        const double y = b.count(n) ? b.at(n) : 0.0;
        if (x == 0.0 && y == 0.0) continue;
        const double f = (x == 0.0 || y == 0.0) ? std::numeric_limits<double>::infinity() : std::max(x / y, y / x);
        worst = std::max(worst, f);
      }
      o << "excursion_stability.T" << format_T(c.T[i - 1]) << "_T" << format_T(c.T[i]) << " = " << num(worst)
        << "\n";
      double worst_pos = 1.0;
      for (int n = 1; n <= 10; ++n) {
        const double x = a.count(n) ? a.at(n) : 0.0;
        const double y = b.count(n) ? b.at(n) : 0.0;
        if (x == 0.0 && y == 0.0) continue;
        worst_pos = std::max(worst_pos, (x == 0.0 || y == 0.0) ? std::numeric_limits<double>::infinity()
                                                               : std::max(x / y, y / x));
      }
      o << "excursion_stability_n1.T" << format_T(c.T[i - 1]) << "_T" << format_T(c.T[i]) << " = " << num(worst_pos)
        << "\n";
    }
    o << "\n[excursion_tables]\n";
    for (double T : c.T) {
      o << "E_over_length.T" << format_T(T) << " =";
      for (const auto& [n, v] : exc_tables[T]) {
        if (n <= 40) o << ' ' << n << ':' << num(v);
      }
      o << "\n";
    }
    o << "\n[fixture]\n"
      << "fixture_length_offset_range = " << num(fixture->length_offset_range) << "\n"
      << "fixture_crossing_slope = " << num(fixture->crossing_slope) << "\n"
      << "fixture_brute_force_agrees = " << (fixture->brute_force_agrees ? 1 : 0) << "\n";
    o << "fixture_self_crossings =";
    for (const auto& r : fixture->rows) o << ' ' << r.n << ':' << r.self_crossings;
    o << "\n\n";
  }

  o << "[liouville]\n";
  for (const auto& [k, v] : liou) o << "liouville_" << k << " = " << v << "\n";
  rep.commit();
  fmt::print("report written to {}\n", names.report().string());
}

void cmd_all(const RunConfig& c) {
  cmd_enumerate(c);
  cmd_intersect(c);
  cmd_excursions(c);
  cmd_liouville_check(c);
  cmd_report(c);
}

}  // namespace hypgeo
