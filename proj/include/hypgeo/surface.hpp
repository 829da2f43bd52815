#pragma once

// Finite-area surfaces H / Gamma presented by a fundamental polygon with
// side pairings.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "hypgeo/hyperbolic.hpp"

namespace hypgeo {

struct Generator {
  char label = 'a';  // lowercase; the uppercase letter denotes the inverse
  MoebiusMap matrix;
};

struct PolygonVertex {
  bool ideal = false;
  BoundaryPoint boundary;  // meaningful when ideal
  HPoint point;            // meaningful when finite
  double angle = 0.0;      // interior angle, 0 at ideal vertices
};

struct PolygonSide {
  BoundaryGeodesic line{BoundaryPoint::at(0.0), BoundaryPoint::infinity()};
  int partner = -1;
  /// Tile across this side is neighbor * F.
  MoebiusMap neighbor;
  /// Maps this side onto its partner (inverse of neighbor).
  MoebiusMap pairing;
  /// Letter read when a path leaves F through this side.
  char letter = 'a';
  /// Sign of signed_sinh_distance(line, z) for z inside F.
  double inward = 1.0;
};

/// One cusp: its cycle of ideal vertices and the maps normalizing it to
/// infinity with stabilizer z -> z + 1.
struct CuspData {
  std::vector<int> vertex_cycle;
  /// Per cycle vertex, a group element sending that vertex to infinity.
  std::vector<MoebiusMap> to_infinity;
  /// Generator of the stabilizer of infinity, z -> z + width.
  MoebiusMap parabolic;
  std::string parabolic_word;
  double width = 1.0;
  /// z -> z / width; conjugates the parabolic to z -> z + 1.
  MoebiusMap normalizer;

  /// Height in normalized coordinates, maximized over the cycle; the
  /// horoball neighborhood N_p(r) is {height > 1/r}.
  double height(const HPoint& z) const;
  /// Cycle position (index into vertex_cycle) realizing height(z).
  std::size_t nearest_vertex(const HPoint& z) const;
};

struct SurfaceSpec {
  std::string name;
  std::vector<Generator> generators;
  std::vector<PolygonVertex> vertices;
  std::vector<PolygonSide> sides;
  int genus = 0;
  int cusp_count = 0;
  std::vector<CuspData> cusps;
  /// Interior reference point used for orbit and tile searches.
  HPoint base_point;
  /// Upper bound on the distance from base_point to any point of F outside
  /// the horoballs N_p(1) (all of F when compact).
  double core_radius = 0.0;
  /// True when all vertices are ideal: the tiling's dual graph is a tree and
  /// reduced words label tiles uniquely.
  bool tree_tiling = false;

  int euler_magnitude() const { return 2 * genus - 2 + cusp_count; }
  MoebiusMap letter_matrix(char letter) const;
  bool is_letter(char letter) const;

  /// Closed-polygon membership with tolerance tol::geom on each side.
  bool contains(const HPoint& z) const;
  /// Lower bound on the hyperbolic distance from z to F (exact for ideal polygons).
  double distance_to_polygon(const HPoint& z) const;
  /// Height in the first cusp, or 0 on compact surfaces.
  double cusp_height(const HPoint& z) const;
};

SurfaceSpec build_punctured_torus();
SurfaceSpec build_genus2_octagon();

/// Dispatch on "punctured_torus" | "genus2_octagon"; ConfigError otherwise.
SurfaceSpec build_surface(std::string_view name);
const std::vector<std::string>& surface_names();

/// Gauss-Bonnet area of the polygon: (k - 2) pi - sum of interior angles.
double area(const SurfaceSpec& spec);

struct DomainPoint {
  HPoint point;
  /// Group element with h * z == point.
  MoebiusMap h;
  std::string word;  // letters of h, leftmost applied last
};

/// Moves z into the closed fundamental polygon by repeatedly crossing the
/// lowest-index side that separates it from F.
DomainPoint normalize_to_domain(const HPoint& z, const SurfaceSpec& spec);

/// Checks pairing consistency, cusp normalization and area; throws ConfigError.
void validate(const SurfaceSpec& spec);

/// Human-readable dump: generators, polygon, pairings, area.
std::string describe(const SurfaceSpec& spec);

/// Visits every tile g * F with distance_to_polygon(g^-1 * center) <= radius;
/// center must lie in F. The callback receives g and the word of g; returning
/// false stops the walk. Throws ResourceError past max_tiles tiles.
void for_each_tile(const SurfaceSpec& spec, const HPoint& center, double radius,
                   const std::function<bool(const MoebiusMap&, const std::string&)>& visit,
                   std::size_t max_tiles = 200'000'000);

/// Breadth-first (or tree depth-first) walk over tiles g * F for which
/// keep(g) holds, starting from F; keep must select a connected set.
void walk_tiles(const SurfaceSpec& spec, const std::function<bool(const MoebiusMap&)>& keep,
                const std::function<bool(const MoebiusMap&, const std::string&)>& visit,
                std::size_t max_tiles = 200'000'000);

/// Product of letter matrices, left to right.
MoebiusMap evaluate_word(std::string_view word, const SurfaceSpec& spec);

}  // namespace hypgeo
