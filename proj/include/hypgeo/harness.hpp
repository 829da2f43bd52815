#pragma once

// Statistics comparing crossings and chains at cutoff T with their
// Liouville-measure limits on the compact core of the surface.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hypgeo/chains.hpp"
#include "hypgeo/crossings.hpp"
#include "hypgeo/enumerator.hpp"
#include "hypgeo/surface.hpp"

namespace hypgeo {

/// Equal-area cells of the compact core F minus the cusp horoballs
/// N_p(eps). Columns split x, rows split each vertical slice by its share of
/// the slice's hyperbolic measure.
class CellPartition {
 public:
  CellPartition(const SurfaceSpec& spec, int cells, double eps_core);

  int cell_count() const { return columns_ * columns_; }
  double eps_core() const { return eps_; }
  double area(int cell) const { return areas_.at(cell); }
  double core_area() const { return core_area_; }
  /// Gauss-Bonnet area of F minus the horoball areas.
  double expected_core_area() const { return expected_area_; }
  const std::vector<double>& column_cuts() const { return cuts_; }

  bool in_core(const HPoint& z) const;
  /// Cell containing z, or nothing outside the core.
  std::optional<int> locate(const HPoint& z) const;

  /// Vertical extent of the core over x (lower bound after horoball removal).
  double lower(double x) const;
  double upper(double x) const;

 private:
  struct Circle {
    double cx, cy, r;
  };

  double slice_measure(double x) const;
  double integrate(double a, double b) const;

  SurfaceSpec spec_;
  int columns_ = 5;
  double eps_ = 0.2;
  double xmin_ = 0.0;
  double xmax_ = 0.0;
  std::vector<Circle> floors_;    // F lies outside: lower bounds
  std::vector<Circle> ceilings_;  // F lies inside: upper bounds
  std::vector<Circle> disks_;     // horoball disks removed from the core
  double roof_ = 0.0;             // horoball at infinity: y <= roof_ (inf if none)
  std::vector<double> breaks_;
  std::vector<double> cuts_;
  std::vector<double> areas_;
  double core_area_ = 0.0;
  double expected_area_ = 0.0;
};

/// TV distance between the per-cell crossing weight (normalized over the
/// core) and the cell area fractions. Throws std::domain_error when no
/// record lies in the core.
double spatial_tv(const std::vector<CrossingRecord>& records, const CellPartition& partition);

/// Per-cell crossing weight over the core, in cell order.
std::vector<double> cell_weights(const std::vector<CrossingRecord>& records, const CellPartition& partition);

struct KsResult {
  double ks = 0.0;
  std::size_t count = 0;
  bool low_count = false;  // fewer than 100 samples
};

/// Weighted KS distance of the crossing angles in the core against
/// (1 - cos theta) / 2; near-tangent records are skipped.
KsResult angle_ks(const std::vector<CrossingRecord>& records, const CellPartition& partition);

/// KS distance of weighted samples against a continuous CDF.
double weighted_ks(std::vector<std::pair<double, double>> samples, const std::function<double(double)>& cdf);

struct GrowthRow {
  double T = 0.0;
  double length = 0.0;  // l(gamma_T)
  double ordered_total = 0.0;
  double r = 0.0;
  double r_crude = 0.0;
};

/// r(T) = i pi^2 |chi| / l^2 and r'(T) = i pi^2 |chi| / e^{2T}; at least
/// three rows are required.
std::vector<GrowthRow> growth_law(const std::vector<GrowthRow>& rows, const SurfaceSpec& spec);

struct FootprintResult {
  double tv = 0.0;
  /// Largest over smallest direction-bin mass.
  double direction_ratio = 0.0;
  std::vector<double> direction_mass;
};

/// Length measure of the chains (weighted by power weight) in
/// (cell x direction bin) boxes against area x uniform direction.
FootprintResult footprint_tv(const std::vector<SegmentChain>& chains, const std::vector<long long>& weights,
                             const CellPartition& partition, int direction_bins, double step = 0.01);

struct ArcResult {
  KsResult ks;
  double length = 0.0;
  double crossing_weight = 0.0;  // sum of K over crossings with the arc
  double density = 0.0;          // crossing_weight / (length * l(gamma_T))
};

/// Positions of the crossings of the chains with the arc from p to q,
/// against the uniform law. The arc must lie in the core and the polygon
/// interior; otherwise std::domain_error.
ArcResult arc_equidistribution(const HPoint& p, const HPoint& q, const std::vector<SegmentChain>& chains,
                               const std::vector<long long>& weights, const CellPartition& partition,
                               const SurfaceSpec& spec);

struct FixtureRow {
  int n = 0;
  std::string word;
  double length = 0.0;
  long long self_crossings = 0;
  long long brute_force = -1;  // all-pairs count, filled for n <= 5
};

struct FixtureFit {
  std::vector<FixtureRow> rows;
  double length_offset_range = 0.0;  // max - min of L(n) - 2 log n over n in [5, n_max]
  double crossing_slope = 0.0;       // least squares S against n over [5, n_max]
  bool brute_force_agrees = true;
};

/// Classes w c^n for n = 0..n_max with c the cusp loop.
FixtureFit fixture_family(const SurfaceSpec& spec, int n_max, const std::string& w = "a");

}  // namespace hypgeo
