#pragma once

// Maximal sub-arcs of closed geodesics inside a cusp horoball.

#include <cstdint>
#include <map>
#include <vector>

#include "hypgeo/chains.hpp"
#include "hypgeo/crossings.hpp"
#include "hypgeo/enumerator.hpp"

namespace hypgeo {

struct ExcursionRecord {
  std::uint32_t class_id = 0;
  /// Passes of the chain spanned, first to last; last < first when the
  /// excursion wraps past the chain start.
  std::uint32_t first_pass = 0;
  std::uint32_t last_pass = 0;
  int winding = 0;
  /// Signed horizontal displacement in normalized cusp coordinates.
  double delta_x = 0.0;
  double length = 0.0;
  /// Sum of the per-piece lengths; agrees with length up to rounding.
  double piece_length = 0.0;
  double max_height = 0.0;
  HPoint entry;
  HPoint exit;

  bool spans(std::uint32_t pass, std::uint32_t pass_count) const;
};

/// Excursions of the chain into N_p(r) = {normalized height > 1/r}.
/// Throws ConsistencyError when the whole chain lies inside.
std::vector<ExcursionRecord> decompose_excursions(const SegmentChain& chain, const SurfaceSpec& spec, double r,
                                                  std::size_t cusp_index = 0);

/// n -> E_n, each root excursion counted with the power weight of its class.
std::map<int, long long> excursion_histogram(const std::vector<std::vector<ExcursionRecord>>& per_class,
                                             const std::vector<ClosedGeodesicClass>& classes);

/// Crossings inside N_p(r) whose passes belong to e1 and e2.
int excursion_pair_crossings(const ExcursionRecord& e1, const ExcursionRecord& e2,
                             const std::vector<CrossingRecord>& records, const std::vector<SegmentChain>& chains,
                             const SurfaceSpec& spec, double r);

struct PairCheck {
  std::size_t pairs = 0;
  std::size_t self_pairs = 0;
  std::size_t violations = 0;
  int worst_excess = -1000000;  // max of count - (2 min(n,m) + 2)
};

/// Checks crossings <= 2 min(n, m) + 2 for every pair of excursions that
/// share at least one crossing inside N_p(r).
PairCheck check_excursion_pairs(const std::vector<std::vector<ExcursionRecord>>& per_class,
                                const std::vector<CrossingRecord>& records, const std::vector<SegmentChain>& chains,
                                const SurfaceSpec& spec, double r);

struct CuspMass {
  double r = 0.0;
  double T = 0.0;
  double mass = 0.0;
  double ratio = 0.0;  // mass / e^{2T}
};

/// Ordered-convention crossing mass inside N_p(r).
CuspMass cusp_crossing_mass(const std::vector<CrossingRecord>& records, const SurfaceSpec& spec, double r, double T);

/// min over excursions with n >= 1 of length - 2 log n.
double fit_excursion_constant(const std::vector<std::vector<ExcursionRecord>>& per_class);

/// Least-squares slope of log E_n against log n over n in [lo, hi] with E_n > 0.
double histogram_slope(const std::map<int, long long>& hist, int lo, int hi);

}  // namespace hypgeo
