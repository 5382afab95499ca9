#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "rcp/graphical/sample.hpp"
#include "rcp/paths/evolve.hpp"

namespace rcp {

struct CrossingReport {
  bool temporal = false;       // T(B)
  bool temporal_half = false;  // T~(B)
  std::vector<bool> spatial;       // S_j(B)
  std::vector<bool> spatial_half;  // S_j of the half-box containing the upper j-face
};

// Half of B in direction j containing the face x_j = hi_j: x_j in [lo_j + (hi_j-lo_j)/2, hi_j].
SpaceTimeBox half_box(const SpaceTimeBox& b, int j);

// Path from the bottom of B to its top (half: to the middle of its time interval),
// using only marks inside B. Throws DomainError when B is not inside the sample.
bool detect_temporal_crossing(const GraphicalSample& sample, const SpaceTimeBox& b, bool half);

// Path from face x_j = lo_j to face x_j = hi_j inside B (half: inside half_box(B, j)).
// The target face counts as reached on first touch.
bool detect_spatial_crossing(const GraphicalSample& sample, const SpaceTimeBox& b, int j, bool half);

CrossingReport detect_crossings(const GraphicalSample& sample, const SpaceTimeBox& b);

// Transmission-only reachability from (x,u) to (y,v) with every visited site in region.
bool freely_infects(const GraphicalSample& sample, std::size_t x, double u, std::size_t y, double v,
                    const std::vector<std::uint8_t>& region);
bool freely_infects(const GraphicalSample& sample, const Point& x, double u, const Point& y, double v,
                    const std::vector<Point>& region);

// Times where the sup-norm of the infected set exceeds all earlier values, with the
// newly infected witness site. The initial time never qualifies.
std::vector<std::pair<double, Point>> extreme_times(const InfectionHistory& history);

// A site with sup-norm <= radius infected throughout [span_lo, span_hi] (smallest norm,
// then smallest index), or empty.
std::optional<Point> lasting_site(const InfectionHistory& history, double span_lo, double span_hi,
                                  long radius);
// Default span [t/2, t].
std::optional<Point> lasting_site(const InfectionHistory& history, double t, long radius);

// Site mask of the sites of sub lying inside the sample box.
std::vector<std::uint8_t> region_mask(const GraphicalSample& sample, const SpaceTimeBox& sub);

}  // namespace rcp
