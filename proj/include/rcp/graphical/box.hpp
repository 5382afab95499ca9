#pragma once

#include <cstddef>
#include <vector>

namespace rcp {

using Point = std::vector<long>;

// Spatial product of integer intervals [lo_i, hi_i] times the time window [s, t].
struct SpaceTimeBox {
  Point lo;
  Point hi;
  double s = 0.0;
  double t = 1.0;

  // [-radius, radius]^d x [s, t].
  static SpaceTimeBox cube(int d, long radius, double s, double t);
  // [0, side]^d x [s, t].
  static SpaceTimeBox corner(int d, long side, double s, double t);

  int dim() const { return static_cast<int>(lo.size()); }
  long width(int j) const { return hi[j] - lo[j] + 1; }
  std::size_t num_sites() const;
  // Throws DomainError when corners or window are inconsistent.
  void validate() const;

  bool contains(const Point& x) const;
  // Spatial and temporal containment of another box.
  bool contains(const SpaceTimeBox& other) const;
  // Row-major index, last coordinate fastest.
  std::size_t index(const Point& x) const;
  Point coords(std::size_t index) const;

  bool operator==(const SpaceTimeBox&) const = default;
};

long linf_norm(const Point& x);

// Directed edge slots: site * 2d + dir, dir 2j is +e_j and 2j+1 is -e_j.
inline std::size_t edge_slot(std::size_t site, int dir, int d) {
  return site * static_cast<std::size_t>(2 * d) + static_cast<std::size_t>(dir);
}

// Displacement of direction dir as (axis, sign).
inline int dir_axis(int dir) { return dir / 2; }
inline int dir_sign(int dir) { return dir % 2 == 0 ? 1 : -1; }
inline int opposite_dir(int dir) { return dir ^ 1; }

}  // namespace rcp
