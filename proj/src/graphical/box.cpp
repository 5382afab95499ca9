#include "rcp/graphical/box.hpp"

#include <algorithm>
#include <cstdlib>

#include "rcp/errors.hpp"

namespace rcp {

SpaceTimeBox SpaceTimeBox::cube(int d, long radius, double s, double t) {
  if (d < 1) throw DomainError("SpaceTimeBox: dimension must be >= 1");
  SpaceTimeBox b{Point(d, -radius), Point(d, radius), s, t};
  b.validate();
  return b;
}

SpaceTimeBox SpaceTimeBox::corner(int d, long side, double s, double t) {
  if (d < 1) throw DomainError("SpaceTimeBox: dimension must be >= 1");
  SpaceTimeBox b{Point(d, 0), Point(d, side), s, t};
  b.validate();
  return b;
}

void SpaceTimeBox::validate() const {
  if (lo.empty() || lo.size() != hi.size()) throw DomainError("SpaceTimeBox: corner dimensions differ");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (lo[i] > hi[i]) throw DomainError("SpaceTimeBox: lower corner exceeds upper corner");
  }
  if (!(t > s)) throw DomainError("SpaceTimeBox: window needs t > s");
}

std::size_t SpaceTimeBox::num_sites() const {
  std::size_t n = 1;
  for (int j = 0; j < dim(); ++j) n *= static_cast<std::size_t>(width(j));
  return n;
}

bool SpaceTimeBox::contains(const Point& x) const {
  if (x.size() != lo.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  }
  return true;
}

bool SpaceTimeBox::contains(const SpaceTimeBox& o) const {
  return contains(o.lo) && contains(o.hi) && o.s >= s && o.t <= t;
}

std::size_t SpaceTimeBox::index(const Point& x) const {
  if (!contains(x)) throw DomainError("SpaceTimeBox: site outside box");
  std::size_t idx = 0;
  for (int j = 0; j < dim(); ++j) {
    idx = idx * static_cast<std::size_t>(width(j)) + static_cast<std::size_t>(x[j] - lo[j]);
  }
  return idx;
}

Point SpaceTimeBox::coords(std::size_t idx) const {
  Point x(lo.size());
  for (int j = dim() - 1; j >= 0; --j) {
    const auto w = static_cast<std::size_t>(width(j));
    x[j] = lo[j] + static_cast<long>(idx % w);
    idx /= w;
  }
  return x;
}

long linf_norm(const Point& x) {
  long m = 0;
  for (long v : x) m = std::max(m, std::labs(v));
  return m;
}

}  // namespace rcp
