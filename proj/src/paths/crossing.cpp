#include "rcp/paths/crossing.hpp"

#include <algorithm>
#include <limits>

#include "rcp/errors.hpp"

namespace rcp {

namespace {

void require_inside(const GraphicalSample& sample, const SpaceTimeBox& b) {
  b.validate();
  if (b.dim() != sample.dim() || !sample.box().contains(b)) {
    throw DomainError("crossing: box not contained in the sample");
  }
}

}  // namespace

std::vector<std::uint8_t> region_mask(const GraphicalSample& sample, const SpaceTimeBox& sub) {
  const auto& box = sample.box();
  std::vector<std::uint8_t> mask(sample.num_sites(), 0);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const Point x = box.coords(i);
    bool in = true;
    for (int j = 0; j < box.dim() && in; ++j) in = x[j] >= sub.lo[j] && x[j] <= sub.hi[j];
    mask[i] = in ? 1 : 0;
  }
  return mask;
}

SpaceTimeBox half_box(const SpaceTimeBox& b, int j) {
  if (j < 0 || j >= b.dim()) throw DomainError("half_box: direction out of range");
  SpaceTimeBox h = b;
  h.lo[j] = b.lo[j] + (b.hi[j] - b.lo[j]) / 2;
  return h;
}

bool detect_temporal_crossing(const GraphicalSample& sample, const SpaceTimeBox& b, bool half) {
  require_inside(sample, b);
  const auto mask = region_mask(sample, b);
  Configuration init(sample.num_sites());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) init.set(i, true);
  }
  const double target = half ? 0.5 * (b.s + b.t) : b.t;
  RegionRun run;
  run.region = &mask;
  return !evolve_region(sample, std::move(init), b.s, target, run).state.empty();
}

bool detect_spatial_crossing(const GraphicalSample& sample, const SpaceTimeBox& b, int j, bool half) {
  require_inside(sample, b);
  if (j < 0 || j >= b.dim()) throw DomainError("detect_spatial_crossing: direction out of range");
  const SpaceTimeBox r = half ? half_box(b, j) : b;
  const auto mask = region_mask(sample, r);
  std::vector<std::uint8_t> source(mask.size(), 0), target(mask.size(), 0);
  const auto& box = sample.box();
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    const long xj = box.coords(i)[j];
    if (xj == r.lo[j]) source[i] = 1;
    if (xj == r.hi[j]) target[i] = 1;
  }
  RegionRun run;
  run.region = &mask;
  run.clamped = &source;
  run.target = &target;
  return evolve_region(sample, Configuration(sample.num_sites()), r.s, r.t, run).target_hit;
}

CrossingReport detect_crossings(const GraphicalSample& sample, const SpaceTimeBox& b) {
  CrossingReport rep;
  rep.temporal = detect_temporal_crossing(sample, b, false);
  rep.temporal_half = detect_temporal_crossing(sample, b, true);
  for (int j = 0; j < b.dim(); ++j) {
    rep.spatial.push_back(detect_spatial_crossing(sample, b, j, false));
    rep.spatial_half.push_back(detect_spatial_crossing(sample, b, j, true));
  }
  return rep;
}

bool freely_infects(const GraphicalSample& sample, std::size_t x, double u, std::size_t y, double v,
                    const std::vector<std::uint8_t>& region) {
  if (u > v) throw DomainError("freely_infects: need u < v");
  if (x == y) return true;
  const auto& box = sample.box();
  const double lo = std::max(u, box.s), hi = std::min(v, box.t);
  if (!(lo < hi)) return false;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> arrival(sample.num_sites(), inf);
  arrival[x] = u;
  for (const Event& e : events_between(sample, lo, hi)) {
    if (e.kind != EventKind::trans || e.time >= v) continue;
    if (!region[e.site] || !region[e.target]) continue;
    if (arrival[e.site] < e.time && arrival[e.target] == inf) {
      arrival[e.target] = e.time;
      if (e.target == y) return true;
    }
  }
  return false;
}

bool freely_infects(const GraphicalSample& sample, const Point& x, double u, const Point& y, double v,
                    const std::vector<Point>& region) {
  const auto& box = sample.box();
  std::vector<std::uint8_t> mask(sample.num_sites(), 0);
  for (const auto& p : region) {
    if (box.contains(p)) mask[box.index(p)] = 1;
  }
  if (!box.contains(x) || !box.contains(y)) throw DomainError("freely_infects: endpoint outside the box");
  const auto xi = box.index(x), yi = box.index(y);
  if (xi != yi && (!mask[xi] || !mask[yi])) return false;
  return freely_infects(sample, xi, u, yi, v, mask);
}

std::vector<std::pair<double, Point>> extreme_times(const InfectionHistory& h) {
  std::vector<std::pair<double, Point>> out;
  long running = -1;
  for (std::size_t i : h.initial.sites()) running = std::max(running, linf_norm(h.box.coords(i)));
  for (const auto& e : h.entries) {
    if (e.effect != Effect::infected) continue;
    Point y = h.box.coords(e.target);
    const long norm = linf_norm(y);
    if (norm > running) {
      running = norm;
      out.emplace_back(e.time, std::move(y));
    }
  }
  return out;
}

std::optional<Point> lasting_site(const InfectionHistory& h, double span_lo, double span_hi, long radius) {
  if (span_lo > span_hi) throw DomainError("lasting_site: empty span");
  if (span_lo < h.start || span_hi > h.stop) throw DomainError("lasting_site: span outside the history");
  Configuration alive = h.at(span_lo);
  for (const auto& e : h.entries) {
    if (e.time <= span_lo) continue;
    if (e.time > span_hi) break;
    if (e.effect == Effect::cured) alive.set(e.site, false);
  }
  std::optional<Point> best;
  long best_norm = 0;
  for (std::size_t i : alive.sites()) {
    Point x = h.box.coords(i);
    const long norm = linf_norm(x);
    if (norm > radius) continue;
    if (!best || norm < best_norm) {
      best = std::move(x);
      best_norm = norm;
    }
  }
  return best;
}

std::optional<Point> lasting_site(const InfectionHistory& h, double t, long radius) {
  return lasting_site(h, 0.5 * t, t, radius);
}

}  // namespace rcp
