#pragma once

// Exhaustive infection-path enumeration on tiny graphical samples, written
// independently of the event sweep in paths/.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rcp/graphical/sample.hpp"
#include "rcp/paths/crossing.hpp"
#include "rcp/paths/evolve.hpp"
#include "rcp/rng.hpp"

namespace rcp::oracle {

struct Arrow {
  double time;
  std::size_t from;
  std::size_t to;
};

struct Marks {
  std::vector<std::vector<double>> cures;
  std::vector<Arrow> arrows;
};

inline Marks read_marks(const GraphicalSample& g) {
  Marks m;
  for (std::size_t i = 0; i < g.num_sites(); ++i) m.cures.push_back(g.cure(i).marks);
  for (std::size_t i = 0; i < g.num_sites(); ++i) {
    for (int dir = 0; dir < 2 * g.dim(); ++dir) {
      const long y = g.neighbor(i, dir);
      for (double t : g.trans(i, dir)) {
        if (y >= 0) m.arrows.push_back({t, i, static_cast<std::size_t>(y)});
      }
    }
  }
  return m;
}

inline bool cure_in(const Marks& m, std::size_t x, double a, double b) {
  for (double c : m.cures[x]) {
    if (c > a && c <= b) return true;
  }
  return false;
}

struct Query {
  double start = 0.0;
  double stop = 0.0;
  std::vector<std::uint8_t> region;   // empty = all sites
  std::vector<std::uint8_t> clamped;  // infected throughout and never cured
};

// Every (site, arrival) reachable by an infection path started from init at q.start,
// using arrows in (start, stop]. Initial sites arrive at q.start.
inline std::vector<std::pair<std::size_t, double>> reachable(const Marks& m, const std::vector<std::size_t>& init,
                                                             const Query& q) {
  auto in_region = [&](std::size_t x) { return q.region.empty() || q.region[x]; };
  auto is_clamped = [&](std::size_t x) { return !q.clamped.empty() && q.clamped[x]; };
  std::vector<std::pair<std::size_t, double>> found;
  std::function<void(std::size_t, double)> walk = [&](std::size_t x, double a) {
    found.emplace_back(x, a);
    for (const Arrow& ar : m.arrows) {
      if (ar.from != x || ar.time <= a || ar.time > q.stop) continue;
      if (!in_region(ar.to)) continue;
      if (!is_clamped(x) && cure_in(m, x, a, ar.time)) continue;
      walk(ar.to, ar.time);
    }
  };
  for (std::size_t x : init) walk(x, q.start);
  for (std::size_t x = 0; x < m.cures.size(); ++x) {
    if (is_clamped(x)) walk(x, q.start);
  }
  return found;
}

inline std::set<std::size_t> infected_at(const Marks& m, const std::vector<std::size_t>& init, const Query& q,
                                         double t) {
  Query r = q;
  r.stop = t;
  std::set<std::size_t> out;
  for (const auto& [x, a] : reachable(m, init, r)) {
    const bool clamped = !q.clamped.empty() && q.clamped[x];
    if (a <= t && (clamped || !cure_in(m, x, a, t))) out.insert(x);
  }
  return out;
}

inline std::optional<double> extinction_time(const Marks& m, const std::vector<std::size_t>& init, double start,
                                             double stop) {
  if (init.empty()) return start;
  std::vector<double> times;
  for (const auto& c : m.cures) times.insert(times.end(), c.begin(), c.end());
  std::sort(times.begin(), times.end());
  Query q{start, stop, {}, {}};
  for (double t : times) {
    if (t <= start || t > stop) continue;
    if (infected_at(m, init, q, t).empty()) return t;
  }
  return std::nullopt;
}

// Transmission-only reachability with arrow times strictly inside (u, v).
inline bool freely(const Marks& m, std::size_t x, double u, std::size_t y, double v) {
  if (x == y) return true;
  std::function<bool(std::size_t, double)> walk = [&](std::size_t s, double a) {
    for (const Arrow& ar : m.arrows) {
      if (ar.from != s || ar.time <= a || ar.time >= v) continue;
      if (ar.to == y || walk(ar.to, ar.time)) return true;
    }
    return false;
  };
  return walk(x, u);
}

// Random sample with at most four sites and at most ten marks on the window [0, T].
inline GraphicalSample random_tiny_sample(Rng& rng, double T = 10.0) {
  const int shape = static_cast<int>(rng() % 6);
  SpaceTimeBox box;
  if (shape < 4) {
    box = SpaceTimeBox{{0}, {shape}, 0.0, T};
  } else if (shape == 4) {
    box = SpaceTimeBox{{0, 0}, {1, 0}, 0.0, T};
  } else {
    box = SpaceTimeBox{{0, 0}, {1, 1}, 0.0, T};
  }
  const std::size_t n = box.num_sites();
  const int d = box.dim();
  const int total = static_cast<int>(rng() % 11);
  std::vector<RenewalTrack> cures(n, RenewalTrack{0.0, {}, T});
  std::vector<std::vector<double>> trans(n * 2 * static_cast<std::size_t>(d));
  std::vector<std::size_t> edge_slots;
  for (std::size_t x = 0; x < n; ++x) {
    const Point c = box.coords(x);
    for (int dir = 0; dir < 2 * d; ++dir) {
      Point y = c;
      y[dir_axis(dir)] += dir_sign(dir);
      if (box.contains(y)) edge_slots.push_back(edge_slot(x, dir, d));
    }
  }
  std::set<double> used;
  for (int k = 0; k < total; ++k) {
    double t;
    do {
      t = rng.uniform(0.0, T);
    } while (used.count(t));
    used.insert(t);
    const bool is_cure = edge_slots.empty() || rng() % 2 == 0;
    if (is_cure) {
      cures[rng() % n].marks.push_back(t);
    } else {
      trans[edge_slots[rng() % edge_slots.size()]].push_back(t);
    }
  }
  for (auto& c : cures) std::sort(c.marks.begin(), c.marks.end());
  for (auto& l : trans) std::sort(l.begin(), l.end());
  return GraphicalSample::from_marks(box, 1.0, InterarrivalLaw::exponential(1.0), std::move(cures), std::move(trans));
}

inline std::vector<std::size_t> random_subset(Rng& rng, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (rng() % 2) out.push_back(i);
  }
  return out;
}

struct CaseReport {
  std::size_t checks = 0;
  std::size_t mismatches = 0;
  std::vector<std::string> details;
};

inline void note(CaseReport& r, bool ok, const std::string& what) {
  ++r.checks;
  if (!ok) {
    ++r.mismatches;
    r.details.push_back(what);
  }
}

// One random tiny sample checked against the sweep-based implementations.
inline CaseReport check_random_case(Rng& rng) {
  const double T = 10.0;
  const GraphicalSample g = random_tiny_sample(rng, T);
  const Marks m = read_marks(g);
  const SpaceTimeBox& box = g.box();
  const std::size_t n = g.num_sites();
  CaseReport rep;

  const auto init = random_subset(rng, n);
  const InfectionHistory h = evolve(g, Configuration::from_sites(n, init), T);
  for (int k = 0; k < 3; ++k) {
    const double t = rng.uniform(0.0, T);
    const auto got = h.at(t).sites();
    const auto want = infected_at(m, init, Query{0.0, T, {}, {}}, t);
    note(rep, std::set<std::size_t>(got.begin(), got.end()) == want, "evolve");
  }
  note(rep, survival_time(h) == extinction_time(m, init, 0.0, T), "survival_time");

  double s = rng.uniform(0.0, T), t = rng.uniform(0.0, T);
  if (s > t) std::swap(s, t);
  SpaceTimeBox sub = box;
  sub.s = s;
  sub.t = t;
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  const Query whole{s, t, {}, {}};
  note(rep, detect_temporal_crossing(g, sub, false) == !infected_at(m, all, whole, t).empty(), "T");
  note(rep, detect_temporal_crossing(g, sub, true) == !infected_at(m, all, whole, s + (t - s) / 2).empty(),
       "T half");

  for (int j = 0; j < box.dim(); ++j) {
    for (bool half : {false, true}) {
      SpaceTimeBox r = sub;
      if (half) r.lo[j] = sub.lo[j] + (sub.hi[j] - sub.lo[j]) / 2;
      Query q{s, t, std::vector<std::uint8_t>(n, 0), std::vector<std::uint8_t>(n, 0)};
      std::vector<std::uint8_t> target(n, 0);
      for (std::size_t i = 0; i < n; ++i) {
        const Point c = box.coords(i);
        if (!r.contains(c)) continue;
        q.region[i] = 1;
        if (c[j] == r.lo[j]) q.clamped[i] = 1;
        if (c[j] == r.hi[j]) target[i] = 1;
      }
      bool hit = false;
      for (const auto& [x, a] : reachable(m, {}, q)) hit = hit || (target[x] && a <= t);
      note(rep, detect_spatial_crossing(g, sub, j, half) == hit, half ? "S half" : "S");
    }
  }

  const std::size_t x = rng() % n, y = rng() % n;
  double u = rng.uniform(0.0, T), v = rng.uniform(0.0, T);
  if (u > v) std::swap(u, v);
  const std::vector<std::uint8_t> everywhere(n, 1);
  note(rep, freely_infects(g, x, u, y, v, everywhere) == freely(m, x, u, y, v), "freely_infects");
  return rep;
}

}  // namespace rcp::oracle
