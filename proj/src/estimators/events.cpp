#include "rcp/estimators/events.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "rcp/errors.hpp"
#include "rcp/graphical/box.hpp"
#include "rcp/renewal/diagnostics.hpp"
#include "rcp/renewal/track.hpp"

namespace rcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMarkBudget = 5e7;
constexpr double kPathBudget = 2e9;

std::size_t site_count(long side, int d) {
  double total = 1.0;
  for (int j = 0; j < d; ++j) total *= static_cast<double>(side);
  if (total > 5e6) throw CapacityError("event site count " + std::to_string(total) + " exceeds 5e6");
  return static_cast<std::size_t>(total);
}

long cube_radius(int n) { return static_cast<long>(n) * n * n; }

double resolve_alpha(const EventParams& p, const InterarrivalLaw& law) {
  if (p.alpha) return *p.alpha;
  if (law.family() == LawFamily::pareto_tail) return law.alpha();
  throw PreconditionError(event_name(p.id) + ": alpha is required when the law is not pareto_tail");
}

std::vector<RenewalTrack> draw_tracks(const InterarrivalLaw& law, std::size_t sites, double horizon,
                                      Rng& rng) {
  std::vector<RenewalTrack> tracks;
  tracks.reserve(sites);
  double marks = 0.0;
  for (std::size_t i = 0; i < sites; ++i) {
    tracks.push_back(generate_track(law, 0.0, horizon, rng));
    marks += static_cast<double>(tracks.back().marks.size());
    if (marks > kMarkBudget) throw CapacityError("event sample exceeds the mark budget of 5e7");
  }
  return tracks;
}

// Poisson marks of rate lambda on (lo, hi], sorted.
std::vector<double> poisson_marks(double lambda, double lo, double hi, Rng& rng) {
  std::vector<double> m;
  double t = lo;
  while (true) {
    t += rng.exponential(lambda);
    if (t > hi) break;
    m.push_back(t);
  }
  return m;
}

bool occurs_J(const EventParams& p, const InterarrivalLaw& law, Rng& rng) {
  if (p.s <= 0.0) return false;
  const std::size_t sites = site_count((1L << p.n) + 1, p.d);
  for (std::size_t i = 0; i < sites; ++i) {
    const RenewalTrack tr = generate_track(law, 0.0, p.t + p.s, rng);
    const auto it = std::lower_bound(tr.marks.begin(), tr.marks.end(), p.t);
    if (it == tr.marks.end() || *it > p.t + p.s) return true;
  }
  return false;
}

struct Mark {
  double time;
  std::size_t site;
};

bool occurs_Bm(const EventParams& p, int m, const InterarrivalLaw& law, Rng& rng) {
  const double L = std::ldexp(1.0, p.n), U = std::ldexp(1.0, p.n + 2);
  const double w = 2.0 * std::exp2(p.n * p.eps);
  const std::size_t sites = site_count(2 * cube_radius(p.n) + 1, p.d);
  const auto tracks = draw_tracks(law, sites, U + w, rng);
  std::vector<Mark> marks;
  for (std::size_t z = 0; z < sites; ++z) {
    for (double x : tracks[z].marks) {
      if (x >= L - 1.0) marks.push_back({x, z});
    }
  }
  std::sort(marks.begin(), marks.end(), [](const Mark& a, const Mark& b) { return a.time < b.time; });
  auto first_at = [&](double t) {
    return std::lower_bound(marks.begin(), marks.end(), t,
                            [](const Mark& a, double v) { return a.time < v; });
  };
  std::vector<std::size_t> stamp(sites, 0);
  std::size_t round = 0;
  auto count_others = [&](double s, std::size_t z0) {
    ++round;
    int count = 0;
    for (auto it = first_at(s); it != marks.end() && it->time <= s + w; ++it) {
      if (it->site == z0 || stamp[it->site] == round) continue;
      stamp[it->site] = round;
      if (++count >= m) break;
    }
    return count;
  };
  for (const Mark& mk : marks) {
    const double s_lo = std::max(L, mk.time - 1.0), s_hi = std::min(U, mk.time);
    if (s_lo > s_hi) continue;
    if (count_others(s_lo, mk.site) >= m) return true;
    for (auto it = first_at(s_lo + w); it != marks.end() && it->time <= s_hi + w; ++it) {
      if (count_others(it->time - w, mk.site) >= m) return true;
    }
  }
  return false;
}

// Rightmost-first sweep along a chain of 2N edges: for every start time the
// earliest arrival at the far end, with marks drawn edge by edge.
bool chain_fails(double lambda, long edges, double L, double U, double w, Rng& rng) {
  const auto first = poisson_marks(lambda, L, U, rng);
  std::vector<double> starts{L};
  for (double x : first) {
    if (x <= U - w) starts.push_back(x);
  }
  std::vector<double> times(starts.size());
  auto advance = [&](const std::vector<double>& edge) {
    std::size_t k = 0;
    for (double& t : times) {
      while (k < edge.size() && edge[k] <= t) ++k;
      if (k == edge.size()) return false;
      t = edge[k];
    }
    return true;
  };
  times = starts;
  if (!advance(first)) return true;
  for (long e = 1; e < edges; ++e) {
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (times[i] > starts[i] + w) return true;
    }
    if (!advance(poisson_marks(lambda, L, U, rng))) return true;
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] > starts[i] + w) return true;
  }
  return false;
}

bool occurs_C_line(const EventParams& p, Rng& rng) {
  const double L = std::ldexp(1.0, p.n), U = std::ldexp(1.0, p.n + 2);
  const double w = std::exp2(p.n * p.eps);
  const long edges = 2 * cube_radius(p.n);
  // In one dimension a path between the two extreme sites passes every other pair.
  if (chain_fails(p.lambda, edges, L, U, w, rng)) return true;
  return chain_fails(p.lambda, edges, L, U, w, rng);
}

// T-grid lower estimate for d > 1: earliest-arrival search from every site.
bool occurs_C_grid(const EventParams& p, Rng& rng) {
  const double L = std::ldexp(1.0, p.n), U = std::ldexp(1.0, p.n + 2);
  const double w = std::exp2(p.n * p.eps);
  const double step = p.grid_step > 0.0 ? p.grid_step : w / 8.0;
  const SpaceTimeBox box = SpaceTimeBox::cube(p.d, cube_radius(p.n), L, U);
  const std::size_t sites = box.num_sites();
  const std::size_t grid = static_cast<std::size_t>(std::floor((U - w - L) / step)) + 1;
  if (static_cast<double>(sites) * static_cast<double>(sites) * static_cast<double>(grid) > kPathBudget) {
    throw CapacityError("C event search exceeds the path budget of 2e9 site pairs");
  }
  const int dirs = 2 * p.d;
  std::vector<std::vector<double>> edge(sites * static_cast<std::size_t>(dirs));
  std::vector<long> nbr(edge.size(), -1);
  for (std::size_t x = 0; x < sites; ++x) {
    const Point c = box.coords(x);
    for (int dir = 0; dir < dirs; ++dir) {
      Point y = c;
      y[dir_axis(dir)] += dir_sign(dir);
      if (!box.contains(y)) continue;
      nbr[edge_slot(x, dir, p.d)] = static_cast<long>(box.index(y));
      edge[edge_slot(x, dir, p.d)] = poisson_marks(p.lambda, L, U, rng);
    }
  }
  using Item = std::pair<double, std::size_t>;
  std::vector<double> arrival(sites);
  for (std::size_t g = 0; g < grid; ++g) {
    const double T = L + static_cast<double>(g) * step;
    for (std::size_t src = 0; src < sites; ++src) {
      std::fill(arrival.begin(), arrival.end(), kInf);
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      arrival[src] = T;
      pq.push({T, src});
      while (!pq.empty()) {
        const auto [t, x] = pq.top();
        pq.pop();
        if (t > arrival[x] || t > T + w) continue;
        for (int dir = 0; dir < dirs; ++dir) {
          const std::size_t slot = edge_slot(x, dir, p.d);
          if (nbr[slot] < 0) continue;
          const auto& e = edge[slot];
          const auto it = std::upper_bound(e.begin(), e.end(), t);
          if (it == e.end()) continue;
          const auto y = static_cast<std::size_t>(nbr[slot]);
          if (*it < arrival[y]) {
            arrival[y] = *it;
            pq.push({*it, y});
          }
        }
      }
      for (double a : arrival) {
        if (a > T + w) return true;
      }
    }
  }
  return false;
}

double d_threshold(const EventParams& p, double alpha) {
  const double eps3 = (1.0 - alpha) / 2.0;
  const double g = 1.0 - eps3 / 2.0;
  return static_cast<double>(p.n) * p.n * std::exp2(p.n * p.eps * g);
}

bool occurs_D(const EventParams& p, double alpha, const InterarrivalLaw& law, Rng& rng) {
  const double L = std::ldexp(1.0, p.n), U = std::ldexp(1.0, p.n + 2);
  const double w = std::exp2(p.n * p.eps);
  const double thr = d_threshold(p, alpha);
  const std::size_t sites = site_count(2 * cube_radius(p.n) + 1, p.d);
  for (std::size_t z = 0; z < sites; ++z) {
    const RenewalTrack tr = generate_track(law, 0.0, U, rng);
    const auto& m = tr.marks;
    const auto begin = std::lower_bound(m.begin(), m.end(), L);
    const auto n = static_cast<std::size_t>(m.end() - begin);
    if (static_cast<double>(n) < thr) continue;
    std::size_t i = 0;
    for (std::size_t j = 0; j < n; ++j) {
      while (begin[static_cast<long>(i)] < begin[static_cast<long>(j)] - w) ++i;
      if (static_cast<double>(j - i + 1) >= thr) return true;
    }
  }
  return false;
}

bool occurs_A(const EventParams& p, const InterarrivalLaw& law, Rng& rng) {
  const double L = std::ldexp(1.0, p.n), U = std::ldexp(1.0, p.n + 1);
  const double W = p.M + 1.0;
  const double horizon = U + W + 1.0;
  const RenewalTrack origin = generate_track(law, 0.0, horizon, rng);
  // Closed t-intervals on which some neighbour has a mark-free stretch of length >= eps.
  std::vector<std::pair<double, double>> forbidden;
  for (int j = 0; j < p.m; ++j) {
    const RenewalTrack nb = generate_track(law, 0.0, horizon, rng);
    double prev = nb.start;
    auto gap = [&](double a, double b) {
      if (b - a >= p.eps) forbidden.push_back({a - W + p.eps, b - p.eps});
    };
    for (double x : nb.marks) {
      gap(prev, x);
      prev = x;
    }
    gap(prev, kInf);
  }
  std::sort(forbidden.begin(), forbidden.end());
  const auto& r = origin.marks;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double next = i + 1 < r.size() ? r[i + 1] : kInf;
    const double lo = std::max(std::nextafter(r[i] - 1.0, kInf), L);
    const double hi = std::min({r[i], std::nextafter(next - W, -kInf), std::nextafter(U, -kInf)});
    if (lo > hi) continue;
    double t = lo;
    for (const auto& [a, b] : forbidden) {
      if (a > t) break;
      if (b >= t) t = std::nextafter(b, kInf);
    }
    if (t <= hi) return true;
  }
  return false;
}

}  // namespace

std::string event_name(EventId id) {
  switch (id) {
    case EventId::J: return "J";
    case EventId::B: return "B";
    case EventId::Bm: return "Bm";
    case EventId::C: return "C";
    case EventId::D: return "D";
    case EventId::A: return "A";
  }
  return "?";
}

EventId parse_event(const std::string& name) {
  for (EventId id : {EventId::J, EventId::B, EventId::Bm, EventId::C, EventId::D, EventId::A}) {
    if (event_name(id) == name) return id;
  }
  throw ConfigError("event: unknown event kind '" + name + "' (expected J, B, Bm, C, D or A)");
}

void check_event_params(const EventParams& p, const InterarrivalLaw& law) {
  const std::string ev = event_name(p.id);
  if (p.n < 1 || p.n > 30) throw DomainError(ev + ": n must lie in [1, 30]");
  if (p.d < 1) throw DomainError(ev + ": d must be >= 1");
  switch (p.id) {
    case EventId::J:
      if (!(p.t >= 0.0) || !(p.s >= 0.0)) throw DomainError("J: t and s must be >= 0");
      return;
    case EventId::B:
    case EventId::Bm: {
      const int m = p.id == EventId::B ? 1 : p.m;
      if (m < 1) throw PreconditionError(ev + ": m must be >= 1");
      const double alpha = resolve_alpha(p, law);
      if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError(ev + ": alpha must lie in (0, 1)");
      if (!(p.eps > 0.0)) throw PreconditionError(ev + ": eps must be > 0");
      if (!(1.0 - alpha > 1.0 / (m + 1) + p.eps)) {
        throw PreconditionError(ev + ": need 1 - alpha > 1/(m+1) + eps (m = " + std::to_string(m) +
                                ", alpha = " + std::to_string(alpha) + ", eps = " + std::to_string(p.eps) + ")");
      }
      return;
    }
    case EventId::C:
      if (!(p.eps > 0.0 && p.eps < 1.0)) throw PreconditionError("C: eps must lie in (0, 1)");
      if (!(p.lambda > 0.0)) throw PreconditionError("C: lambda must be > 0");
      if (p.grid_step < 0.0) throw DomainError("C: grid_step must be >= 0");
      return;
    case EventId::D: {
      const double alpha = resolve_alpha(p, law);
      if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("D: alpha must lie in (0, 1)");
      if (!(p.eps > 0.0 && p.eps < 1.0)) throw PreconditionError("D: eps must lie in (0, 1)");
      return;
    }
    case EventId::A: {
      if (p.m < 1 || p.m > 2 * p.d) throw PreconditionError("A: m must lie in [1, 2d]");
      const double alpha = resolve_alpha(p, law);
      if (!(alpha < 1.0 && 1.0 - alpha < 1.0 / (p.m + 1))) {
        throw PreconditionError("A: need 1 - alpha < 1/(m+1) with alpha < 1");
      }
      if (!(p.M > 0.0)) throw PreconditionError("A: M must be > 0");
      if (!(p.eps > 0.0)) throw PreconditionError("A: eps must be > 0");
      return;
    }
  }
}

bool event_occurs(const EventParams& p, const InterarrivalLaw& law, Rng& rng) {
  switch (p.id) {
    case EventId::J: return occurs_J(p, law, rng);
    case EventId::B: return occurs_Bm(p, 1, law, rng);
    case EventId::Bm: return occurs_Bm(p, p.m, law, rng);
    case EventId::C: return p.d == 1 ? occurs_C_line(p, rng) : occurs_C_grid(p, rng);
    case EventId::D: return occurs_D(p, resolve_alpha(p, law), law, rng);
    case EventId::A: return occurs_A(p, law, rng);
  }
  return false;
}

double event_bound(const EventParams& p, const InterarrivalLaw& law) {
  const double n = p.n;
  const double ln2 = std::log(2.0);
  switch (p.id) {
    case EventId::J:
      if (p.s <= 1.0) return kInf;
      return p.K * std::exp(p.d * n * ln2) / moment_function_f(p.s, p.theta);
    case EventId::B:
    case EventId::Bm: {
      const double m = p.id == EventId::B ? 1.0 : p.m;
      const double alpha = resolve_alpha(p, law);
      const double expo = m - (m + 1.0) * alpha - (m + 1.0) * p.eps;
      return p.K * std::pow(n, 3.0 * p.d * (m + 1.0)) * std::exp2(-n * expo);
    }
    case EventId::C:
      return p.K * std::exp2(n * (1.0 - p.eps)) * std::pow(n, 6.0 * p.d) *
             std::exp(-p.c * std::exp2(p.c * n * p.eps));
    case EventId::D:
      return p.K * std::pow(n, 3.0 * p.d) * std::exp2(n) * std::exp2(-p.c * p.eps * p.eps * n * n);
    case EventId::A:
      return std::numeric_limits<double>::quiet_NaN();
  }
  return kInf;
}

EventEstimate estimate_event_prob(const EventParams& p, const InterarrivalLaw& law, std::size_t trials,
                                  std::uint64_t seed, int workers) {
  if (trials == 0) throw DomainError("event: trials must be >= 1");
  check_event_params(p, law);
  const auto hits = run_trials(trials, seed, workers,
                               [&](std::size_t, Rng& rng) { return event_occurs(p, law, rng) ? 1 : 0; });
  std::size_t k = 0;
  for (int h : hits) k += static_cast<std::size_t>(h);
  EventEstimate out;
  out.result = proportion(k, trials);
  out.result.metadata = to_json(p);
  out.bound = event_bound(p, law);
  if (!std::isnan(out.bound)) out.within_bound = out.result.estimate <= out.bound;
  return out;
}

std::pair<double, double> fit_cn_constants(double p4, double p5, double eps, int d) {
  if (!(p4 > 0.0) || !(p5 > 0.0)) throw DomainError("C fit: probabilities must be > 0");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("C fit: eps must lie in (0, 1)");
  auto reduced = [&](double p, double n) {
    return std::log(p) - n * (1.0 - eps) * std::log(2.0) - 6.0 * d * std::log(n);
  };
  const double q4 = reduced(p4, 4.0), q5 = reduced(p5, 5.0);
  const double D = q4 - q5;
  if (!(D > 0.0)) return {std::exp(std::max(q4, q5)), 0.0};
  auto g = [&](double c) { return c * (std::exp2(5.0 * c * eps) - std::exp2(4.0 * c * eps)); };
  double lo = 0.0, hi = 1.0;
  while (g(hi) < D) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < D) lo = mid; else hi = mid;
  }
  const double c = 0.5 * (lo + hi);
  return {std::exp(q4 + c * std::exp2(4.0 * c * eps)), c};
}

std::pair<double, double> fit_cn_constants(const EstimateResult& e4, const EstimateResult& e5,
                                           double eps, int d) {
  const double p4 = e4.estimate > 0.0 ? e4.estimate : e4.ci.hi;
  const double p5 = e5.estimate > 0.0 ? e5.estimate : e5.ci.hi;
  return fit_cn_constants(p4, p5, eps, d);
}

nlohmann::json to_json(const EventParams& p) {
  nlohmann::json j{{"event", event_name(p.id)}, {"n", p.n}, {"d", p.d}};
  switch (p.id) {
    case EventId::J: j.update({{"t", p.t}, {"s", p.s}, {"theta", p.theta}, {"K", p.K}}); break;
    case EventId::B: j.update({{"eps", p.eps}, {"K", p.K}}); break;
    case EventId::Bm: j.update({{"eps", p.eps}, {"m", p.m}, {"K", p.K}}); break;
    case EventId::C:
      j.update({{"eps", p.eps}, {"lambda", p.lambda}, {"K", p.K}, {"c", p.c}, {"grid_step", p.grid_step}});
      break;
    case EventId::D: j.update({{"eps", p.eps}, {"K", p.K}, {"c", p.c}}); break;
    case EventId::A: j.update({{"eps", p.eps}, {"m", p.m}, {"M", p.M}}); break;
  }
  if (p.alpha) j["alpha"] = *p.alpha;
  return j;
}

nlohmann::json to_json(const EventEstimate& e) {
  nlohmann::json j = to_json(e.result);
  j["bound"] = std::isfinite(e.bound) ? nlohmann::json(e.bound) : nlohmann::json(nullptr);
  j["within_bound"] = e.within_bound ? nlohmann::json(*e.within_bound) : nlohmann::json(nullptr);
  return j;
}

}  // namespace rcp
