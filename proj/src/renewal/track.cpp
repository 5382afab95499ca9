#include "rcp/renewal/track.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rcp/errors.hpp"

namespace rcp {

RenewalTrack generate_track(const InterarrivalLaw& law, double start, double horizon, Rng& rng) {
  if (!(horizon >= start)) throw DomainError("generate_track: horizon must not precede the start");
  RenewalTrack track{start, {}, horizon};
  double t = start;
  while (true) {
    double next = t + law.sample(rng);
    if (!(next > t)) next = std::nextafter(t, horizon + 1.0);
    if (next > horizon) break;
    track.marks.push_back(next);
    t = next;
  }
  return track;
}

AgeOvershoot age_overshoot_at(const RenewalTrack& track, double t) {
  if (t < track.start || t > track.horizon) {
    throw DomainError("age_overshoot_at: t=" + std::to_string(t) + " outside [start, horizon]");
  }
  const auto& m = track.marks;
  const auto it = std::upper_bound(m.begin(), m.end(), t);
  AgeOvershoot r;
  r.index = static_cast<std::size_t>(it - m.begin());
  const double last = r.index == 0 ? track.start : m[r.index - 1];
  r.age = t - last;
  if (it != m.end()) r.overshoot = *it - t;
  return r;
}

std::size_t count_marks(const RenewalTrack& track, double a, double b) {
  if (b <= a) return 0;
  const auto& m = track.marks;
  return static_cast<std::size_t>(std::upper_bound(m.begin(), m.end(), b) -
                                  std::upper_bound(m.begin(), m.end(), a));
}

bool is_epsilon_block(const RenewalTrack& track, double a, double b, double eps) {
  if (a > b) throw DomainError("is_epsilon_block: a > b");
  if (a < track.start || b > track.horizon) throw DomainError("is_epsilon_block: interval outside track");
  const auto& m = track.marks;
  double prev = a;
  for (auto it = std::lower_bound(m.begin(), m.end(), a); it != m.end() && *it <= b; ++it) {
    if (*it - prev >= eps) return false;
    prev = *it;
  }
  return b - prev < eps;
}

std::vector<double> hazard_check_grid(std::size_t points) {
  std::vector<double> g(points);
  const double lo = std::log(1e-6), hi = std::log(1e9);
  for (std::size_t i = 0; i < points; ++i) {
    g[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  return g;
}

std::pair<RenewalTrack, RenewalTrack> hazard_coupled_tracks(const InterarrivalLaw& mu,
                                                            const InterarrivalLaw& nu, double start,
                                                            double horizon, Rng& rng) {
  if (!mu.has_hazard() || !nu.has_hazard()) {
    throw UnsupportedLawError("hazard_coupled_tracks: both laws need hazard rates");
  }
  if (!(horizon >= start)) throw DomainError("hazard_coupled_tracks: horizon must not precede the start");
  const auto grid = hazard_check_grid();
  double bound = 0.0;
  double prev_nu = std::numeric_limits<double>::infinity();
  for (double a : grid) {
    const double hm = mu.hazard(a), hn = nu.hazard(a);
    if (hm > hn) {
      throw PreconditionError("hazard_coupled_tracks: h_mu > h_nu at age " + std::to_string(a));
    }
    if (hn > prev_nu * (1.0 + 1e-12)) {
      throw PreconditionError("hazard_coupled_tracks: h_nu must be non-increasing");
    }
    prev_nu = hn;
    bound = std::max(bound, hn);
  }
  if (!std::isfinite(bound) || bound <= 0.0) {
    throw PreconditionError("hazard_coupled_tracks: h_nu must be bounded and positive");
  }

  RenewalTrack tm{start, {}, horizon}, tn{start, {}, horizon};
  double t = start, last_m = start, last_n = start;
  while (true) {
    t += rng.exponential(bound);
    if (t > horizon) break;
    const double y = rng.u01() * bound;
    const bool acc_m = y <= mu.hazard(t - last_m);
    // Off-grid dominance gaps are closed by forcing nu to accept with mu.
    const bool acc_n = acc_m || y <= nu.hazard(t - last_n);
    if (acc_n) {
      tn.marks.push_back(t);
      last_n = t;
    }
    if (acc_m) {
      tm.marks.push_back(t);
      last_m = t;
    }
  }
  return {std::move(tm), std::move(tn)};
}

}  // namespace rcp
