#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rcp/renewal/law.hpp"
#include "rcp/rng.hpp"

namespace rcp {

// One site's cure marks: strictly increasing times in (start, horizon].
// The start point itself counts as a renewal for age queries.
struct RenewalTrack {
  double start = 0.0;
  std::vector<double> marks;
  double horizon = 0.0;

  bool operator==(const RenewalTrack&) const = default;
};

struct AgeOvershoot {
  double age = 0.0;
  std::optional<double> overshoot;  // empty when no mark follows t within the horizon
  std::size_t index = 0;            // number of marks in (start, t]

  bool censored() const { return !overshoot.has_value(); }
};

RenewalTrack generate_track(const InterarrivalLaw& law, double start, double horizon, Rng& rng);

AgeOvershoot age_overshoot_at(const RenewalTrack& track, double t);

// True iff every mark-free sub-interval of [a,b] is shorter than eps.
bool is_epsilon_block(const RenewalTrack& track, double a, double b, double eps);

// Number of marks in the half-open interval (a, b].
std::size_t count_marks(const RenewalTrack& track, double a, double b);

// Tracks for mu and nu built by thinning one planar Poisson point set under
// the two hazard curves. Requires h_nu >= h_mu, h_nu non-increasing and bounded.
std::pair<RenewalTrack, RenewalTrack> hazard_coupled_tracks(const InterarrivalLaw& mu,
                                                            const InterarrivalLaw& nu, double start,
                                                            double horizon, Rng& rng);

// Log-spaced grid used to validate hazard dominance.
std::vector<double> hazard_check_grid(std::size_t points = 1000);

}  // namespace rcp
