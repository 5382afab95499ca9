#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "rcp/estimators/harness.hpp"

namespace rcp {

enum class EventId {
  J,      // some site of [0, 2^n]^d has no renewal mark on [t, t+s]
  B,      // two distinct sites of B(n^3) renew on [s, s+1] and [s, s + 2 * 2^{n eps}]
  Bm,     // one site renews on [s, s+1] and m others on [s, s + 2 * 2^{n eps}]
  C,      // some (x, T) fails to freely infect (y, T + 2^{n eps}) inside B(n^3)
  D,      // some site has at least n^2 2^{n eps g(alpha)} marks in a window of length 2^{n eps}
  A,      // origin renews on [t, t+1], not on [t+1, t+M+1], neighbours form eps-blocks
};

std::string event_name(EventId id);
// Accepts J, B, Bm, C, D, A. Throws ConfigError otherwise.
EventId parse_event(const std::string& name);

struct EventParams {
  EventId id = EventId::J;
  int n = 4;
  int d = 1;
  double t = 0.0;        // J
  double s = 1.0;        // J: interval length
  double eps = 0.1;      // B, Bm, C, D, A
  int m = 1;             // Bm, A
  double M = 1.0;        // A
  double lambda = 1.0;   // C
  std::optional<double> alpha;  // tail index; defaults to the ParetoTail parameter
  double theta = 2.5;    // J: exponent of the moment function f
  double K = 1.0;        // bound prefactor (C_moment for J)
  double c = 1.0;        // bound exponent constant (C, D)
  double grid_step = 0.0;  // C with d > 1: spacing of the T grid, 0 means 2^{n eps} / 8
};

// Throws PreconditionError when the parameters leave the range where the bound applies.
void check_event_params(const EventParams& p, const InterarrivalLaw& law);

// One Monte Carlo draw of the event.
bool event_occurs(const EventParams& p, const InterarrivalLaw& law, Rng& rng);

// Upper bound for J, B, Bm, C, D; NaN for A (which has no upper bound).
double event_bound(const EventParams& p, const InterarrivalLaw& law);

struct EventEstimate {
  EstimateResult result;
  double bound = 0.0;
  std::optional<bool> within_bound;  // estimate <= bound; empty without a bound
};

EventEstimate estimate_event_prob(const EventParams& p, const InterarrivalLaw& law, std::size_t trials,
                                  std::uint64_t seed, int workers = 0);

// Solves for (K, c) so that the C bound passes through probabilities p4, p5 at n = 4, 5.
// When p5 does not decay fast enough for any c > 0 the fit degenerates to c = 0.
std::pair<double, double> fit_cn_constants(double p4, double p5, double eps, int d);
// Same fit from two estimates; a zero estimate is replaced by its Wilson upper end.
std::pair<double, double> fit_cn_constants(const EstimateResult& e4, const EstimateResult& e5,
                                           double eps, int d);

nlohmann::json to_json(const EventParams& p);
nlohmann::json to_json(const EventEstimate& e);

}  // namespace rcp
