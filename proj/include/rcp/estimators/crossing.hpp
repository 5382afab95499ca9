#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rcp/estimators/harness.hpp"
#include "rcp/graphical/box.hpp"

namespace rcp {

struct CrossingEstimates {
  EstimateResult temporal;       // t_n
  EstimateResult temporal_half;  // t~_n
  EstimateResult spatial;        // s_n, direction 0
  EstimateResult spatial_half;   // h_n, direction 0
  std::size_t containment_violations = 0;  // trials with T but not T~
  SpaceTimeBox box;
};

// Fresh sample on the box per trial (renewals started at the window start).
CrossingEstimates estimate_crossing_box(const SpaceTimeBox& box, double lambda,
                                        const InterarrivalLaw& law, std::size_t trials,
                                        std::uint64_t seed, int workers = 0, double mark_budget = 5e7);

// B_n = [0, 2^n]^d x [0, b_n] with b_n = exp((alpha/theta)^2 n^2); b_override > 0 replaces b_n.
CrossingEstimates estimate_crossing_probs(int n, const MonteCarloConfig& c, double theta = 2.5,
                                          double b_override = 0.0);

// s <= h^2 + 2 * (combined half-width of the two intervals).
bool independence_square_holds(const CrossingEstimates& e);

}  // namespace rcp
