#pragma once

#include <cstdint>
#include <vector>

#include "rcp/estimators/harness.hpp"

namespace rcp {

struct SurvivalOutcome {
  bool alive = false;         // infected set non-empty at the horizon
  bool boundary_hit = false;  // infection reached the box boundary
  double extinction_time = 0.0;  // +inf when alive at the horizon
};

// One trial from {0} on [-radius, radius]^d x [0, horizon]. Transmission marks are
// drawn at lambda_ref and thinned, so equal seeds couple different lambdas.
SurvivalOutcome survival_trial(const MonteCarloConfig& c, double lambda, double lambda_ref,
                               std::uint64_t sample_seed);

// Fraction alive at the horizon per lambda; boundary-hit trials count as alive and are flagged.
std::vector<EstimateResult> estimate_survival(const MonteCarloConfig& c);
std::vector<EstimateResult> estimate_survival_serial(const MonteCarloConfig& c);

// Extinction times [lambda index][trial], +inf when alive, under the thinning coupling.
std::vector<std::vector<double>> coupled_survival_times(const MonteCarloConfig& c);

struct DensityEstimate {
  EstimateResult conditional;     // P(all ones on the window | alive at t)
  EstimateResult dead;            // P(extinct by t)
  EstimateResult alive_all_ones;  // P(alive and all ones on the window)
};

// Window [-window, window]^d; starts from {0}, or from the whole window when from_window.
DensityEstimate estimate_density_window(const MonteCarloConfig& c, double lambda, long window, double t,
                                        bool from_window = false);

}  // namespace rcp
