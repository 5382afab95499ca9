#pragma once

#include <cstddef>
#include <cstdint>

#include <json.hpp>

#include "rcp/estimators/harness.hpp"

namespace rcp {

struct EricksonResult {
  EstimateResult result;  // P(Z_t > threshold)
  double target = 0.0;     // 1 - theta
  double abs_diff = 0.0;   // |estimate - target|
  double threshold = 0.0;  // m^{-1}(theta m(t))
  double m_t = 0.0;        // m(t)
  std::size_t censored = 0;
};

// Monte Carlo of the overshoot exceedance P(Z_t > m^{-1}(theta m(t))) with exact
// simulation of the renewal sequence up to t.
EricksonResult erickson_check(const InterarrivalLaw& law, double t, double theta, std::size_t trials,
                              std::uint64_t seed, int workers = 0);

// Exact exceedance for Deterministic(value): Z_t = value - (t mod value), threshold
// m^{-1}(theta m(t)) = theta * value once t >= value.
double erickson_deterministic_exact(double value, double t, double theta);

nlohmann::json to_json(const EricksonResult& r);

}  // namespace rcp
