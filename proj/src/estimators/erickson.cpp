#include "rcp/estimators/erickson.hpp"

#include <cmath>

#include "rcp/errors.hpp"
#include "rcp/renewal/diagnostics.hpp"
#include "rcp/renewal/renewal_measure.hpp"

namespace rcp {

EricksonResult erickson_check(const InterarrivalLaw& law, double t, double theta, std::size_t trials,
                              std::uint64_t seed, int workers) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("erickson: theta must lie in (0, 1)");
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("erickson: t must be > 0");
  if (trials == 0) throw DomainError("erickson: trials must be >= 1");
  EricksonResult r;
  r.m_t = integrated_tail_m(law, t);
  r.threshold = inverse_integrated_tail(law, theta * r.m_t);
  r.target = 1.0 - theta;
  const double thr = r.threshold;
  const auto hits = run_trials(trials, seed, workers, [&](std::size_t, Rng& rng) {
    return sample_age_overshoot_exact(law, t, rng).overshoot > thr ? 1 : 0;
  });
  std::size_t k = 0;
  for (int h : hits) k += static_cast<std::size_t>(h);
  r.result = proportion(k, trials);
  r.abs_diff = std::abs(r.result.estimate - r.target);
  r.result.metadata = {{"law", law.family_name()}, {"t", t}, {"theta", theta}, {"censored", r.censored}};
  return r;
}

double erickson_deterministic_exact(double value, double t, double theta) {
  if (!(value > 0.0) || !(t >= value)) throw DomainError("erickson_deterministic_exact: need t >= value > 0");
  const double z = value - std::fmod(t, value);
  return z > theta * value ? 1.0 : 0.0;
}

nlohmann::json to_json(const EricksonResult& r) {
  nlohmann::json j = to_json(r.result);
  j.update({{"target", r.target}, {"abs_diff", r.abs_diff}, {"threshold", r.threshold}, {"m_t", r.m_t},
            {"censored", r.censored}});
  return j;
}

}  // namespace rcp
