#include "rcp/estimators/harness.hpp"

#include <cmath>

#include "rcp/errors.hpp"

namespace rcp {

void MonteCarloConfig::validate() const {
  if (trials == 0) throw DomainError("trials must be >= 1");
  if (!(horizon >= 1.0) || !std::isfinite(horizon)) throw DomainError("horizon must be >= 1");
  if (radius < 0) throw DomainError("radius must be >= 0");
  if (d < 1) throw DomainError("d must be >= 1");
  if (lambdas.empty()) throw DomainError("lambda grid is empty");
  for (double l : lambdas) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw DomainError("lambda must be >= 0");
  }
  if (workers < 0) throw DomainError("workers must be >= 0");
}

EstimateResult proportion(std::size_t successes, std::size_t trials) {
  EstimateResult r;
  r.trials = trials;
  r.successes = successes;
  if (trials == 0) {
    r.defined = false;
    r.estimate = NAN;
    r.ci = {NAN, NAN};
    return r;
  }
  r.estimate = static_cast<double>(successes) / static_cast<double>(trials);
  r.ci = wilson_interval(successes, trials);
  return r;
}

int resolve_workers(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

nlohmann::json to_json(const EstimateResult& r) {
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  return {{"estimate", num(r.estimate)}, {"ci_lo", num(r.ci.lo)}, {"ci_hi", num(r.ci.hi)},
          {"trials", r.trials}, {"successes", r.successes}, {"boundary_hits", r.boundary_hits},
          {"horizon_hits", r.horizon_hits}, {"defined", r.defined}, {"metadata", r.metadata}};
}

}  // namespace rcp
