#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <vector>

#include <omp.h>
#include <json.hpp>

#include "rcp/renewal/law.hpp"
#include "rcp/rng.hpp"
#include "rcp/stats.hpp"

namespace rcp {

struct MonteCarloConfig {
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  double horizon = 50.0;
  long radius = 50;
  std::vector<double> lambdas{1.0};
  InterarrivalLaw law = InterarrivalLaw::exponential(1.0);
  int d = 1;
  int workers = 0;  // 0 = OpenMP default
  double mark_budget = 5e7;

  // Throws DomainError on non-positive sizes or horizon < 1.
  void validate() const;
};

struct EstimateResult {
  double estimate = 0.0;
  Interval ci;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t boundary_hits = 0;
  std::size_t horizon_hits = 0;
  bool defined = true;  // false when the conditioning event never occurred
  nlohmann::json metadata;
};

// Proportion estimate with a Wilson interval; undefined when trials == 0.
EstimateResult proportion(std::size_t successes, std::size_t trials);

int resolve_workers(int workers);

// Seed of trial i: depends only on (master, i), never on scheduling.
inline std::uint64_t trial_seed(std::uint64_t master, std::size_t i) {
  return derive_seed(master, StreamKind::trial, i);
}

// Runs f(i, rng) for i < n on an OpenMP team; results are stored by index so the
// output does not depend on the worker count. The first exception is rethrown.
template <class F>
auto run_trials(std::size_t n, std::uint64_t master, int workers, F&& f) {
  using R = decltype(f(std::size_t{0}, std::declval<Rng&>()));
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  const long total = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_workers(workers))
  for (long i = 0; i < total; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      Rng rng(trial_seed(master, idx));
      slots[idx].emplace(f(idx, rng));
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// Reference loop with the same seeding as run_trials.
template <class F>
auto run_trials_serial(std::size_t n, std::uint64_t master, F&& f) {
  using R = decltype(f(std::size_t{0}, std::declval<Rng&>()));
  std::vector<R> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(trial_seed(master, i));
    out.push_back(f(i, rng));
  }
  return out;
}

nlohmann::json to_json(const EstimateResult& r);

}  // namespace rcp
