#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcp/estimators/harness.hpp"
#include "rcp/renewal/renewal_measure.hpp"
#include "rcp/renorm/tunnel.hpp"

namespace rcp {

struct TunnelOptions {
  bool condition_first_gap = true;  // draw site 0's first gap conditioned to exceed R_0
  bool check_path = true;           // false: infinite-rate surrogate, crossings always succeed
  bool cross_validate = false;      // replay every success through evolve on the touched columns
  std::size_t column_budget = 1000000;
};

// Age/overshoot samplers at the heights R_0 .. R_{K-1}. Laws without a density fall
// back to direct simulation of the renewal sequence.
class TunnelTables {
 public:
  TunnelTables(const InterarrivalLaw& law, const TunnelSchedule& schedule);

  AgeOvershootDraw sample(std::size_t level, Rng& rng) const;
  const InterarrivalLaw& law() const { return law_; }
  const TunnelSchedule& schedule() const { return schedule_; }
  bool exact() const { return !rf_; }

 private:
  InterarrivalLaw law_;
  TunnelSchedule schedule_;
  std::unique_ptr<RenewalFunction> rf_;
  std::vector<AgeOvershootSampler> samplers_;
};

enum class TunnelFailure { none, first_gap, columns, crossing, cure_in_rectangle };

std::string failure_name(TunnelFailure f);

struct TunnelLevel {
  std::size_t k = 0;
  long L = 0;                 // column reached at height R_k
  long next_L = 0;            // L_{k+1}
  std::size_t scanned = 0;    // columns drawn at this level
  double V = 0.0;             // min(r_k, ages at R_k of columns L_k+1 .. L_{k+1})
  double crossing_time = 0.0; // total hop time of the rightmost path
  bool rectangle_free = true; // A_k carries no cure marks
  // Kept when cross-validating: draws of columns L_k+1 .. L_{k+1} and the hop
  // times of the rightmost path, measured from R_k - V.
  std::vector<AgeOvershootDraw> draws;
  std::vector<double> hops;
};

struct TunnelTrialResult {
  bool success = false;
  TunnelFailure failure = TunnelFailure::none;
  std::optional<std::size_t> failed_level;
  double first_gap_excess = 0.0;  // first interarrival at site 0 minus R_0
  std::vector<TunnelLevel> levels;
  long columns = 0;               // L_K on success
  std::optional<bool> cross_validated;
};

TunnelTrialResult tunnel_trial(const TunnelTables& tables, double lambda, Rng& rng,
                               const TunnelOptions& opt = {});

// Replays a successful trial: builds the known marks on [0, L_K], orders them exactly
// and checks that evolve from {0} reaches column L_K infected at height R_K.
// Requires a trial run with check_path and cross_validate.
bool cross_validate_tunnel(const TunnelTables& tables, double lambda, const TunnelTrialResult& trial);

struct TunnelEstimate {
  EstimateResult result;
  double log_first_gap_prob = 0.0;  // ln P(first interarrival > R_0)
  double bound_sum = 0.0;           // tunnel bound sum at the same schedule
  double bound_target = 0.0;        // 1 - bound_sum
  std::size_t cross_checked = 0;
  std::size_t cross_failures = 0;
  std::vector<std::size_t> failures;  // indexed by TunnelFailure
};

TunnelEstimate estimate_tunnel(const InterarrivalLaw& law, double lambda, double ell0, double alpha_scale,
                               std::size_t depth, std::size_t trials, std::uint64_t seed, int workers = 0,
                               const TunnelOptions& opt = {});

nlohmann::json to_json(const TunnelEstimate& e);

}  // namespace rcp
