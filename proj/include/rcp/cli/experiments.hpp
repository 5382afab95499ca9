#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rcp/cli/config.hpp"
#include "rcp/cli/csv.hpp"
#include "rcp/graphical/sample.hpp"

namespace rcp {

struct ExperimentOutput {
  CsvTable csv{{}};
  nlohmann::json summary;
  // Additional files as (suffix appended to the output stem, content).
  std::vector<std::pair<std::string, std::string>> extra;
};

// CSV columns per kind:
//   survival-curve       lambda,estimate,ci_lo,ci_hi,boundary_hits,trials
//   crossing             quantity,estimate,ci_lo,ci_hi,successes,trials
//   recurrence           n,log_u,log_target,pass,quadratic_quarter,moment_quarter
//   lambda0              n0,log_b_n0,log_N,log_lambda0,log10_lambda0,lambda0_positive
//   tunnel-bound         lambda,found,ell0,bound_sum,partial,tail,tail_ratio,finite
//   tunnel-trial         lambda,ell0,estimate,ci_lo,ci_hi,successes,trials,log_first_gap_prob,bound_sum,cross_checked,cross_failures
//   determinism          lambda,field,age,alive,origin_healthy,defined,p_hat,gap
//   density              lambda,estimate,ci_lo,ci_hi,alive,trials,p_dead,p_alive_all_ones
//   renewal-diagnostics  moment: u,worst_gap,f_u,product
//                        erickson: theta,estimate,ci_lo,ci_hi,target,abs_diff,threshold
//                        calculus: t,a,ratio,target,rel_err
//   event-prob           event,n,estimate,ci_lo,ci_hi,successes,trials,bound,within_bound
//   sample-dump          lambda,sites,marks,digest (plus _evolve.csv, _crossing.csv, .rcpg)
ExperimentOutput run_experiment(const ExperimentConfig& c);

// Writes <stem>.csv, <stem>.json and the extras into out_dir, each atomically.
void write_outputs(const ExperimentConfig& c, const ExperimentOutput& out, const std::string& out_dir);

std::string provenance();

// Replay commands over a sample: "evolve" (history from the origin to the window end)
// and "crossing" (all crossing detectors on the sample's box).
std::string replay_csv(const GraphicalSample& sample, const std::string& command);

// Exit codes: 2 config or domain, 3 capacity, 4 precondition, 5 format, 1 otherwise.
int exit_code_for(const std::exception_ptr& e);

}  // namespace rcp
