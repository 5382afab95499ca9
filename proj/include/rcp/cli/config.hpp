#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcp/renewal/law.hpp"

namespace rcp {

enum class ExperimentKind {
  survival_curve,
  crossing,
  recurrence,
  lambda0,
  tunnel_bound,
  tunnel_trial,
  determinism,
  density,
  renewal_diagnostics,
  event_prob,
  sample_dump,
};

std::string kind_name(ExperimentKind k);
ExperimentKind parse_kind(const std::string& name);
std::vector<std::string> kind_names();

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::survival_curve;
  InterarrivalLaw law = InterarrivalLaw::exponential(1.0);
  std::vector<double> lambdas{1.0};
  int d = 1;
  double horizon = 50.0;
  long radius = 50;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  int workers = 0;
  std::string output;      // file stem, defaults to the kind name
  nlohmann::json params;   // kind defaults merged with the supplied values

  // Normalised echo of every field, used in the JSON sidecar.
  nlohmann::json echo() const;
};

// Per-kind parameter defaults; a null default marks an optional number.
nlohmann::json kind_defaults(ExperimentKind k);

// Validates keys and types; throws ConfigError naming the offending field.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// Seed precedence: flag, then the RCP_SEED environment variable, then the file.
void apply_seed_overrides(ExperimentConfig& c, const std::optional<std::uint64_t>& flag_seed);

}  // namespace rcp
