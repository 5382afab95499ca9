#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rcp/graphical/box.hpp"
#include "rcp/renewal/law.hpp"
#include "rcp/renewal/track.hpp"

namespace rcp {

struct DeterminismField {
  double age = 0.0;              // Y_t(0)
  std::size_t alive = 0;         // transmission replicates alive at t
  std::size_t origin_healthy = 0;
  bool defined = false;          // alive > 0
  double p_hat = 0.0;            // P(origin healthy | renewals, alive)
  double gap = 0.0;              // |p_hat - exp(-2 d lambda Y)|
  std::vector<double> signed_gaps;  // p_hat - exp(-(2d-k) lambda Y) for k = 1..2d-1
};

struct DeterminismResult {
  std::vector<DeterminismField> fields;
  double mean_gap = 0.0;  // over defined fields
  std::size_t undefined_fields = 0;
};

// Frozen cure tracks on box (origin included), P independent transmission fields, start {0}.
DeterminismField determinism_for_cures(const SpaceTimeBox& box, const InterarrivalLaw& law,
                                       double lambda, const std::vector<RenewalTrack>& cures, double t,
                                       std::size_t p_replicates, std::uint64_t seed);

// R frozen renewal fields on [-radius, radius]^d x [0, t], each with P transmission fields.
DeterminismResult estimate_conditional_determinism(const InterarrivalLaw& law, double lambda, int d,
                                                   double t, std::size_t r_replicates,
                                                   std::size_t p_replicates, std::uint64_t seed,
                                                   long radius = 20, int workers = 0);

}  // namespace rcp
