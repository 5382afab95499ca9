#include "rcp/estimators/crossing.hpp"

#include <cmath>

#include "rcp/errors.hpp"
#include "rcp/graphical/sample.hpp"
#include "rcp/paths/crossing.hpp"
#include "rcp/renewal/law_json.hpp"
#include "rcp/renorm/recurrence.hpp"

namespace rcp {

CrossingEstimates estimate_crossing_box(const SpaceTimeBox& box, double lambda,
                                        const InterarrivalLaw& law, std::size_t trials,
                                        std::uint64_t seed, int workers, double mark_budget) {
  box.validate();
  if (trials == 0) throw DomainError("crossing: trials must be >= 1");
  if (expected_mark_count(box, lambda, law) > mark_budget) {
    throw CapacityError("crossing: box too large for the mark budget");
  }
  struct Flags {
    bool t, th, s, h;
  };
  auto flags = run_trials(trials, seed, workers, [&](std::size_t i, Rng&) {
    BuildOptions opt;
    opt.mark_budget = mark_budget;
    opt.workers = 1;
    const auto g = build_sample_serial(box, lambda, law, trial_seed(seed, i), opt);
    return Flags{detect_temporal_crossing(g, box, false), detect_temporal_crossing(g, box, true),
                 detect_spatial_crossing(g, box, 0, false), detect_spatial_crossing(g, box, 0, true)};
  });
  std::size_t t = 0, th = 0, s = 0, h = 0, viol = 0;
  for (const auto& f : flags) {
    t += f.t;
    th += f.th;
    s += f.s;
    h += f.h;
    viol += f.t && !f.th;
  }
  CrossingEstimates e;
  e.temporal = proportion(t, trials);
  e.temporal_half = proportion(th, trials);
  e.spatial = proportion(s, trials);
  e.spatial_half = proportion(h, trials);
  e.containment_violations = viol;
  e.box = box;
  nlohmann::json meta{{"lo", box.lo}, {"hi", box.hi}, {"s", box.s}, {"t", box.t},
                      {"lambda", lambda}, {"law", law_to_json(law)}, {"seed", seed}};
  for (auto* r : {&e.temporal, &e.temporal_half, &e.spatial, &e.spatial_half}) r->metadata = meta;
  return e;
}

CrossingEstimates estimate_crossing_probs(int n, const MonteCarloConfig& c, double theta,
                                          double b_override) {
  c.validate();
  if (n < 0 || n > 20) throw DomainError("crossing: n must lie in [0, 20]");
  double b = b_override;
  if (!(b > 0.0)) {
    const auto sched = make_schedule(derive_constants(c.d, theta));
    const double log_b = sched.log_b(static_cast<std::size_t>(n));
    if (log_b > 700.0) throw CapacityError("crossing: b_n overflows");
    b = std::exp(log_b);
  }
  const auto box = SpaceTimeBox::corner(c.d, 1L << n, 0.0, b);
  return estimate_crossing_box(box, c.lambdas.front(), c.law, c.trials, c.seed, c.workers, c.mark_budget);
}

bool independence_square_holds(const CrossingEstimates& e) {
  const double h = e.spatial_half.estimate;
  const double slack = 2.0 * (e.spatial.ci.half_width() + 2.0 * h * e.spatial_half.ci.half_width());
  return e.spatial.estimate <= h * h + slack;
}

}  // namespace rcp
