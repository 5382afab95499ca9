#include "rcp/estimators/survival.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rcp/errors.hpp"
#include "rcp/graphical/sample.hpp"
#include "rcp/paths/evolve.hpp"
#include "rcp/renewal/law_json.hpp"

namespace rcp {

namespace {

nlohmann::json echo(const MonteCarloConfig& c) {
  return {{"trials", c.trials}, {"seed", c.seed}, {"horizon", c.horizon}, {"radius", c.radius},
          {"lambdas", c.lambdas}, {"law", law_to_json(c.law)}, {"d", c.d}};
}

Configuration origin_only(const GraphicalSample& g) {
  return Configuration::from_sites(g.num_sites(), {g.box().index(Point(g.dim(), 0))});
}

template <class Runner>
std::vector<EstimateResult> survival_impl(const MonteCarloConfig& c, Runner&& runner) {
  c.validate();
  const double lref = *std::max_element(c.lambdas.begin(), c.lambdas.end());
  std::vector<EstimateResult> out;
  for (double lambda : c.lambdas) {
    auto outcomes = runner([&](std::size_t i, Rng&) {
      return survival_trial(c, lambda, lref, trial_seed(c.seed, i));
    });
    std::size_t alive = 0, boundary = 0, horizon = 0;
    for (const auto& o : outcomes) {
      if (o.boundary_hit) ++boundary;
      if (o.alive && !o.boundary_hit) ++horizon;
      if (o.alive || o.boundary_hit) ++alive;
    }
    EstimateResult r = proportion(alive, c.trials);
    r.boundary_hits = boundary;
    r.horizon_hits = horizon;
    r.metadata = echo(c);
    r.metadata["lambda"] = lambda;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

SurvivalOutcome survival_trial(const MonteCarloConfig& c, double lambda, double lambda_ref,
                               std::uint64_t sample_seed) {
  BuildOptions opt;
  opt.lambda_ref = lambda_ref;
  opt.mark_budget = c.mark_budget;
  opt.workers = 1;
  const auto box = SpaceTimeBox::cube(c.d, c.radius, 0.0, c.horizon);
  const auto g = build_sample_serial(box, lambda, c.law, sample_seed, opt);
  const auto r = evolve_region(g, origin_only(g), box.s, box.t);
  SurvivalOutcome o;
  o.alive = !r.state.empty();
  o.boundary_hit = r.boundary_hit;
  o.extinction_time = o.alive ? std::numeric_limits<double>::infinity() : r.time;
  return o;
}

std::vector<EstimateResult> estimate_survival(const MonteCarloConfig& c) {
  return survival_impl(c, [&](auto&& f) { return run_trials(c.trials, c.seed, c.workers, f); });
}

std::vector<EstimateResult> estimate_survival_serial(const MonteCarloConfig& c) {
  return survival_impl(c, [&](auto&& f) { return run_trials_serial(c.trials, c.seed, f); });
}

std::vector<std::vector<double>> coupled_survival_times(const MonteCarloConfig& c) {
  c.validate();
  const double lref = *std::max_element(c.lambdas.begin(), c.lambdas.end());
  std::vector<std::vector<double>> out;
  for (double lambda : c.lambdas) {
    auto times = run_trials(c.trials, c.seed, c.workers, [&](std::size_t i, Rng&) {
      return survival_trial(c, lambda, lref, trial_seed(c.seed, i)).extinction_time;
    });
    out.push_back(std::move(times));
  }
  return out;
}

DensityEstimate estimate_density_window(const MonteCarloConfig& c, double lambda, long window, double t,
                                        bool from_window) {
  c.validate();
  if (window < 0 || window > c.radius) throw DomainError("density: window must lie within the radius");
  if (!(t > 0.0) || t > c.horizon) throw DomainError("density: t must lie in (0, horizon]");
  struct Outcome {
    bool alive;
    bool all_ones;
  };
  const auto box = SpaceTimeBox::cube(c.d, c.radius, 0.0, t);
  const auto win = SpaceTimeBox::cube(c.d, window, 0.0, t);
  auto outcomes = run_trials(c.trials, c.seed, c.workers, [&](std::size_t i, Rng&) {
    BuildOptions opt;
    opt.mark_budget = c.mark_budget;
    opt.workers = 1;
    const auto g = build_sample_serial(box, lambda, c.law, trial_seed(c.seed, i), opt);
    Configuration init(g.num_sites());
    std::vector<std::size_t> win_sites;
    for (std::size_t s = 0; s < g.num_sites(); ++s) {
      if (win.contains(box.coords(s))) win_sites.push_back(s);
    }
    if (from_window) {
      for (std::size_t s : win_sites) init.set(s, true);
    } else {
      init = origin_only(g);
    }
    const auto r = evolve_region(g, std::move(init), 0.0, t);
    Outcome o{!r.state.empty(), true};
    for (std::size_t s : win_sites) o.all_ones = o.all_ones && r.state[s];
    o.all_ones = o.all_ones && o.alive;
    return o;
  });
  std::size_t alive = 0, ones = 0;
  for (const auto& o : outcomes) {
    alive += o.alive;
    ones += o.all_ones;
  }
  DensityEstimate d;
  d.conditional = proportion(ones, alive);
  d.dead = proportion(c.trials - alive, c.trials);
  d.alive_all_ones = proportion(ones, c.trials);
  for (auto* r : {&d.conditional, &d.dead, &d.alive_all_ones}) {
    r->metadata = echo(c);
    r->metadata["lambda"] = lambda;
    r->metadata["window"] = window;
    r->metadata["t"] = t;
  }
  return d;
}

}  // namespace rcp
