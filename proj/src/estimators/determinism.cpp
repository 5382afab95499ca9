#include "rcp/estimators/determinism.hpp"

#include <cmath>

#include "rcp/errors.hpp"
#include "rcp/estimators/harness.hpp"
#include "rcp/graphical/sample.hpp"
#include "rcp/paths/evolve.hpp"

namespace rcp {

DeterminismField determinism_for_cures(const SpaceTimeBox& box, const InterarrivalLaw& law,
                                       double lambda, const std::vector<RenewalTrack>& cures, double t,
                                       std::size_t p_replicates, std::uint64_t seed) {
  if (p_replicates == 0) throw DomainError("determinism: replicate counts must be >= 1");
  if (!(t > box.s) || t > box.t) throw DomainError("determinism: t outside the window");
  const Point origin(box.dim(), 0);
  const std::size_t o = box.index(origin);
  const int d = box.dim();
  DeterminismField f;
  f.age = age_overshoot_at(cures[o], t).age;
  for (std::size_t p = 0; p < p_replicates; ++p) {
    auto trans = generate_transmissions(box, lambda, lambda, derive_seed(seed, StreamKind::trans, p));
    const auto g = GraphicalSample::from_marks(box, lambda, law, cures, std::move(trans), seed);
    const auto r = evolve_region(g, Configuration::from_sites(g.num_sites(), {o}), box.s, t);
    if (r.state.empty()) continue;
    ++f.alive;
    if (!r.state[o]) ++f.origin_healthy;
  }
  f.defined = f.alive > 0;
  if (f.defined) {
    f.p_hat = static_cast<double>(f.origin_healthy) / static_cast<double>(f.alive);
    f.gap = std::fabs(f.p_hat - std::exp(-2.0 * d * lambda * f.age));
    for (int k = 1; k < 2 * d; ++k) f.signed_gaps.push_back(f.p_hat - std::exp(-(2.0 * d - k) * lambda * f.age));
  }
  return f;
}

DeterminismResult estimate_conditional_determinism(const InterarrivalLaw& law, double lambda, int d,
                                                   double t, std::size_t r_replicates,
                                                   std::size_t p_replicates, std::uint64_t seed,
                                                   long radius, int workers) {
  if (r_replicates == 0 || p_replicates == 0) throw DomainError("determinism: replicate counts must be >= 1");
  if (!(t > 0.0)) throw DomainError("determinism: t must be > 0");
  const auto box = SpaceTimeBox::cube(d, radius, 0.0, t);
  DeterminismResult res;
  res.fields = run_trials(r_replicates, seed, workers, [&](std::size_t r, Rng&) {
    const std::uint64_t field_seed = trial_seed(seed, r);
    BuildOptions opt;
    opt.workers = 1;
    const auto cures = build_sample_serial(box, 0.0, law, field_seed, opt).cures();
    return determinism_for_cures(box, law, lambda, cures, t, p_replicates, field_seed);
  });
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& f : res.fields) {
    if (!f.defined) {
      ++res.undefined_fields;
      continue;
    }
    sum += f.gap;
    ++n;
  }
  res.mean_gap = n > 0 ? sum / static_cast<double>(n) : NAN;
  return res;
}

}  // namespace rcp
