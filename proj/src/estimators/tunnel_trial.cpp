#include "rcp/estimators/tunnel_trial.hpp"

#include <algorithm>
#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "rcp/errors.hpp"
#include "rcp/graphical/sample.hpp"
#include "rcp/paths/evolve.hpp"

namespace rcp {

TunnelTables::TunnelTables(const InterarrivalLaw& law, const TunnelSchedule& schedule)
    : law_(law), schedule_(schedule) {
  if (schedule_.depth == 0) throw DomainError("TunnelTables: depth must be >= 1");
  if (!law_.has_density()) return;
  RenewalGridOptions opt;
  opt.max_time = 1.01 * schedule_.R.back();
  rf_ = std::make_unique<RenewalFunction>(law_, opt);
  samplers_.reserve(schedule_.depth);
  for (std::size_t k = 0; k < schedule_.depth; ++k) samplers_.emplace_back(*rf_, schedule_.R[k]);
}

AgeOvershootDraw TunnelTables::sample(std::size_t level, Rng& rng) const {
  if (rf_) return samplers_.at(level).sample(rng);
  return sample_age_overshoot_exact(law_, schedule_.R.at(level), rng);
}

std::string failure_name(TunnelFailure f) {
  switch (f) {
    case TunnelFailure::none: return "none";
    case TunnelFailure::first_gap: return "first_gap";
    case TunnelFailure::columns: return "columns";
    case TunnelFailure::crossing: return "crossing";
    case TunnelFailure::cure_in_rectangle: return "cure_in_rectangle";
  }
  return "?";
}

TunnelTrialResult tunnel_trial(const TunnelTables& tables, double lambda, Rng& rng, const TunnelOptions& opt) {
  const TunnelSchedule& s = tables.schedule();
  const std::size_t K = s.depth;
  if (opt.check_path && !(lambda > 0.0)) throw DomainError("tunnel_trial: lambda must be > 0");
  double budget = 1.0;
  for (std::size_t k = 0; k < K; ++k) budget += std::floor(s.M[k]);
  if (budget > static_cast<double>(opt.column_budget)) {
    throw CapacityError("tunnel_trial: " + std::to_string(K) + " levels may need " + std::to_string(budget) +
                        " columns, above column_budget " + std::to_string(opt.column_budget));
  }

  TunnelTrialResult out;
  const double R0 = s.R[0];
  if (opt.condition_first_gap) {
    out.first_gap_excess = sample_residual(tables.law(), R0, rng);
  } else {
    const double x = tables.law().sample(rng);
    out.first_gap_excess = x - R0;
    if (!(x > R0)) {
      out.failure = TunnelFailure::first_gap;
      return out;
    }
  }

  long L = 0;
  for (std::size_t k = 0; k < K; ++k) {
    TunnelLevel lv;
    lv.k = k;
    lv.L = L;
    lv.V = s.r[k];
    const auto max_cols = static_cast<std::size_t>(std::floor(s.M[k]));
    bool found = false;
    while (lv.scanned < max_cols) {
      const AgeOvershootDraw d = tables.sample(k, rng);
      ++lv.scanned;
      lv.V = std::min(lv.V, d.age);
      if (opt.cross_validate) lv.draws.push_back(d);
      if (d.overshoot > s.r[k + 1]) {
        found = true;
        break;
      }
    }
    lv.next_L = L + static_cast<long>(lv.scanned);
    if (!found) {
      out.failure = TunnelFailure::columns;
      out.failed_level = k;
      out.levels.push_back(std::move(lv));
      return out;
    }
    // Column L_k is free on [R_k - r_k, R_k] and the scanned columns have age >= V.
    const double column_free = k == 0 ? R0 + out.first_gap_excess : s.r[k];
    lv.rectangle_free = lv.V <= column_free && lv.V > 0.0;
    if (!lv.rectangle_free) {
      out.failure = TunnelFailure::cure_in_rectangle;
      out.failed_level = k;
      out.levels.push_back(std::move(lv));
      return out;
    }
    if (opt.check_path) {
      double t = 0.0;
      for (std::size_t h = 0; h < lv.scanned; ++h) {
        t += rng.exponential(lambda);
        if (opt.cross_validate) lv.hops.push_back(t);
      }
      lv.crossing_time = t;
      if (t > lv.V) {
        out.failure = TunnelFailure::crossing;
        out.failed_level = k;
        out.levels.push_back(std::move(lv));
        return out;
      }
    }
    L = lv.next_L;
    out.levels.push_back(std::move(lv));
  }
  out.success = true;
  out.columns = L;
  return out;
}

namespace {

// Wide enough to add doubles between 2^-1074 and 2^1024 without rounding.
using ExactTime = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<2200, boost::multiprecision::digit_base_2>>;

// Time R_level + anchor + offset; the anchor carries the large part.
struct KnownMark {
  std::size_t level;
  double anchor;
  double offset;
  long site;
  int kind;  // 0 cure, 1 transmission from site to site + 1, 2 probe
};

}  // namespace

bool cross_validate_tunnel(const TunnelTables& tables, double lambda, const TunnelTrialResult& trial) {
  if (!trial.success) throw DomainError("cross_validate_tunnel: trial did not succeed");
  const TunnelSchedule& s = tables.schedule();
  const std::size_t K = s.depth;
  std::vector<ExactTime> offset_R(K + 1, ExactTime(0));
  for (std::size_t k = 1; k <= K; ++k) offset_R[k] = offset_R[k - 1] + ExactTime(s.r[k]);

  std::vector<KnownMark> marks;
  marks.push_back({0, trial.first_gap_excess, 0.0, 0, 0});
  for (const TunnelLevel& lv : trial.levels) {
    if (lv.draws.size() != lv.scanned || lv.hops.size() != lv.scanned) {
      throw DomainError("cross_validate_tunnel: trial was run without cross_validate and check_path");
    }
    for (std::size_t i = 0; i < lv.scanned; ++i) {
      const long col = lv.L + 1 + static_cast<long>(i);
      const AgeOvershootDraw& d = lv.draws[i];
      if (d.renewed) marks.push_back({lv.k, -d.age, 0.0, col, 0});
      marks.push_back({lv.k, d.overshoot, 0.0, col, 0});
      marks.push_back({lv.k, -lv.V, lv.hops[i], col - 1, 1});
    }
  }
  marks.push_back({K, 0.0, 0.0, trial.columns, 2});

  // Ranks replace times; the exact keys keep hops of order one distinct from R_k ~ 1e50.
  std::vector<ExactTime> keys;
  keys.reserve(marks.size());
  for (const KnownMark& m : marks) keys.push_back(offset_R[m.level] + ExactTime(m.anchor) + ExactTime(m.offset));
  std::vector<std::size_t> order(marks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  std::vector<KnownMark> sorted;
  sorted.reserve(marks.size());
  for (std::size_t i : order) sorted.push_back(marks[i]);
  marks = std::move(sorted);

  const auto sites = static_cast<std::size_t>(trial.columns + 1);
  const double horizon = static_cast<double>(marks.size() + 1);
  std::vector<RenewalTrack> cures(sites, RenewalTrack{0.0, {}, horizon});
  std::vector<std::vector<double>> trans(sites * 2);
  double probe = 0.0;
  for (std::size_t i = 0; i < marks.size(); ++i) {
    const double t = static_cast<double>(i + 1);
    const KnownMark& m = marks[i];
    const auto site = static_cast<std::size_t>(m.site);
    if (m.kind == 0) cures[site].marks.push_back(t);
    else if (m.kind == 1) trans[edge_slot(site, 0, 1)].push_back(t);
    else probe = t;
  }
  SpaceTimeBox box{{0}, {trial.columns}, 0.0, horizon};
  const GraphicalSample sample =
      GraphicalSample::from_marks(box, lambda, tables.law(), std::move(cures), std::move(trans));
  const RegionResult run = evolve_region(sample, Configuration::from_sites(sites, {0}), 0.0, probe);
  return run.state.size() == sites && run.state[sites - 1];
}

TunnelEstimate estimate_tunnel(const InterarrivalLaw& law, double lambda, double ell0, double alpha_scale,
                               std::size_t depth, std::size_t trials, std::uint64_t seed, int workers,
                               const TunnelOptions& opt) {
  if (trials == 0) throw DomainError("tunnel: trials must be >= 1");
  const TunnelSchedule sched = tunnel_schedule_log(ell0, alpha_scale, depth);
  const TunnelTables tables(law, sched);
  struct Outcome {
    TunnelFailure failure;
    bool checked;
    bool valid;
  };
  const auto outcomes = run_trials(trials, seed, workers, [&](std::size_t, Rng& rng) {
    const TunnelTrialResult r = tunnel_trial(tables, lambda, rng, opt);
    Outcome o{r.failure, false, true};
    if (r.success && opt.cross_validate && opt.check_path) {
      o.checked = true;
      o.valid = cross_validate_tunnel(tables, lambda, r);
    }
    return o;
  });
  TunnelEstimate e;
  e.failures.assign(5, 0);
  std::size_t wins = 0;
  for (const Outcome& o : outcomes) {
    ++e.failures[static_cast<std::size_t>(o.failure)];
    if (o.failure == TunnelFailure::none) ++wins;
    if (o.checked) {
      ++e.cross_checked;
      if (!o.valid) ++e.cross_failures;
    }
  }
  e.result = proportion(wins, trials);
  e.log_first_gap_prob = law.log_tail(sched.R[0]);
  if (lambda > 0.0) {
    e.bound_sum = tunnel_bound_sum(sched, lambda, default_theta_geo(alpha_scale)).total;
    e.bound_target = 1.0 - e.bound_sum;
  }
  e.result.metadata = {{"lambda", lambda}, {"ell0", ell0}, {"alpha_scale", alpha_scale}, {"depth", depth},
                       {"condition_first_gap", opt.condition_first_gap}, {"check_path", opt.check_path}};
  return e;
}

nlohmann::json to_json(const TunnelEstimate& e) {
  nlohmann::json j = to_json(e.result);
  nlohmann::json f;
  for (std::size_t i = 0; i < e.failures.size(); ++i) f[failure_name(static_cast<TunnelFailure>(i))] = e.failures[i];
  j.update({{"log_first_gap_prob", e.log_first_gap_prob}, {"bound_sum", e.bound_sum},
            {"bound_target", e.bound_target}, {"cross_checked", e.cross_checked},
            {"cross_failures", e.cross_failures}, {"failures", f}});
  return j;
}

}  // namespace rcp
