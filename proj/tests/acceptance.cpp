// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "rcp/cli/config.hpp"
#include "rcp/cli/experiments.hpp"
#include "rcp/estimators/crossing.hpp"
#include "rcp/estimators/erickson.hpp"
#include "rcp/estimators/survival.hpp"
#include "rcp/estimators/tunnel_trial.hpp"
#include "rcp/renewal/diagnostics.hpp"
#include "rcp/renorm/recurrence.hpp"
#include "rcp/renorm/tunnel.hpp"

using namespace rcp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

std::vector<double> exp_grid(int lo, int hi) {
  std::vector<double> g;
  for (int k = lo; k <= hi; ++k) g.push_back(std::exp(static_cast<double>(k)));
  return g;
}

std::vector<double> default_t_grid() {
  std::vector<double> g;
  for (int k = 0; k <= 9; ++k) g.push_back(std::pow(10.0, k / 3.0));
  return g;
}

Outcome oracle_equivalence() {
  Rng rng(20240601);
  std::size_t checks = 0, mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto r = oracle::check_random_case(rng);
    checks += r.checks;
    mismatches += r.mismatches;
  }
  return {mismatches == 0, fmt("1000 samples, %zu comparisons, %zu mismatches", checks, mismatches)};
}

Outcome recurrence_induction() {
  const auto law = InterarrivalLaw::pareto_tail(0.7, 1.0);
  Rng rng(7);
  const auto fit = fit_moment_constant(law, 2.5, exp_grid(1, 8), default_t_grid(), 200, rng);
  const auto k = derive_constants(1, 2.5);
  const auto s = make_schedule(k);
  const auto st = default_recurrence_state(1, fit.constant);
  const auto n0 = find_n0(s, st);
  if (!n0) return {false, fmt("C_moment = %.4g, no admissible n0", fit.constant)};
  const auto run = iterate_recurrence(s, st, *n0, std::exp(-k.beta * static_cast<double>(*n0)), *n0 + 50);
  const auto b = lambda0_bound(s, st, *n0);
  const bool slacks = std::abs(k.slack_quadratic + 0.0397) <= 1e-4 && std::abs(k.slack_linear + 0.0427) <= 1e-4;
  std::string fail_at = run.first_failure ? std::to_string(*run.first_failure) : "none";
  return {run.certified() && b.positive() && slacks,
          fmt("C_moment = %.4g, n0 = %zu, certified = %s (first failure n = %s, squared-term growth "
              "4(alpha/theta)^2 - beta = %.4f), log lambda0 = %.2f (positive = %s), slacks %.4f %.4f",
              fit.constant, *n0, run.certified() ? "yes" : "no", fail_at.c_str(), run.squared_term_growth,
              b.log_lambda0, b.positive() ? "yes" : "no", k.slack_quadratic, k.slack_linear)};
}

Outcome containment_and_square() {
  MonteCarloConfig c;
  c.law = InterarrivalLaw::pareto_tail(0.7, 1.0);
  c.lambdas = {0.05};
  c.trials = 1000;
  c.seed = 3;
  bool ok = true;
  std::string detail;
  for (int n : {2, 3}) {
    const auto e = estimate_crossing_probs(n, c);
    const bool sq = independence_square_holds(e);
    ok = ok && e.containment_violations == 0 && sq;
    detail += fmt("n=%d: t=%.3f t~=%.3f violations=%zu s=%.3f h=%.3f square %s; ", n, e.temporal.estimate,
                  e.temporal_half.estimate, e.containment_violations, e.spatial.estimate,
                  e.spatial_half.estimate, sq ? "holds" : "fails");
  }
  return {ok, detail};
}

Outcome moment_constant_bounded() {
  const auto law = InterarrivalLaw::pareto_tail(0.7, 1.0);
  Rng rng(11);
  const auto fit = fit_moment_constant(law, 2.355, exp_grid(1, 8), default_t_grid(), 10000, rng);
  double lo = INFINITY, hi = 0.0;
  for (std::size_t i = fit.product.size() / 2; i < fit.product.size(); ++i) {
    lo = std::min(lo, fit.product[i]);
    hi = std::max(hi, fit.product[i]);
  }
  const bool ok = std::isfinite(fit.constant) && lo > 0.0 && hi / lo < 10.0;
  return {ok, fmt("max product %.4g, top-half range [%.4g, %.4g], ratio %.3g", fit.constant, lo, hi, hi / lo)};
}

Outcome erickson_relation() {
  const auto law = InterarrivalLaw::example_log_sv(20.0);
  bool ok = true;
  std::string detail;
  std::uint64_t seed = 5;
  for (double theta : {0.3, 0.5, 0.7}) {
    const auto r = erickson_check(law, 1e6, theta, 10000, seed++);
    ok = ok && r.abs_diff <= 0.05;
    detail += fmt("theta=%.1f: %.4f vs %.1f (|diff| %.4f); ", theta, r.result.estimate, r.target, r.abs_diff);
  }
  return {ok, detail + "slowly varying tail, convergence in ln ln t"};
}

Outcome calculus_ratio() {
  const auto law = InterarrivalLaw::example_log_sv(20.0);
  bool ok = true;
  std::string detail;
  for (double a : {0.5, 1.0}) {
    const double r = integrated_tail_ratio(law, 1e8, a), target = std::exp(-a);
    const double rel = std::abs(r - target) / target;
    ok = ok && rel <= 0.10;
    detail += fmt("a=%.1f: %.4f vs %.4f (rel err %.3f); ", a, r, target, rel);
  }
  return {ok, detail};
}

Outcome density_grows() {
  MonteCarloConfig c;
  c.law = InterarrivalLaw::pareto_tail(0.5, 1.0);
  c.trials = 1000;
  c.radius = 60;
  c.horizon = 200.0;
  c.seed = 17;
  const auto late = estimate_density_window(c, 0.5, 2, 200.0).conditional;
  const auto early = estimate_density_window(c, 0.5, 2, 20.0).conditional;
  const bool grows = late.estimate - early.estimate > late.ci.half_width() + early.ci.half_width();
  const bool ok = late.defined && early.defined && late.estimate >= 0.9 && grows;
  return {ok, fmt("t=200: %.4f [%.4f, %.4f] over %zu survivors; t=20: %.4f [%.4f, %.4f]", late.estimate,
                  late.ci.lo, late.ci.hi, late.trials, early.estimate, early.ci.lo, early.ci.hi)};
}

Outcome tunnel_content() {
  const double theta_geo = default_theta_geo(0.5);
  const auto law = InterarrivalLaw::example_log_sv(20.0);
  bool ok = true;
  double prev = INFINITY;
  std::string detail;
  std::uint64_t seed = 31;
  for (double lambda : {0.1, 0.5, 1.0}) {
    const auto r = find_R0(lambda, 1.0, 0.5, theta_geo, 200);
    if (!r.found) return {false, fmt("no R0 for lambda=%.1f", lambda)};
    ok = ok && r.sum.total < 1.0 && r.ell0 <= prev;
    prev = r.ell0;
    TunnelOptions opt;
    opt.cross_validate = true;
    const auto e = estimate_tunnel(law, lambda, r.ell0, 0.5, 200, 1000, seed++, 0, opt);
    ok = ok && e.result.successes >= 1 && e.cross_checked == e.result.successes && e.cross_failures == 0;
    detail += fmt("lambda=%.1f: ln R0=%.0f sum=%.3g success %.3f (%zu/%zu, %zu cross-checked, %zu mismatches); ",
                  lambda, r.ell0, r.sum.total, e.result.estimate, e.result.successes, e.result.trials,
                  e.cross_checked, e.cross_failures);
  }
  return {ok, detail};
}

Outcome reproducibility() {
  using nlohmann::json;
  const std::vector<json> configs{
      {{"kind", "survival-curve"}, {"lambdas", {0.5, 1.5, 3.0}}, {"trials", 200}, {"radius", 30}, {"horizon", 20.0}},
      {{"kind", "crossing"}, {"lambda", 0.05}, {"trials", 300},
       {"law", {{"family", "ParetoTail"}, {"alpha", 0.7}, {"scale", 1.0}}}, {"params", {{"n", 3}}}},
      {{"kind", "tunnel-trial"}, {"lambdas", {0.5, 1.0}}, {"trials", 100},
       {"law", {{"family", "ExampleLogSV"}, {"t0", 20.0}}}, {"params", {{"depth", 50}}}},
  };
  bool ok = true;
  std::string detail;
  for (const auto& base : configs) {
    std::vector<std::string> renders;
    for (int w : {1, 2, 4}) {
      json j = base;
      j["workers"] = w;
      renders.push_back(run_experiment(parse_config(j)).csv.render());
    }
    const bool same = renders[0] == renders[1] && renders[1] == renders[2];
    ok = ok && same;
    detail += base["kind"].get<std::string>() + (same ? " identical; " : " DIFFERS; ");
  }
  return {ok, detail + "workers 1, 2, 4"};
}

Outcome coupled_monotonicity() {
  MonteCarloConfig c;
  c.law = InterarrivalLaw::pareto_tail(0.7, 1.0);
  c.lambdas = {0.2, 0.5, 1.0, 1.5, 2.5};
  c.trials = 100;
  c.radius = 40;
  c.horizon = 50.0;
  c.seed = 23;
  const auto times = coupled_survival_times(c);
  std::size_t violations = 0;
  for (std::size_t s = 0; s < c.trials; ++s) {
    for (std::size_t k = 1; k < times.size(); ++k) violations += times[k][s] < times[k - 1][s];
  }
  return {violations == 0, fmt("100 seeds x %zu rates, %zu violations", c.lambdas.size(), violations)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"oracle equivalence", 10.0, oracle_equivalence},
      {"recurrence induction", 1.0, recurrence_induction},
      {"containment and independence square", 120.0, containment_and_square},
      {"moment constant boundedness", 300.0, moment_constant_bounded},
      {"Erickson overshoot relation", 120.0, erickson_relation},
      {"integrated tail ratio", 10.0, calculus_ratio},
      {"window density", 300.0, density_grows},
      {"tunnel bound and trials", 600.0, tunnel_content},
      {"reproducibility across workers", 600.0, reproducibility},
      {"coupled monotonicity", 60.0, coupled_monotonicity},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.limit_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s %zu %s: %s (%.1f s%s)\n", pass ? "PASS" : "FAIL", i + 1, c.name, o.detail.c_str(), secs,
                in_time ? "" : ", over time limit");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
