#include "rcp/cli/experiments.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "rcp/errors.hpp"
#include "rcp/estimators/crossing.hpp"
#include "rcp/estimators/determinism.hpp"
#include "rcp/estimators/erickson.hpp"
#include "rcp/estimators/events.hpp"
#include "rcp/estimators/survival.hpp"
#include "rcp/estimators/tunnel_trial.hpp"
#include "rcp/graphical/dump.hpp"
#include "rcp/paths/crossing.hpp"
#include "rcp/paths/evolve.hpp"
#include "rcp/renewal/diagnostics.hpp"
#include "rcp/renewal/law_json.hpp"
#include "rcp/renorm/recurrence.hpp"
#include "rcp/renorm/tunnel.hpp"

#ifndef RCP_VERSION
#define RCP_VERSION "0.0.0"
#endif
#ifndef RCP_GIT_REV
#define RCP_GIT_REV "unknown"
#endif

namespace rcp {

namespace {

using json = nlohmann::json;

MonteCarloConfig mc_config(const ExperimentConfig& c) {
  MonteCarloConfig mc;
  mc.trials = c.trials;
  mc.seed = c.seed;
  mc.horizon = c.horizon;
  mc.radius = c.radius;
  mc.lambdas = c.lambdas;
  mc.law = c.law;
  mc.d = c.d;
  mc.workers = c.workers;
  if (c.params.contains("mark_budget")) mc.mark_budget = c.params.at("mark_budget").get<double>();
  mc.validate();
  return mc;
}

double num(const json& p, const char* key) { return p.at(key).get<double>(); }
long integer(const json& p, const char* key) { return p.at(key).get<long>(); }

std::size_t positive_size(const json& p, const char* key) {
  const long v = integer(p, key);
  if (v < 1) throw ConfigError(std::string("params.") + key + ": must be >= 1");
  return static_cast<std::size_t>(v);
}

std::vector<std::string> estimate_cells(const EstimateResult& r) {
  return {cell(r.estimate), cell(r.ci.lo), cell(r.ci.hi)};
}

template <class... Parts>
std::vector<std::string> concat(Parts&&... parts) {
  std::vector<std::string> out;
  (out.insert(out.end(), parts.begin(), parts.end()), ...);
  return out;
}

ExperimentOutput survival_curve(const ExperimentConfig& c) {
  const auto res = estimate_survival(mc_config(c));
  ExperimentOutput out{CsvTable({"lambda", "estimate", "ci_lo", "ci_hi", "boundary_hits", "trials"}), json::array(), {}};
  for (std::size_t i = 0; i < res.size(); ++i) {
    out.csv.row(concat(std::vector<std::string>{cell(c.lambdas[i])}, estimate_cells(res[i]),
                       std::vector<std::string>{cell(res[i].boundary_hits), cell(res[i].trials)}));
    out.summary.push_back(to_json(res[i]));
  }
  return out;
}

ExperimentOutput crossing(const ExperimentConfig& c) {
  const int n = static_cast<int>(integer(c.params, "n"));
  if (n < 0) throw ConfigError("params.n: must be >= 0");
  const auto e = estimate_crossing_probs(n, mc_config(c), num(c.params, "theta"), num(c.params, "b"));
  ExperimentOutput out{CsvTable({"quantity", "estimate", "ci_lo", "ci_hi", "successes", "trials"}), json::object(), {}};
  const std::pair<const char*, const EstimateResult*> rows[] = {
      {"t_n", &e.temporal}, {"t_half_n", &e.temporal_half}, {"s_n", &e.spatial}, {"h_n", &e.spatial_half}};
  for (const auto& [name, r] : rows) {
    out.csv.row(concat(std::vector<std::string>{name}, estimate_cells(*r),
                       std::vector<std::string>{cell(r->successes), cell(r->trials)}));
    out.summary[name] = to_json(*r);
  }
  out.summary["containment_violations"] = e.containment_violations;
  out.summary["independence_square_holds"] = independence_square_holds(e);
  out.summary["box"] = {{"lo", e.box.lo}, {"hi", e.box.hi}, {"s", e.box.s}, {"t", e.box.t}};
  return out;
}

struct RecurrenceSetup {
  ScaleSchedule sched;
  RecurrenceState state;
  std::size_t n0 = 0;
};

RecurrenceSetup recurrence_setup(const ExperimentConfig& c) {
  RecurrenceSetup s;
  s.sched = make_schedule(derive_constants(c.d, num(c.params, "theta")));
  const double cm = num(c.params, "c_moment");
  if (!(cm >= 0.0)) throw ConfigError("params.c_moment: must be >= 0");
  s.state = default_recurrence_state(c.d, cm);
  if (!c.params.at("n0").is_null()) {
    const double n0 = num(c.params, "n0");
    if (n0 < 1.0 || n0 != std::floor(n0)) throw ConfigError("params.n0: expected a positive integer");
    s.n0 = static_cast<std::size_t>(n0);
  } else {
    const auto n0 = find_n0(s.sched, s.state);
    if (!n0) throw PreconditionError("n0: no scale satisfies both quarter bounds; reduce c_moment or raise theta");
    s.n0 = *n0;
  }
  return s;
}

ExperimentOutput recurrence(const ExperimentConfig& c) {
  const RecurrenceSetup s = recurrence_setup(c);
  const double u0 = c.params.at("u_n0").is_null() ? std::exp(-s.sched.k.beta * static_cast<double>(s.n0))
                                                  : num(c.params, "u_n0");
  if (!(u0 >= 0.0 && u0 <= 1.0)) throw ConfigError("params.u_n0: must lie in [0, 1]");
  const auto run = iterate_recurrence(s.sched, s.state, s.n0, u0, s.n0 + positive_size(c.params, "steps"));
  ExperimentOutput out{
      CsvTable({"n", "log_u", "log_target", "pass", "quadratic_quarter", "moment_quarter"}), json::object(), {}};
  for (const auto& st : run.steps) {
    out.csv.row({cell(st.n), cell(st.log_u), cell(st.log_target), cell(st.pass), cell(st.quarters.quadratic),
                 cell(st.quarters.moment)});
  }
  out.summary = {{"constants", to_json(s.sched.k)}, {"n0", s.n0}, {"u_n0", u0}, {"run", to_json(run)}};
  return out;
}

ExperimentOutput lambda0(const ExperimentConfig& c) {
  const RecurrenceSetup s = recurrence_setup(c);
  const Lambda0Bound b = lambda0_bound(s.sched, s.state, s.n0);
  ExperimentOutput out{
      CsvTable({"n0", "log_b_n0", "log_N", "log_lambda0", "log10_lambda0", "lambda0_positive"}), json::object(), {}};
  out.csv.row({cell(b.n0), cell(b.log_b_n0), cell(b.log_edges), cell(b.log_lambda0), cell(b.log10_lambda0),
               cell(b.positive())});
  const double b_n0 = std::exp(b.log_b_n0);
  const double N = std::exp(b.log_edges);
  out.summary = to_json(b);
  out.summary["constants"] = to_json(s.sched.k);
  out.summary["b_n0"] = std::isfinite(b_n0) ? json(b_n0) : json(nullptr);
  out.summary["N"] = std::isfinite(N) ? json(N) : json(nullptr);
  out.summary["lambda0_positive"] = b.positive();
  return out;
}

double theta_geo_param(const ExperimentConfig& c, double alpha_scale) {
  return c.params.contains("theta_geo") && !c.params.at("theta_geo").is_null() ? num(c.params, "theta_geo")
                                                                               : default_theta_geo(alpha_scale);
}

R0Search search_or_fix(const ExperimentConfig& c, double lambda, double alpha_scale, std::size_t depth) {
  const double tg = theta_geo_param(c, alpha_scale);
  if (!c.params.at("ell0").is_null()) {
    R0Search r;
    r.ell0 = num(c.params, "ell0");
    r.sum = tunnel_bound_sum(tunnel_schedule_log(r.ell0, alpha_scale, depth), lambda, tg);
    r.R0 = std::exp(r.ell0);
    r.found = r.sum.finite && r.sum.total < num(c.params, "eps");
    return r;
  }
  const double lo = c.params.contains("ell_lo") ? num(c.params, "ell_lo") : 2.0;
  const double hi = c.params.contains("ell_hi") ? num(c.params, "ell_hi") : 600.0;
  const double step = c.params.contains("ell_step") ? num(c.params, "ell_step") : 1.0;
  return find_R0(lambda, num(c.params, "eps"), alpha_scale, tg, depth, lo, hi, step);
}

ExperimentOutput tunnel_bound(const ExperimentConfig& c) {
  const double alpha_scale = num(c.params, "alpha_scale");
  const std::size_t depth = positive_size(c.params, "depth");
  ExperimentOutput out{CsvTable({"lambda", "found", "ell0", "bound_sum", "partial", "tail", "tail_ratio", "finite"}),
                       json::array(), {}};
  for (double lambda : c.lambdas) {
    const R0Search r = search_or_fix(c, lambda, alpha_scale, depth);
    out.csv.row({cell(lambda), cell(r.found), cell(r.ell0), cell(r.sum.total), cell(r.sum.partial),
                 cell(r.sum.tail), cell(r.sum.tail_ratio), cell(r.sum.finite)});
    json j = to_json(r.sum);
    j.update({{"lambda", lambda}, {"found", r.found}, {"ell0", r.ell0}});
    out.summary.push_back(j);
  }
  return out;
}

ExperimentOutput tunnel_trial_kind(const ExperimentConfig& c) {
  const double alpha_scale = num(c.params, "alpha_scale");
  const std::size_t depth = positive_size(c.params, "depth");
  TunnelOptions opt;
  opt.condition_first_gap = c.params.at("condition_first_gap").get<bool>();
  opt.check_path = c.params.at("check_path").get<bool>();
  opt.cross_validate = c.params.at("cross_validate").get<bool>();
  opt.column_budget = positive_size(c.params, "column_budget");
  ExperimentOutput out{CsvTable({"lambda", "ell0", "estimate", "ci_lo", "ci_hi", "successes", "trials",
                                 "log_first_gap_prob", "bound_sum", "cross_checked", "cross_failures"}),
                       json::array(), {}};
  for (std::size_t i = 0; i < c.lambdas.size(); ++i) {
    const double lambda = c.lambdas[i];
    const R0Search r = search_or_fix(c, lambda, alpha_scale, depth);
    if (!r.found) throw PreconditionError("ell0: no R0 with tunnel bound sum below eps for lambda " + format_double(lambda));
    const TunnelEstimate e = estimate_tunnel(c.law, lambda, r.ell0, alpha_scale, depth, c.trials,
                                             derive_seed(c.seed, StreamKind::aux, i), c.workers, opt);
    out.csv.row(concat(std::vector<std::string>{cell(lambda), cell(r.ell0)}, estimate_cells(e.result),
                       std::vector<std::string>{cell(e.result.successes), cell(e.result.trials),
                                                cell(e.log_first_gap_prob), cell(e.bound_sum),
                                                cell(e.cross_checked), cell(e.cross_failures)}));
    json j = to_json(e);
    j["ell0"] = r.ell0;
    out.summary.push_back(j);
  }
  return out;
}

ExperimentOutput determinism(const ExperimentConfig& c) {
  const double t = num(c.params, "t");
  const std::size_t fields = positive_size(c.params, "fields");
  const std::size_t reps = positive_size(c.params, "replicates");
  const long radius = integer(c.params, "radius");
  if (radius < 0) throw ConfigError("params.radius: must be >= 0");
  ExperimentOutput out{CsvTable({"lambda", "field", "age", "alive", "origin_healthy", "defined", "p_hat", "gap"}),
                       json::array(), {}};
  for (std::size_t i = 0; i < c.lambdas.size(); ++i) {
    const double lambda = c.lambdas[i];
    const auto res = estimate_conditional_determinism(c.law, lambda, c.d, t, fields, reps,
                                                      derive_seed(c.seed, StreamKind::aux, i), radius, c.workers);
    for (std::size_t f = 0; f < res.fields.size(); ++f) {
      const auto& fd = res.fields[f];
      out.csv.row({cell(lambda), cell(f), cell(fd.age), cell(fd.alive), cell(fd.origin_healthy), cell(fd.defined),
                   cell(fd.p_hat), cell(fd.gap)});
    }
    out.summary.push_back({{"lambda", lambda}, {"mean_gap", res.mean_gap}, {"undefined_fields", res.undefined_fields}});
  }
  return out;
}

ExperimentOutput density(const ExperimentConfig& c) {
  const MonteCarloConfig mc = mc_config(c);
  const double t = num(c.params, "t");
  const long window = integer(c.params, "window");
  const bool from_window = c.params.at("from_window").get<bool>();
  ExperimentOutput out{CsvTable({"lambda", "estimate", "ci_lo", "ci_hi", "alive", "trials", "p_dead",
                                 "p_alive_all_ones"}),
                       json::array(), {}};
  for (double lambda : c.lambdas) {
    const DensityEstimate d = estimate_density_window(mc, lambda, window, t, from_window);
    out.csv.row(concat(std::vector<std::string>{cell(lambda)}, estimate_cells(d.conditional),
                       std::vector<std::string>{cell(d.conditional.trials), cell(c.trials), cell(d.dead.estimate),
                                                cell(d.alive_all_ones.estimate)}));
    out.summary.push_back({{"lambda", lambda}, {"conditional", to_json(d.conditional)}, {"dead", to_json(d.dead)},
                           {"alive_all_ones", to_json(d.alive_all_ones)}});
  }
  return out;
}

std::vector<double> number_list(const json& p, const char* key) {
  std::vector<double> v;
  for (const auto& x : p.at(key)) {
    if (!x.is_number()) throw ConfigError(std::string("params.") + key + ": expected numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

ExperimentOutput renewal_diagnostics(const ExperimentConfig& c) {
  const std::string check = c.params.at("check").get<std::string>();
  if (check == "moment") {
    std::vector<double> u = number_list(c.params, "u_grid");
    std::vector<double> tg = number_list(c.params, "t_grid");
    if (u.empty()) {
      for (int k = 1; k <= 8; ++k) u.push_back(std::exp(static_cast<double>(k)));
    }
    if (tg.empty()) {
      for (int k = 0; k < 10; ++k) tg.push_back(std::pow(10.0, k / 3.0));
    }
    Rng rng(c.seed);
    const auto fit = fit_moment_constant(c.law, num(c.params, "theta"), u, tg, c.trials, rng, num(c.params, "tau"));
    ExperimentOutput out{CsvTable({"u", "worst_gap", "f_u", "product"}), json::object(), {}};
    for (std::size_t i = 0; i < u.size(); ++i) {
      out.csv.row({cell(u[i]), cell(fit.worst_gap[i]), cell(moment_function_f(u[i], num(c.params, "theta"))),
                   cell(fit.product[i])});
    }
    out.summary = {{"check", check}, {"constant", fit.constant}};
    return out;
  }
  if (check == "erickson") {
    const double t = num(c.params, "t");
    ExperimentOutput out{CsvTable({"theta", "estimate", "ci_lo", "ci_hi", "target", "abs_diff", "threshold"}),
                         json::array(), {}};
    const auto thetas = number_list(c.params, "thetas");
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      const auto r = erickson_check(c.law, t, thetas[i], c.trials, derive_seed(c.seed, StreamKind::aux, i), c.workers);
      out.csv.row(concat(std::vector<std::string>{cell(thetas[i])}, estimate_cells(r.result),
                         std::vector<std::string>{cell(r.target), cell(r.abs_diff), cell(r.threshold)}));
      out.summary.push_back(to_json(r));
    }
    return out;
  }
  if (check == "calculus") {
    const double t = num(c.params, "t");
    ExperimentOutput out{CsvTable({"t", "a", "ratio", "target", "rel_err"}), json::array(), {}};
    for (double a : number_list(c.params, "a")) {
      const double ratio = integrated_tail_ratio(c.law, t, a);
      const double target = std::exp(-a);
      out.csv.row({cell(t), cell(a), cell(ratio), cell(target), cell(std::abs(ratio - target) / target)});
      out.summary.push_back({{"t", t}, {"a", a}, {"ratio", ratio}, {"target", target}});
    }
    return out;
  }
  throw ConfigError("params.check: expected moment, erickson or calculus");
}

ExperimentOutput event_prob(const ExperimentConfig& c) {
  const json& p = c.params;
  EventParams ep;
  ep.id = parse_event(p.at("event").get<std::string>());
  ep.n = static_cast<int>(integer(p, "n"));
  ep.d = c.d;
  ep.t = num(p, "t");
  ep.s = num(p, "s");
  ep.eps = num(p, "eps");
  ep.m = static_cast<int>(integer(p, "m"));
  ep.M = num(p, "M");
  if (!p.at("alpha").is_null()) ep.alpha = num(p, "alpha");
  ep.theta = num(p, "theta");
  ep.K = num(p, "K");
  ep.c = num(p, "c");
  ep.grid_step = num(p, "grid_step");
  ep.lambda = c.lambdas.front();
  ExperimentOutput out{CsvTable({"event", "n", "estimate", "ci_lo", "ci_hi", "successes", "trials", "bound",
                                 "within_bound"}),
                       json::array(), {}};
  auto add = [&](const EventParams& q, const EventEstimate& e) {
    out.csv.row(concat(std::vector<std::string>{event_name(q.id), cell(q.n)}, estimate_cells(e.result),
                       std::vector<std::string>{cell(e.result.successes), cell(e.result.trials), cell(e.bound),
                                                e.within_bound ? cell(*e.within_bound) : std::string()}));
    out.summary.push_back(to_json(e));
  };
  if (p.at("fit").get<bool>()) {
    if (ep.id != EventId::C) throw ConfigError("params.fit: only available for event C");
    EventParams q4 = ep, q5 = ep;
    q4.n = 4;
    q5.n = 5;
    const auto e4 = estimate_event_prob(q4, c.law, c.trials, derive_seed(c.seed, StreamKind::aux, 4), c.workers);
    const auto e5 = estimate_event_prob(q5, c.law, c.trials, derive_seed(c.seed, StreamKind::aux, 5), c.workers);
    std::tie(ep.K, ep.c) = fit_cn_constants(e4.result, e5.result, ep.eps, ep.d);
    add(q4, e4);
    add(q5, e5);
  }
  add(ep, estimate_event_prob(ep, c.law, c.trials, c.seed, c.workers));
  return out;
}

ExperimentOutput sample_dump(const ExperimentConfig& c) {
  BuildOptions opt;
  opt.mark_budget = num(c.params, "mark_budget");
  opt.workers = c.workers;
  const auto box = SpaceTimeBox::cube(c.d, c.radius, 0.0, c.horizon);
  const GraphicalSample g = build_sample(box, c.lambdas.front(), c.law, c.seed, opt);
  const auto bytes = serialize_sample(g);
  char digest[24];
  std::snprintf(digest, sizeof digest, "%016" PRIx64, sample_digest(g));
  ExperimentOutput out{CsvTable({"lambda", "sites", "marks", "digest"}), json::object(), {}};
  out.csv.row({cell(c.lambdas.front()), cell(g.num_sites()), cell(g.mark_count()), digest});
  out.summary = {{"sites", g.num_sites()}, {"marks", g.mark_count()}, {"digest", digest}};
  out.extra.emplace_back(".rcpg", std::string(bytes.begin(), bytes.end()));
  out.extra.emplace_back("_evolve.csv", replay_csv(g, "evolve"));
  out.extra.emplace_back("_crossing.csv", replay_csv(g, "crossing"));
  return out;
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& c) {
  switch (c.kind) {
    case ExperimentKind::survival_curve: return survival_curve(c);
    case ExperimentKind::crossing: return crossing(c);
    case ExperimentKind::recurrence: return recurrence(c);
    case ExperimentKind::lambda0: return lambda0(c);
    case ExperimentKind::tunnel_bound: return tunnel_bound(c);
    case ExperimentKind::tunnel_trial: return tunnel_trial_kind(c);
    case ExperimentKind::determinism: return determinism(c);
    case ExperimentKind::density: return density(c);
    case ExperimentKind::renewal_diagnostics: return renewal_diagnostics(c);
    case ExperimentKind::event_prob: return event_prob(c);
    case ExperimentKind::sample_dump: return sample_dump(c);
  }
  throw ConfigError("kind: unsupported");
}

std::string provenance() { return std::string("rcp ") + RCP_VERSION + " (" + RCP_GIT_REV + ")"; }

void write_outputs(const ExperimentConfig& c, const ExperimentOutput& out, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path base = fs::path(out_dir) / c.output;
  json side{{"config", c.echo()}, {"provenance", provenance()}, {"columns", out.csv.header()},
            {"summary", out.summary}};
  for (const auto& [suffix, content] : out.extra) write_atomic(base.string() + suffix, content);
  write_atomic(base.string() + ".json", side.dump(2) + "\n");
  write_atomic(base.string() + ".csv", out.csv.render());
}

std::string replay_csv(const GraphicalSample& sample, const std::string& command) {
  const SpaceTimeBox& box = sample.box();
  if (command == "evolve") {
    const Point origin(static_cast<std::size_t>(box.dim()), 0);
    const Point start = box.contains(origin) ? origin : box.lo;
    const auto xi0 = Configuration::from_sites(sample.num_sites(), {box.index(start)});
    return with_checksum(history_csv(evolve(sample, xi0, box.t)));
  }
  if (command == "crossing") {
    const CrossingReport r = detect_crossings(sample, box);
    std::string body = "event,direction,value\n";
    body += "T,,";
    body += cell(r.temporal) + "\n";
    body += "T_half,," + cell(r.temporal_half) + "\n";
    for (std::size_t j = 0; j < r.spatial.size(); ++j) {
      body += "S," + std::to_string(j) + "," + cell(static_cast<bool>(r.spatial[j])) + "\n";
      body += "S_half," + std::to_string(j) + "," + cell(static_cast<bool>(r.spatial_half[j])) + "\n";
    }
    return with_checksum(body);
  }
  throw ConfigError("command: expected evolve or crossing");
}

int exit_code_for(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const FormatError&) {
    return 5;
  } catch (const ConfigError&) {
    return 2;
  } catch (const DomainError&) {
    return 2;
  } catch (const CapacityError&) {
    return 3;
  } catch (const PreconditionError&) {
    return 4;
  } catch (...) {
    return 1;
  }
}

}  // namespace rcp
