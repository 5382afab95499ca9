#include "rcp/cli/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "rcp/errors.hpp"
#include "rcp/renewal/law_json.hpp"

namespace rcp {

namespace {

using json = nlohmann::json;

const std::vector<std::pair<ExperimentKind, std::string>>& kind_table() {
  static const std::vector<std::pair<ExperimentKind, std::string>> t{
      {ExperimentKind::survival_curve, "survival-curve"},
      {ExperimentKind::crossing, "crossing"},
      {ExperimentKind::recurrence, "recurrence"},
      {ExperimentKind::lambda0, "lambda0"},
      {ExperimentKind::tunnel_bound, "tunnel-bound"},
      {ExperimentKind::tunnel_trial, "tunnel-trial"},
      {ExperimentKind::determinism, "determinism"},
      {ExperimentKind::density, "density"},
      {ExperimentKind::renewal_diagnostics, "renewal-diagnostics"},
      {ExperimentKind::event_prob, "event-prob"},
      {ExperimentKind::sample_dump, "sample-dump"},
  };
  return t;
}

double get_number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(field + ": must be finite");
  return x;
}

long long get_integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ConfigError(field + ": expected an integer");
  return v.get<long long>();
}

std::uint64_t get_unsigned(const json& v, const std::string& field) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
    throw ConfigError(field + ": expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

bool same_shape(const json& def, const json& v) {
  if (def.is_null()) return v.is_number() || v.is_null();
  if (def.is_boolean()) return v.is_boolean();
  if (def.is_number_integer()) return v.is_number_integer();
  if (def.is_number()) return v.is_number();
  if (def.is_string()) return v.is_string();
  if (def.is_array()) return v.is_array();
  return false;
}

std::string shape_name(const json& def) {
  if (def.is_null() || def.is_number_float()) return "a number";
  if (def.is_boolean()) return "a boolean";
  if (def.is_number_integer()) return "an integer";
  if (def.is_string()) return "a string";
  if (def.is_array()) return "an array";
  return "a value";
}

}  // namespace

std::string kind_name(ExperimentKind k) {
  for (const auto& [kind, name] : kind_table()) {
    if (kind == k) return name;
  }
  return "?";
}

ExperimentKind parse_kind(const std::string& name) {
  for (const auto& [kind, n] : kind_table()) {
    if (n == name) return kind;
  }
  std::string all;
  for (const auto& n : kind_names()) all += (all.empty() ? "" : ", ") + n;
  throw ConfigError("kind: unknown experiment kind '" + name + "' (expected one of " + all + ")");
}

std::vector<std::string> kind_names() {
  std::vector<std::string> out;
  for (const auto& kv : kind_table()) out.push_back(kv.second);
  return out;
}

json kind_defaults(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::survival_curve: return json::object({{"mark_budget", 5e7}});
    case ExperimentKind::crossing: return {{"n", 2}, {"theta", 2.5}, {"b", 0.0}, {"mark_budget", 5e7}};
    case ExperimentKind::recurrence:
      return {{"theta", 2.5}, {"c_moment", 1.0}, {"steps", 50}, {"n0", nullptr}, {"u_n0", nullptr}};
    case ExperimentKind::lambda0: return {{"theta", 2.5}, {"c_moment", 1.0}, {"n0", nullptr}};
    case ExperimentKind::tunnel_bound:
      return {{"alpha_scale", 0.5}, {"theta_geo", nullptr}, {"eps", 1.0}, {"depth", 200},
              {"ell0", nullptr}, {"ell_lo", 2.0}, {"ell_hi", 600.0}, {"ell_step", 1.0}};
    case ExperimentKind::tunnel_trial:
      return {{"alpha_scale", 0.5}, {"depth", 200}, {"ell0", nullptr}, {"eps", 1.0},
              {"condition_first_gap", true}, {"check_path", true}, {"cross_validate", true},
              {"column_budget", 1000000}};
    case ExperimentKind::determinism:
      return {{"t", 10.0}, {"fields", 20}, {"replicates", 50}, {"radius", 20}};
    case ExperimentKind::density: return {{"t", 200.0}, {"window", 2}, {"from_window", false}, {"mark_budget", 5e7}};
    case ExperimentKind::renewal_diagnostics:
      return {{"check", "moment"}, {"theta", 2.355}, {"tau", 0.0}, {"u_grid", json::array()},
              {"t_grid", json::array()}, {"t", 1e6}, {"thetas", json::array({0.3, 0.5, 0.7})},
              {"a", json::array({0.5, 1.0})}};
    case ExperimentKind::event_prob:
      return {{"event", "J"}, {"n", 4}, {"t", 0.0}, {"s", 1.0}, {"eps", 0.1}, {"m", 1}, {"M", 1.0},
              {"alpha", nullptr}, {"theta", 2.5}, {"K", 1.0}, {"c", 1.0}, {"grid_step", 0.0},
              {"fit", false}};
    case ExperimentKind::sample_dump: return {{"mark_budget", 5e7}};
  }
  return json::object();
}

json ExperimentConfig::echo() const {
  return {{"kind", kind_name(kind)}, {"law", law_to_json(law)}, {"lambdas", lambdas}, {"d", d},
          {"horizon", horizon}, {"radius", radius}, {"trials", trials}, {"seed", seed},
          {"output", output}, {"params", params}};
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  static const std::set<std::string> allowed{"kind", "law", "lambda", "lambdas", "d", "horizon", "radius",
                                             "trials", "seed", "workers", "output", "params"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError(it.key() + ": unknown key");
  }
  if (!j.contains("kind") || !j.at("kind").is_string()) throw ConfigError("kind: missing or not a string");
  ExperimentConfig c;
  c.kind = parse_kind(j.at("kind").get<std::string>());
  c.output = kind_name(c.kind);
  if (j.contains("law")) c.law = law_from_json(j.at("law"));
  if (j.contains("lambda") && j.contains("lambdas")) throw ConfigError("lambda: give either lambda or lambdas");
  if (j.contains("lambda")) c.lambdas = {get_number(j.at("lambda"), "lambda")};
  if (j.contains("lambdas")) {
    if (!j.at("lambdas").is_array() || j.at("lambdas").empty()) throw ConfigError("lambdas: expected a non-empty array");
    c.lambdas.clear();
    for (const auto& v : j.at("lambdas")) c.lambdas.push_back(get_number(v, "lambdas"));
  }
  for (double l : c.lambdas) {
    if (l < 0.0) throw ConfigError("lambda: must be >= 0");
  }
  if (j.contains("d")) {
    const long long d = get_integer(j.at("d"), "d");
    if (d < 1 || d > 8) throw ConfigError("d: must lie in [1, 8]");
    c.d = static_cast<int>(d);
  }
  if (j.contains("horizon")) {
    c.horizon = get_number(j.at("horizon"), "horizon");
    if (c.horizon < 1.0) throw ConfigError("horizon: must be >= 1");
  }
  if (j.contains("radius")) {
    const long long r = get_integer(j.at("radius"), "radius");
    if (r < 0) throw ConfigError("radius: must be >= 0");
    c.radius = static_cast<long>(r);
  }
  if (j.contains("trials")) {
    const long long t = get_integer(j.at("trials"), "trials");
    if (t < 1) throw ConfigError("trials: must be >= 1");
    c.trials = static_cast<std::size_t>(t);
  }
  if (j.contains("seed")) c.seed = get_unsigned(j.at("seed"), "seed");
  if (j.contains("workers")) {
    const long long w = get_integer(j.at("workers"), "workers");
    if (w < 0) throw ConfigError("workers: must be >= 0");
    c.workers = static_cast<int>(w);
  }
  if (j.contains("output")) {
    if (!j.at("output").is_string() || j.at("output").get<std::string>().empty()) {
      throw ConfigError("output: expected a non-empty string");
    }
    c.output = j.at("output").get<std::string>();
    if (c.output.find('/') != std::string::npos) throw ConfigError("output: must be a file stem without '/'");
  }
  c.params = kind_defaults(c.kind);
  if (j.contains("params")) {
    const json& p = j.at("params");
    if (!p.is_object()) throw ConfigError("params: expected an object");
    for (auto it = p.begin(); it != p.end(); ++it) {
      const std::string field = "params." + it.key();
      if (!c.params.contains(it.key())) {
        throw ConfigError(field + ": unknown key for kind " + kind_name(c.kind));
      }
      const json& def = c.params.at(it.key());
      if (!same_shape(def, it.value())) throw ConfigError(field + ": expected " + shape_name(def));
      c.params[it.key()] = it.value();
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

void apply_seed_overrides(ExperimentConfig& c, const std::optional<std::uint64_t>& flag_seed) {
  if (flag_seed) {
    c.seed = *flag_seed;
    return;
  }
  if (const char* env = std::getenv("RCP_SEED"); env && *env) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || *end != '\0' || env[0] == '-') throw ConfigError("RCP_SEED: expected an unsigned integer");
    c.seed = v;
  }
}

}  // namespace rcp
