#include "rcp/renewal/law_json.hpp"

#include <set>
#include <string>

#include "rcp/errors.hpp"

namespace rcp {

namespace {

void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError("law." + it.key() + ": unknown key");
  }
  for (const auto& k : allowed) {
    if (!j.contains(k)) throw ConfigError("law." + k + ": missing");
  }
}

double number(const nlohmann::json& j, const std::string& key) {
  if (!j.at(key).is_number()) throw ConfigError("law." + key + ": expected a number");
  return j.at(key).get<double>();
}

}  // namespace

nlohmann::json law_to_json(const InterarrivalLaw& law) {
  nlohmann::json j;
  j["family"] = law.family_name();
  switch (law.family()) {
    case LawFamily::exponential: j["rate"] = law.rate(); break;
    case LawFamily::deterministic: j["value"] = law.value(); break;
    case LawFamily::pareto_tail:
      j["alpha"] = law.alpha();
      j["scale"] = law.scale();
      break;
    case LawFamily::example_log_sv: j["t0"] = law.t0(); break;
    case LawFamily::empirical: j["table"] = law.table(); break;
  }
  return j;
}

InterarrivalLaw law_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("law: expected an object");
  if (!j.contains("family") || !j.at("family").is_string()) throw ConfigError("law.family: missing");
  const std::string fam = j.at("family").get<std::string>();
  try {
    if (fam == "Exponential") {
      check_keys(j, {"family", "rate"});
      return InterarrivalLaw::exponential(number(j, "rate"));
    }
    if (fam == "Deterministic") {
      check_keys(j, {"family", "value"});
      return InterarrivalLaw::deterministic(number(j, "value"));
    }
    if (fam == "ParetoTail") {
      check_keys(j, {"family", "alpha", "scale"});
      return InterarrivalLaw::pareto_tail(number(j, "alpha"), number(j, "scale"));
    }
    if (fam == "ExampleLogSV") {
      check_keys(j, {"family", "t0"});
      return InterarrivalLaw::example_log_sv(number(j, "t0"));
    }
    if (fam == "Empirical") {
      check_keys(j, {"family", "table"});
      if (!j.at("table").is_array()) throw ConfigError("law.table: expected an array");
      return InterarrivalLaw::empirical(j.at("table").get<std::vector<double>>());
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("law: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("law: ") + e.what());
  }
  throw ConfigError("law.family: unknown family '" + fam + "'");
}

}  // namespace rcp
