#pragma once

#include <json.hpp>

#include "rcp/renewal/law.hpp"

namespace rcp {

// {"family": "ParetoTail", "alpha": 0.7, "scale": 1.0} and the like.
nlohmann::json law_to_json(const InterarrivalLaw& law);

// Throws ConfigError on unknown families, missing or unknown keys, or invalid values.
InterarrivalLaw law_from_json(const nlohmann::json& j);

}  // namespace rcp
