#pragma once

#include <json.hpp>

#include "skl/certify.hpp"
#include "skl/coefficients.hpp"
#include "skl/geometry.hpp"
#include "skl/sde.hpp"
#include "skl/skorohod.hpp"

namespace skl {

using Json = nlohmann::ordered_json;

Json to_json(const NormalCheckReport& r);
Json to_json(const ConditionAReport& r);
Json to_json(const ConditionBReport& r);
Json to_json(const SolutionCheckReport& r);
Json to_json(const VariationBoundReport& r);
Json to_json(const OsgoodDiagnosis& r);
Json to_json(const RegularityReport& r);
Json to_json(const GrowthReport& r);
Json to_json(const V1Report& r);
Json to_json(const V2Report& r);
Json to_json(const V3Report& r);
Json to_json(const CoveringReport& r);
Json to_json(const ExcursionReport& r);
Json to_json(const UniquenessReport& r);
Json to_json(const ExplosionReport& r);

}  // namespace skl
