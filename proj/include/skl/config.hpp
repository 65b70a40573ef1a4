#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "skl/certify.hpp"
#include "skl/coefficients.hpp"
#include "skl/geometry.hpp"

namespace skl {

inline constexpr int kSchemaVersion = 1;

/// Validated experiment description. `raw` is the fully resolved config that
/// reports echo back.
struct ExperimentConfig {
    std::string experiment;
    std::uint64_t seed = 0;
    int workers = 0;  // 0 = auto
    nlohmann::ordered_json raw;
    nlohmann::ordered_json params;  // validated per-experiment parameters

    DomainPtr domain;                           // when the experiment needs one
    std::optional<CoefficientField> coefficients;
    std::optional<ModulusLambda> modulus;
    std::optional<GrowthGamma> gamma;
    std::optional<CoveringSpec> covering;
    bool emit_csv = false;
};

struct ConfigResult {
    std::optional<ExperimentConfig> config;
    std::vector<std::string> errors;  // JSON-path-annotated
    bool ok() const { return errors.empty(); }
};

/// Parse + validate a config document. Unknown fields are rejected; every
/// error names its JSON path.
ConfigResult parse_config(const std::string& text);

const std::vector<std::string>& experiment_kinds();

/// Build a Domain from its config object (also used by tests).
DomainPtr make_domain_from_json(const nlohmann::ordered_json& spec);

}  // namespace skl
