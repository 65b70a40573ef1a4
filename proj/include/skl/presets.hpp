#pragma once

#include <optional>
#include <string>
#include <vector>

#include "skl/coefficients.hpp"

namespace skl {

struct PresetInfo {
    std::string id;
    std::string description;
    int dim = 0;  // 0 = any dimension (resolved at lookup)
};

/// Registry of named coefficient fields (fixed order, for --list-presets and
/// deterministic error messages).
const std::vector<PresetInfo>& coefficient_presets();

/// Instantiate a preset; `dim` is required for dimension-generic presets and
/// must match fixed-dimension ones. Throws std::invalid_argument for unknown
/// ids (message lists the available presets).
CoefficientField make_coefficient_preset(const std::string& id, std::optional<int> dim = {});

/// Named moduli: identity | slog | sloglog | sqrt (the (L)-violating probe).
ModulusLambda make_modulus(const std::string& id);
/// Named growth functions: linear (s+1) | loglinear (s log(s+1)+1).
GrowthGamma make_gamma(const std::string& id);

std::vector<std::string> modulus_ids();
std::vector<std::string> gamma_ids();

}  // namespace skl
