#pragma once

#include <optional>
#include <string>

#include "skl/config.hpp"

namespace skl {

inline constexpr const char* kVersion = "1.0.0";

enum class Outcome { pass = 0, error = 1, violations = 2 };

/// Full run result. `payload` holds every numeric result (byte-identical for
/// identical configs regardless of worker count); `provenance` carries wall
/// time and resolved worker count and is excluded from determinism claims.
struct RunReport {
    nlohmann::ordered_json document;  // config echo + payload + provenance
    Outcome outcome = Outcome::pass;

    std::string payload_bytes() const;  // serialized payload subtree
};

/// Dispatch a validated config: runs the experiment, writes report.json and
/// any path_<i>.csv files under out_dir (when given).
RunReport run(const ExperimentConfig& config, const std::optional<std::string>& out_dir = {},
              std::optional<int> workers_override = {});

/// Worker-independence self-test: runs the config with 1 and with `workers`
/// workers and compares payload bytes.
bool self_test_workers(const ExperimentConfig& config, int workers = 8);

}  // namespace skl
