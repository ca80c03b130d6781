#pragma once

#include <string>

#include <json.hpp>

#include "skewlab/skew_lab.hpp"

namespace skewlab {

/// Exit codes of the experiment runner.
enum ExperimentExit : int {
    exit_ok = 0,
    exit_validation_error = 2,
    exit_numerical_error = 3,
};

struct ExperimentResult {
    int exit_code = exit_ok;
    std::string message;
    nlohmann::json report;  // config echo + rows + summary
};

/// Validates and executes one experiment config. Deterministic for fixed
/// (config, seed). Overrides of -1 / empty leave the config values in place.
ExperimentResult run_experiment(const nlohmann::json& config, std::int64_t seed_override = -1,
                                std::int64_t horizon_override = -1);

/// Serialize a report. CSV bodies are byte-stable; the timestamp lives in a
/// leading comment line. Reals print with 17 significant digits.
std::string report_to_csv(const nlohmann::json& report);
std::string report_to_json(const nlohmann::json& report);

// descriptor parsers, shared with the bindings
BaseSystem parse_base(const nlohmann::json& j);
BasePoint parse_point(const BaseSystem& sys, const nlohmann::json& j);
ScalarCocycle parse_scalar_cocycle(const BaseSystem& base, const nlohmann::json& j);
IntegerCocycle parse_integer_cocycle(const BaseSystem& base, const nlohmann::json& j);
WeightSequence parse_weights(const nlohmann::json& j);
SparseVector parse_vector(const nlohmann::json& j);
IndexSequence parse_sequence(const nlohmann::json& j, std::int64_t horizon);

}  // namespace skewlab
