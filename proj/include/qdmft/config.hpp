#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qdmft/loop.hpp"

namespace qdmft {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Everything an experiment run needs beyond the loop parameters.
struct ExperimentConfig {
    std::string mode = "ed";
    DmftConfig loop;
    std::vector<double> sigma_ms_list = {0.02, 0.04, 0.06, 0.08}; // eta-sweep
    double v_const = 1.0;    // eta-sweep fixed coupling after t_0
    double floor_frac = 1e-3;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Reads a flat key=value file: one pair per line, '#' comments, blank lines
// skipped. Values keep internal whitespace; keys and values are trimmed.
KeyValues load_key_values(const std::string& path);

// Applies one key; throws ConfigError naming the key when it is unknown or
// the value does not parse.
void apply_key(ExperimentConfig& config, const std::string& key, const std::string& value);

// Validates ranges; throws ConfigError naming the offending field.
void validate_config(const ExperimentConfig& config);

// Defaults, then file keys (if path nonempty), then overrides, then validate.
ExperimentConfig make_experiment_config(const std::string& mode, const std::string& path,
                                        const KeyValues& overrides);

// The resolved configuration as key=value pairs, defaults included.
KeyValues dump_config(const ExperimentConfig& config);

} // namespace qdmft
