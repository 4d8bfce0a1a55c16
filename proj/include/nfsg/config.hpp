// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nfsg/analysis.hpp"
#include "nfsg/scenario.hpp"

namespace nfsg {

// Configuration problem; what() starts with the offending key path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& key, const std::string& msg)
        : std::runtime_error(key + ": " + msg), key_(key) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

// Thermal noise given as bandwidth and noise figure; converted to sigma^2 on parse.
struct NoiseModel {
    double bandwidth_hz = 200e6;
    double noise_figure_db = 10.0;
};

struct Sweep {
    std::string param; // tau_db, n_antennas, n_active, ratio or n_levels
    std::vector<double> values;
};

enum class OutputFormat { csv, jsonl };

struct ExperimentSpec {
    std::string name = "cond-cp";
    ScenarioConfig scenario;
    std::optional<NoiseModel> noise; // when set, scenario.noise_power is derived from it
    std::vector<double> tau_db{0, 5, 10, 15, 20, 25, 30, 35, 40};
    std::optional<Sweep> sweep;
    std::vector<std::string> modes{"mlap", "upper"};
    int kappa = 3;
    double anchor_theta_deg = 0.0;
    double anchor_r = 30.0; // [m]
    std::size_t trials = 100'000;
    std::uint64_t seed = 1;
    AnalysisOptions numerics;
    std::string output_path;
    OutputFormat format = OutputFormat::csv;

    PolarPoint anchor() const;
    void validate() const;
};

const std::vector<std::string>& experiment_names();

// Parses a JSON document. Missing keys keep the defaults above; unknown keys
// and violated constraints raise ConfigError naming the key path.
ExperimentSpec parse_config(const std::string& text);

// JSON text that parse_config maps back to the same ExperimentSpec.
std::string to_json(const ExperimentSpec& spec);

// dB <-> linear, used only at this boundary.
double db_to_linear(double db);
double linear_to_db(double x);

} // namespace nfsg
