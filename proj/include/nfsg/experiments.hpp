// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nfsg/config.hpp"

namespace nfsg {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ResultRow {
    std::string experiment;
    std::string mode;
    std::string sweep_param;
    std::optional<double> sweep_value;
    std::optional<int> kappa;
    std::optional<double> tau_db;
    std::string metric;
    double value = 0.0;
    std::optional<double> std_error;
};

struct ResultTable {
    std::vector<ResultRow> rows;
    std::size_t failures = 0; // rows with metric "numeric_failure"

    bool all_failed() const { return !rows.empty() && failures == rows.size(); }
};

// Runs a named experiment. A NumericFailure inside one (sweep point, mode)
// becomes a "numeric_failure" row carrying the estimate and error bound, and
// the run continues. Row order depends only on the config.
ResultTable run_experiment(const ExperimentSpec& spec);

std::string format_csv(const ResultTable& table);
std::string format_jsonl(const ResultTable& table);

// Throws IoError when the file cannot be written.
void emit_results(const ResultTable& table, const std::string& path, OutputFormat format);

} // namespace nfsg
