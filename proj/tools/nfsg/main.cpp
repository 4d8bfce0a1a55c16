// SPDX-License-Identifier: Apache-2.0
// nfsg: run near-field coverage experiments from a JSON config.
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nfsg/config.hpp"
#include "nfsg/errors.hpp"
#include "nfsg/experiments.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 1, kIo = 2, kNumeric = 3 };

std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw nfsg::IoError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Near-field stochastic-geometry coverage toolkit"};
    app.require_subcommand(1);

    std::string config_path, experiment, out_path, format;
    std::uint64_t seed = 0;
    std::size_t trials = 0;

    auto* run = app.add_subcommand("run", "run a named experiment");
    run->add_option("--config", config_path, "JSON config (empty file gives the defaults)")->required();
    run->add_option("--experiment", experiment, "experiment name, overrides the config");
    run->add_option("--seed", seed, "root seed for Monte Carlo, overrides the config");
    run->add_option("--trials", trials, "Monte Carlo trials, overrides the config");
    run->add_option("--out", out_path, "output file, overrides the config");
    run->add_option("--format", format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));

    auto* validate = app.add_subcommand("validate", "check a config and print it with defaults filled in");
    validate->add_option("--config", config_path, "JSON config")->required();

    CLI11_PARSE(app, argc, argv);

    nfsg::ExperimentSpec spec;
    try {
        spec = nfsg::parse_config(read_file(config_path));
        if (run->parsed()) {
            if (!experiment.empty()) spec.name = experiment;
            if (run->count("--seed")) spec.seed = seed;
            if (run->count("--trials")) spec.trials = trials;
            if (!out_path.empty()) spec.output_path = out_path;
            if (!format.empty()) spec.format = format == "csv" ? nfsg::OutputFormat::csv : nfsg::OutputFormat::jsonl;
            spec.validate();
            if (spec.output_path.empty()) throw nfsg::ConfigError("output.path", "no output path given (use --out)");
        }
    } catch (const nfsg::IoError& e) {
        std::cerr << "nfsg: " << e.what() << '\n';
        return kIo;
    } catch (const nfsg::ConfigError& e) {
        std::cerr << "nfsg: config error: " << e.what() << '\n';
        return kConfig;
    }

    if (validate->parsed()) {
        std::cout << nfsg::to_json(spec) << '\n';
        return kOk;
    }

    nfsg::ResultTable table;
    try {
        table = nfsg::run_experiment(spec);
    } catch (const nfsg::ConfigError& e) {
        std::cerr << "nfsg: config error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "nfsg: config error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "nfsg: config error: " << e.what() << '\n';
        return kConfig;
    }
    try {
        nfsg::emit_results(table, spec.output_path, spec.format);
    } catch (const nfsg::IoError& e) {
        std::cerr << "nfsg: " << e.what() << '\n';
        return kIo;
    }
    if (table.failures > 0) std::cerr << "nfsg: " << table.failures << " row(s) hit numeric failures\n";
    return table.all_failed() ? kNumeric : kOk;
}
