// SPDX-License-Identifier: Apache-2.0
#include "nfsg/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "nfsg/errors.hpp"

namespace nfsg {

using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

const std::vector<std::string> kModes{"exact", "mlap", "upper", "montecarlo"};
const std::vector<std::string> kSweeps{"tau_db", "n_antennas", "n_active", "ratio", "n_levels"};

// Reads keys off one JSON object and rejects whatever is left over.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

    const json* find(const std::string& k)
    {
        seen_.insert(k);
        auto it = j_.find(k);
        return it == j_.end() ? nullptr : &*it;
    }

    void number(const std::string& k, double& out)
    {
        if (const json* v = find(k)) {
            if (!v->is_number()) throw ConfigError(key(k), "expected a number");
            out = v->get<double>();
            if (!std::isfinite(out)) throw ConfigError(key(k), "must be finite");
        }
    }

    template <class Int>
    void integer(const std::string& k, Int& out)
    {
        if (const json* v = find(k)) {
            if (!v->is_number_integer()) throw ConfigError(key(k), "expected an integer");
            if (std::is_unsigned_v<Int> && v->is_number_integer() && !v->is_number_unsigned())
                throw ConfigError(key(k), "must be nonnegative");
            out = v->get<Int>();
        }
    }

    void string(const std::string& k, std::string& out)
    {
        if (const json* v = find(k)) {
            if (!v->is_string()) throw ConfigError(key(k), "expected a string");
            out = v->get<std::string>();
        }
    }

    void numbers(const std::string& k, std::vector<double>& out)
    {
        if (const json* v = find(k)) {
            if (!v->is_array()) throw ConfigError(key(k), "expected an array of numbers");
            out.clear();
            for (const auto& x : *v) {
                if (!x.is_number()) throw ConfigError(key(k), "expected an array of numbers");
                out.push_back(x.get<double>());
            }
        }
    }

    void finish() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) {
                if (it.key() == "wavelength" || it.key() == "spacing")
                    throw ConfigError(key(it.key()), "derived from carrier_freq_hz, not settable");
                throw ConfigError(key(it.key()), "unknown key");
            }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void parse_scenario(const json& j, ExperimentSpec& spec)
{
    Reader rd(j, "scenario");
    ScenarioConfig& sc = spec.scenario;
    if (const json* a = rd.find("array")) {
        Reader r(*a, "scenario.array");
        r.integer("n_antennas", sc.array.n_antennas);
        r.number("carrier_freq_hz", sc.array.carrier_freq);
        r.finish();
    }
    if (const json* s = rd.find("sector")) {
        Reader r(*s, "scenario.sector");
        r.integer("n_sectors", sc.sector.n_sectors);
        r.number("cell_radius_m", sc.sector.cell_radius);
        r.number("los_radius_m", sc.sector.los_radius);
        r.finish();
    }
    rd.integer("n_active", sc.n_active);
    rd.number("pathloss_exponent", sc.pathloss_exponent);
    rd.number("tx_power_w", sc.tx_power);
    const json* np = rd.find("noise_power_w");
    const json* nm = rd.find("noise");
    if (np && nm) throw ConfigError("scenario.noise", "give either noise or noise_power_w, not both");
    if (np) rd.number("noise_power_w", sc.noise_power);
    if (nm) {
        Reader r(*nm, "scenario.noise");
        NoiseModel m;
        r.number("bandwidth_hz", m.bandwidth_hz);
        r.number("noise_figure_db", m.noise_figure_db);
        r.finish();
        spec.noise = m;
    }
    if (const json* m = rd.find("mlap")) {
        Reader r(*m, "scenario.mlap");
        r.integer("n_levels", sc.mlap.n_levels);
        r.number("beta_gamma", sc.mlap.beta_gamma);
        r.number("delta", sc.mlap.delta);
        r.finish();
    }
    rd.finish();
}

void parse_numerics(const json& j, AnalysisOptions& o)
{
    Reader rd(j, "numerics");
    rd.number("t_max", o.inversion.t_max);
    rd.number("rel_tol", o.inversion.rel_tol);
    rd.integer("max_nodes", o.inversion.max_nodes);
    rd.number("pattern_probe_tol", o.pattern.probe_tol);
    rd.integer("pattern_max_nodes", o.pattern.max_nodes);
    rd.number("anchor_abs_tol", o.r_quad.abs_tol);
    o.theta_quad.abs_tol = o.r_quad.abs_tol;
    rd.integer("anchor_max_evaluations", o.r_quad.max_evaluations);
    rd.number("overall_t_max", o.overall_t_max);
    rd.finish();
}

} // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double x) { return 10.0 * std::log10(x); }

const std::vector<std::string>& experiment_names()
{
    static const std::vector<std::string> names{"pattern-cut", "polar-heatmap", "cond-cp",  "m-sweep",
                                                "overall",     "ase-vs-n",      "ase-vs-na", "ratio-sweep"};
    return names;
}

PolarPoint ExperimentSpec::anchor() const { return {anchor_theta_deg * kPi / 180.0, anchor_r}; }

void ExperimentSpec::validate() const
{
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
        throw ConfigError("experiment", "unknown experiment '" + name + "'");
    const ScenarioConfig& sc = scenario;
    if (sc.array.n_antennas < 2) throw ConfigError("scenario.array.n_antennas", "must be >= 2");
    if (!(sc.array.carrier_freq > 0.0)) throw ConfigError("scenario.array.carrier_freq_hz", "must be > 0");
    if (sc.sector.n_sectors < 1) throw ConfigError("scenario.sector.n_sectors", "must be >= 1");
    if (!(sc.sector.cell_radius > 0.0)) throw ConfigError("scenario.sector.cell_radius_m", "must be > 0");
    if (!(sc.sector.cell_radius <= sc.sector.los_radius))
        throw ConfigError("scenario.sector.los_radius_m", "must be >= cell_radius_m");
    if (sc.n_active < 1) throw ConfigError("scenario.n_active", "must be >= 1");
    if (!(sc.pathloss_exponent >= 2.0)) throw ConfigError("scenario.pathloss_exponent", "must be >= 2");
    if (!(sc.tx_power > 0.0)) throw ConfigError("scenario.tx_power_w", "must be > 0");
    if (!(sc.noise_power >= 0.0)) throw ConfigError("scenario.noise_power_w", "must be >= 0");
    if (noise && !(noise->bandwidth_hz > 0.0)) throw ConfigError("scenario.noise.bandwidth_hz", "must be > 0");
    if (sc.mlap.n_levels < 1 || sc.mlap.n_levels > sc.array.n_antennas / 2)
        throw ConfigError("scenario.mlap.n_levels", "must lie in [1, floor(n_antennas/2)]");
    if (!(sc.mlap.beta_gamma > 0.0)) throw ConfigError("scenario.mlap.beta_gamma", "must be > 0");
    if (!(sc.mlap.delta > 0.0)) throw ConfigError("scenario.mlap.delta", "must be > 0");
    if (tau_db.empty()) throw ConfigError("tau_db", "must be nonempty");
    if (!std::is_sorted(tau_db.begin(), tau_db.end())) throw ConfigError("tau_db", "must be sorted ascending");
    if (modes.empty()) throw ConfigError("modes", "must be nonempty");
    for (const auto& m : modes)
        if (std::find(kModes.begin(), kModes.end(), m) == kModes.end())
            throw ConfigError("modes", "unknown mode '" + m + "'");
    if (sweep) {
        if (std::find(kSweeps.begin(), kSweeps.end(), sweep->param) == kSweeps.end())
            throw ConfigError("sweep.param", "unknown sweep parameter '" + sweep->param + "'");
        if (sweep->values.empty()) throw ConfigError("sweep.values", "must be nonempty");
        if (!std::is_sorted(sweep->values.begin(), sweep->values.end()))
            throw ConfigError("sweep.values", "must be sorted ascending");
    }
    if (kappa < 1 || kappa > sc.n_active) throw ConfigError("kappa", "must lie in [1, n_active]");
    if (!(std::abs(anchor_theta_deg) <= 180.0 / sc.sector.n_sectors))
        throw ConfigError("anchor.theta_deg", "outside the sector");
    if (!(anchor_r > 0.0 && anchor_r < sc.sector.cell_radius))
        throw ConfigError("anchor.r_m", "must lie in (0, cell_radius_m)");
    if (trials < 1) throw ConfigError("trials", "must be >= 1");
    if (!(numerics.inversion.t_max > 0.0)) throw ConfigError("numerics.t_max", "must be > 0");
    if (!(numerics.overall_t_max > 0.0)) throw ConfigError("numerics.overall_t_max", "must be > 0");
    if (!(numerics.inversion.rel_tol > 0.0)) throw ConfigError("numerics.rel_tol", "must be > 0");
    try {
        scenario.validate();
    } catch (const std::exception& e) {
        throw ConfigError("scenario", e.what());
    }
}

ExperimentSpec parse_config(const std::string& text)
{
    json j;
    try {
        j = text.find_first_not_of(" \t\r\n") == std::string::npos ? json::object() : json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", std::string("malformed JSON: ") + e.what());
    }
    ExperimentSpec spec;
    Reader rd(j, "");
    rd.string("experiment", spec.name);
    if (const json* s = rd.find("scenario")) parse_scenario(*s, spec);
    rd.numbers("tau_db", spec.tau_db);
    if (const json* m = rd.find("modes")) {
        if (!m->is_array()) throw ConfigError("modes", "expected an array of strings");
        spec.modes.clear();
        for (const auto& x : *m) {
            if (!x.is_string()) throw ConfigError("modes", "expected an array of strings");
            spec.modes.push_back(x.get<std::string>());
        }
    }
    if (const json* s = rd.find("sweep")) {
        Reader r(*s, "sweep");
        Sweep sw;
        r.string("param", sw.param);
        r.numbers("values", sw.values);
        r.finish();
        spec.sweep = sw;
    }
    rd.integer("kappa", spec.kappa);
    if (const json* a = rd.find("anchor")) {
        Reader r(*a, "anchor");
        r.number("theta_deg", spec.anchor_theta_deg);
        r.number("r_m", spec.anchor_r);
        r.finish();
    }
    rd.integer("trials", spec.trials);
    rd.integer("seed", spec.seed);
    if (const json* n = rd.find("numerics")) parse_numerics(*n, spec.numerics);
    if (const json* o = rd.find("output")) {
        Reader r(*o, "output");
        r.string("path", spec.output_path);
        std::string fmt = spec.format == OutputFormat::csv ? "csv" : "jsonl";
        r.string("format", fmt);
        if (fmt == "csv") spec.format = OutputFormat::csv;
        else if (fmt == "jsonl") spec.format = OutputFormat::jsonl;
        else throw ConfigError("output.format", "expected csv or jsonl");
        r.finish();
    }
    rd.finish();
    if (spec.noise)
        spec.scenario.noise_power =
            thermal_noise_power(spec.noise->bandwidth_hz, db_to_linear(spec.noise->noise_figure_db));
    spec.validate();
    return spec;
}

std::string to_json(const ExperimentSpec& spec)
{
    const ScenarioConfig& sc = spec.scenario;
    json scen = {
        {"array", {{"n_antennas", sc.array.n_antennas}, {"carrier_freq_hz", sc.array.carrier_freq}}},
        {"sector",
         {{"n_sectors", sc.sector.n_sectors},
          {"cell_radius_m", sc.sector.cell_radius},
          {"los_radius_m", sc.sector.los_radius}}},
        {"n_active", sc.n_active},
        {"pathloss_exponent", sc.pathloss_exponent},
        {"tx_power_w", sc.tx_power},
        {"mlap", {{"n_levels", sc.mlap.n_levels}, {"beta_gamma", sc.mlap.beta_gamma}, {"delta", sc.mlap.delta}}},
    };
    if (spec.noise)
        scen["noise"] = {{"bandwidth_hz", spec.noise->bandwidth_hz}, {"noise_figure_db", spec.noise->noise_figure_db}};
    else
        scen["noise_power_w"] = sc.noise_power;
    json j = {
        {"experiment", spec.name},
        {"scenario", scen},
        {"tau_db", spec.tau_db},
        {"modes", spec.modes},
        {"kappa", spec.kappa},
        {"anchor", {{"theta_deg", spec.anchor_theta_deg}, {"r_m", spec.anchor_r}}},
        {"trials", spec.trials},
        {"seed", spec.seed},
        {"numerics",
         {{"t_max", spec.numerics.inversion.t_max},
          {"rel_tol", spec.numerics.inversion.rel_tol},
          {"max_nodes", spec.numerics.inversion.max_nodes},
          {"pattern_probe_tol", spec.numerics.pattern.probe_tol},
          {"pattern_max_nodes", spec.numerics.pattern.max_nodes},
          {"anchor_abs_tol", spec.numerics.r_quad.abs_tol},
          {"anchor_max_evaluations", spec.numerics.r_quad.max_evaluations},
          {"overall_t_max", spec.numerics.overall_t_max}}},
        {"output", {{"path", spec.output_path}, {"format", spec.format == OutputFormat::csv ? "csv" : "jsonl"}}},
    };
    if (spec.sweep) j["sweep"] = {{"param", spec.sweep->param}, {"values", spec.sweep->values}};
    return j.dump(2);
}

} // namespace nfsg
