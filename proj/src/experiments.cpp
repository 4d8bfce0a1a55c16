// SPDX-License-Identifier: Apache-2.0
#include "nfsg/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>

#include <json.hpp>

#include "nfsg/analysis.hpp"
#include "nfsg/errors.hpp"
#include "nfsg/montecarlo.hpp"
#include "nfsg/parallel.hpp"
#include "nfsg/pattern.hpp"

namespace nfsg {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string shortest(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::vector<double> linspace(double a, double b, int n)
{
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return v;
}

std::optional<Sweep> default_sweep(const ExperimentSpec& spec)
{
    if (spec.sweep) return spec.sweep;
    const std::string& e = spec.name;
    if (e == "m-sweep") {
        Sweep s{"n_levels", {}};
        for (int m = 1; m <= std::min(12, spec.scenario.array.n_antennas / 2); ++m) s.values.push_back(m);
        return s;
    }
    if (e == "ase-vs-n") return Sweep{"n_antennas", {64, 128, 256, 512}};
    if (e == "ase-vs-na") return Sweep{"n_active", {4, 8, 16, 24, 32}};
    if (e == "ratio-sweep") return Sweep{"ratio", {0.02, 0.04, 0.06, 0.08, 0.1}};
    return std::nullopt;
}

// Scenario at one sweep point. tau_db sweeps leave the scenario alone.
ScenarioConfig apply_sweep(ScenarioConfig sc, const std::string& param, double v)
{
    if (param == "n_antennas") {
        sc.array.n_antennas = static_cast<int>(std::lround(v));
        sc.mlap.n_levels = std::min(sc.mlap.n_levels, std::max(1, sc.array.n_antennas / 2));
    } else if (param == "n_active") {
        sc.n_active = static_cast<int>(std::lround(v));
    } else if (param == "ratio") {
        sc.n_active = std::max(1, static_cast<int>(std::lround(v * sc.array.n_antennas)));
    } else if (param == "n_levels") {
        sc.mlap.n_levels = static_cast<int>(std::lround(v));
    }
    return sc;
}

struct Point {
    std::string param;
    std::optional<double> value;
    ScenarioConfig scenario;
    std::vector<double> tau_db;
};

std::vector<Point> sweep_points(const ExperimentSpec& spec)
{
    const auto sw = default_sweep(spec);
    if (!sw) return {{"", std::nullopt, spec.scenario, spec.tau_db}};
    if (sw->param == "tau_db") return {{"", std::nullopt, spec.scenario, sw->values}};
    std::vector<Point> pts;
    for (double v : sw->values) {
        ScenarioConfig sc = apply_sweep(spec.scenario, sw->param, v);
        sc.validate();
        pts.push_back({sw->param, v, sc, spec.tau_db});
    }
    return pts;
}

std::vector<double> to_linear(const std::vector<double>& db)
{
    std::vector<double> v;
    for (double x : db) v.push_back(db_to_linear(x));
    return v;
}

ResultRow base_row(const ExperimentSpec& spec, const std::string& mode, const Point& p)
{
    ResultRow r;
    r.experiment = spec.name;
    r.mode = mode;
    r.sweep_param = p.param;
    r.sweep_value = p.value;
    return r;
}

using Job = std::function<std::vector<ResultRow>()>;

// Runs the jobs, analytic ones on the worker pool and Monte Carlo ones in
// sequence (they parallelize internally). Output slot i belongs to job i.
std::vector<std::vector<ResultRow>> run_jobs(const std::vector<Job>& jobs, const std::vector<bool>& is_mc,
                                             const std::vector<ResultRow>& failure_template)
{
    std::vector<std::vector<ResultRow>> out(jobs.size());
    auto run_one = [&](std::size_t i) {
        try {
            out[i] = jobs[i]();
        } catch (const NumericFailure& e) {
            ResultRow r = failure_template[i];
            r.metric = "numeric_failure";
            r.value = e.estimate();
            r.std_error = e.error_bound();
            out[i] = {r};
        }
    };
    std::vector<std::size_t> analytic, mc;
    for (std::size_t i = 0; i < jobs.size(); ++i) (is_mc[i] ? mc : analytic).push_back(i);
    parallel_for(analytic.size(), [&](std::size_t k) { run_one(analytic[k]); });
    for (std::size_t i : mc) run_one(i);
    return out;
}

ResultTable concat(std::vector<std::vector<ResultRow>>&& parts)
{
    ResultTable t;
    for (auto& rows : parts)
        for (auto& r : rows) {
            if (r.metric == "numeric_failure") ++t.failures;
            t.rows.push_back(std::move(r));
        }
    return t;
}

ResultTable pattern_cut(const ExperimentSpec& spec)
{
    const ScenarioConfig& sc = spec.scenario;
    const ArrayConfig& arr = sc.array;
    const PolarPoint focal = spec.anchor();
    const MlapLevels lv = mlap_levels(arr, sc.mlap, focal);
    const double hw_deg = 180.0 / sc.sector.n_sectors;
    Point p{"", std::nullopt, sc, {}};

    std::vector<double> th = linspace(-hw_deg, hw_deg, 721);
    th.push_back(spec.anchor_theta_deg);
    std::sort(th.begin(), th.end());
    th.erase(std::unique(th.begin(), th.end()), th.end());
    std::vector<double> rs = linspace(1.0, 500.0, 500);
    rs.push_back(focal.r);
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());

    ResultTable t;
    auto add = [&](const std::string& mode, const std::string& param, double x, const std::string& metric,
                   double v) {
        ResultRow r = base_row(spec, mode, p);
        r.sweep_param = param;
        r.sweep_value = x;
        r.metric = metric;
        r.value = v;
        t.rows.push_back(std::move(r));
    };
    for (double d : th) {
        // Exact focal angle when d is the anchor's own grid entry.
        const double theta = d == spec.anchor_theta_deg ? focal.theta : d * kPi / 180.0;
        const PolarPoint obs{theta, focal.r};
        add("exact", "theta_deg", d, "gain", exact_gain(arr, obs, focal));
        add("ff", "theta_deg", d, "gain", ff_gain(arr, theta, focal.theta));
        add("mlap", "theta_deg", d, "gain", mlap_gain(arr, lv, sc.mlap, obs));
    }
    for (double r : rs) {
        const PolarPoint obs{focal.theta, r};
        add("exact", "r_m", r, "gain", exact_gain(arr, obs, focal));
        add("distance", "r_m", r, "gain", distance_gain(arr, focal.theta, focal.r, r));
        add("three-level", "r_m", r, "gain",
            distance_gain_three_level(arr, focal.theta, focal.r, r, sc.mlap.beta_gamma));
        add("mlap", "r_m", r, "gain", mlap_gain(arr, lv, sc.mlap, obs));
    }
    return t;
}

ResultTable polar_heatmap(const ExperimentSpec& spec)
{
    const ScenarioConfig& sc = spec.scenario;
    const PolarPoint focal = spec.anchor();
    const MlapLevels lv = mlap_levels(sc.array, sc.mlap, focal);
    const double hw_deg = 180.0 / sc.sector.n_sectors;
    Point p{"", std::nullopt, sc, {}};
    ResultTable t;
    for (const char* mode : {"exact", "mlap"})
        for (double d : linspace(-hw_deg, hw_deg, 121))
            for (double r : linspace(1.0, sc.sector.cell_radius, 150)) {
                const PolarPoint obs{d * kPi / 180.0, r};
                ResultRow row = base_row(spec, mode, p);
                row.sweep_param = "theta_deg";
                row.sweep_value = d;
                row.metric = "gain:r_m=" + shortest(r);
                row.value = std::string(mode) == "exact" ? exact_gain(sc.array, obs, focal)
                                                         : mlap_gain(sc.array, lv, sc.mlap, obs);
                t.rows.push_back(std::move(row));
            }
    return t;
}

Mode analytic_mode(const std::string& m)
{
    if (m == "exact") return Mode::exact;
    if (m == "mlap") return Mode::mlap;
    return Mode::upper;
}

ResultTable conditional(const ExperimentSpec& spec)
{
    const std::vector<Point> pts = sweep_points(spec);
    const PolarPoint anchor = spec.anchor();
    // exact and Monte Carlo do not depend on M, so an M sweep computes them
    // at the first point only and copies the rows.
    const bool m_sweep = !pts.empty() && pts.front().param == "n_levels";
    auto reused = [&](const std::string& mode) { return m_sweep && (mode == "exact" || mode == "montecarlo"); };

    std::vector<Job> jobs;
    std::vector<bool> is_mc;
    std::vector<ResultRow> tmpl;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (const std::string& mode : spec.modes) {
            const Point& p = pts[i];
            const int kappa = std::min(spec.kappa, p.scenario.n_active);
            ResultRow f = base_row(spec, mode, p);
            f.kappa = kappa;
            tmpl.push_back(f);
            is_mc.push_back(mode == "montecarlo");
            if (i > 0 && reused(mode)) {
                jobs.push_back([] { return std::vector<ResultRow>{}; });
                continue;
            }
            jobs.push_back([&spec, &p, mode, kappa, anchor, f]() {
                const std::vector<double> taus = to_linear(p.tau_db);
                const bool noisy = p.scenario.noise_power > 0.0;
                std::vector<std::pair<std::string, std::vector<EstimateWithError>>> curves;
                if (mode == "montecarlo") {
                    TrialPlan plan{spec.trials, spec.seed, p.scenario, GainModel::fresnel};
                    curves.emplace_back("cp", estimate_conditional_cp(plan, kappa, anchor, taus));
                    if (noisy) curves.emplace_back("cp_sinr", estimate_conditional_cp(plan, kappa, anchor, taus, true));
                } else {
                    const Mode m = analytic_mode(mode);
                    auto wrap = [](const std::vector<double>& v) {
                        std::vector<EstimateWithError> e;
                        for (double x : v) e.push_back({x, 0.0, 0});
                        return e;
                    };
                    curves.emplace_back("cp", wrap(conditional_cp_curve(taus, anchor.theta, anchor.r, kappa,
                                                                        p.scenario, m, spec.numerics)));
                    if (noisy)
                        curves.emplace_back("cp_sinr", wrap(conditional_cp_curve(taus, anchor.theta, anchor.r, kappa,
                                                                                 p.scenario, m, spec.numerics, true)));
                }
                std::vector<ResultRow> rows;
                for (const auto& [metric, est] : curves)
                    for (std::size_t k = 0; k < taus.size(); ++k) {
                        ResultRow r = f;
                        r.tau_db = p.tau_db[k];
                        r.metric = metric;
                        r.value = est[k].value;
                        if (mode == "montecarlo") r.std_error = est[k].std_error;
                        rows.push_back(std::move(r));
                    }
                return rows;
            });
        }
    auto parts = run_jobs(jobs, is_mc, tmpl);
    const std::size_t nm = spec.modes.size();
    for (std::size_t i = 1; i < pts.size(); ++i)
        for (std::size_t j = 0; j < nm; ++j)
            if (reused(spec.modes[j])) {
                parts[i * nm + j] = parts[j];
                for (auto& r : parts[i * nm + j]) r.sweep_value = pts[i].value;
            }
    return concat(std::move(parts));
}

ResultTable overall(const ExperimentSpec& spec, bool ase_only)
{
    const std::vector<Point> pts = sweep_points(spec);
    std::vector<Job> jobs;
    std::vector<bool> is_mc;
    std::vector<ResultRow> tmpl;
    for (const Point& p : pts)
        for (const std::string& mode : spec.modes) {
            const ResultRow f = base_row(spec, mode, p);
            tmpl.push_back(f);
            is_mc.push_back(mode == "montecarlo");
            jobs.push_back([&spec, &p, mode, f, ase_only]() {
                const std::vector<double> taus = to_linear(p.tau_db);
                const int na = p.scenario.n_active;
                std::vector<ResultRow> rows;
                auto row = [&](std::optional<int> kappa, std::size_t k, const char* metric, double v,
                               std::optional<double> se) {
                    ResultRow r = f;
                    r.kappa = kappa;
                    r.tau_db = p.tau_db[k];
                    r.metric = metric;
                    r.value = v;
                    r.std_error = se;
                    rows.push_back(std::move(r));
                };
                if (mode == "montecarlo") {
                    TrialPlan plan{spec.trials, spec.seed, p.scenario, GainModel::fresnel};
                    if (!ase_only) {
                        const auto cp = estimate_overall_cp_all(plan, taus);
                        for (int j = 0; j < na; ++j)
                            for (std::size_t k = 0; k < taus.size(); ++k)
                                row(j + 1, k, "cp", cp[j][k].value, cp[j][k].std_error);
                    }
                    const auto ase = estimate_ase(plan, taus);
                    for (std::size_t k = 0; k < taus.size(); ++k)
                        row(std::nullopt, k, "ase", ase[k].value, ase[k].std_error);
                    return rows;
                }
                const auto se = se_and_ase(taus, p.scenario, analytic_mode(mode), spec.numerics);
                if (!ase_only)
                    for (int j = 0; j < na; ++j)
                        for (std::size_t k = 0; k < taus.size(); ++k) {
                            const double rate = std::log2(1.0 + taus[k]);
                            row(j + 1, k, "cp", se[k].se[j] / rate, std::nullopt);
                            row(j + 1, k, "se", se[k].se[j], std::nullopt);
                        }
                for (std::size_t k = 0; k < taus.size(); ++k) row(std::nullopt, k, "ase", se[k].ase, std::nullopt);
                return rows;
            });
        }
    return concat(run_jobs(jobs, is_mc, tmpl));
}

void write_csv_field(std::string& out, const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        out += s;
        return;
    }
    out += '"';
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

} // namespace

ResultTable run_experiment(const ExperimentSpec& spec)
{
    spec.validate();
    const std::string& e = spec.name;
    if (e == "pattern-cut") return pattern_cut(spec);
    if (e == "polar-heatmap") return polar_heatmap(spec);
    if (e == "cond-cp" || e == "m-sweep") return conditional(spec);
    if (e == "overall") return overall(spec, false);
    return overall(spec, true); // ase-vs-n, ase-vs-na, ratio-sweep
}

std::string format_csv(const ResultTable& table)
{
    std::string out = "experiment,mode,sweep_param,sweep_value,kappa,tau_db,metric,value,std_error\n";
    for (const ResultRow& r : table.rows) {
        write_csv_field(out, r.experiment);
        out += ',';
        write_csv_field(out, r.mode);
        out += ',';
        write_csv_field(out, r.sweep_param);
        out += ',';
        if (r.sweep_value) out += shortest(*r.sweep_value);
        out += ',';
        if (r.kappa) out += std::to_string(*r.kappa);
        out += ',';
        if (r.tau_db) out += shortest(*r.tau_db);
        out += ',';
        write_csv_field(out, r.metric);
        out += ',';
        out += shortest(r.value);
        out += ',';
        if (r.std_error) out += shortest(*r.std_error);
        out += '\n';
    }
    return out;
}

std::string format_jsonl(const ResultTable& table)
{
    std::string out;
    for (const ResultRow& r : table.rows) {
        nlohmann::ordered_json j;
        j["experiment"] = r.experiment;
        j["mode"] = r.mode;
        j["sweep_param"] = r.sweep_param;
        j["sweep_value"] = r.sweep_value ? nlohmann::ordered_json(*r.sweep_value) : nullptr;
        j["kappa"] = r.kappa ? nlohmann::ordered_json(*r.kappa) : nullptr;
        j["tau_db"] = r.tau_db ? nlohmann::ordered_json(*r.tau_db) : nullptr;
        j["metric"] = r.metric;
        j["value"] = r.value;
        j["std_error"] = r.std_error ? nlohmann::ordered_json(*r.std_error) : nullptr;
        out += j.dump();
        out += '\n';
    }
    return out;
}

void emit_results(const ResultTable& table, const std::string& path, OutputFormat format)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << (format == OutputFormat::csv ? format_csv(table) : format_jsonl(table));
    f.flush();
    if (!f) throw IoError("write to '" + path + "' failed");
}

} // namespace nfsg
