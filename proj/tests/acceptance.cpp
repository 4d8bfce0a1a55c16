// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "nfsg/analysis.hpp"
#include "nfsg/geometry.hpp"
#include "nfsg/montecarlo.hpp"
#include "nfsg/pattern.hpp"

using namespace nfsg;

namespace {

constexpr double kPi = 3.14159265358979323846;

double db(double x) { return std::pow(10.0, x / 10.0); }

struct Outcome {
    bool pass;
    std::string detail;
};

char buf[512];

template <class... A>
std::string fmt(const char* f, A... a)
{
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

template <class F>
double ks_distance(std::vector<double> xs, F cdf)
{
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, std::abs((i + 1) / n - f), std::abs(f - i / n)});
    }
    return d;
}

PolarPoint draw_interferer(Side side, double r_k, const SectorGeometry& s, RandomStream& rng)
{
    const double hw = s.half_width();
    const double theta = -hw + 2 * hw * rng.uniform();
    const double u = rng.uniform();
    const double rc = s.cell_radius;
    const double r = side == Side::inner ? r_k * std::sqrt(u) : std::sqrt(r_k * r_k + u * (rc * rc - r_k * r_k));
    return {theta, r};
}

std::size_t argmax(const std::vector<double>& v)
{
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

Outcome c1_peak_symmetry()
{
    ArrayConfig a;
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> th(-kPi / 3, kPi / 3), rr(0.5, 150.0);
    double peak = 0.0, sym = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const PolarPoint p{th(g), rr(g)}, q{th(g), rr(g)};
        peak = std::max(peak, std::abs(exact_gain(a, p, p) - 1.0));
        sym = std::max(sym, std::abs(exact_gain(a, p, q) - exact_gain(a, q, p)));
    }
    return {peak <= 1e-12 && sym <= 1e-12, fmt("max |G(p;p)-1| = %.2e, max asymmetry = %.2e", peak, sym)};
}

Outcome c2_fresnel_anchor()
{
    const double g = distance_gain_at_beta(1.3);
    return {g >= 0.47 && g <= 0.53, fmt("gain at beta = 1.3 is %.5f", g)};
}

Outcome c3_beam_depth()
{
    ArrayConfig a;
    const double gamma = distance_gain_at_beta(1.3);
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> th(-kPi / 3, kPi / 3), rr(1.0, 150.0);
    double worst = 0.0, worst_root = 0.0;
    int tested = 0;
    while (tested < 50) {
        const double t = th(g), r = rr(g);
        const auto bd = beam_depth(a, t, r, 1.3);
        if (!bd.bounded()) continue;
        ++tested;
        worst = std::max({worst, std::abs(distance_gain(a, t, r, bd.d_left) - gamma),
                          std::abs(distance_gain(a, t, r, *bd.d_right) - gamma)});
        // Locate the crossings independently and compare positions.
        auto f = [&](double x) { return distance_gain(a, t, r, x) - gamma; };
        boost::uintmax_t it = 200;
        const auto lo = boost::math::tools::toms748_solve(f, 1e-3 * r, r * 0.999999,
                                                          boost::math::tools::eps_tolerance<double>(50), it);
        worst_root = std::max(worst_root, std::abs(0.5 * (lo.first + lo.second) - bd.d_left) / bd.d_left);
    }
    return {worst <= 0.03, fmt("max |gain - %.4f| at endpoints = %.2e (relative shift of the left root %.1e)",
                               gamma, worst, worst_root)};
}

Outcome c4_far_field()
{
    ArrayConfig a;
    std::mt19937_64 g(4);
    const double rl = a.rayleigh_distance();
    std::uniform_real_distribution<double> th(-kPi / 3, kPi / 3), rr(100 * rl, 1e4 * rl);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const PolarPoint p{th(g), rr(g)}, q{th(g), rr(g)};
        worst = std::max(worst, std::abs(exact_gain(a, p, q) - ff_gain(a, p.theta, q.theta)));
    }
    return {worst < 1e-3, fmt("max |exact - ff| = %.2e over 200 cases", worst)};
}

Outcome c5_level_probabilities()
{
    ScenarioConfig sc;
    std::mt19937_64 g(5);
    std::uniform_real_distribution<double> th(-kPi / 3, kPi / 3), rr(1.0, 149.0);
    std::uniform_int_distribution<int> kk(1, sc.n_active);
    double sum_err = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto p = level_probabilities(th(g), rr(g), kk(g), sc);
        sum_err = std::max({sum_err, std::abs(std::accumulate(p.p_in.begin(), p.p_in.end(), 0.0) - 1.0),
                            std::abs(std::accumulate(p.p_out.begin(), p.p_out.end(), 0.0) - 1.0)});
    }
    const PolarPoint anchor{0.0, 30.0};
    const auto lv = mlap_levels(sc.array, sc.mlap, anchor);
    const auto p = level_probabilities(lv, 3, sc);
    double worst = 0.0;
    for (Side side : {Side::inner, Side::outer}) {
        const int n = 1'000'000;
        std::vector<double> freq(lv.gains.size(), 0.0);
        RandomStream rng(55, side == Side::inner ? 0 : 1);
        for (int i = 0; i < n; ++i)
            freq[mlap_level_index(sc.array, lv, draw_interferer(side, anchor.r, sc.sector, rng))] += 1.0 / n;
        const auto& ref = side == Side::inner ? p.p_in : p.p_out;
        for (std::size_t i = 0; i < freq.size(); ++i) worst = std::max(worst, std::abs(freq[i] - ref[i]));
    }
    return {sum_err <= 1e-9 && worst <= 0.003,
            fmt("max |sum - 1| = %.1e, max |empirical - p_i| = %.4f (10^6 draws per side)", sum_err, worst)};
}

Outcome c6_exact_vs_mc()
{
    ScenarioConfig sc;
    const std::vector<double> taus{db(5), db(10), db(20)};
    const auto cp = conditional_cp_curve(taus, 0.0, 30.0, 3, sc, Mode::exact);
    TrialPlan plan;
    plan.n_trials = 100'000;
    plan.scenario = sc;
    const auto mc = estimate_conditional_cp(plan, 3, {0.0, 30.0}, taus);
    double worst = 0.0;
    std::string d;
    for (std::size_t k = 0; k < taus.size(); ++k) {
        worst = std::max(worst, std::abs(cp[k] - mc[k].value));
        d += fmt("%s%.4f/%.4f", k ? ", " : "", cp[k], mc[k].value);
    }
    return {worst <= 0.02, "exact/MC at 5, 10, 20 dB: " + d + fmt("; max diff %.4f", worst)};
}

Outcome c7_ordering()
{
    ScenarioConfig sc;
    std::mt19937_64 g(7);
    std::uniform_real_distribution<double> th(-kPi / 3, kPi / 3), rr(2.0, 148.0), tdb(-5.0, 60.0);
    std::uniform_int_distribution<int> kk(1, sc.n_active);
    double above = 0.0, gap = 0.0, drift = 0.0;
    int n_star = 0;
    for (int i = 0; i < 100; ++i) {
        const double t = th(g), r = rr(g), tau = db(tdb(g));
        const int k = kk(g);
        const auto lv = mlap_levels(sc.array, sc.mlap, {t, r});
        const double ts = tau_star(lv);
        const auto m = conditional_cp_curve({tau, ts, 10 * ts}, t, r, k, sc, Mode::mlap);
        const auto u = conditional_cp_curve({tau}, t, r, k, sc, Mode::upper);
        above = std::max(above, m[0] - u[0]);
        if (tau >= ts) {
            ++n_star;
            gap = std::max(gap, std::abs(m[0] - u[0]));
        }
        drift = std::max({drift, std::abs(m[1] - m[2]), tau >= ts ? std::abs(m[0] - m[1]) : 0.0});
    }
    return {above <= 0.0 && gap == 0.0 && drift == 0.0,
            fmt("max(mlap - upper) = %.2e, max |mlap - upper| above tau* = %.2e (%d triples), plateau drift = %.2e",
                above, gap, n_star, drift)};
}

Outcome c8_m_star()
{
    ArrayConfig a;
    MlapConfig m;
    const int expect[4] = {1, 3, 7, 12};
    const double taus[4] = {5, 20, 30, 35};
    bool ok = true;
    std::string d;
    for (int i = 0; i < 4; ++i) {
        const int got = m_star(a, m, db(taus[i]), PolarPoint{0.0, 30.0}).m;
        ok = ok && got == expect[i];
        d += fmt("%s%d", i ? ", " : "", got);
    }
    return {ok, "M* at 5, 20, 30, 35 dB = " + d};
}

Outcome c9_ase_peak()
{
    ScenarioConfig sc;
    std::vector<double> taus, dbs;
    for (double x = 0; x <= 40; x += 5) {
        dbs.push_back(x);
        taus.push_back(db(x));
    }
    std::vector<double> mlap;
    for (auto& e : se_and_ase(taus, sc, Mode::mlap)) mlap.push_back(e.ase);
    TrialPlan plan;
    plan.n_trials = 100'000;
    plan.scenario = sc;
    std::vector<double> mc;
    for (auto& e : estimate_ase(plan, taus)) mc.push_back(e.value);
    const double am = dbs[argmax(mlap)], ac = dbs[argmax(mc)];
    std::string d = "ASE x1e3 (mlap/MC):";
    for (std::size_t k = 0; k < taus.size(); ++k) d += fmt(" %g:%.3f/%.3f", dbs[k], 1e3 * mlap[k], 1e3 * mc[k]);
    return {am == 20.0 && ac == 20.0, fmt("argmax mlap %g dB, MC %g dB; ", am, ac) + d};
}

Outcome c10_users_per_antenna()
{
    const std::vector<int> grid{4, 8, 16, 24, 32};
    std::vector<double> ase;
    std::string d;
    for (int na : grid) {
        TrialPlan plan;
        plan.n_trials = 100'000;
        plan.scenario.array.n_antennas = 100;
        plan.scenario.n_active = na;
        ase.push_back(estimate_ase(plan, {db(20)})[0].value);
        d += fmt(" %d:%.3f", na, 1e3 * ase.back());
    }
    const int best = grid[argmax(ase)];
    const double ratio = ase[4] / ase[2];
    return {best == 16 && ratio <= 0.65, fmt("argmax N_a = %d, ASE(32)/ASE(16) = %.3f; ASE x1e3:", best, ratio) + d};
}

Outcome c11_sinr()
{
    ScenarioConfig quiet;
    std::vector<double> taus;
    for (double x = 0; x <= 40; x += 5) taus.push_back(db(x));
    const auto a = conditional_cp_curve(taus, 0.0, 30.0, 3, quiet, Mode::exact);
    const auto b = conditional_cp_curve(taus, 0.0, 30.0, 3, quiet, Mode::exact, {}, true);
    double id = 0.0;
    for (std::size_t k = 0; k < taus.size(); ++k) id = std::max(id, std::abs(a[k] - b[k]));

    ScenarioConfig noisy;
    noisy.noise_power = thermal_noise_power(200e6, 10.0);
    // SIR and SINR thresholds go through one inversion.
    std::vector<double> all = taus;
    std::vector<bool> feasible;
    for (double t : taus) {
        const auto e = sinr_equivalent_threshold(t, 30.0, noisy);
        feasible.push_back(e.has_value());
        all.push_back(e.value_or(t));
    }
    const auto cp = conditional_cp_curve(all, 0.0, 30.0, 3, noisy, Mode::exact);
    double worst = 0.0;
    std::string d;
    for (std::size_t k = 0; k < taus.size(); ++k) {
        const double sinr = feasible[k] ? cp[taus.size() + k] : 0.0;
        worst = std::max(worst, std::abs(sinr - cp[k]));
        d += fmt(" %.0f:%.4f", 10 * std::log10(taus[k]), sinr - cp[k]);
    }
    return {id <= 1e-12 && worst <= 0.01,
            fmt("sigma^2 = 0 max diff %.1e; noise model max |SINR CP - SIR CP| = %.4f; per tau:", id, worst) + d};
}

Outcome c12_distributions()
{
    SectorGeometry s;
    const int n = 1'000'000;
    std::vector<double> third(n), inner, outer;
    inner.reserve(n);
    outer.reserve(n);
    for (int i = 0; i < n; ++i) {
        RandomStream rng(12, i);
        third[i] = sample_user_set(s, 15, rng).users[2].r;
        const auto set = sample_conditional_user_set(2, {0.0, 60.0}, 3, s, rng);
        inner.push_back(set.users[0].r);
        outer.push_back(set.users[2].r);
    }
    const double k1 = ks_distance(third, [&](double r) { return ordered_distance_dist(3, r, 15, s).cdf; });
    const double k2 = ks_distance(inner, [&](double r) { return conditional_distance_dist(Side::inner, r, 60.0, s).cdf; });
    const double k3 = ks_distance(outer, [&](double r) { return conditional_distance_dist(Side::outer, r, 60.0, s).cdf; });
    const double worst = std::max({k1, k2, k3});
    return {worst < 0.01, fmt("KS ordered(3 of 15) %.4f, inner %.4f, outer %.4f", k1, k2, k3)};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"pattern peak and symmetry", c1_peak_symmetry},
        {"Fresnel -3 dB anchor", c2_fresnel_anchor},
        {"beam-depth consistency", c3_beam_depth},
        {"near-field to far-field degeneration", c4_far_field},
        {"level probabilities", c5_level_probabilities},
        {"exact conditional CP vs Monte Carlo", c6_exact_vs_mc},
        {"MLAP / upper-bound ordering", c7_ordering},
        {"M* anchor values", c8_m_star},
        {"ASE peak at 20 dB", c9_ase_peak},
        {"user-to-antenna optimum", c10_users_per_antenna},
        {"SINR reduction", c11_sinr},
        {"distance distribution suite", c12_distributions},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::printf("%s %2zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    o.detail.c_str(), sec);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
