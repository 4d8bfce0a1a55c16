// SPDX-License-Identifier: Apache-2.0
#include "nfsg/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "nfsg/errors.hpp"
#include "nfsg/parallel.hpp"
#include "nfsg/pattern.hpp"

namespace nfsg {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::size_t kBlock = 2048;

std::size_t n_blocks(std::size_t n) { return (n + kBlock - 1) / kBlock; }

// Coverage counts per (row, tau), summed over trials block by block. Counts
// are integers, so the reduction is exact whatever the worker count.
template <class Trial>
std::vector<std::uint64_t> count_coverage(const TrialPlan& plan, std::size_t rows, std::size_t n_tau,
                                          const Trial& trial)
{
    const std::size_t nb = n_blocks(plan.n_trials);
    std::vector<std::vector<std::uint64_t>> partial(nb);
    parallel_for(nb, [&](std::size_t b) {
        std::vector<std::uint64_t> c(rows * n_tau, 0);
        const std::size_t lo = b * kBlock, hi = std::min(plan.n_trials, lo + kBlock);
        for (std::size_t i = lo; i < hi; ++i) trial(i, c);
        partial[b] = std::move(c);
    });
    std::vector<std::uint64_t> total(rows * n_tau, 0);
    for (const auto& c : partial)
        for (std::size_t j = 0; j < c.size(); ++j) total[j] += c[j];
    return total;
}

EstimateWithError proportion(std::uint64_t hits, std::size_t n)
{
    EstimateWithError e;
    e.n_trials = n;
    e.value = static_cast<double>(hits) / n;
    e.std_error = n > 1 ? std::sqrt(e.value * (1.0 - e.value) / (n - 1)) : 0.0;
    return e;
}

void check_taus(const std::vector<double>& taus)
{
    for (double t : taus)
        if (!(t > 0.0)) throw DomainError("tau must be > 0");
}

} // namespace

void TrialPlan::validate() const
{
    if (n_trials < 1) throw InvalidArgument("n_trials must be >= 1");
    scenario.validate();
}

std::vector<double> realize_interference(const OrderedUserSet& users, const ScenarioConfig& scenario,
                                         GainModel gain)
{
    const std::size_t n = users.users.size();
    if (n == 0) throw InvalidArgument("user set is empty");
    std::vector<double> interference(n, 0.0);
    if (gain == GainModel::fresnel) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double g = exact_gain(scenario.array, users.users[i], users.users[j]);
                interference[i] += g;
                interference[j] += g;
            }
        return interference;
    }
    std::vector<std::vector<std::complex<double>>> resp(n);
    for (std::size_t i = 0; i < n; ++i) resp[i] = array_response(scenario.array, users.users[i]);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t k = 0; k < resp[i].size(); ++k) acc += std::conj(resp[i][k]) * resp[j][k];
            const double g = std::norm(acc);
            interference[i] += g;
            interference[j] += g;
        }
    return interference;
}

std::vector<double> realize_sir(const OrderedUserSet& users, const ScenarioConfig& scenario, GainModel gain)
{
    std::vector<double> v = realize_interference(users, scenario, gain);
    for (double& x : v) x = x > 0.0 ? 1.0 / x : std::numeric_limits<double>::infinity();
    return v;
}

std::vector<double> realize_sinr(const OrderedUserSet& users, const ScenarioConfig& scenario, GainModel gain)
{
    std::vector<double> v = realize_interference(users, scenario, gain);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double d = v[i] + scenario.noise_term(users.users[i].r);
        v[i] = d > 0.0 ? 1.0 / d : std::numeric_limits<double>::infinity();
    }
    return v;
}

std::vector<std::vector<EstimateWithError>> estimate_overall_cp_all(const TrialPlan& plan,
                                                                    const std::vector<double>& taus)
{
    plan.validate();
    check_taus(taus);
    const auto& sc = plan.scenario;
    const std::size_t na = sc.n_active, nt = taus.size();
    const auto counts = count_coverage(plan, na, nt, [&](std::size_t i, std::vector<std::uint64_t>& c) {
        RandomStream rng(plan.root_seed, i);
        const OrderedUserSet set = sample_user_set(sc.sector, sc.n_active, rng);
        const std::vector<double> sir = realize_sir(set, sc, plan.gain);
        for (std::size_t k = 0; k < na; ++k)
            for (std::size_t t = 0; t < nt; ++t) c[k * nt + t] += sir[k] > taus[t];
    });
    std::vector<std::vector<EstimateWithError>> out(na, std::vector<EstimateWithError>(nt));
    for (std::size_t k = 0; k < na; ++k)
        for (std::size_t t = 0; t < nt; ++t) out[k][t] = proportion(counts[k * nt + t], plan.n_trials);
    return out;
}

std::vector<EstimateWithError> estimate_overall_cp(const TrialPlan& plan, const std::vector<double>& taus,
                                                   int kappa)
{
    if (kappa < 1 || kappa > plan.scenario.n_active) throw InvalidArgument("kappa must lie in [1, n_active]");
    return estimate_overall_cp_all(plan, taus)[kappa - 1];
}

std::vector<EstimateWithError> estimate_conditional_cp(const TrialPlan& plan, int kappa, const PolarPoint& anchor,
                                                       const std::vector<double>& taus, bool with_noise)
{
    plan.validate();
    check_taus(taus);
    const auto& sc = plan.scenario;
    const std::size_t nt = taus.size();
    const auto counts = count_coverage(plan, 1, nt, [&](std::size_t i, std::vector<std::uint64_t>& c) {
        RandomStream rng(plan.root_seed, i);
        const OrderedUserSet set = sample_conditional_user_set(kappa, anchor, sc.n_active, sc.sector, rng);
        const std::vector<double> s = with_noise ? realize_sinr(set, sc, plan.gain) : realize_sir(set, sc, plan.gain);
        for (std::size_t t = 0; t < nt; ++t) c[t] += s[kappa - 1] > taus[t];
    });
    std::vector<EstimateWithError> out(nt);
    for (std::size_t t = 0; t < nt; ++t) out[t] = proportion(counts[t], plan.n_trials);
    return out;
}

std::vector<double> sample_conditional_interference(const TrialPlan& plan, int kappa, const PolarPoint& anchor)
{
    plan.validate();
    const auto& sc = plan.scenario;
    std::vector<double> out(plan.n_trials);
    parallel_for(n_blocks(plan.n_trials), [&](std::size_t b) {
        const std::size_t lo = b * kBlock, hi = std::min(plan.n_trials, lo + kBlock);
        for (std::size_t i = lo; i < hi; ++i) {
            RandomStream rng(plan.root_seed, i);
            const OrderedUserSet set = sample_conditional_user_set(kappa, anchor, sc.n_active, sc.sector, rng);
            out[i] = realize_interference(set, sc, plan.gain)[kappa - 1];
        }
    });
    return out;
}

std::vector<EstimateWithError> estimate_ase(const TrialPlan& plan, const std::vector<double>& taus)
{
    plan.validate();
    check_taus(taus);
    const auto& sc = plan.scenario;
    const std::size_t nt = taus.size();
    // Row 0: covered users per trial; row 1: its square.
    const auto sums = count_coverage(plan, 2, nt, [&](std::size_t i, std::vector<std::uint64_t>& c) {
        RandomStream rng(plan.root_seed, i);
        const OrderedUserSet set = sample_user_set(sc.sector, sc.n_active, rng);
        const std::vector<double> sir = realize_sir(set, sc, plan.gain);
        for (std::size_t t = 0; t < nt; ++t) {
            std::uint64_t k = 0;
            for (double s : sir) k += s > taus[t];
            c[t] += k;
            c[nt + t] += k * k;
        }
    });
    const double area = kPi * sc.sector.cell_radius * sc.sector.cell_radius / sc.sector.n_sectors;
    const double n = static_cast<double>(plan.n_trials);
    std::vector<EstimateWithError> out(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        const double scale = std::log2(1.0 + taus[t]) / area;
        const double mean = sums[t] / n;
        const double var = plan.n_trials > 1 ? std::max(0.0, (sums[nt + t] - n * mean * mean) / (n - 1.0)) : 0.0;
        out[t].value = scale * mean;
        out[t].std_error = scale * std::sqrt(var / n);
        out[t].n_trials = plan.n_trials;
    }
    return out;
}

} // namespace nfsg
