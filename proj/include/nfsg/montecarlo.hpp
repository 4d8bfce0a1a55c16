// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nfsg/geometry.hpp"
#include "nfsg/scenario.hpp"

namespace nfsg {

// How cross-gains are evaluated: the Fresnel-phase sum, or raw inner
// products of exact-distance array responses (slower, for cross-checks).
enum class GainModel { fresnel, exact_distance };

struct TrialPlan {
    std::size_t n_trials = 100'000;
    std::uint64_t root_seed = 1;
    ScenarioConfig scenario;
    GainModel gain = GainModel::fresnel;

    void validate() const;
};

struct EstimateWithError {
    double value = 0.0;
    double std_error = 0.0; // from the per-trial sample variance
    std::size_t n_trials = 0;
};

// I_kappa for every user of the set.
std::vector<double> realize_interference(const OrderedUserSet& users, const ScenarioConfig& scenario,
                                         GainModel gain = GainModel::fresnel);

// 1 / I_kappa; +inf when a user sees no interference (N_a = 1).
std::vector<double> realize_sir(const OrderedUserSet& users, const ScenarioConfig& scenario,
                                GainModel gain = GainModel::fresnel);

// 1 / (I_kappa + noise term at r_kappa).
std::vector<double> realize_sinr(const OrderedUserSet& users, const ScenarioConfig& scenario,
                                 GainModel gain = GainModel::fresnel);

// P{SIR_kappa > tau} over full network realizations, one entry per tau.
std::vector<EstimateWithError> estimate_overall_cp(const TrialPlan& plan, const std::vector<double>& taus,
                                                   int kappa);

// Same for every kappa = 1..N_a from one set of realizations, indexed [kappa-1][tau].
std::vector<std::vector<EstimateWithError>> estimate_overall_cp_all(const TrialPlan& plan,
                                                                    const std::vector<double>& taus);

// P{SIR_kappa > tau | u_kappa = anchor} (SINR when with_noise).
std::vector<EstimateWithError> estimate_conditional_cp(const TrialPlan& plan, int kappa, const PolarPoint& anchor,
                                                       const std::vector<double>& taus, bool with_noise = false);

// Conditional interference I_kappa, one value per trial, in trial order.
std::vector<double> sample_conditional_interference(const TrialPlan& plan, int kappa, const PolarPoint& anchor);

// ASE = N_s/(pi R_c^2) sum_kappa 1{SIR_kappa > tau} log2(1 + tau), averaged over trials.
std::vector<EstimateWithError> estimate_ase(const TrialPlan& plan, const std::vector<double>& taus);

} // namespace nfsg
