// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "nfsg/exact_interference.hpp"
#include "nfsg/inversion.hpp"
#include "nfsg/pattern.hpp"
#include "nfsg/quadrature.hpp"
#include "nfsg/scenario.hpp"

namespace nfsg {

enum class Mode { exact, mlap, upper };

const char* to_string(Mode mode);

// Probability that one inner/outer interferer lands in level i, i = 0..M+1.
// A side with no users (kappa = 1 inner, kappa = N_a outer) has all of its
// mass on level M+1.
struct LevelProbabilities {
    std::vector<double> p_in;
    std::vector<double> p_out;
};

LevelProbabilities level_probabilities(double theta_k, double r_k, int kappa, const ScenarioConfig& scenario);

// Same, reusing prebuilt levels for the anchor.
LevelProbabilities level_probabilities(const MlapLevels& levels, int kappa, const ScenarioConfig& scenario);

std::complex<double> laplace_mlap(std::complex<double> s, const LevelProbabilities& probs,
                                  const MlapLevels& levels, int kappa, int n_active);

// (L_in)^(kappa-1) (L_out)^(N_a-kappa) by direct node sums over the exact pattern.
std::complex<double> laplace_exact(std::complex<double> s, const ExactInterference& model, int kappa,
                                   int n_active);
std::complex<double> laplace_exact(std::complex<double> s, double theta_k, double r_k, int kappa,
                                   const ScenarioConfig& scenario, const PatternQuadrature& pq = {});

struct AnalysisOptions {
    InversionConfig inversion;
    PatternQuadrature pattern;
    // Averaging over the anchor location in overall_cp.
    AdaptiveOptions theta_quad{1e-3, 1e-2, 400, 12};
    AdaptiveOptions r_quad{1e-3, 1e-2, 600, 12};
    // Inversion cutoff inside the anchor average; errors near atoms wash out
    // in the average, so a lower cutoff than for single anchors is enough.
    double overall_t_max = 2e4;
};

// Conditional coverage P{SIR > tau} (or SINR when with_noise) for each tau.
// Mode::upper evaluates the closed-form bound. Values are clamped to [0, 1].
std::vector<double> conditional_cp_curve(const std::vector<double>& taus, double theta_k, double r_k,
                                         int kappa, const ScenarioConfig& scenario, Mode mode,
                                         const AnalysisOptions& opt = {}, bool with_noise = false);

double conditional_cp(double tau, double theta_k, double r_k, int kappa, const ScenarioConfig& scenario,
                      Mode mode, const AnalysisOptions& opt = {});

double conditional_cp_upper(double tau, double theta_k, double r_k, int kappa, const ScenarioConfig& scenario);

// 1 / min_{0<=i<=M} g_i: above this threshold only the all-zero event covers.
double tau_star(const MlapLevels& levels);

// Threshold on SIR that is equivalent to SINR > tau at distance r_k;
// empty when the noise alone exceeds the budget.
std::optional<double> sinr_equivalent_threshold(double tau, double r_k, const ScenarioConfig& scenario);

// Overall coverage averaged over the anchor location, indexed [j][k] for
// kappas[j] and taus[k].
std::vector<std::vector<double>> overall_cp_table(const std::vector<double>& taus, const std::vector<int>& kappas,
                                                  const ScenarioConfig& scenario, Mode mode,
                                                  const AnalysisOptions& opt = {});

double overall_cp(double tau, int kappa, const ScenarioConfig& scenario, Mode mode,
                  const AnalysisOptions& opt = {});

struct SpectrumEfficiency {
    double tau;
    std::vector<double> se; // per user kappa = 1..N_a [bit/s/Hz]
    double ase;             // [bit/s/Hz/m^2]
};

std::vector<SpectrumEfficiency> se_and_ase(const std::vector<double>& taus, const ScenarioConfig& scenario,
                                           Mode mode, const AnalysisOptions& opt = {});

} // namespace nfsg
