// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nfsg {

struct InversionConfig {
    double t_max = 1e5;
    double rel_tol = 1e-6;
    std::size_t max_nodes = 20'000'000;

    void validate() const;
};

// Writes E[exp(j t X_d)] for every distribution d of the batch.
using CharacteristicBatch = std::function<void(double t, std::span<std::complex<double>> out)>;

struct GilPelaezResult {
    // cdf[d * n_thresholds + k] = P{X_d < w_k} (midpoint at atoms), clamped to [0, 1].
    std::vector<double> cdf;
    double error_estimate = 0.0; // summed local quadrature error, CDF units
    double t_reached = 0.0;
    std::size_t nodes = 0;
};

struct GilPelaezProblem {
    std::size_t n_dist = 1;
    std::vector<double> thresholds; // w_k > 0
    // Known point masses at X_d = 0, removed analytically. Empty means none.
    std::vector<double> atom_at_zero;
    // Further known point masses at shared locations x_a > 0, with
    // atom_masses[d * atom_locations.size() + a] for distribution d. Removing
    // the heavy ones keeps a threshold that sits close to an atom from picking
    // up a 1/(t_max * distance) truncation error.
    std::vector<double> atom_locations;
    std::vector<double> atom_masses;
    // Largest frequency carrying appreciable mass (order of the largest likely
    // value of X). Sets the initial sub-panel length.
    double frequency_hint = 1.0;
};

// F(w) = 1/2 - (1/pi) int_0^inf Im{exp(-j t w) phi(t)} / t dt, evaluated on
// dyadic t-panels split into Gauss-Kronrod sub-panels. Stops once the
// characteristic-function envelope makes the tail negligible or at t_max.
// Throws NumericFailure when max_nodes is exhausted.
GilPelaezResult gil_pelaez_cdf(const CharacteristicBatch& phi, const GilPelaezProblem& problem,
                               const InversionConfig& cfg);

} // namespace nfsg
