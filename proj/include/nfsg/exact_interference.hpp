// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "nfsg/geometry.hpp"
#include "nfsg/scenario.hpp"

namespace nfsg {

// Settings for the (theta, r) quadrature of a single interferer's gain.
struct PatternQuadrature {
    int theta_points = 6;      // Gauss-Legendre points per angular panel
    int r_points = 4;          // Gauss-Legendre points per radial panel
    double probe_tol = 2e-4;   // refinement stops when probes move less than this
    int max_refinements = 4;   // per axis
    double near_phase = 200.0; // edge defocus phase [rad] up to which radial panels are uniform in 1/r
    double panel_phase = 1.5;  // edge phase step per uniform radial panel [rad]
    std::size_t max_nodes = 60'000'000;
    double bin_ratio = 1.01;   // relative width of gain-table bins
    double bin_floor = 1e-9;   // gains below this share one bin
};

// Weighted gain samples of one interferer class; weights sum to ~1.
struct GainSamples {
    std::vector<double> gain;
    std::vector<double> weight;
    int theta_level = 0;
    int r_level = 0;
};

// Distribution of one interferer's gain compressed onto a geometric grid.
// Each bin keeps its mass and mean and is expanded as a linear density, so
// the characteristic function keeps decaying at large t.
class GainTable {
public:
    GainTable() = default;
    GainTable(const GainSamples& samples, double floor, double ratio);

    // E[exp(j t G)]
    std::complex<double> characteristic(double t) const;
    double mass() const { return mass_; }
    std::size_t bins() const { return mid_.size(); }

private:
    std::vector<double> mid_, half_, m_, slope_;
    double mass_ = 0.0;
};

// Gain distributions of inner and outer interferers seen by an anchored user.
class ExactInterference {
public:
    // Builds the sides that are requested and have nonempty support.
    ExactInterference(const ScenarioConfig& scenario, const PolarPoint& anchor, bool need_inner,
                      bool need_outer, const PatternQuadrature& pq = {});

    bool has_side(Side side) const;
    const GainSamples& samples(Side side) const;
    const GainTable& table(Side side) const;

    // E[exp(-s G)] over one interferer of the given side, by direct node sum.
    std::complex<double> laplace_side(Side side, std::complex<double> s) const;

private:
    GainSamples build(Side side, int theta_level, int r_level) const;
    GainSamples refine(Side side) const;

    ScenarioConfig scenario_;
    PolarPoint anchor_;
    PatternQuadrature pq_;
    bool inner_ = false, outer_ = false;
    GainSamples in_, out_;
    GainTable in_table_, out_table_;
};

} // namespace nfsg
