// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "nfsg/fresnel.hpp"
#include "nfsg/geometry.hpp"

namespace nfsg {

inline constexpr double kSpeedOfLight = 299792458.0;

// Half-wavelength ULA centred at the origin. Element n sits at offset
// (n - (N-1)/2)·d, so even N is handled with half-integer offsets.
struct ArrayConfig {
    int n_antennas = 256;
    double carrier_freq = 28e9; // [Hz]

    double wavelength() const { return kSpeedOfLight / carrier_freq; }
    double spacing() const { return 0.5 * wavelength(); }
    double aperture() const { return (n_antennas - 1) * spacing(); }
    double rayleigh_distance() const;
    double fresnel_distance() const;
    double element_offset(int n) const { return n - 0.5 * (n_antennas - 1); }

    void validate() const;
};

struct MlapConfig {
    int n_levels = 10;       // M
    double beta_gamma = 1.3; // Fresnel argument at the beam-depth edge
    double delta = 0.70710678118654752440;

    void validate(const ArrayConfig& array) const;
};

struct BeamDepthInterval {
    double d_theta = 0.0;          // D_theta
    double d_left = 0.0;
    std::optional<double> d_right; // empty: unbounded

    bool bounded() const { return d_right.has_value(); }
    // +inf when unbounded.
    double depth() const;
};

struct MlapLevels {
    std::vector<double> gains; // g_0 .. g_{M+1}
    PolarPoint focal;
    BeamDepthInterval depth;

    int n_levels() const { return static_cast<int>(gains.size()) - 2; }
};

// Unit-norm NF response with exact element distances.
std::vector<std::complex<double>> array_response(const ArrayConfig& cfg, const PolarPoint& p);

// Fresnel-sum pattern |sum_u exp(j(a·u + b·u^2))|^2 / N^2 over the element offsets u.
double fresnel_sum_gain(int n_antennas, double a, double b);

// Linear (a) and quadratic (b) phase coefficients used by fresnel_sum_gain.
struct PhaseCoefficients {
    double a;
    double b;
};
PhaseCoefficients phase_coefficients(const ArrayConfig& cfg, const PolarPoint& obs,
                                     const PolarPoint& focal);

double exact_gain(const ArrayConfig& cfg, const PolarPoint& obs, const PolarPoint& focal);

// |a^H(obs) a(focal)|^2 from array_response, O(N) with exact distances.
double exact_distance_gain(const ArrayConfig& cfg, const PolarPoint& obs, const PolarPoint& focal);

double angular_gain(int n_antennas, double phi);
double ff_gain(const ArrayConfig& cfg, double theta, double theta_focal);

double distance_beta(const ArrayConfig& cfg, double theta_focal, double r_focal, double r_obs);
// |(C(beta) + jS(beta)) / beta|^2
double distance_gain_at_beta(double beta);
double distance_gain(const ArrayConfig& cfg, double theta_focal, double r_focal, double r_obs);
double asymptotic_gain(const ArrayConfig& cfg, double theta_focal, double r_focal);

BeamDepthInterval beam_depth(const ArrayConfig& cfg, double theta_focal, double r_focal,
                             double beta_gamma);

// Smallest beta with distance_gain_at_beta(beta) = 10^{gamma_db/10}, gamma_db < 0.
double beta_for_gamma(double gamma_db);

// Three-level distance pattern: 1 inside the beam depth, the asymptotic gain
// beyond D_right, 0 below D_left.
double distance_gain_three_level(const ArrayConfig& cfg, double theta_focal, double r_focal,
                                 double r_obs, double beta_gamma);

MlapLevels mlap_levels(const ArrayConfig& cfg, const MlapConfig& mlap, const PolarPoint& focal);

// Index i of the level g_i hit at obs, in [0, M+1].
int mlap_level_index(const ArrayConfig& cfg, const MlapLevels& levels, const PolarPoint& obs);
double mlap_gain(const ArrayConfig& cfg, const MlapLevels& levels, const MlapConfig& mlap,
                 const PolarPoint& obs);

struct MStar {
    int m;
    bool saturated;
};
// Smallest M whose quantized pattern has a level below 1/tau. The candidate
// levels are g_1..g_M, plus g_0 when a focal point is supplied.
MStar m_star(const ArrayConfig& cfg, const MlapConfig& mlap, double tau,
             const std::optional<PolarPoint>& focal = std::nullopt);

} // namespace nfsg
