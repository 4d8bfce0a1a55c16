// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "nfsg/geometry.hpp"
#include "nfsg/pattern.hpp"

namespace nfsg {

struct ScenarioConfig {
    ArrayConfig array;
    SectorGeometry sector;
    int n_active = 15;              // N_a
    double pathloss_exponent = 2.0; // alpha
    double tx_power = 10.0;         // P_t [W]
    double noise_power = 0.0;       // sigma^2 [W]
    MlapConfig mlap;

    // zeta = (lambda / 4 pi)^2, tied to the array's wavelength.
    double ref_pathloss() const;

    // N_a sigma^2 / (P_t N zeta r^-alpha): noise term in 1/SINR at distance r.
    double noise_term(double r) const;

    void validate() const;
};

// Thermal noise N0·B·F in watts, N0 = -174 dBm/Hz; noise_factor is linear.
double thermal_noise_power(double bandwidth_hz, double noise_factor);

} // namespace nfsg
