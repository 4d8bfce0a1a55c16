// SPDX-License-Identifier: Apache-2.0
#include "nfsg/scenario.hpp"

#include <cmath>

#include "nfsg/errors.hpp"

namespace nfsg {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double ScenarioConfig::ref_pathloss() const
{
    const double x = array.wavelength() / (4.0 * kPi);
    return x * x;
}

double ScenarioConfig::noise_term(double r) const
{
    if (noise_power == 0.0) return 0.0;
    return n_active * noise_power /
           (tx_power * array.n_antennas * ref_pathloss() * std::pow(r, -pathloss_exponent));
}

void ScenarioConfig::validate() const
{
    array.validate();
    sector.validate();
    mlap.validate(array);
    if (n_active < 1) throw InvalidArgument("n_active must be >= 1");
    if (!(pathloss_exponent >= 2.0)) throw InvalidArgument("pathloss_exponent must be >= 2");
    if (!(tx_power > 0.0)) throw InvalidArgument("tx_power must be > 0");
    if (!(noise_power >= 0.0) || !std::isfinite(noise_power)) throw InvalidArgument("noise_power must be >= 0");
}

double thermal_noise_power(double bandwidth_hz, double noise_factor)
{
    constexpr double n0 = 3.9810717055349856e-21; // -174 dBm/Hz in W/Hz
    return n0 * bandwidth_hz * noise_factor;
}

} // namespace nfsg
