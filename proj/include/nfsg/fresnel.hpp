// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

namespace nfsg {

struct FresnelCS {
    double c;
    double s;
};

// C(x) = int_0^x cos(pi t^2 / 2) dt, S(x) = int_0^x sin(pi t^2 / 2) dt, x >= 0.
FresnelCS fresnel_integrals(double x);

// (C(x) + jS(x)) / x, finite at x = 0 where it equals 1.
std::complex<double> fresnel_ratio(double x);

} // namespace nfsg
