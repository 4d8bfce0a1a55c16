// SPDX-License-Identifier: Apache-2.0
#include "nfsg/fresnel.hpp"

#include <cmath>
#include <limits>

#include "nfsg/errors.hpp"

namespace nfsg {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSeriesLimit = 1.6;

// sum_n (j pi x^2 / 2)^n / (n! (2n+1)), i.e. (C + jS) / x.
std::complex<double> ratio_series(double x)
{
    const std::complex<double> z(0.0, 0.5 * kPi * x * x);
    std::complex<double> term(1.0, 0.0); // z^n / n!
    std::complex<double> sum(1.0, 0.0);
    for (int n = 1; n < 60; ++n) {
        term *= z / static_cast<double>(n);
        const std::complex<double> add = term / static_cast<double>(2 * n + 1);
        sum += add;
        if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

// Complementary error-function continued fraction, evaluated with modified
// Lentz (Numerical Recipes, frenel).
FresnelCS continued_fraction(double x)
{
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    const double pix2 = kPi * x * x;
    std::complex<double> b(1.0, -pix2);
    std::complex<double> cc(1.0 / tiny, 0.0);
    std::complex<double> d = 1.0 / b;
    std::complex<double> h = d;
    int n = -1;
    for (int k = 2; k < 500; ++k) {
        n += 2;
        const double a = -static_cast<double>(n) * (n + 1);
        b += 4.0;
        d = 1.0 / (a * d + b);
        cc = b + a / cc;
        const std::complex<double> del = cc * d;
        h *= del;
        if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < eps) break;
    }
    h *= std::complex<double>(x, -x);
    const std::complex<double> cs =
        std::complex<double>(0.5, 0.5) *
        (1.0 - std::complex<double>(std::cos(0.5 * pix2), std::sin(0.5 * pix2)) * h);
    return {cs.real(), cs.imag()};
}

} // namespace

FresnelCS fresnel_integrals(double x)
{
    if (!(x >= 0.0)) throw DomainError("Fresnel integrals need x >= 0");
    if (std::isinf(x)) return {0.5, 0.5};
    if (x < kSeriesLimit) {
        const std::complex<double> r = ratio_series(x) * x;
        return {r.real(), r.imag()};
    }
    return continued_fraction(x);
}

std::complex<double> fresnel_ratio(double x)
{
    if (!(x >= 0.0)) throw DomainError("Fresnel integrals need x >= 0");
    if (x < kSeriesLimit) return ratio_series(x);
    const FresnelCS cs = fresnel_integrals(x);
    return std::complex<double>(cs.c, cs.s) / x;
}

} // namespace nfsg
