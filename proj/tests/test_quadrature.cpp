#include <doctest.h>

#include <cmath>
#include <vector>

#include "nfsg/quadrature.hpp"

using namespace nfsg;

TEST_CASE("Gauss-Legendre integrates polynomials exactly")
{
    for (int n : {1, 4, 7, 20}) {
        const auto q = gauss_legendre(n);
        double wsum = 0.0;
        for (double w : q.w) wsum += w;
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
        for (int deg = 0; deg < 2 * n; ++deg) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += q.w[i] * std::pow(q.x[i], deg);
            const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
            CHECK(std::abs(s - exact) < 1e-13);
        }
    }
}

TEST_CASE("Kronrod rule")
{
    const auto& k = gauss_kronrod15();
    double sk = 0.0, sg = 0.0;
    for (int i = 0; i < 15; ++i) {
        sk += k.wk[i] * std::pow(k.x[i], 22);
        sg += k.wg[i] * std::pow(k.x[i], 12);
    }
    CHECK(sk == doctest::Approx(2.0 / 23).epsilon(1e-13));
    CHECK(sg == doctest::Approx(2.0 / 13).epsilon(1e-13));
}

TEST_CASE("adaptive integration")
{
    auto r = integrate_adaptive(
        [](double x, std::span<double> o) {
            o[0] = std::sqrt(x);
            o[1] = std::cos(50 * x);
        },
        2, 0.0, 1.0, {});
    CHECK(r.converged);
    CHECK(std::abs(r.value[0] - 2.0 / 3.0) < 1e-9);
    CHECK(std::abs(r.value[1] - std::sin(50.0) / 50.0) < 1e-9);

    // A kink at a breakpoint.
    const std::vector<double> bp{0.3};
    auto k = integrate_adaptive([](double x, std::span<double> o) { o[0] = std::abs(x - 0.3); }, 1, 0.0, 1.0, {},
                                bp);
    CHECK(std::abs(k.value[0] - (0.045 + 0.245)) < 1e-12);

    AdaptiveOptions tight{1e-14, 1e-14, 45, 40};
    auto f = integrate_adaptive([](double x, std::span<double> o) { o[0] = 1.0 / std::sqrt(x); }, 1, 0.0, 1.0,
                                tight);
    CHECK_FALSE(f.converged);
    CHECK(f.evaluations <= 45);
}
