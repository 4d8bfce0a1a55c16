#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "nfsg/errors.hpp"
#include "nfsg/geometry.hpp"
#include "nfsg/quadrature.hpp"

using namespace nfsg;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Kolmogorov-Smirnov distance of sorted samples against a CDF.
template <class F>
double ks_distance(std::vector<double> xs, F cdf)
{
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, std::abs((i + 1) / n - f), std::abs(f - i / n)});
    }
    return d;
}

} // namespace

TEST_CASE("sector validation")
{
    SectorGeometry s;
    CHECK_NOTHROW(s.validate());
    CHECK(s.half_width() == doctest::Approx(kPi / 3));
    s.los_radius = 100.0;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    s = {};
    s.n_sectors = 0;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
}

TEST_CASE("unordered distance")
{
    SectorGeometry s;
    CHECK(unordered_distance_dist(150.0, s).cdf == 1.0);
    CHECK(unordered_distance_dist(75.0, s).cdf == doctest::Approx(0.25));
    CHECK_THROWS_AS(unordered_distance_dist(151.0, s), DomainError);
    const auto q = integrate_adaptive([&](double r, std::span<double> o) { o[0] = unordered_distance_dist(r, s).pdf; },
                                      1, 0.0, 150.0, {});
    CHECK(std::abs(q.value[0] - 1.0) < 1e-10);
}

TEST_CASE("ordered distance closed forms")
{
    SectorGeometry s;
    CHECK(ordered_distance_dist(1, 60.0, 1, s).cdf == doctest::Approx(60.0 * 60.0 / (150.0 * 150.0)));
    CHECK(ordered_distance_dist(2, 150.0 / std::sqrt(2.0), 2, s).cdf == doctest::Approx(0.25));
    CHECK_THROWS_AS(ordered_distance_dist(0, 10.0, 3, s), InvalidArgument);
    CHECK_THROWS_AS(ordered_distance_dist(4, 10.0, 3, s), InvalidArgument);
}

TEST_CASE("ordered distance: monotone, endpoints, derivative and mixture identity")
{
    SectorGeometry s;
    for (int na : {1, 2, 15, 40})
        for (int k = 1; k <= na; ++k) {
            CHECK(ordered_distance_dist(k, 0.0, na, s).cdf == 0.0);
            CHECK(ordered_distance_dist(k, 150.0, na, s).cdf == doctest::Approx(1.0).epsilon(1e-12));
            double prev = 0.0;
            for (double r = 1.0; r < 150.0; r += 1.0) {
                const auto d = ordered_distance_dist(k, r, na, s);
                CHECK(d.cdf >= prev);
                prev = d.cdf;
                const double h = 1e-4;
                const double num = (ordered_distance_dist(k, r + h, na, s).cdf -
                                    ordered_distance_dist(k, r - h, na, s).cdf) / (2 * h);
                CHECK(std::abs(num - d.pdf) <= 1e-6 * std::max(d.pdf, 1e-3));
            }
        }
    for (int na : {3, 15}) {
        for (double r = 0.5; r < 150.0; r += 3.7) {
            double mix = 0.0;
            for (int k = 1; k <= na; ++k) mix += ordered_distance_dist(k, r, na, s).pdf;
            CHECK(std::abs(mix / na - unordered_distance_dist(r, s).pdf) < 1e-9);
        }
    }
}

TEST_CASE("binomial terms survive large N_a")
{
    SectorGeometry s;
    const int na = 10'000;
    const auto d = ordered_distance_dist(5000, 150.0 / std::sqrt(2.0), na, s);
    CHECK(std::isfinite(d.cdf));
    CHECK(std::isfinite(d.pdf));
    CHECK(d.cdf == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("conditional distance")
{
    SectorGeometry s;
    CHECK(conditional_distance_dist(Side::inner, 50.0, 100.0, s).cdf == doctest::Approx(0.25));
    CHECK(conditional_distance_dist(Side::inner, std::nextafter(100.0, 0.0), 100.0, s).cdf ==
          doctest::Approx(1.0));
    CHECK(conditional_distance_dist(Side::outer, 150.0, 100.0, s).cdf == doctest::Approx(1.0));
    CHECK_THROWS_AS(conditional_distance_dist(Side::inner, 120.0, 100.0, s), DomainError);
    CHECK_THROWS_AS(conditional_distance_dist(Side::outer, 50.0, 100.0, s), DomainError);
    CHECK_THROWS_AS(conditional_distance_dist(Side::inner, 0.0, 0.0, s), DegenerateSupport);
    CHECK_THROWS_AS(conditional_distance_dist(Side::outer, 150.0, 150.0, s), DegenerateSupport);
}

TEST_CASE("spatial angle distribution")
{
    SectorGeometry s;
    const double lim = 0.5 * std::sin(kPi / 3);
    CHECK(spatial_angle_dist(0.0, s).cdf == doctest::Approx(0.5));
    CHECK(spatial_angle_dist(lim, s).cdf == doctest::Approx(1.0));
    CHECK_THROWS_AS(spatial_angle_dist(lim * 1.01, s), DomainError);
    const auto q = integrate_adaptive([&](double v, std::span<double> o) { o[0] = spatial_angle_dist(v, s).pdf; },
                                      1, -lim, lim, {1e-12, 1e-12, 100000, 40});
    CHECK(std::abs(q.value[0] - 1.0) < 1e-9);
    // Analytic derivative of the CDF, (N_s / 2 pi) * 2 / sqrt(1 - 4 v^2).
    for (double v = -0.4; v <= 0.4; v += 0.01) {
        const double d = 3.0 / (2 * kPi) * 2.0 / std::sqrt(1.0 - 4.0 * v * v);
        CHECK(std::abs(spatial_angle_dist(v, s).pdf - d) < 1e-8);
    }
    SectorGeometry one;
    one.n_sectors = 1;
    CHECK_THROWS_AS(spatial_angle_dist(0.0, one), InvalidArgument);
}

TEST_CASE("user set sampling")
{
    SectorGeometry s;
    RandomStream rng(5, 0);
    CHECK_THROWS_AS(sample_user_set(s, 0, rng), InvalidArgument);
    for (int t = 0; t < 100; ++t) {
        const auto set = sample_user_set(s, 15, rng);
        CHECK(set.n_active() == 15);
        for (int i = 1; i < 15; ++i) CHECK(set.users[i - 1].r <= set.users[i].r);
    }
    // Radial KS and angular chi-square for single draws.
    const int n = 1'000'000;
    std::vector<double> rs(n);
    std::vector<int> bins(50, 0);
    for (int i = 0; i < n; ++i) {
        RandomStream r(9, i);
        const auto set = sample_user_set(s, 1, r);
        rs[i] = set.users[0].r;
        const double u = (set.users[0].theta + kPi / 3) / (2 * kPi / 3);
        ++bins[std::min(49, static_cast<int>(u * 50))];
    }
    CHECK(ks_distance(rs, [](double r) { return r * r / 22500.0; }) < 0.01);
    double chi2 = 0.0;
    for (int b : bins) chi2 += (b - n / 50.0) * (b - n / 50.0) / (n / 50.0);
    CHECK(chi2 < 74.92); // 99% quantile, 49 degrees of freedom
}

TEST_CASE("sorting ties by angle then index")
{
    std::vector<PolarPoint> pts{{0.2, 10.0}, {-0.1, 10.0}, {0.0, 5.0}};
    sort_by_distance(pts);
    CHECK(pts[0].r == 5.0);
    CHECK(pts[1].theta == -0.1);
    CHECK(pts[2].theta == 0.2);
}

TEST_CASE("conditional user sets")
{
    SectorGeometry s;
    RandomStream rng(3, 1);
    const auto one = sample_conditional_user_set(1, {0.1, 40.0}, 1, s, rng);
    CHECK(one.n_active() == 1);
    CHECK(one.users[0].r == 40.0);
    const auto set = sample_conditional_user_set(8, {0.0, 60.0}, 15, s, rng);
    CHECK(std::count_if(set.users.begin(), set.users.end(), [](auto& u) { return u.r < 60.0; }) == 7);
    CHECK(set.users[7].r == 60.0);
    CHECK_THROWS_AS(sample_conditional_user_set(2, {0.0, 0.0}, 5, s, rng), DegenerateSupport);

    std::vector<double> inner;
    for (int i = 0; i < 1'000'000; ++i) {
        RandomStream r(11, i);
        inner.push_back(sample_conditional_user_set(2, {0.0, 100.0}, 2, s, r).users[0].r);
    }
    CHECK(ks_distance(inner, [&](double r) { return conditional_distance_dist(Side::inner, r, 100.0, s).cdf; }) <
          0.01);
}
