#include <doctest.h>

#include <cmath>
#include <vector>

#include "nfsg/analysis.hpp"
#include "nfsg/errors.hpp"
#include "nfsg/exact_interference.hpp"
#include "nfsg/montecarlo.hpp"

using namespace nfsg;
using cd = std::complex<double>;

namespace {

double db(double x) { return std::pow(10.0, x / 10.0); }

} // namespace

TEST_CASE("gain table of a uniform law")
{
    // Uniform gains on [0.2, 0.4] as many equal-weight samples.
    GainSamples s;
    const int n = 200'000;
    for (int i = 0; i < n; ++i) {
        s.gain.push_back(0.2 + 0.2 * (i + 0.5) / n);
        s.weight.push_back(1.0 / n);
    }
    const GainTable t(s, 1e-9, 1.01);
    CHECK(t.mass() == doctest::Approx(1.0));
    // The ends fall inside 1 % bins, which caps the resolution once t times the
    // bin width nears 1.
    for (double f : {0.0, 1.0, 10.0, 100.0}) {
        const cd exact = f == 0.0 ? cd(1.0) : (std::exp(cd(0.0, 0.4 * f)) - std::exp(cd(0.0, 0.2 * f))) /
                                                  cd(0.0, 0.2 * f);
        CHECK(std::abs(t.characteristic(f) - exact) < 1e-3);
    }
}

TEST_CASE("gain table with bin-aligned support")
{
    // Uniform on [0.2 * 1.01^2, 0.2 * 1.01^71]: every bin is full, so only the
    // in-bin linear density is approximated.
    const double lo = 0.2 * std::pow(1.01, 2), hi = 0.2 * std::pow(1.01, 71);
    GainSamples s;
    const int n = 200'000;
    for (int i = 0; i < n; ++i) {
        s.gain.push_back(lo + (hi - lo) * (i + 0.5) / n);
        s.weight.push_back(1.0 / n);
    }
    const GainTable t(s, 0.2, 1.01);
    for (double f : {1.0, 100.0, 1e3, 1e4}) {
        const cd exact = (std::exp(cd(0.0, hi * f)) - std::exp(cd(0.0, lo * f))) / cd(0.0, (hi - lo) * f);
        CHECK(std::abs(t.characteristic(f) - exact) < 5e-5);
    }
}

TEST_CASE("exact model validation")
{
    ScenarioConfig sc;
    CHECK_THROWS_AS(ExactInterference(sc, {0.0, 0.0}, true, false), DegenerateSupport);
    CHECK_THROWS_AS(ExactInterference(sc, {0.0, 150.0}, false, true), DegenerateSupport);
    CHECK_THROWS_AS(ExactInterference(sc, {1.2, 30.0}, true, true), DomainError);
    CHECK(laplace_exact(0.0, 0.0, 30.0, 3, sc) == cd(1.0, 0.0));
}

TEST_CASE("exact Laplace transform against conditional Monte Carlo")
{
    ScenarioConfig sc;
    const PolarPoint anchor{0.0, 30.0};
    const ExactInterference model(sc, anchor, true, true);
    CHECK(model.table(Side::inner).mass() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(model.table(Side::outer).mass() == doctest::Approx(1.0).epsilon(1e-6));
    const cd l = laplace_exact(1.0, model, 3, sc.n_active);

    TrialPlan plan;
    plan.n_trials = 1'000'000;
    plan.root_seed = 17;
    plan.scenario = sc;
    const auto interference = sample_conditional_interference(plan, 3, anchor);
    double sum = 0.0, sum2 = 0.0;
    for (double x : interference) {
        const double e = std::exp(-x);
        sum += e;
        sum2 += e * e;
    }
    const double n = static_cast<double>(interference.size());
    const double mean = sum / n, se = std::sqrt((sum2 / n - mean * mean) / (n - 1));
    CHECK(std::abs(l.imag()) < 1e-12);
    CHECK(std::abs(l.real() - mean) < 3 * se);
}

TEST_CASE("exact conditional coverage inside the Monte Carlo 99% interval")
{
    ScenarioConfig sc;
    const std::vector<double> taus{db(5), db(10), db(20)};
    struct Case {
        int kappa;
        PolarPoint anchor;
    };
    const std::vector<Case> cases{
        {3, {0.0, 30.0}}, {1, {0.4, 20.0}}, {8, {-0.6, 70.0}}, {12, {0.9, 110.0}}, {15, {-0.2, 140.0}}};
    for (const auto& c : cases) {
        CAPTURE(c.kappa);
        const auto cp = conditional_cp_curve(taus, c.anchor.theta, c.anchor.r, c.kappa, sc, Mode::exact);
        TrialPlan plan;
        plan.n_trials = 100'000;
        plan.root_seed = 3;
        plan.scenario = sc;
        const auto mc = estimate_conditional_cp(plan, c.kappa, c.anchor, taus);
        for (std::size_t k = 0; k < taus.size(); ++k) {
            CAPTURE(k);
            CHECK(std::abs(cp[k] - mc[k].value) <= 2.576 * mc[k].std_error + 1e-3);
            if (c.kappa == 3 && k == 1) CHECK(std::abs(cp[k] - mc[k].value) < 0.02);
        }
    }
}
