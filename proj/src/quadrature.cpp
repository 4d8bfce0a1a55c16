// SPDX-License-Identifier: Apache-2.0
#include "nfsg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include "nfsg/errors.hpp"

namespace nfsg {

QuadRule gauss_legendre(int n)
{
    if (n < 1) throw InvalidArgument("Gauss-Legendre order must be >= 1");
    // legendre_p_zeros returns the nonnegative zeros in ascending order.
    const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
    QuadRule q;
    auto weight = [n](double x) {
        const double dp = boost::math::legendre_p_prime<double>(n, x);
        return 2.0 / ((1.0 - x * x) * dp * dp);
    };
    for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
        if (*it == 0.0) continue;
        q.x.push_back(-*it);
        q.w.push_back(weight(*it));
    }
    for (double z : zeros) {
        q.x.push_back(z);
        q.w.push_back(weight(z));
    }
    return q;
}

const KronrodRule& gauss_kronrod15()
{
    static const KronrodRule rule = [] {
        using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
        using g7 = boost::math::quadrature::gauss<double, 7>;
        const auto& ax = gk::abscissa();
        const auto& wk = gk::weights();
        const auto& wg = g7::weights();
        KronrodRule r{};
        r.x[7] = 0.0;
        r.wk[7] = wk[0];
        r.wg[7] = wg[0];
        for (int i = 1; i < 8; ++i) {
            // Even Kronrod indices carry the Gauss nodes (7-point rule has a centre node).
            const double gw = (i % 2 == 0) ? wg[i / 2] : 0.0;
            r.x[7 - i] = -ax[i];
            r.x[7 + i] = ax[i];
            r.wk[7 - i] = r.wk[7 + i] = wk[i];
            r.wg[7 - i] = r.wg[7 + i] = gw;
        }
        return r;
    }();
    return rule;
}

namespace {

struct Panel {
    double a, b;
    std::vector<double> value;
    double error;
    int depth;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel apply_gk15(const VectorIntegrand& f, std::size_t dim, double a, double b, int depth,
                 std::vector<double>& scratch)
{
    const KronrodRule& r = gauss_kronrod15();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    Panel p{a, b, std::vector<double>(dim, 0.0), 0.0, depth};
    std::vector<double> gauss(dim, 0.0);
    scratch.resize(dim);
    for (int i = 0; i < 15; ++i) {
        f(c + h * r.x[i], scratch);
        for (std::size_t k = 0; k < dim; ++k) {
            p.value[k] += r.wk[i] * scratch[k];
            gauss[k] += r.wg[i] * scratch[k];
        }
    }
    for (std::size_t k = 0; k < dim; ++k) {
        p.value[k] *= h;
        p.error = std::max(p.error, std::abs(p.value[k] - h * gauss[k]));
    }
    return p;
}

} // namespace

AdaptiveResult integrate_adaptive(const VectorIntegrand& f, std::size_t dim, double a, double b,
                                  const AdaptiveOptions& opt, std::span<const double> breakpoints)
{
    std::vector<double> edges{a};
    for (double x : breakpoints)
        if (x > a && x < b) edges.push_back(x);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::vector<double> scratch;
    std::priority_queue<Panel> heap;
    AdaptiveResult res;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        heap.push(apply_gk15(f, dim, edges[i], edges[i + 1], 0, scratch));
        res.evaluations += 15;
    }

    auto totals = [&](std::vector<double>& value, double& err) {
        value.assign(dim, 0.0);
        err = 0.0;
        auto copy = heap;
        while (!copy.empty()) {
            const Panel& p = copy.top();
            for (std::size_t k = 0; k < dim; ++k) value[k] += p.value[k];
            err += p.error;
            copy.pop();
        }
    };

    // Running totals; recomputed exactly at the end to avoid drift.
    std::vector<double> tot;
    double err_sum = 0.0;
    totals(tot, err_sum);
    auto scale = [&] {
        double s = 0.0;
        for (double x : tot) s = std::max(s, std::abs(x));
        return s;
    };
    while (!heap.empty()) {
        if (err_sum <= std::max(opt.abs_tol, opt.rel_tol * scale())) break;
        if (res.evaluations + 30 > opt.max_evaluations) {
            res.converged = false;
            break;
        }
        Panel worst = heap.top();
        if (worst.depth >= opt.max_depth) {
            res.converged = false;
            break;
        }
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = apply_gk15(f, dim, worst.a, mid, worst.depth + 1, scratch);
        Panel right = apply_gk15(f, dim, mid, worst.b, worst.depth + 1, scratch);
        res.evaluations += 30;
        err_sum += left.error + right.error - worst.error;
        for (std::size_t k = 0; k < dim; ++k) tot[k] += left.value[k] + right.value[k] - worst.value[k];
        heap.push(std::move(left));
        heap.push(std::move(right));
    }
    totals(res.value, res.error);
    return res;
}

} // namespace nfsg
