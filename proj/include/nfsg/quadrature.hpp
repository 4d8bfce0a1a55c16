// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nfsg {

// Nodes and weights on [-1, 1].
struct QuadRule {
    std::vector<double> x;
    std::vector<double> w;
};

QuadRule gauss_legendre(int n);

// 15-point Kronrod extension of the 7-point Gauss rule. wg is zero on the
// Kronrod-only nodes.
struct KronrodRule {
    std::array<double, 15> x;
    std::array<double, 15> wk;
    std::array<double, 15> wg;
};

const KronrodRule& gauss_kronrod15();

// Vector-valued integrand: f(t, out) writes dim values into out.
using VectorIntegrand = std::function<void(double, std::span<double>)>;

struct AdaptiveOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    std::size_t max_evaluations = 1'000'000;
    int max_depth = 40;
};

struct AdaptiveResult {
    std::vector<double> value;
    double error = 0.0; // max-norm estimate
    std::size_t evaluations = 0;
    bool converged = true;
};

// Globally adaptive Gauss-Kronrod (7/15) on [a, b] with optional interior
// breakpoints. Error is the max over components of |K15 - G7| summed over
// panels; the panel with the largest error is bisected first.
AdaptiveResult integrate_adaptive(const VectorIntegrand& f, std::size_t dim, double a, double b,
                                  const AdaptiveOptions& opt, std::span<const double> breakpoints = {});

} // namespace nfsg
