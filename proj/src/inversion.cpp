// SPDX-License-Identifier: Apache-2.0
#include "nfsg/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nfsg/errors.hpp"
#include "nfsg/quadrature.hpp"

namespace nfsg {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSmallT = 1e-8;
constexpr int kMaxBisection = 14;

class Integrator {
public:
    Integrator(const CharacteristicBatch& phi, const GilPelaezProblem& pb, const InversionConfig& cfg)
        : phi_(phi), pb_(pb), cfg_(cfg), nd_(pb.n_dist), nw_(pb.thresholds.size()),
          na_(pb.atom_locations.size()), m0_(nd_, 0.0), ma_(pb.atom_masses), ea_(na_),
          cf_(nd_), integral_(nd_ * nw_, 0.0), node_vals_(15, std::vector<double>(nd_ * nw_)),
          gauss_(nd_ * nw_), kron_(nd_ * nw_), cos_(nw_), sin_(nw_)
    {
        if (!pb.atom_at_zero.empty()) m0_ = pb.atom_at_zero;
    }

    GilPelaezResult run()
    {
        const double w_max = *std::max_element(pb_.thresholds.begin(), pb_.thresholds.end());
        const double w_min = *std::min_element(pb_.thresholds.begin(), pb_.thresholds.end());
        const double omega = std::max(w_max, pb_.frequency_hint);
        const double sub_len = 2.0 / omega;

        double lo = 0.0, hi = std::min(1.0, cfg_.t_max);
        while (lo < cfg_.t_max) {
            envelope_ = 0.0;
            const int n_sub = std::max(1, static_cast<int>(std::ceil((hi - lo) / sub_len)));
            const double h = (hi - lo) / n_sub;
            const double tol = kPi * cfg_.rel_tol * h / (1.0 + lo);
            for (int i = 0; i < n_sub; ++i) {
                const double a = lo + i * h;
                subpanel(a, (i + 1 == n_sub) ? hi : a + h, tol, 0);
            }
            reached_ = hi;
            if (envelope_ / (kPi * hi * w_min) < cfg_.rel_tol) break;
            lo = hi;
            hi = std::min(2.0 * hi, cfg_.t_max);
        }

        GilPelaezResult res;
        res.cdf.resize(nd_ * nw_);
        for (std::size_t d = 0; d < nd_; ++d)
            for (std::size_t k = 0; k < nw_; ++k)
                res.cdf[d * nw_ + k] = std::clamp(cdf_at(d, k), 0.0, 1.0);
        res.error_estimate = error_ / kPi;
        res.t_reached = reached_;
        res.nodes = nodes_;
        return res;
    }

private:
    // Known masses as steps (half at the jump), the rest from the integral.
    double cdf_at(std::size_t d, std::size_t k) const
    {
        const double w = pb_.thresholds[k];
        double f = 0.5 * (1.0 + m0_[d]);
        for (std::size_t a = 0; a < na_; ++a) {
            const double x = pb_.atom_locations[a], m = ma_[d * na_ + a];
            f += x < w ? 0.5 * m : (x == w ? 0.0 : -0.5 * m);
        }
        return f - integral_[d * nw_ + k] / kPi;
    }

    // Im{exp(-j t w_k) (phi_d(t) - known masses)} / t for all (d, k).
    void integrand(double t, std::vector<double>& out)
    {
        const bool tiny = t < kSmallT;
        const double te = tiny ? kSmallT : t;
        phi_(te, cf_);
        ++nodes_;
        for (std::size_t k = 0; k < nw_; ++k) {
            const double tw = te * pb_.thresholds[k];
            cos_[k] = std::cos(tw);
            sin_[k] = std::sin(tw);
        }
        for (std::size_t a = 0; a < na_; ++a) ea_[a] = std::polar(1.0, te * pb_.atom_locations[a]);
        for (std::size_t d = 0; d < nd_; ++d) {
            std::complex<double> psi = cf_[d] - m0_[d];
            for (std::size_t a = 0; a < na_; ++a) psi -= ma_[d * na_ + a] * ea_[a];
            envelope_ = std::max(envelope_, std::abs(psi));
            for (std::size_t k = 0; k < nw_; ++k)
                out[d * nw_ + k] = (cos_[k] * psi.imag() - sin_[k] * psi.real()) / te;
        }
    }

    void subpanel(double a, double b, double tol, int depth)
    {
        if (nodes_ + 15 > cfg_.max_nodes) {
            const double est = cdf_at(0, 0);
            throw NumericFailure("Gil-Pelaez inversion exceeded its node budget at t = " + std::to_string(a),
                                 std::clamp(est, 0.0, 1.0), error_ / kPi);
        }
        const KronrodRule& r = gauss_kronrod15();
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        std::fill(gauss_.begin(), gauss_.end(), 0.0);
        std::fill(kron_.begin(), kron_.end(), 0.0);
        for (int i = 0; i < 15; ++i) {
            integrand(c + h * r.x[i], node_vals_[i]);
            const auto& v = node_vals_[i];
            for (std::size_t j = 0; j < v.size(); ++j) {
                kron_[j] += r.wk[i] * v[j];
                gauss_[j] += r.wg[i] * v[j];
            }
        }
        double err = 0.0;
        for (std::size_t j = 0; j < kron_.size(); ++j) err = std::max(err, h * std::abs(kron_[j] - gauss_[j]));
        if (err <= tol || depth >= kMaxBisection) {
            for (std::size_t j = 0; j < kron_.size(); ++j) integral_[j] += h * kron_[j];
            error_ += err;
            return;
        }
        subpanel(a, c, 0.5 * tol, depth + 1);
        subpanel(c, b, 0.5 * tol, depth + 1);
    }

    const CharacteristicBatch& phi_;
    const GilPelaezProblem& pb_;
    const InversionConfig& cfg_;
    std::size_t nd_, nw_;
    std::size_t na_;
    std::vector<double> m0_, ma_;
    std::vector<std::complex<double>> ea_;
    std::vector<std::complex<double>> cf_;
    std::vector<double> integral_;
    std::vector<std::vector<double>> node_vals_;
    std::vector<double> gauss_, kron_;
    std::vector<double> cos_, sin_;
    double envelope_ = 0.0;
    double error_ = 0.0;
    double reached_ = 0.0;
    std::size_t nodes_ = 0;
};

} // namespace

void InversionConfig::validate() const
{
    if (!(t_max > 0.0)) throw InvalidArgument("inversion t_max must be > 0");
    if (!(rel_tol > 0.0)) throw InvalidArgument("inversion rel_tol must be > 0");
    if (max_nodes < 15) throw InvalidArgument("inversion max_nodes must be >= 15");
}

GilPelaezResult gil_pelaez_cdf(const CharacteristicBatch& phi, const GilPelaezProblem& problem,
                               const InversionConfig& cfg)
{
    cfg.validate();
    if (problem.n_dist == 0 || problem.thresholds.empty()) return {};
    for (double w : problem.thresholds)
        if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("Gil-Pelaez thresholds must be finite and > 0");
    if (!problem.atom_at_zero.empty() && problem.atom_at_zero.size() != problem.n_dist)
        throw InvalidArgument("atom_at_zero must have one entry per distribution");
    if (problem.atom_masses.size() != problem.n_dist * problem.atom_locations.size())
        throw InvalidArgument("atom_masses must hold one mass per (distribution, location)");
    for (double x : problem.atom_locations)
        if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("atom locations must be finite and > 0");
    Integrator it(phi, problem, cfg);
    return it.run();
}

} // namespace nfsg
