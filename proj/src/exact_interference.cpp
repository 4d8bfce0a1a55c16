// SPDX-License-Identifier: Apache-2.0
#include "nfsg/exact_interference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "nfsg/errors.hpp"
#include "nfsg/quadrature.hpp"

namespace nfsg {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Probe points for the refinement test: real s for the bulk of the gain
// distribution, imaginary s for its oscillatory transform.
const std::array<std::complex<double>, 5> kProbes = {
    std::complex<double>(1.0, 0.0), std::complex<double>(10.0, 0.0), std::complex<double>(100.0, 0.0),
    std::complex<double>(0.0, -10.0), std::complex<double>(0.0, -100.0)};

std::complex<double> node_laplace(const GainSamples& gs, std::complex<double> s)
{
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t i = 0; i < gs.gain.size(); ++i) acc += gs.weight[i] * std::exp(-s * gs.gain[i]);
    return acc;
}

void append_panel(const QuadRule& rule, double a, double b, std::vector<double>& x, std::vector<double>& w)
{
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        x.push_back(c + h * rule.x[i]);
        w.push_back(h * rule.w[i]);
    }
}

} // namespace

GainTable::GainTable(const GainSamples& samples, double floor, double ratio)
{
    if (!(floor > 0.0) || !(ratio > 1.0)) throw InvalidArgument("gain table needs floor > 0 and ratio > 1");
    const double lr = std::log(ratio);
    // Bin 0 is [0, floor]; bin k >= 1 is [floor·ratio^(k-1), floor·ratio^k].
    auto edge = [&](long k) { return k == 0 ? 0.0 : floor * std::exp((k - 1) * lr); };
    std::vector<long> index(samples.gain.size());
    long kmax = 0;
    for (std::size_t i = 0; i < samples.gain.size(); ++i) {
        const double g = samples.gain[i];
        long k = g <= floor ? 0 : static_cast<long>(std::floor(std::log(g / floor) / lr)) + 1;
        index[i] = k;
        kmax = std::max(kmax, k);
    }
    std::vector<double> mass(kmax + 1, 0.0), moment(kmax + 1, 0.0);
    for (std::size_t i = 0; i < samples.gain.size(); ++i) {
        mass[index[i]] += samples.weight[i];
        moment[index[i]] += samples.weight[i] * samples.gain[i];
    }
    for (long k = 0; k <= kmax; ++k) {
        if (mass[k] <= 0.0) continue;
        const double a = edge(k), b = edge(k + 1);
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        // Linear density m/h·(1 + c·x/half) on x in [-half, half] has mean
        // offset c·half/3; |c| <= 1 keeps it nonnegative.
        const double offset = moment[k] / mass[k] - mid;
        const double c = std::clamp(3.0 * offset / half, -1.0, 1.0);
        mid_.push_back(mid);
        half_.push_back(half);
        m_.push_back(mass[k]);
        slope_.push_back(c);
        mass_ += mass[k];
    }
}

std::complex<double> GainTable::characteristic(double t) const
{
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < mid_.size(); ++k) {
        const double y = t * half_[k];
        double sinc, odd; // sin(y)/y and (sin y - y cos y)/y^2
        if (std::abs(y) < 1e-3) {
            const double y2 = y * y;
            sinc = 1.0 - y2 / 6.0;
            odd = y * (1.0 / 3.0 - y2 / 30.0);
        } else {
            const double sy = std::sin(y), cy = std::cos(y);
            sinc = sy / y;
            odd = (sy - y * cy) / (y * y);
        }
        const double ph = t * mid_[k];
        const double cr = std::cos(ph), ci = std::sin(ph);
        // m e^{j t mid} (sinc + j·c·odd)
        const double ar = m_[k] * sinc, ai = m_[k] * slope_[k] * odd;
        re += cr * ar - ci * ai;
        im += cr * ai + ci * ar;
    }
    return {re, im};
}

ExactInterference::ExactInterference(const ScenarioConfig& scenario, const PolarPoint& anchor,
                                     bool need_inner, bool need_outer, const PatternQuadrature& pq)
    : scenario_(scenario), anchor_(anchor), pq_(pq)
{
    scenario_.validate();
    if (scenario_.sector.n_sectors < 2)
        throw InvalidArgument("exact interference quadrature needs n_sectors >= 2");
    if (!in_sector(anchor, scenario_.sector)) throw DomainError("anchor outside the sector");
    const double rc = scenario_.sector.cell_radius;
    if (need_inner && !(anchor.r > 0.0)) throw DegenerateSupport("inner interferers with anchor at r = 0");
    if (need_outer && !(anchor.r < rc)) throw DegenerateSupport("outer interferers with anchor at r = R_c");
    inner_ = need_inner;
    outer_ = need_outer;
    if (inner_) {
        in_ = refine(Side::inner);
        in_table_ = GainTable(in_, pq_.bin_floor, pq_.bin_ratio);
    }
    if (outer_) {
        out_ = refine(Side::outer);
        out_table_ = GainTable(out_, pq_.bin_floor, pq_.bin_ratio);
    }
}

bool ExactInterference::has_side(Side side) const { return side == Side::inner ? inner_ : outer_; }

const GainSamples& ExactInterference::samples(Side side) const
{
    if (!has_side(side)) throw InvalidArgument("requested interferer side was not built");
    return side == Side::inner ? in_ : out_;
}

const GainTable& ExactInterference::table(Side side) const
{
    if (!has_side(side)) throw InvalidArgument("requested interferer side was not built");
    return side == Side::inner ? in_table_ : out_table_;
}

std::complex<double> ExactInterference::laplace_side(Side side, std::complex<double> s) const
{
    return node_laplace(samples(side), s);
}

GainSamples ExactInterference::build(Side side, int theta_level, int r_level) const
{
    const ArrayConfig& arr = scenario_.array;
    const SectorGeometry& sec = scenario_.sector;
    const int n = arr.n_antennas;
    const double lam = arr.wavelength();
    const double d = arr.spacing();
    const double rc = sec.cell_radius;
    const double hw = sec.half_width();
    const double rk = anchor_.r;

    // Angular panels: uniform in spatial angle around the anchor, half a
    // null-to-null lobe wide at level 0, mapped back to theta.
    const double vmax = 0.5 * std::sin(hw);
    const double vk = 0.5 * std::sin(anchor_.theta);
    const double hv = 1.0 / (2.0 * n) / std::ldexp(1.0, theta_level);
    std::vector<double> tedges{-hw};
    const long jlo = static_cast<long>(std::ceil((-vmax - vk) / hv));
    const long jhi = static_cast<long>(std::floor((vmax - vk) / hv));
    for (long j = jlo; j <= jhi; ++j) {
        const double v = vk + j * hv;
        if (v > -vmax && v < vmax) tedges.push_back(std::asin(2.0 * v));
    }
    tedges.push_back(hw);
    std::sort(tedges.begin(), tedges.end());
    tedges.erase(std::unique(tedges.begin(), tedges.end()), tedges.end());

    const QuadRule qt = gauss_legendre(pq_.theta_points);
    std::vector<double> th, tw;
    for (std::size_t i = 0; i + 1 < tedges.size(); ++i) append_panel(qt, tedges[i], tedges[i + 1], th, tw);
    const double angle_density = sec.n_sectors / (2.0 * kPi);

    // Radial panels in u = 1/r. Edge defocus phase is kb·|u - u_k|; uniform
    // panels up to near_phase, then geometric ones.
    const double nbar = 0.5 * (n - 1);
    const double kb = kPi / lam * d * d * nbar * nbar;
    const double uk = 1.0 / rk;
    const double du = pq_.panel_phase / kb / std::ldexp(1.0, r_level);
    const double q = std::pow(1.25, 1.0 / std::ldexp(1.0, r_level));
    const double rc2 = rc * rc;
    const double norm = side == Side::inner ? rk * rk / rc2 : 1.0 - rk * rk / rc2;

    std::vector<double> ru, rw; // radius and weight including the radial density
    const QuadRule qr = gauss_legendre(pq_.r_points);
    auto add_u_panel = [&](double u0, double u1) {
        std::vector<double> x, w;
        append_panel(qr, u0, u1, x, w);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = 1.0 / x[i];
            ru.push_back(r);
            rw.push_back(w[i] * 2.0 * r / (rc2 * norm) * r * r);
        }
    };
    auto add_uniform = [&](double u0, double u1, const std::vector<double>& cuts) {
        std::vector<double> e{u0};
        for (double c : cuts)
            if (c > u0 && c < u1) e.push_back(c);
        e.push_back(u1);
        std::sort(e.begin(), e.end());
        for (std::size_t i = 0; i + 1 < e.size(); ++i) {
            const int m = std::max(1, static_cast<int>(std::ceil((e[i + 1] - e[i]) / du)));
            const double h = (e[i + 1] - e[i]) / m;
            for (int j = 0; j < m; ++j) {
                // For small arrays du is wide and the r^3 Jacobian varies a lot
                // across one panel, so panels are also capped at ratio q.
                double a = e[i] + j * h;
                const double b = j + 1 == m ? e[i + 1] : e[i] + (j + 1) * h;
                while (a * q < b) {
                    add_u_panel(a, a * q);
                    a *= q;
                }
                add_u_panel(a, b);
            }
        }
    };

    const BeamDepthInterval bd = beam_depth(arr, anchor_.theta, rk, scenario_.mlap.beta_gamma);
    std::vector<double> cuts{1.0 / bd.d_left};
    if (bd.d_right) cuts.push_back(1.0 / *bd.d_right);
    const double u_near = pq_.near_phase / kb;

    if (side == Side::inner) {
        const double u_sw = uk + u_near;
        add_uniform(uk, u_sw, cuts);
        // Geometric panels in defocus phase out to r = 1e-3 r_k, then one panel in r.
        const double u_end = 1e3 * uk;
        double a = u_sw;
        while (a < u_end) {
            const double b = std::min(u_end, uk + (a - uk) * q);
            add_u_panel(a, b);
            a = b;
        }
        std::vector<double> x, w;
        append_panel(qr, 0.0, 1.0 / u_end, x, w);
        for (std::size_t i = 0; i < x.size(); ++i) {
            ru.push_back(x[i]);
            rw.push_back(w[i] * 2.0 * x[i] / (rc2 * norm));
        }
    } else {
        const double u_lo = 1.0 / rc;
        const double u_sw = std::max(u_lo, uk - u_near);
        add_uniform(u_sw, uk, cuts);
        double b = u_sw;
        while (b > u_lo) {
            const double a = std::max(u_lo, uk - (uk - b) * q);
            add_u_panel(a, b);
            b = a;
        }
    }

    const std::size_t total = th.size() * ru.size();
    if (total > pq_.max_nodes)
        throw NumericFailure("exact-pattern quadrature needs " + std::to_string(total) +
                                 " nodes, over the budget",
                             0.0, 1.0);

    GainSamples gs;
    gs.theta_level = theta_level;
    gs.r_level = r_level;
    gs.gain.resize(total);
    gs.weight.resize(total);
    const double ck = std::cos(anchor_.theta);
    const double sk = std::sin(anchor_.theta);
    const double a_scale = 2.0 * kPi / lam * d;
    const double b_scale = kPi / lam * d * d;
    const double b0 = b_scale * ck * ck / rk;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < th.size(); ++i) {
        const double a = a_scale * (std::sin(th[i]) - sk);
        const double c = std::cos(th[i]);
        const double bc = b_scale * c * c;
        const double wt = tw[i] * angle_density;
        for (std::size_t j = 0; j < ru.size(); ++j, ++idx) {
            gs.gain[idx] = fresnel_sum_gain(n, a, b0 - bc / ru[j]);
            gs.weight[idx] = wt * rw[j];
        }
    }
    // The weights integrate a probability density; remove the small
    // quadrature defect so that E[exp(-0 G)] is exactly one.
    const double total_weight = std::accumulate(gs.weight.begin(), gs.weight.end(), 0.0);
    for (double& w : gs.weight) w /= total_weight;
    return gs;
}

GainSamples ExactInterference::refine(Side side) const
{
    auto probes = [](const GainSamples& gs) {
        std::array<std::complex<double>, kProbes.size()> v;
        for (std::size_t i = 0; i < kProbes.size(); ++i) v[i] = node_laplace(gs, kProbes[i]);
        return v;
    };
    auto change = [](const auto& x, const auto& y) {
        double m = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
        return m;
    };

    GainSamples cur = build(side, 0, 0);
    auto pc = probes(cur);
    double last = 0.0;
    int lt = 0, lr = 0;
    bool done_t = false, done_r = false;
    while (!(done_t && done_r)) {
        if (!done_t) {
            GainSamples next = build(side, lt + 1, lr);
            auto pn = probes(next);
            last = change(pc, pn);
            cur = std::move(next);
            pc = pn;
            ++lt;
            done_t = last < pq_.probe_tol;
            if (!done_t && lt >= pq_.max_refinements)
                throw NumericFailure("angular refinement of the exact pattern did not settle", pc[0].real(), last);
        }
        if (!done_r) {
            GainSamples next = build(side, lt, lr + 1);
            auto pn = probes(next);
            last = change(pc, pn);
            cur = std::move(next);
            pc = pn;
            ++lr;
            done_r = last < pq_.probe_tol;
            if (!done_r && lr >= pq_.max_refinements)
                throw NumericFailure("radial refinement of the exact pattern did not settle", pc[0].real(), last);
            // A radial change can unsettle the angular axis.
            if (!done_r) done_t = false;
        }
    }
    return cur;
}

} // namespace nfsg
