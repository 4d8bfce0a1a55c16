// SPDX-License-Identifier: Apache-2.0
#include "nfsg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nfsg/errors.hpp"

namespace nfsg {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::complex<double> ipow(std::complex<double> z, int n)
{
    std::complex<double> r(1.0, 0.0);
    while (n > 0) {
        if (n & 1) r *= z;
        z *= z;
        n >>= 1;
    }
    return r;
}

double ipow(double x, int n)
{
    double r = 1.0;
    while (n > 0) {
        if (n & 1) r *= x;
        x *= x;
        n >>= 1;
    }
    return r;
}

void check_anchor(double theta_k, double r_k, int kappa, const ScenarioConfig& sc)
{
    if (kappa < 1 || kappa > sc.n_active) throw InvalidArgument("kappa must lie in [1, n_active]");
    if (!in_sector({theta_k, r_k}, sc.sector)) throw DomainError("anchor outside the sector");
    if (kappa > 1 && !(r_k > 0.0)) throw DegenerateSupport("inner interferers with anchor at r = 0");
    if (kappa < sc.n_active && !(r_k < sc.sector.cell_radius))
        throw DegenerateSupport("outer interferers with anchor at r = R_c");
}

// Level probabilities for an anchor, both sides filled whenever their support
// is nonempty, regardless of kappa.
LevelProbabilities anchor_probabilities(const MlapLevels& lv, const ScenarioConfig& sc)
{
    const int n = sc.array.n_antennas;
    const int m = lv.n_levels();
    const double vk = 0.5 * std::sin(lv.focal.theta);
    const double rk = lv.focal.r;
    const double rc = sc.sector.cell_radius;
    auto F = [&](double v) { return spatial_angle_cdf_clamped(v, sc.sector); };

    std::vector<double> ang(m + 1, 0.0);
    ang[1] = F(vk + 1.0 / n) - F(vk - 1.0 / n);
    for (int i = 2; i <= m; ++i)
        ang[i] = (F(vk + double(i) / n) - F(vk + double(i - 1) / n)) +
                 (F(vk - double(i - 1) / n) - F(vk - double(i) / n));

    auto side = [&](double a, double b) {
        // Radial CDF of r^2 uniform on [a^2, b^2], clamped.
        std::vector<double> p(m + 2, 0.0);
        if (!(b > a)) {
            p[m + 1] = 1.0;
            return p;
        }
        auto G = [&](double x) { return std::clamp((x * x - a * a) / (b * b - a * a), 0.0, 1.0); };
        const double dl = lv.depth.d_left;
        if (lv.depth.d_right) {
            const double dr = *lv.depth.d_right;
            p[0] = ang[1] * (1.0 - G(dr));
            p[1] = ang[1] * (G(dr) - G(dl));
        } else {
            p[1] = ang[1] * (1.0 - G(dl));
        }
        double sum = p[0] + p[1];
        for (int i = 2; i <= m; ++i) {
            p[i] = ang[i];
            sum += p[i];
        }
        p[m + 1] = std::max(0.0, 1.0 - sum);
        return p;
    };
    return {side(0.0, rk), side(rk, rc)};
}

double min_level(const MlapLevels& lv)
{
    double g = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= lv.n_levels(); ++i) g = std::min(g, lv.gains[i]);
    return g;
}

double zero_atom(const LevelProbabilities& p, int kappa, int n_active)
{
    return ipow(p.p_in.back(), kappa - 1) * ipow(p.p_out.back(), n_active - kappa);
}

// Masses of exactly one interferer at level i (i = 0..M) and the rest at
// zero, appended to out.
void single_atoms(const LevelProbabilities& p, const MlapLevels& lv, int kappa, int n_active,
                  std::vector<double>& out)
{
    const double qi = p.p_in.back(), qo = p.p_out.back();
    const int ni = kappa - 1, no = n_active - kappa;
    const double from_in = ni > 0 ? ni * ipow(qi, ni - 1) * ipow(qo, no) : 0.0;
    const double from_out = no > 0 ? no * ipow(qi, ni) * ipow(qo, no - 1) : 0.0;
    for (int i = 0; i <= lv.n_levels(); ++i) out.push_back(from_in * p.p_in[i] + from_out * p.p_out[i]);
}

double upper_bound(double w, const LevelProbabilities& p, const MlapLevels& lv, int kappa, int n_active)
{
    double in = 0.0, out = 0.0;
    for (std::size_t i = 0; i < lv.gains.size(); ++i)
        if (lv.gains[i] < w) {
            in += p.p_in[i];
            out += p.p_out[i];
        }
    return std::clamp(ipow(in, kappa - 1) * ipow(out, n_active - kappa), 0.0, 1.0);
}

// Conditional CDFs P{I < w} for several kappas at one anchor. cp[j * nw + k].
std::vector<double> anchor_cdfs(const std::vector<double>& w, double theta_k, double r_k,
                                const std::vector<int>& kappas, const ScenarioConfig& sc, Mode mode,
                                const AnalysisOptions& opt)
{
    const std::size_t nw = w.size(), nk = kappas.size();
    const int na = sc.n_active;
    std::vector<double> cp(nk * nw, 0.0);
    if (nk == 0 || nw == 0) return cp;

    if (mode == Mode::exact) {
        bool inner = false, outer = false;
        for (int k : kappas) {
            inner = inner || k > 1;
            outer = outer || k < na;
        }
        const ExactInterference model(sc, {theta_k, r_k}, inner, outer, opt.pattern);
        std::vector<double> pos;
        for (double x : w)
            if (x > 0.0) pos.push_back(x);
        if (pos.empty()) return cp;
        CharacteristicBatch phi = [&](double t, std::span<std::complex<double>> out) {
            const std::complex<double> ci = inner ? model.table(Side::inner).characteristic(t) : 1.0;
            const std::complex<double> co = outer ? model.table(Side::outer).characteristic(t) : 1.0;
            for (std::size_t j = 0; j < nk; ++j) out[j] = ipow(ci, kappas[j] - 1) * ipow(co, na - kappas[j]);
        };
        GilPelaezProblem pb;
        pb.n_dist = nk;
        pb.thresholds = pos;
        // Without interferers the interference is exactly zero.
        pb.atom_at_zero.assign(nk, na == 1 ? 1.0 : 0.0);
        const GilPelaezResult res = gil_pelaez_cdf(phi, pb, opt.inversion);
        for (std::size_t j = 0; j < nk; ++j) {
            std::size_t q = 0;
            for (std::size_t k = 0; k < nw; ++k)
                if (w[k] > 0.0) cp[j * nw + k] = res.cdf[j * pos.size() + q++];
        }
        return cp;
    }

    const MlapLevels lv = mlap_levels(sc.array, sc.mlap, {theta_k, r_k});
    const LevelProbabilities p = anchor_probabilities(lv, sc);
    if (mode == Mode::upper) {
        for (std::size_t j = 0; j < nk; ++j)
            for (std::size_t k = 0; k < nw; ++k)
                cp[j * nw + k] = w[k] > 0.0 ? upper_bound(w[k], p, lv, kappas[j], na) : 0.0;
        return cp;
    }

    // P{I < w} = P{every gain < w} * P{I < w | every gain < w}. The first factor
    // is the upper bound; the second inverts the law restricted to the levels
    // below w, so the levels at or above w never enter the inversion. Thresholds
    // sharing the same set of admissible levels share one batch.
    const std::size_t nl = lv.gains.size();
    std::vector<std::size_t> order;
    for (std::size_t k = 0; k < nw; ++k)
        if (w[k] > 0.0) order.push_back(k);
    auto admissible = [&](double x) {
        std::vector<bool> a(nl);
        for (std::size_t i = 0; i < nl; ++i) a[i] = lv.gains[i] < x;
        return a;
    };
    while (!order.empty()) {
        const std::vector<bool> mask = admissible(w[order.front()]);
        std::vector<std::size_t> group, rest;
        for (std::size_t k : order) (admissible(w[k]) == mask ? group : rest).push_back(k);
        order = std::move(rest);

        LevelProbabilities t{std::vector<double>(nl, 0.0), std::vector<double>(nl, 0.0)};
        double qi = 0.0, qo = 0.0;
        for (std::size_t i = 0; i < nl; ++i)
            if (mask[i]) {
                qi += p.p_in[i];
                qo += p.p_out[i];
            }
        for (std::size_t i = 0; i < nl; ++i)
            if (mask[i]) {
                t.p_in[i] = qi > 0.0 ? p.p_in[i] / qi : 0.0;
                t.p_out[i] = qo > 0.0 ? p.p_out[i] / qo : 0.0;
            }
        if (!(qi > 0.0)) t.p_in.back() = 1.0;
        if (!(qo > 0.0)) t.p_out.back() = 1.0;

        std::vector<double> bound(nk), atoms(nk);
        bool nonzero_levels = false;
        for (std::size_t i = 0; i + 1 < nl; ++i) nonzero_levels = nonzero_levels || mask[i];
        for (std::size_t j = 0; j < nk; ++j) {
            bound[j] = std::clamp(ipow(qi, kappas[j] - 1) * ipow(qo, na - kappas[j]), 0.0, 1.0);
            atoms[j] = zero_atom(t, kappas[j], na);
        }
        if (!nonzero_levels) {
            // Only the zero level is admissible: the conditional law is the atom at 0.
            for (std::size_t k : group)
                for (std::size_t j = 0; j < nk; ++j) cp[j * nw + k] = bound[j];
            continue;
        }
        CharacteristicBatch phi = [&](double s, std::span<std::complex<double>> out) {
            std::complex<double> ci(0.0, 0.0), co(0.0, 0.0);
            for (std::size_t i = 0; i < nl; ++i) {
                if (!mask[i]) continue;
                const std::complex<double> e(std::cos(s * lv.gains[i]), std::sin(s * lv.gains[i]));
                ci += t.p_in[i] * e;
                co += t.p_out[i] * e;
            }
            for (std::size_t j = 0; j < nk; ++j) out[j] = ipow(ci, kappas[j] - 1) * ipow(co, na - kappas[j]);
        };
        GilPelaezProblem pb;
        pb.n_dist = nk;
        for (std::size_t k : group) pb.thresholds.push_back(w[k]);
        pb.atom_at_zero = atoms;
        pb.atom_locations.assign(lv.gains.begin(), lv.gains.end() - 1);
        for (int k : kappas) single_atoms(t, lv, k, na, pb.atom_masses);
        pb.frequency_hint = 0.0;
        for (std::size_t i = 0; i + 1 < nl; ++i)
            if (mask[i]) pb.frequency_hint = std::max(pb.frequency_hint, lv.gains[i]);
        const GilPelaezResult res = gil_pelaez_cdf(phi, pb, opt.inversion);
        for (std::size_t j = 0; j < nk; ++j)
            for (std::size_t q = 0; q < group.size(); ++q)
                cp[j * nw + group[q]] = bound[j] * res.cdf[j * group.size() + q];
    }
    return cp;
}

} // namespace

const char* to_string(Mode mode)
{
    switch (mode) {
    case Mode::exact: return "exact";
    case Mode::mlap: return "mlap";
    case Mode::upper: return "upper";
    }
    return "?";
}

LevelProbabilities level_probabilities(const MlapLevels& levels, int kappa, const ScenarioConfig& scenario)
{
    scenario.validate();
    check_anchor(levels.focal.theta, levels.focal.r, kappa, scenario);
    LevelProbabilities p = anchor_probabilities(levels, scenario);
    const std::size_t n = levels.gains.size();
    auto empty = [n] {
        std::vector<double> v(n, 0.0);
        v.back() = 1.0;
        return v;
    };
    if (kappa == 1) p.p_in = empty();
    if (kappa == scenario.n_active) p.p_out = empty();
    return p;
}

LevelProbabilities level_probabilities(double theta_k, double r_k, int kappa, const ScenarioConfig& scenario)
{
    scenario.validate();
    check_anchor(theta_k, r_k, kappa, scenario);
    return level_probabilities(mlap_levels(scenario.array, scenario.mlap, {theta_k, r_k}), kappa, scenario);
}

std::complex<double> laplace_mlap(std::complex<double> s, const LevelProbabilities& probs,
                                  const MlapLevels& levels, int kappa, int n_active)
{
    std::complex<double> in(0.0, 0.0), out(0.0, 0.0);
    for (std::size_t i = 0; i < levels.gains.size(); ++i) {
        const std::complex<double> e = std::exp(-s * levels.gains[i]);
        in += probs.p_in[i] * e;
        out += probs.p_out[i] * e;
    }
    return ipow(in, kappa - 1) * ipow(out, n_active - kappa);
}

std::complex<double> laplace_exact(std::complex<double> s, const ExactInterference& model, int kappa,
                                   int n_active)
{
    std::complex<double> v(1.0, 0.0);
    if (s == 0.0) return v;
    if (kappa > 1) v *= ipow(model.laplace_side(Side::inner, s), kappa - 1);
    if (kappa < n_active) v *= ipow(model.laplace_side(Side::outer, s), n_active - kappa);
    return v;
}

std::complex<double> laplace_exact(std::complex<double> s, double theta_k, double r_k, int kappa,
                                   const ScenarioConfig& scenario, const PatternQuadrature& pq)
{
    scenario.validate();
    check_anchor(theta_k, r_k, kappa, scenario);
    const ExactInterference model(scenario, {theta_k, r_k}, kappa > 1, kappa < scenario.n_active, pq);
    return laplace_exact(s, model, kappa, scenario.n_active);
}

std::vector<double> conditional_cp_curve(const std::vector<double>& taus, double theta_k, double r_k,
                                         int kappa, const ScenarioConfig& scenario, Mode mode,
                                         const AnalysisOptions& opt, bool with_noise)
{
    scenario.validate();
    check_anchor(theta_k, r_k, kappa, scenario);
    std::vector<double> w(taus.size());
    for (std::size_t k = 0; k < taus.size(); ++k) {
        if (!(taus[k] > 0.0)) throw DomainError("tau must be > 0");
        double x = 1.0 / taus[k];
        if (with_noise) x -= scenario.noise_term(r_k);
        w[k] = x; // <= 0 leaves the entry at zero coverage
    }
    return anchor_cdfs(w, theta_k, r_k, {kappa}, scenario, mode, opt);
}

double conditional_cp(double tau, double theta_k, double r_k, int kappa, const ScenarioConfig& scenario,
                      Mode mode, const AnalysisOptions& opt)
{
    return conditional_cp_curve({tau}, theta_k, r_k, kappa, scenario, mode, opt).front();
}

double conditional_cp_upper(double tau, double theta_k, double r_k, int kappa, const ScenarioConfig& scenario)
{
    return conditional_cp(tau, theta_k, r_k, kappa, scenario, Mode::upper);
}

double tau_star(const MlapLevels& levels) { return 1.0 / min_level(levels); }

std::optional<double> sinr_equivalent_threshold(double tau, double r_k, const ScenarioConfig& scenario)
{
    if (!(tau > 0.0)) throw DomainError("tau must be > 0");
    if (!(r_k > 0.0)) throw DomainError("r_k must be > 0");
    if (scenario.noise_power == 0.0) return tau;
    const double budget = 1.0 / tau - scenario.noise_term(r_k);
    if (!(budget > 0.0)) return std::nullopt;
    return 1.0 / budget;
}

std::vector<std::vector<double>> overall_cp_table(const std::vector<double>& taus, const std::vector<int>& kappas,
                                                  const ScenarioConfig& scenario, Mode mode,
                                                  const AnalysisOptions& opt)
{
    scenario.validate();
    const int na = scenario.n_active;
    for (int k : kappas)
        if (k < 1 || k > na) throw InvalidArgument("kappa must lie in [1, n_active]");
    std::vector<double> w(taus.size());
    for (std::size_t k = 0; k < taus.size(); ++k) {
        if (!(taus[k] > 0.0)) throw DomainError("tau must be > 0");
        w[k] = 1.0 / taus[k];
    }
    const std::size_t nk = kappas.size(), nw = taus.size();
    std::vector<std::vector<double>> table(nk, std::vector<double>(nw, 1.0));
    if (nk == 0 || nw == 0 || na == 1) return table;

    const SectorGeometry& sec = scenario.sector;
    const double hw = sec.half_width();
    const std::size_t dim = nk * nw;
    AnalysisOptions inner = opt;
    inner.inversion.t_max = std::min(opt.inversion.t_max, opt.overall_t_max);

    // The pattern is mirror-symmetric in theta, so average over [0, pi/N_s].
    VectorIntegrand over_theta = [&](double theta, std::span<double> out) {
        VectorIntegrand over_r = [&](double r, std::span<double> o) {
            const std::vector<double> cp = anchor_cdfs(w, theta, r, kappas, scenario, mode, inner);
            for (std::size_t j = 0; j < nk; ++j) {
                const double f = ordered_distance_dist(kappas[j], r, na, sec).pdf;
                for (std::size_t k = 0; k < nw; ++k) o[j * nw + k] = f * cp[j * nw + k];
            }
        };
        const AdaptiveResult res = integrate_adaptive(over_r, dim, 0.0, sec.cell_radius, opt.r_quad);
        for (std::size_t i = 0; i < dim; ++i) out[i] = res.value[i] / hw;
    };
    const AdaptiveResult res = integrate_adaptive(over_theta, dim, 0.0, hw, opt.theta_quad);
    for (std::size_t j = 0; j < nk; ++j)
        for (std::size_t k = 0; k < nw; ++k) table[j][k] = std::clamp(res.value[j * nw + k], 0.0, 1.0);
    return table;
}

double overall_cp(double tau, int kappa, const ScenarioConfig& scenario, Mode mode, const AnalysisOptions& opt)
{
    return overall_cp_table({tau}, {kappa}, scenario, mode, opt).front().front();
}

std::vector<SpectrumEfficiency> se_and_ase(const std::vector<double>& taus, const ScenarioConfig& scenario,
                                           Mode mode, const AnalysisOptions& opt)
{
    std::vector<int> kappas(scenario.n_active);
    for (int k = 0; k < scenario.n_active; ++k) kappas[k] = k + 1;
    const auto table = overall_cp_table(taus, kappas, scenario, mode, opt);
    const double area = kPi * scenario.sector.cell_radius * scenario.sector.cell_radius / scenario.sector.n_sectors;
    std::vector<SpectrumEfficiency> out;
    for (std::size_t k = 0; k < taus.size(); ++k) {
        SpectrumEfficiency e{taus[k], std::vector<double>(kappas.size()), 0.0};
        const double rate = std::log2(1.0 + taus[k]);
        double sum = 0.0;
        for (std::size_t j = 0; j < kappas.size(); ++j) {
            e.se[j] = table[j][k] * rate;
            sum += e.se[j];
        }
        e.ase = sum / area;
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace nfsg
