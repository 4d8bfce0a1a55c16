// SPDX-License-Identifier: Apache-2.0
#include "nfsg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "nfsg/errors.hpp"

namespace nfsg {

namespace {

constexpr double kPi = 3.14159265358979323846;

double log_binomial(int n, int k)
{
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// x^a (1-x)^b with 0^0 = 1, evaluated in log space.
double pow_pair(double log_coeff, double x, int a, int b)
{
    if ((x <= 0.0 && a > 0) || (x >= 1.0 && b > 0)) return 0.0;
    double lg = log_coeff;
    if (a > 0) lg += a * std::log(x);
    if (b > 0) lg += b * std::log1p(-x);
    return std::exp(lg);
}

void check_radius(double r, const SectorGeometry& sector)
{
    if (!(r >= 0.0 && r <= sector.cell_radius))
        throw DomainError("distance " + std::to_string(r) + " outside [0, R_c]");
}

} // namespace

void SectorGeometry::validate() const
{
    if (n_sectors < 1) throw InvalidArgument("n_sectors must be >= 1");
    if (!(cell_radius > 0.0)) throw InvalidArgument("cell_radius must be > 0");
    if (!(cell_radius <= los_radius)) throw InvalidArgument("cell_radius must not exceed los_radius");
}

double SectorGeometry::half_width() const { return kPi / n_sectors; }

bool in_sector(const PolarPoint& p, const SectorGeometry& sector)
{
    const double hw = sector.half_width();
    return p.theta >= -hw && p.theta <= hw && p.r >= 0.0 && p.r <= sector.cell_radius;
}

void sort_by_distance(std::vector<PolarPoint>& pts)
{
    std::vector<std::size_t> idx(pts.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (pts[a].r != pts[b].r) return pts[a].r < pts[b].r;
        if (pts[a].theta != pts[b].theta) return pts[a].theta < pts[b].theta;
        return a < b;
    });
    std::vector<PolarPoint> out;
    out.reserve(pts.size());
    for (auto i : idx) out.push_back(pts[i]);
    pts.swap(out);
}

OrderedUserSet sample_user_set(const SectorGeometry& sector, int n_active, RandomStream& rng)
{
    if (n_active < 1) throw InvalidArgument("n_active must be >= 1");
    const double hw = sector.half_width();
    OrderedUserSet set;
    set.users.resize(n_active);
    for (auto& u : set.users) {
        u.theta = hw * (2.0 * rng.uniform() - 1.0);
        u.r = sector.cell_radius * std::sqrt(rng.uniform());
    }
    sort_by_distance(set.users);
    return set;
}

OrderedUserSet sample_conditional_user_set(int kappa, const PolarPoint& anchor, int n_active,
                                           const SectorGeometry& sector, RandomStream& rng)
{
    if (kappa < 1 || kappa > n_active) throw InvalidArgument("kappa must lie in [1, n_active]");
    if (!in_sector(anchor, sector)) throw DomainError("anchor outside the sector");
    if (kappa > 1 && anchor.r <= 0.0)
        throw DegenerateSupport("inner users requested with anchor at r = 0");
    if (kappa < n_active && anchor.r >= sector.cell_radius)
        throw DegenerateSupport("outer users requested with anchor at r = R_c");

    const double hw = sector.half_width();
    const double rk2 = anchor.r * anchor.r;
    const double rc2 = sector.cell_radius * sector.cell_radius;
    OrderedUserSet set;
    set.users.reserve(n_active);
    for (int i = 1; i < kappa; ++i) {
        const double theta = hw * (2.0 * rng.uniform() - 1.0);
        set.users.push_back({theta, anchor.r * std::sqrt(rng.uniform())});
    }
    set.users.push_back(anchor);
    for (int i = kappa; i < n_active; ++i) {
        const double theta = hw * (2.0 * rng.uniform() - 1.0);
        double r = std::sqrt(rk2 + rng.uniform() * (rc2 - rk2));
        set.users.push_back({theta, r});
    }
    // Inner draws are < r_kappa and outer draws >= r_kappa, so sorting keeps
    // the anchor at index kappa-1 unless an outer draw rounds onto r_kappa.
    std::sort(set.users.begin(), set.users.begin() + (kappa - 1),
              [](const PolarPoint& a, const PolarPoint& b) {
                  return a.r < b.r || (a.r == b.r && a.theta < b.theta);
              });
    std::stable_sort(set.users.begin() + kappa, set.users.end(),
                     [](const PolarPoint& a, const PolarPoint& b) {
                         return a.r < b.r || (a.r == b.r && a.theta < b.theta);
                     });
    return set;
}

CdfPdf unordered_distance_dist(double r, const SectorGeometry& sector)
{
    check_radius(r, sector);
    const double rc2 = sector.cell_radius * sector.cell_radius;
    return {r * r / rc2, 2.0 * r / rc2};
}

CdfPdf ordered_distance_dist(int kappa, double r, int n_active, const SectorGeometry& sector)
{
    if (n_active < 1 || kappa < 1 || kappa > n_active)
        throw InvalidArgument("kappa must lie in [1, n_active]");
    check_radius(r, sector);
    const double rc = sector.cell_radius;
    const double x = (r / rc) * (r / rc);

    // P{at least kappa of N_a inside r}. The smaller of the two binomial tails
    // is summed directly so neither end loses accuracy to cancellation.
    double head = 0.0, tail = 0.0;
    for (int u = kappa; u <= n_active; ++u) head += pow_pair(log_binomial(n_active, u), x, u, n_active - u);
    for (int u = 0; u < kappa; ++u) tail += pow_pair(log_binomial(n_active, u), x, u, n_active - u);
    const double cdf = std::clamp(head <= tail ? head : 1.0 - tail, 0.0, 1.0);

    // (2/r) kappa C(N_a, kappa) x^kappa (1-x)^(N_a-kappa), with the 1/r folded into x^kappa.
    double pdf = 0.0;
    if (r > 0.0 && x < 1.0) {
        const double lg = std::log(2.0 * kappa) + log_binomial(n_active, kappa) +
                          (2.0 * kappa - 1.0) * std::log(r) - 2.0 * kappa * std::log(rc) +
                          (n_active - kappa) * std::log1p(-x);
        pdf = std::exp(lg);
    } else if (x >= 1.0 && kappa == n_active) {
        pdf = 2.0 * kappa / rc;
    }
    return {cdf, pdf};
}

CdfPdf conditional_distance_dist(Side side, double r, double r_kappa, const SectorGeometry& sector)
{
    const double rc = sector.cell_radius;
    if (!(r_kappa >= 0.0 && r_kappa <= rc)) throw DomainError("r_kappa outside [0, R_c]");
    const double fk = (r_kappa / rc) * (r_kappa / rc);
    const double rc2 = rc * rc;
    if (side == Side::inner) {
        if (r_kappa <= 0.0) throw DegenerateSupport("inner side is empty at r_kappa = 0");
        if (!(r >= 0.0 && r < r_kappa)) throw DomainError("inner distance outside [0, r_kappa)");
        return {(r * r / rc2) / fk, (2.0 * r / rc2) / fk};
    }
    if (r_kappa >= rc) throw DegenerateSupport("outer side is empty at r_kappa = R_c");
    if (!(r >= r_kappa && r <= rc)) throw DomainError("outer distance outside [r_kappa, R_c]");
    return {(r * r / rc2 - fk) / (1.0 - fk), (2.0 * r / rc2) / (1.0 - fk)};
}

CdfPdf spatial_angle_dist(double vartheta, const SectorGeometry& sector)
{
    if (sector.n_sectors < 2)
        throw InvalidArgument("spatial-angle distribution needs n_sectors >= 2 (monotone sin)");
    const double ns = sector.n_sectors;
    const double lim = 0.5 * std::sin(kPi / ns);
    if (!(std::abs(vartheta) <= lim)) throw DomainError("spatial angle outside the sector support");
    const double s = std::clamp(2.0 * vartheta, -1.0, 1.0);
    const double cdf = std::clamp(ns / (2.0 * kPi) * (std::asin(s) + kPi / ns), 0.0, 1.0);
    const double pdf = ns / (kPi * std::sqrt(1.0 - s * s));
    return {cdf, pdf};
}

double spatial_angle_cdf_clamped(double vartheta, const SectorGeometry& sector)
{
    const double lim = 0.5 * std::sin(sector.half_width());
    if (vartheta <= -lim) return 0.0;
    if (vartheta >= lim) return 1.0;
    return spatial_angle_dist(vartheta, sector).cdf;
}

} // namespace nfsg
