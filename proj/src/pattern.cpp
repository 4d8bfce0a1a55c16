// SPDX-License-Identifier: Apache-2.0
#include "nfsg/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "nfsg/errors.hpp"

namespace nfsg {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSeriesSwitch = 1e-6;

void require_positive_r(const PolarPoint& p)
{
    if (!(p.r > 0.0)) throw DomainError("distance must be > 0, got " + std::to_string(p.r));
}

} // namespace

double ArrayConfig::rayleigh_distance() const
{
    const double d = aperture();
    return 2.0 * d * d / wavelength();
}

double ArrayConfig::fresnel_distance() const
{
    const double d = aperture();
    return 0.62 * std::sqrt(d * d * d / wavelength());
}

void ArrayConfig::validate() const
{
    if (n_antennas < 2) throw InvalidArgument("n_antennas must be >= 2");
    if (!(carrier_freq > 0.0) || !std::isfinite(carrier_freq))
        throw InvalidArgument("carrier_freq must be positive");
}

void MlapConfig::validate(const ArrayConfig& array) const
{
    if (n_levels < 1) throw InvalidArgument("mlap.n_levels must be >= 1");
    if (n_levels > array.n_antennas / 2)
        throw InvalidArgument("mlap.n_levels must not exceed floor(N/2) = " +
                              std::to_string(array.n_antennas / 2));
    if (!(beta_gamma > 0.0)) throw InvalidArgument("mlap.beta_gamma must be > 0");
    if (!(delta > 0.0)) throw InvalidArgument("mlap.delta must be > 0");
}

double BeamDepthInterval::depth() const
{
    if (!d_right) return std::numeric_limits<double>::infinity();
    return *d_right - d_left;
}

std::vector<std::complex<double>> array_response(const ArrayConfig& cfg, const PolarPoint& p)
{
    require_positive_r(p);
    const int n = cfg.n_antennas;
    const double k = 2.0 * kPi / cfg.wavelength();
    const double d = cfg.spacing();
    const double s = std::sin(p.theta);
    const double amp = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<std::complex<double>> a(n);
    for (int i = 0; i < n; ++i) {
        const double x = cfg.element_offset(i) * d;
        // r_n - r without cancellation at large r.
        const double num = x * x - 2.0 * p.r * x * s;
        const double rn = std::sqrt(p.r * p.r + num);
        const double diff = num / (rn + p.r);
        a[i] = std::polar(amp, -k * diff);
    }
    return a;
}

double fresnel_sum_gain(int n_antennas, double a, double b)
{
    // Pairs (+u, -u) combine to exp(j b u^2) 2cos(a u). Both factors run on
    // recurrences; the arithmetic is sign-symmetric in (a, b), which makes the
    // result exactly symmetric under swapping observation and focus.
    const bool odd = (n_antennas % 2) != 0;
    const int pairs = n_antennas / 2;
    const double u0 = odd ? 1.0 : 0.5;

    double sum_re = odd ? 1.0 : 0.0;
    double sum_im = 0.0;

    // cos(a u) via Chebyshev: c_{k+1} = 2cos(a) c_k - c_{k-1}.
    const double ca = std::cos(a);
    double c_prev = odd ? 1.0 : std::cos(0.5 * a);
    double c_cur = std::cos(a * u0);

    // exp(j b u^2): z_{k+1} = z_k w_k, w_{k+1} = w_k exp(2jb).
    double z_re = std::cos(b * u0 * u0), z_im = std::sin(b * u0 * u0);
    const double step = b * (2.0 * u0 + 1.0);
    double w_re = std::cos(step), w_im = std::sin(step);
    const double q_re = std::cos(2.0 * b), q_im = std::sin(2.0 * b);

    for (int k = 0; k < pairs; ++k) {
        sum_re += 2.0 * c_cur * z_re;
        sum_im += 2.0 * c_cur * z_im;

        const double c_next = 2.0 * ca * c_cur - c_prev;
        c_prev = c_cur;
        c_cur = c_next;

        const double nz_re = z_re * w_re - z_im * w_im;
        const double nz_im = z_re * w_im + z_im * w_re;
        z_re = nz_re;
        z_im = nz_im;
        const double nw_re = w_re * q_re - w_im * q_im;
        const double nw_im = w_re * q_im + w_im * q_re;
        w_re = nw_re;
        w_im = nw_im;
    }
    const double n2 = static_cast<double>(n_antennas) * n_antennas;
    return (sum_re * sum_re + sum_im * sum_im) / n2;
}

PhaseCoefficients phase_coefficients(const ArrayConfig& cfg, const PolarPoint& obs,
                                     const PolarPoint& focal)
{
    const double lam = cfg.wavelength();
    const double d = cfg.spacing();
    const double co = std::cos(obs.theta), cf = std::cos(focal.theta);
    const double a = 2.0 * kPi / lam * d * (std::sin(obs.theta) - std::sin(focal.theta));
    const double b = kPi / lam * d * d * (cf * cf / focal.r - co * co / obs.r);
    return {a, b};
}

double exact_gain(const ArrayConfig& cfg, const PolarPoint& obs, const PolarPoint& focal)
{
    require_positive_r(obs);
    require_positive_r(focal);
    const PhaseCoefficients pc = phase_coefficients(cfg, obs, focal);
    return fresnel_sum_gain(cfg.n_antennas, pc.a, pc.b);
}

double exact_distance_gain(const ArrayConfig& cfg, const PolarPoint& obs, const PolarPoint& focal)
{
    const auto x = array_response(cfg, obs);
    const auto y = array_response(cfg, focal);
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
    return std::norm(acc);
}

double angular_gain(int n_antennas, double phi)
{
    const double n = n_antennas;
    // The kernel has period 1 in phi up to sign; reduce to the offset from
    // the nearest integer.
    const double eps = phi - std::nearbyint(phi);
    if (std::abs(eps) < kSeriesSwitch) return 1.0 - (n * n - 1.0) * kPi * kPi * eps * eps / 3.0;
    const double num = std::sin(kPi * n * eps);
    const double den = n * std::sin(kPi * eps);
    return (num * num) / (den * den);
}

double ff_gain(const ArrayConfig& cfg, double theta, double theta_focal)
{
    return angular_gain(cfg.n_antennas, 0.5 * (std::sin(theta_focal) - std::sin(theta)));
}

double distance_beta(const ArrayConfig& cfg, double theta_focal, double r_focal, double r_obs)
{
    if (!(r_focal > 0.0) || !(r_obs > 0.0)) throw DomainError("distances must be > 0");
    const double n = cfg.n_antennas;
    const double d = cfg.spacing();
    const double c = std::cos(theta_focal);
    const double scale = n * n * d * d * c * c / (2.0 * cfg.wavelength());
    return std::sqrt(scale * std::abs(1.0 / r_focal - 1.0 / r_obs));
}

double distance_gain_at_beta(double beta)
{
    return std::norm(fresnel_ratio(beta));
}

double distance_gain(const ArrayConfig& cfg, double theta_focal, double r_focal, double r_obs)
{
    return distance_gain_at_beta(distance_beta(cfg, theta_focal, r_focal, r_obs));
}

double asymptotic_gain(const ArrayConfig& cfg, double theta_focal, double r_focal)
{
    if (!(r_focal > 0.0)) throw DomainError("r_focal must be > 0");
    const double n = cfg.n_antennas;
    const double d = cfg.spacing();
    const double c = std::cos(theta_focal);
    return distance_gain_at_beta(std::sqrt(n * n * d * d * c * c / (2.0 * cfg.wavelength() * r_focal)));
}

BeamDepthInterval beam_depth(const ArrayConfig& cfg, double theta_focal, double r_focal,
                             double beta_gamma)
{
    if (!(r_focal > 0.0)) throw DomainError("r_focal must be > 0");
    if (!(beta_gamma > 0.0)) throw DomainError("beta_gamma must be > 0");
    const double n = cfg.n_antennas;
    const double d = cfg.spacing();
    const double c = std::cos(theta_focal);
    // At the edges beta equals beta_gamma, hence the square.
    const double dt = n * n * d * d * c * c / (2.0 * cfg.wavelength() * beta_gamma * beta_gamma);
    BeamDepthInterval bd;
    bd.d_theta = dt;
    bd.d_left = r_focal * dt / (dt + r_focal);
    if (r_focal < dt) bd.d_right = r_focal * dt / (dt - r_focal);
    return bd;
}

double beta_for_gamma(double gamma_db)
{
    if (!(gamma_db < 0.0)) throw DomainError("gamma_db must be negative");
    const double target = std::pow(10.0, gamma_db / 10.0);
    // distance_gain_at_beta is strictly decreasing up to its first zero near 2.
    double lo = 0.0, hi = 2.0;
    if (distance_gain_at_beta(hi) > target)
        throw DomainError("gamma below the first distance-pattern null");
    boost::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(
        [&](double b) { return distance_gain_at_beta(b) - target; }, lo, hi, 1.0 - target,
        distance_gain_at_beta(hi) - target, boost::math::tools::eps_tolerance<double>(50), iters);
    return 0.5 * (r.first + r.second);
}

double distance_gain_three_level(const ArrayConfig& cfg, double theta_focal, double r_focal,
                                 double r_obs, double beta_gamma)
{
    const BeamDepthInterval bd = beam_depth(cfg, theta_focal, r_focal, beta_gamma);
    if (r_obs <= bd.d_left) return 0.0;
    if (!bd.d_right || r_obs < *bd.d_right) return 1.0;
    return asymptotic_gain(cfg, theta_focal, r_focal);
}

MlapLevels mlap_levels(const ArrayConfig& cfg, const MlapConfig& mlap, const PolarPoint& focal)
{
    mlap.validate(cfg);
    require_positive_r(focal);
    const int m = mlap.n_levels;
    const int n = cfg.n_antennas;
    MlapLevels lv;
    lv.focal = focal;
    lv.depth = beam_depth(cfg, focal.theta, focal.r, mlap.beta_gamma);
    lv.gains.assign(m + 2, 0.0);
    lv.gains[1] = 0.5 * mlap.delta * angular_gain(n, 0.0);
    for (int i = 2; i <= m; ++i) lv.gains[i] = 0.5 * mlap.delta * angular_gain(n, (2.0 * i - 1.0) / (2.0 * n));
    lv.gains[0] = lv.gains[1] * asymptotic_gain(cfg, focal.theta, focal.r);
    lv.gains[m + 1] = 0.0;
    return lv;
}

int mlap_level_index(const ArrayConfig& cfg, const MlapLevels& levels, const PolarPoint& obs)
{
    const int n = cfg.n_antennas;
    const int m = levels.n_levels();
    const double phi = std::abs(0.5 * (std::sin(obs.theta) - std::sin(levels.focal.theta)));
    // Band m covers ((m-1)/N, m/N]; compare on N·|phi| to keep the edges exact.
    const double x = n * phi;
    if (x <= 1.0) {
        if (obs.r <= levels.depth.d_left) return m + 1;
        if (levels.depth.d_right && obs.r >= *levels.depth.d_right) return 0;
        return 1;
    }
    const int band = static_cast<int>(std::ceil(x));
    return band <= m ? band : m + 1;
}

double mlap_gain(const ArrayConfig& cfg, const MlapLevels& levels, const MlapConfig& /*mlap*/,
                 const PolarPoint& obs)
{
    return levels.gains[mlap_level_index(cfg, levels, obs)];
}

MStar m_star(const ArrayConfig& cfg, const MlapConfig& mlap, double tau,
             const std::optional<PolarPoint>& focal)
{
    if (!(tau > 0.0)) throw DomainError("tau must be > 0");
    const int n = cfg.n_antennas;
    const int cap = n / 2;
    const double budget = 1.0 / tau;
    const double g1 = 0.5 * mlap.delta * angular_gain(n, 0.0);
    double lowest = g1;
    if (focal) lowest = std::min(lowest, g1 * asymptotic_gain(cfg, focal->theta, focal->r));
    for (int m = 1; m <= cap; ++m) {
        if (m >= 2) lowest = std::min(lowest, 0.5 * mlap.delta * angular_gain(n, (2.0 * m - 1.0) / (2.0 * n)));
        if (lowest < budget) return {m, false};
    }
    return {cap, true};
}

} // namespace nfsg
