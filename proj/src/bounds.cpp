#include "sechprolate/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "sechprolate/commuting_ode.hpp"
#include "sechprolate/special_functions.hpp"
#include "sechprolate/svd_assembly.hpp"

namespace sechprolate {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double e = std::numbers::e;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

void require_positive(double c)
{
    if (!(c > 0.0)) throw std::invalid_argument("bounds: c must be positive");
}

} // namespace

double c0_bisection()
{
    auto f = [](double c) { return std::log(7.0 * e * e * pi / (2.0 * c)) - pi / (4.0 * c); };
    double lo = 0.05, hi = 0.5;  // f(lo) < 0 < f(hi)
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double beta(double c)
{
    require_positive(c);
    return c <= c0_nominal ? std::log(7.0 * e * e * pi / (2.0 * c)) : pi / (4.0 * c);
}

double theta(double c)
{
    require_positive(c);
    if (c <= c0_nominal) {
        double s = std::sin(2.0 * c);
        return 2.0 * s * s / (e * e * c);
    }
    return pi * std::exp(-pi / (2.0 * c));
}

double theta_tilde(double c)
{
    require_positive(c);
    if (c <= c0_nominal) {
        double s = std::sin(2.0 * c0_nominal);
        return 2.0 * s * s * c / ((e * c0_nominal) * (e * c0_nominal));
    }
    return theta(c);
}

double lower_bound_small_c(double c, int m)
{
    require_positive(c);
    if (c > pi / 4.0) throw std::domain_error("lower_bound_small_c: requires c <= pi/4");
    double s = std::sin(2.0 * c);
    return 2.0 * s * s / (e * e * c) * std::exp(-2.0 * std::log(7.0 * e * e * pi / (2.0 * c)) * m);
}

double lower_bound_all_c(double c, int m)
{
    require_positive(c);
    return pi * std::exp(-pi * (m + 1.0) / (2.0 * c));
}

double lower_bound_combined(double c, int m)
{
    return theta_tilde(c) * std::exp(-2.0 * beta(c) * m);
}

double upper_bound(double c, int m)
{
    if (!(c > 0.0) || c >= 1.0) throw std::domain_error("upper_bound: requires 0 < c < 1");
    return 2.0 * std::sqrt(pi) * std::pow(c, 2.0 * m + 1.0) / (std::sqrt(m + 0.75) * (1.0 - c * c));
}

double widom_slope(double c)
{
    require_positive(c);
    // K(sech pi c) has complement tanh pi c; K(tanh pi c) has complement sech pi c
    const double a = pi * c;
    return pi * elliptic_K_complement(std::tanh(a)) / elliptic_K_complement(1.0 / std::cosh(a));
}

double U_of(double kappa)
{
    require_positive(kappa);
    return U_closed_form(kappa);
}

double R_of_c(double kappa)
{
    const double k = kappa;
    const double a = U_of(k) * k / pi;
    return 2.0 / (pi * pi)
           + a * a * ((std::cosh(4.0 * k) * (1.0 + (k / 3.0) / std::tanh(2.0 * k)) - 1.0)
                      + 2.0 * k * std::sinh(4.0 * k));
}

double H_of_c(double kappa)
{
    require_positive(kappa);
    const double c = kappa;
    return pi * std::sqrt(1.0 + 4.0 * c * c / 3.0)
           * (1.0 + 2.0 * std::sqrt(2.0) * (2.0 + 1.0 / std::sqrt(3.0))
                        * (2.0 / (pi * pi) + (8.0 / 3.0) * (1.0 + 2.0 * c) * (c * c + 9.0 * c / 8.0 + 0.5)));
}

double supnorm_bound(double kappa, int m)
{
    return H_of_c(kappa) * std::sqrt(m + 0.5);
}

std::pair<double, double> chi_sandwich(double kappa, int m)
{
    const double f = (pi / U_of(kappa)) * (pi / U_of(kappa));
    const double base = m * (m + 1.0) + 0.5;
    return {f * (base - R_of_c(kappa)) - kappa * kappa, f * base - kappa * kappa};
}

std::pair<double, double> U_bounds(double kappa)
{
    require_positive(kappa);
    const double lo = std::sqrt(2.0) * std::exp(2.0 * kappa) / std::sinh(4.0 * kappa);
    return {lo, pi * lo};
}

std::pair<double, double> q_band(double kappa)
{
    const double a = U_of(kappa) * kappa / pi;
    const double hi = 0.5 - a * a;
    return {hi - R_of_c(kappa), hi};
}

double fit_slope(const std::vector<double>& rho, int m_lo, int m_hi)
{
    if (m_hi >= static_cast<int>(rho.size()) || m_lo < 0 || m_hi - m_lo < 1)
        throw std::invalid_argument("fit_slope: index range");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = m_hi - m_lo + 1;
    for (int m = m_lo; m <= m_hi; ++m) {
        double y = -std::log(rho[m]);
        sx += m;
        sy += y;
        sxx += double(m) * m;
        sxy += m * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

BoundsReport bounds_report(double c, int m_max, const BoundsOptions& opt)
{
    require_positive(c);
    BoundsReport rep;
    rep.c = c;
    rep.kappa = ode_parameter(c);
    rep.widom = widom_slope(c);

    HybridOptions hopt;
    hopt.n = opt.n;
    hopt.n_b = opt.n_b;
    HybridSpectrum hs = hybrid_spectrum(c, m_max, hopt);

    const double k = rep.kappa;
    const OdeSpectrum& ode = *hs.ode;
    const QuadratureGrid sup = [&] {
        QuadratureGrid g;
        for (int i = 0; i < opt.sup_grid; ++i) g.nodes.push_back(-1.0 + 2.0 * i / (opt.sup_grid - 1.0));
        return g;
    }();

    for (int m = 0; m <= m_max; ++m) {
        BoundsRow r{};
        r.m = m;
        r.lower_small_c = c <= pi / 4.0 ? lower_bound_small_c(c, m) : nan;
        r.lower_all_c = lower_bound_all_c(c, m);
        r.lower_combined = lower_bound_combined(c, m);
        r.rho_computed = hs.rho[m];
        r.upper = c < 1.0 ? upper_bound(c, m) : nan;
        auto [lo, hi] = chi_sandwich(k, m);
        r.chi_lo = lo;
        r.chi_hi = hi;
        r.chi_computed = ode.chi[m];
        r.supnorm_bound = supnorm_bound(k, m);
        double mx = 0.0;
        for (double x : sup.nodes) mx = std::max(mx, std::abs(hs.g_at(m, x)));
        r.supnorm_observed = mx;
        rep.rows.push_back(r);
    }
    if (m_max >= 2) {
        int lo = std::max(0, m_max - 6);
        rep.slope_fit = fit_slope(hs.rho, lo, m_max);
    } else {
        rep.slope_fit = nan;
    }
    return rep;
}

} // namespace sechprolate
