#include "sechprolate/svd_assembly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sechprolate/errors.hpp"

namespace sechprolate {

namespace {

constexpr double pi = std::numbers::pi;

double sech(double x)
{
    double ax = std::abs(x);
    if (ax > 700.0) return 0.0;
    double e = std::exp(-ax);
    return 2.0 * e / (1.0 + e * e);
}

} // namespace

int default_basis_size(int m_max)
{
    return std::max(60, 2 * (m_max + 1) + 40);
}

double HybridSpectrum::g_at(int m, double x) const
{
    if (nystrom_route[m]) return nys->eval(m, x);
    return ode->g(m, x);
}

HybridSpectrum hybrid_spectrum(double c, int m_max, const HybridOptions& opt)
{
    if (!(c > 0.0)) throw std::invalid_argument("hybrid_spectrum: c must be positive");
    HybridSpectrum hs;
    hs.c = c;
    const int n = opt.n > 0 ? opt.n : default_nystrom_size(m_max);
    auto nys = std::make_shared<NystromSpectrum>(nystrom_eigensystem(c, n, m_max));
    hs.nys = nys;
    hs.grid = nys->grid;
    const int cnt = m_max + 1;

    bool all_trusted = std::all_of(nys->trusted.begin(), nys->trusted.end(), [](bool t) { return t; });
    if (opt.need_ode || opt.rayleigh_all || !all_trusted) {
        int n_b = opt.n_b > 0 ? opt.n_b : default_basis_size(m_max);
        for (;;) {
            try {
                hs.ode = std::make_shared<OdeSpectrum>(galerkin_eigensystem(c, n_b, m_max));
                break;
            } catch (const ResolutionError&) {
                if (opt.n_b > 0 || n_b >= 480) throw;
                n_b *= 2;
            }
        }
    }

    hs.rho.resize(cnt);
    hs.nystrom_route.resize(cnt);
    hs.trusted.resize(cnt);
    hs.g.resize(n, cnt);
    const double rho0 = nys->rho[0];
    for (int m = 0; m < cnt; ++m) {
        const bool use_nys = nys->trusted[m] && !opt.rayleigh_all;
        hs.nystrom_route[m] = use_nys;
        if (use_nys) {
            hs.rho[m] = nys->rho[m];
            hs.g.col(m) = nys->g.col(m);
            hs.trusted[m] = true;
        } else {
            std::vector<double> v(n);
            double nrm = 0.0;
            for (int i = 0; i < n; ++i) {
                v[i] = hs.ode->g(m, hs.grid.nodes[i]);
                nrm += hs.grid.weights[i] * v[i] * v[i];
            }
            nrm = std::sqrt(nrm);
            for (int i = 0; i < n; ++i) {
                v[i] /= nrm;
                hs.g(i, m) = v[i];
            }
            hs.rho[m] = rho_rayleigh(c, hs.grid, v);
            hs.trusted[m] = hs.rho[m] > 1e-28 * rho0;
        }
    }
    return hs;
}

double SvdTriplet::g_at(double x) const
{
    if (g_bw.size() == g_grid.size()) return barycentric_eval(g_grid, g_bw, g.data(), x);
    return barycentric_eval(g_grid, gauss_barycentric_weights(g_grid), g.data(), x);
}

double phi_extent(const OperatorParams& params, double rho_min)
{
    params.validate();
    if (!(rho_min > 0.0)) throw std::invalid_argument("phi_extent: rho must be positive");
    const double bT = std::log(8.0 * params.c / (params.b * rho_min)) + 18.5;
    return std::max(20.0, bT) / params.b;
}

std::complex<double> phi_value(const OperatorParams& params, const QuadratureGrid& g_grid,
                               const std::vector<double>& g, double sigma, double x)
{
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < g_grid.size(); ++i) {
        const double a = -params.c * x * g_grid.nodes[i];
        acc += g_grid.weights[i] * g[i] * std::complex<double>(std::cos(a), std::sin(a));
    }
    return sech(params.b * x) * acc / sigma;
}

std::vector<SvdTriplet> compute_svd(const OperatorParams& params, int m_max, const SvdOptions& opt)
{
    params.validate();
    if (m_max < 0) throw std::invalid_argument("compute_svd: m_max must be >= 0");
    const double cb = params.c / params.b;
    HybridOptions hopt;
    hopt.n = opt.n;
    hopt.n_b = opt.n_b;
    hopt.need_ode = false;
    HybridSpectrum hs = hybrid_spectrum(cb, m_max, hopt);

    double rho_min = hs.rho[0];
    for (int m = 0; m <= m_max; ++m)
        if (hs.trusted[m] && hs.rho[m] > 0.0) rho_min = std::min(rho_min, hs.rho[m]);
    const double T = opt.T > 0.0 ? opt.T : phi_extent(params, rho_min);
    QuadratureGrid pg = real_line_grid(params.b, params.c, T, opt.phi_order);

    std::vector<SvdTriplet> out;
    for (int m = 0; m <= m_max; ++m) {
        SvdTriplet t;
        t.m = m;
        t.rho = hs.rho[m];
        t.sigma = std::sqrt(t.rho / params.c);
        t.g_grid = hs.grid;
        t.g_bw = gauss_barycentric_weights(hs.grid);
        t.g.resize(hs.grid.size());
        for (std::size_t i = 0; i < hs.grid.size(); ++i) t.g[i] = hs.g(i, m);
        t.trusted = hs.trusted[m];
        t.route = hs.nystrom_route[m] ? "nystrom" : "ode";
        t.phi_grid = pg;
        t.phi.resize(pg.size());
        for (std::size_t k = 0; k < pg.size(); ++k)
            t.phi[k] = phi_value(params, t.g_grid, t.g, t.sigma, pg.nodes[k]);
        out.push_back(std::move(t));
    }
    return out;
}

SvdTriplet rescale_phi(double b, double c, const SvdTriplet& src, const SvdOptions& opt)
{
    OperatorParams dst{b, c};
    dst.validate();
    if (!src.trusted) throw UntrustedIndexError("rescale_phi: source triplet is not trusted");
    const OperatorParams unit{1.0, c / b};
    SvdTriplet t = src;
    t.sigma = src.sigma / std::sqrt(b);
    const double T = opt.T > 0.0 ? opt.T : phi_extent(dst, src.rho);
    t.phi_grid = real_line_grid(b, c, T, opt.phi_order);
    t.phi.resize(t.phi_grid.size());
    const double sb = std::sqrt(b);
    for (std::size_t k = 0; k < t.phi_grid.size(); ++k)
        t.phi[k] = sb * phi_value(unit, src.g_grid, src.g, src.sigma, b * t.phi_grid.nodes[k]);
    return t;
}

std::complex<double> cosh_inner(double b, const QuadratureGrid& grid,
                                const std::vector<std::complex<double>>& u,
                                const std::vector<std::complex<double>>& v)
{
    if (u.size() != grid.size() || v.size() != grid.size())
        throw std::invalid_argument("cosh_inner: size mismatch");
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        acc += grid.weights[i] * std::cosh(b * grid.nodes[i]) * u[i] * std::conj(v[i]);
    return acc;
}

} // namespace sechprolate
