#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "sechprolate/errors.hpp"
#include "sechprolate/svd_assembly.hpp"

using namespace sechprolate;
using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

namespace {

double cosh_norm(double b, const SvdTriplet& t)
{
    return std::sqrt(cosh_inner(b, t.phi_grid, t.phi, t.phi).real());
}

} // namespace

TEST_CASE("triplet invariants")
{
    OperatorParams p{1.0, 1.0};
    auto svd = compute_svd(p, 12);
    REQUIRE(svd.size() == 13);
    for (const auto& t : svd) {
        CHECK(t.sigma * t.sigma * p.c == doctest::Approx(t.rho).epsilon(1e-14));
        CHECK(t.sigma == doctest::Approx(std::sqrt(t.rho / p.c)).epsilon(1e-12));
        double gn = 0;
        for (std::size_t i = 0; i < t.g.size(); ++i) gn += t.g_grid.weights[i] * t.g[i] * t.g[i];
        CHECK(std::abs(std::sqrt(gn) - 1) < 1e-8);
        CHECK(std::abs(cosh_norm(p.b, t) - 1) < 1e-4);

        // |phi| even; real for even m, imaginary for odd m
        double off = 0;
        const std::size_t n = t.phi.size();
        for (std::size_t k = 0; k < n; ++k) {
            CHECK(std::abs(t.phi[k]) == doctest::Approx(std::abs(t.phi[n - 1 - k])).epsilon(1e-10).scale(1e-12));
            double o = t.m % 2 == 0 ? t.phi[k].imag() : t.phi[k].real();
            off += t.phi_grid.weights[k] * std::cosh(p.b * t.phi_grid.nodes[k]) * o * o;
        }
        CHECK(std::sqrt(off) < 1e-6);
        CHECK(t.trusted);
        if (t.m > 0) CHECK(t.sigma < svd[t.m - 1].sigma);
    }
    CHECK(svd[0].route == "nystrom");
}

TEST_CASE("phi orthonormal in the weighted space")
{
    OperatorParams p{1.0, 1.0};
    auto svd = compute_svd(p, 8);
    for (int i = 0; i <= 8; ++i)
        for (int j = 0; j <= 8; ++j) {
            cd ip = cosh_inner(p.b, svd[i].phi_grid, svd[i].phi, svd[j].phi);
            CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-4);
        }
}

TEST_CASE("high indices come from the ODE route")
{
    OperatorParams p{1.0, 0.5};
    auto svd = compute_svd(p, 16);
    bool saw_ode = false;
    for (const auto& t : svd) {
        if (t.route == "ode") saw_ode = true;
        CHECK(t.rho > 0);
        CHECK(t.sigma * t.sigma * p.c == doctest::Approx(t.rho).epsilon(1e-14));
    }
    CHECK(saw_ode);
    for (int m = 1; m <= 16; ++m)
        if (svd[m].trusted) CHECK(svd[m].rho < svd[m - 1].rho);
}

TEST_CASE("hybrid spectrum: Rayleigh route agrees with Nystrom where both apply")
{
    HybridOptions o;
    o.rayleigh_all = true;
    auto r = hybrid_spectrum(1.0, 10, o);
    auto n = hybrid_spectrum(1.0, 10);
    for (int m = 0; m <= 10; ++m) {
        CHECK_FALSE(r.nystrom_route[m]);
        CHECK(n.nystrom_route[m]);
        if (n.rho[m] > 1e-10) CHECK(r.rho[m] == doctest::Approx(n.rho[m]).epsilon(1e-6));
        for (double x : {-0.9, 0.0, 0.37}) CHECK(r.g_at(m, x) == doctest::Approx(n.g_at(m, x)).epsilon(1e-6).scale(1));
    }
    CHECK(default_basis_size(5) == 60);
    CHECK(default_basis_size(40) == 2 * 41 + 40);
}

TEST_CASE("coefficients of a probe match weighted inner products with phi")
{
    // F = sech(2x) (1 + x) lies in L2(cosh(x)); its observation is h(y) = int e^{icyt} F(t) dt
    OperatorParams p{1.0, 1.0};
    auto svd = compute_svd(p, 11);
    auto F = [](double x) { return (1.0 + x) / std::cosh(2 * x); };
    const auto& pg = svd[0].phi_grid;
    std::vector<cd> Fv;
    for (double x : pg.nodes) Fv.push_back(F(x));
    double Fn2 = 0;
    for (std::size_t k = 0; k < pg.size(); ++k) Fn2 += pg.weights[k] * std::cosh(pg.nodes[k]) * std::norm(Fv[k]);

    double partial = 0;
    for (const auto& t : svd) {
        cd a_obs = 0;
        for (std::size_t i = 0; i < t.g_grid.size(); ++i) {
            double y = t.g_grid.nodes[i];
            cd h = 0;
            for (std::size_t k = 0; k < pg.size(); ++k) h += pg.weights[k] * std::exp(cd(0, p.c * y * pg.nodes[k])) * Fv[k];
            a_obs += t.g_grid.weights[i] * h * t.g[i];
        }
        a_obs /= t.sigma;
        cd a_dir = cosh_inner(p.b, pg, Fv, t.phi);
        CHECK(std::abs(a_obs - a_dir) < 1e-4 * std::max(1.0, std::abs(a_dir)));
        partial += std::norm(a_dir);
    }
    CHECK(partial <= Fn2 * (1 + 1e-6));
}

TEST_CASE("rescaling identity")
{
    // compare on one grid: the extent of a full set follows its smallest rho
    auto same = compute_svd(OperatorParams{1.0, 0.8}, 4);
    SvdOptions so;
    so.T = phi_extent(OperatorParams{1.0, 0.8}, same.back().rho);
    for (const auto& t : same) {
        auto r = rescale_phi(1.0, 0.8, t, so);
        CHECK(r.sigma == t.sigma);
        for (std::size_t k = 0; k < t.phi.size(); ++k) CHECK(std::abs(r.phi[k] - t.phi[k]) < 1e-14);
    }

    const double b = 2.0, c = 1.0;
    auto unit = compute_svd(OperatorParams{1.0, c / b}, 6);
    auto direct = compute_svd(OperatorParams{b, c}, 6);
    SvdOptions bo;
    bo.T = phi_extent(OperatorParams{b, c}, direct.back().rho);
    for (int m = 0; m <= 6; ++m) {
        auto r = rescale_phi(b, c, unit[m], bo);
        CHECK(std::abs(cosh_norm(b, rescale_phi(b, c, unit[m])) - 1) < 1e-4);
        CHECK(std::abs(cosh_norm(b, r) - 1) < 1e-4);
        CHECK(r.sigma == doctest::Approx(direct[m].sigma).epsilon(1e-10));
        REQUIRE(r.phi.size() == direct[m].phi.size());
        std::vector<cd> d(r.phi.size());
        for (std::size_t k = 0; k < d.size(); ++k) d[k] = r.phi[k] - direct[m].phi[k];
        CHECK(std::sqrt(cosh_inner(b, r.phi_grid, d, d).real()) < 1e-5);
    }

    SvdTriplet bad = unit[0];
    bad.trusted = false;
    CHECK_THROWS_AS(rescale_phi(b, c, bad), UntrustedIndexError);
}

TEST_CASE("rho monotone in c at fixed b")
{
    const double b = 1.0;
    std::vector<std::vector<SvdTriplet>> all;
    const double cs[] = {0.25, 0.5, 1.0, 2.0};
    for (double c : cs) all.push_back(compute_svd(OperatorParams{b, c}, 10));
    for (int k = 1; k < 4; ++k)
        for (int m = 0; m <= 10; ++m) {
            CHECK(all[k - 1][m].rho <= all[k][m].rho * (1 + 1e-10));
            CHECK(all[k - 1][m].sigma * std::sqrt(cs[k - 1]) <= all[k][m].sigma * std::sqrt(cs[k]) * (1 + 1e-10));
        }
}

TEST_CASE("phi extent covers the weighted tail")
{
    OperatorParams p{1.0, 0.25};
    CHECK(phi_extent(p, 2.0) == 20.0);
    CHECK(phi_extent(OperatorParams{2.0, 1.0}, 2.0) == 10.0);
    CHECK(phi_extent(p, 1e-20) == doctest::Approx(std::log(8 * 0.25 / 1e-20) + 18.5));
    CHECK_THROWS_AS(phi_extent(p, 0.0), std::invalid_argument);
    // small rho at small c: the mass of phi_m sits far out, norms still hold
    auto svd = compute_svd(p, 10);
    for (const auto& t : svd)
        if (t.trusted) CHECK(std::abs(cosh_norm(p.b, t) - 1) < 1e-4);
}

TEST_CASE("g off the grid by interpolation")
{
    auto svd = compute_svd(OperatorParams{1.0, 1.0}, 3);
    auto hs = hybrid_spectrum(1.0, 3);
    for (int m = 0; m <= 3; ++m)
        for (double x : {-0.99, -0.2, 0.5, 1.0}) CHECK(svd[m].g_at(x) == doctest::Approx(hs.g_at(m, x)).epsilon(1e-9));
    CHECK_THROWS_AS(compute_svd(OperatorParams{1.0, 1.0}, -1), std::invalid_argument);
}
