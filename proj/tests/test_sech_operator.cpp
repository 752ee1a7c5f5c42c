#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "sechprolate/errors.hpp"
#include "sechprolate/sech_operator.hpp"

using namespace sechprolate;
using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

namespace {

SampledFunction sample(const QuadratureGrid& g, const std::function<cd(double)>& f)
{
    SampledFunction s{g, {}};
    for (double x : g.nodes) s.values.push_back(f(x));
    return s;
}

double rel_parity_defect(const NystromSpectrum& s, int m)
{
    // Gauss nodes are symmetric: x_{n-1-i} = -x_i
    double even = 0, odd = 0;
    for (int i = 0; i < s.n; ++i) {
        double a = s.g(i, m), b = s.g(s.n - 1 - i, m);
        even += s.grid.weights[i] * (a - b) * (a - b);
        odd += s.grid.weights[i] * (a + b) * (a + b);
    }
    return std::sqrt(std::min(even, odd));
}

} // namespace

TEST_CASE("kernel")
{
    for (double c : {0.1, 1.0, 7.0}) CHECK(kernel(c, 0.3, 0.3) == doctest::Approx(pi * c));
    CHECK(kernel(1.0, 1.0, -1.0) == doctest::Approx(pi / std::cosh(pi)).epsilon(1e-15));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 100; ++i) {
        double c = 0.1 + 5 * (u(rng) + 1), x = u(rng), y = u(rng);
        CHECK(kernel(c, x, y) == kernel(c, y, x));
        CHECK(kernel(c, x, y) > 0);
    }
}

TEST_CASE("OperatorParams validation")
{
    auto check = [](double b, double c) { OperatorParams{b, c}.validate(); };
    CHECK_NOTHROW(check(1.0, 2.0));
    CHECK_THROWS_AS(check(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(check(1.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(check(1.0, NAN), std::invalid_argument);
}

TEST_CASE("Nystrom trace, ordering and parity")
{
    for (double c : {0.25, 1.0, 4.0}) {
        auto s = nystrom_eigensystem(c, 200, 15);
        double tr = 0;
        for (double r : s.rho_all) tr += r;
        CHECK(std::abs(tr / (2 * pi * c) - 1) < 1e-10);
        for (int m = 0; m < s.count(); ++m) {
            if (!s.trusted[m]) continue;
            CHECK(s.rho[m] > 0);
            if (m > 0) CHECK(s.rho[m] < s.rho[m - 1]);
            CHECK(rel_parity_defect(s, m) < 1e-8);
            // unit norm, sign convention
            double nrm = 0;
            for (int i = 0; i < s.n; ++i) nrm += s.grid.weights[i] * s.g(i, m) * s.g(i, m);
            CHECK(nrm == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(s.g(s.n - 1, m) > 0);
        }
        // the flag is absolute, so it fires once rho itself drops below 1e-10 rho_0
        for (int m : s.small_gaps) CHECK(s.rho_all[m + 1] < 1e-10 * s.rho[0]);
    }
}

TEST_CASE("Nystrom grid refinement and trust flags")
{
    auto a = nystrom_eigensystem(1.0, 200, 3);
    auto b = nystrom_eigensystem(1.0, 400, 3);
    CHECK(std::abs(a.rho[0] / b.rho[0] - 1) < 1e-10);
    auto s = nystrom_eigensystem(1.0, 200, 30);
    CHECK(s.trusted[0]);
    CHECK_FALSE(s.trusted[30]);
    for (int m = 0; m < 31; ++m) CHECK(s.trusted[m] == (s.rho[m] > trust_floor * s.rho[0]));
    CHECK_THROWS_AS(nystrom_eigensystem(1.0, 10, 5), std::invalid_argument);
    CHECK_THROWS_AS(nystrom_eigensystem(-1.0, 200, 5), std::invalid_argument);
}

TEST_CASE("Nystrom interpolation reproduces node values")
{
    auto s = nystrom_eigensystem(2.0, 200, 5);
    for (int m = 0; m < 6; ++m)
        for (int i : {0, 57, 100, 199}) CHECK(s.eval(m, s.grid.nodes[i]) == doctest::Approx(s.g(i, m)).epsilon(1e-10));
}

TEST_CASE("eigenvalues nondecreasing in c")
{
    const double cs[] = {0.25, 0.5, 1.0, 2.0, 4.0};
    std::vector<std::vector<double>> rho;
    for (double c : cs) rho.push_back(nystrom_eigensystem(c, 240, 10).rho);
    for (int k = 1; k < 5; ++k) {
        auto tr = nystrom_eigensystem(cs[k - 1], 240, 10).trusted;
        for (int m = 0; m <= 10; ++m)
            if (tr[m]) CHECK(rho[k - 1][m] <= rho[k][m] * (1 + 1e-10));
    }
}

TEST_CASE("rho_rayleigh")
{
    // 2 sin^2(x)/x^2 against sech(x/c): mpmath quad over the real line
    const double cs[] = {1.0, 0.25, 4.0};
    const double ref[] = {4.0607185962088857802, 1.4973850799621617772, 5.7000657192290458912};
    auto g = gauss_legendre(64);
    std::vector<double> v(64, std::sqrt(0.5));
    for (int i = 0; i < 3; ++i) CHECK(std::abs(rho_rayleigh(cs[i], g, v) / ref[i] - 1) < 1e-10);

    auto s = nystrom_eigensystem(1.0, 200, 14);
    for (int m = 0; m < s.count(); ++m) {
        if (s.rho[m] <= 1e-10) continue;
        std::vector<double> gm(s.n);
        for (int i = 0; i < s.n; ++i) gm[i] = s.g(i, m);
        double r = rho_rayleigh(1.0, s.grid, gm);
        CHECK(r >= 0);
        CHECK(std::abs(r / s.rho[m] - 1) < 1e-6);
    }

    std::vector<double> bad(64, 1.0);
    CHECK_THROWS_AS(rho_rayleigh(1.0, g, bad), std::invalid_argument);
    SampledFunction cplx = sample(g, [](double) { return cd(0.5, 0.5); });
    CHECK_THROWS_AS(rho_rayleigh(1.0, cplx), std::invalid_argument);
}

TEST_CASE("rho_rayleigh is nonnegative on random unit vectors")
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    auto g = gauss_legendre(48);
    for (int t = 0; t < 10; ++t) {
        std::vector<double> v(48);
        double n = 0;
        for (int i = 0; i < 48; ++i) {
            v[i] = nd(rng);
            n += g.weights[i] * v[i] * v[i];
        }
        for (auto& x : v) x /= std::sqrt(n);
        CHECK(rho_rayleigh(0.7, g, v) >= 0);
    }
}

TEST_CASE("apply_forward")
{
    for (auto [b, c] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}, std::pair{0.5, 3.0}}) {
        OperatorParams p{b, c};
        auto xg = real_line_grid(b, c, 40.0 / b, 20);
        auto f = sample(xg, [b](double x) { return cd(1.0 / std::cosh(b * x)); });
        std::vector<double> ys{-1.0, -0.4, 0.0, 0.25, 0.9};
        auto out = apply_forward(p, f, ys);
        for (std::size_t k = 0; k < ys.size(); ++k) {
            double ref = pi / b / std::cosh(pi * c * ys[k] / (2 * b));
            CHECK(std::abs(out.values[k] - ref) < 1e-12 * ref + 1e-14);
        }
        auto zero = sample(xg, [](double) { return cd(0.0); });
        for (auto v : apply_forward(p, zero, ys).values) CHECK(v == cd(0.0));
    }

    // even real inputs give real even outputs
    OperatorParams p{1.0, 1.5};
    auto xg = real_line_grid(1.0, 1.5, 40.0, 20);
    std::vector<std::function<double(double)>> evens{
        [](double x) { return 1.0 / std::cosh(x); },
        [](double x) { return std::exp(-x * x); },
        [](double x) { return x * x / std::cosh(2 * x); },
        [](double x) { return std::cos(3 * x) / std::cosh(x); },
        [](double x) { return 1.0 / (1 + x * x * x * x) / std::cosh(x); }};
    std::vector<double> ys{-0.8, -0.3, 0.3, 0.8};
    for (auto& f : evens) {
        auto out = apply_forward(p, sample(xg, [&](double x) { return cd(f(x)); }), ys);
        for (int k = 0; k < 4; ++k) {
            CHECK(std::abs(out.values[k].imag()) < 1e-13);
            CHECK(std::abs(out.values[k] - out.values[3 - k]) < 1e-13);
        }
    }

    // too few nodes for c T / pi
    auto coarse = sample(gauss_legendre(8, -50.0, 50.0), [](double) { return cd(1.0); });
    CHECK_THROWS_AS(apply_forward(OperatorParams{1.0, 5.0}, coarse, ys), ResolutionError);
}

TEST_CASE("apply_adjoint on Legendre inputs")
{
    auto g = gauss_legendre(64);
    std::vector<double> xs;
    for (int i = 0; i < 20; ++i) xs.push_back(-9.5 + i);
    for (auto [b, c] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}, std::pair{0.5, 3.0}}) {
        OperatorParams p{b, c};
        auto h0 = sample(g, [](double t) { return cd(legendre_normalized(0, t)); });
        auto out0 = apply_adjoint(p, h0, xs);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double z = c * xs[i];
            double ref = std::sqrt(2.0) * std::sin(z) / z / std::cosh(b * xs[i]);
            CHECK(std::abs(out0.values[i] - ref) < 1e-13);
        }
        // int e^{-izt} Pbar_k(t) dt = 2 sqrt(k + 1/2) (-i)^k j_k(z)
        for (int k = 0; k <= 6; ++k) {
            auto hk = sample(g, [k](double t) { return cd(legendre_normalized(k, t)); });
            auto out = apply_adjoint(p, hk, xs);
            cd mi = std::pow(cd(0, -1), k);
            for (std::size_t i = 0; i < xs.size(); ++i) {
                double z = c * xs[i];
                cd ref = 2 * std::sqrt(k + 0.5) * mi * spherical_bessel_ratio(k, z) / std::cosh(b * xs[i]);
                CHECK(std::abs(out.values[i] - ref) < 1e-12);
            }
        }
    }
}

TEST_CASE("adjointness in the weighted space")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (auto [b, c] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}, std::pair{0.5, 2.0}}) {
        OperatorParams p{b, c};
        auto yg = gauss_legendre(64);
        auto xg = real_line_grid(b, c, 40.0 / b, 20);
        for (int t = 0; t < 5; ++t) {
            double a1 = u(rng), a2 = u(rng), a3 = u(rng), w = 2 + u(rng);
            // f decays like sech(bx)^2 so it lies in L2(cosh)
            auto f = sample(xg, [&](double x) {
                double s = 1.0 / std::cosh(b * x);
                return cd(a1 * s * s, a2 * std::sin(w * x) * s * s);
            });
            auto h = sample(yg, [&](double y) { return cd(std::cos(a3 * 3 * y), y * a1); });
            auto Ff = apply_forward(p, f, yg.nodes);
            auto Fh = apply_adjoint(p, h, xg.nodes);
            cd lhs = 0, rhs = 0;
            for (std::size_t i = 0; i < yg.size(); ++i) lhs += yg.weights[i] * Ff.values[i] * std::conj(h.values[i]);
            for (std::size_t i = 0; i < xg.size(); ++i)
                rhs += xg.weights[i] * f.values[i] * std::conj(Fh.values[i]) * std::cosh(b * xg.nodes[i]);
            CHECK(std::abs(lhs - rhs) < 1e-8 * std::abs(lhs));
        }
    }
}

TEST_CASE("factorization residual")
{
    auto g = gauss_legendre(48);
    auto h0 = sample(g, [](double t) { return cd(legendre_normalized(0, t)); });
    CHECK(verify_factorization(OperatorParams{1.0, 1.0}, h0) < 1e-8);
    auto trig = sample(g, [](double t) { return cd(0.3 + std::cos(2 * t) - 0.7 * std::sin(5 * t) + 0.2 * std::cos(9 * t)); });
    CHECK(verify_factorization(OperatorParams{2.0, 0.5}, trig) < 1e-8);
    CHECK(verify_factorization(OperatorParams{0.5, 2.0}, trig) < 1e-8);
    auto zero = sample(g, [](double) { return cd(0.0); });
    CHECK(verify_factorization(OperatorParams{1.0, 1.0}, zero) == 0.0);
}

TEST_CASE("real_line_grid integrates sech exactly enough")
{
    for (auto [b, c] : {std::pair{1.0, 1.0}, std::pair{1.0 / 6.5, 0.5}, std::pair{3.0, 8.0}}) {
        auto xg = real_line_grid(b, c, 40.0 / b, 16);
        double s = 0;
        for (std::size_t i = 0; i < xg.size(); ++i) s += xg.weights[i] / std::cosh(b * xg.nodes[i]);
        CHECK(s == doctest::Approx(pi / b).epsilon(1e-12));
        CHECK(xg.nodes.front() > -40.0 / b);
        CHECK(xg.nodes.back() < 40.0 / b);
    }
}
