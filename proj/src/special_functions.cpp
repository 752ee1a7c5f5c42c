#include "sechprolate/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sechprolate {

namespace {

constexpr double pi = std::numbers::pi;

// P_n(x) and P_n'(x), unnormalized.
void legendre_pn(int n, double x, double& pn, double& dpn)
{
    double p0 = 1.0, p1 = x;
    if (n == 0) {
        pn = 1.0;
        dpn = 0.0;
        return;
    }
    for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    pn = p1;
    dpn = n * (x * p1 - p0) / (x * x - 1.0);
}

double agm(double a, double b)
{
    for (int it = 0; it < 64; ++it) {
        double an = 0.5 * (a + b);
        double bn = std::sqrt(a * b);
        if (std::abs(an - bn) <= 1e-16 * an) return 0.5 * (an + bn);
        a = an;
        b = bn;
    }
    return 0.5 * (a + b);
}

} // namespace

QuadratureGrid gauss_legendre(int n, double lo, double hi)
{
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    if (!(lo < hi)) throw std::invalid_argument("gauss_legendre: need lo < hi");
    std::vector<double> x(n), w(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(pi * (4.0 * i + 3.0) / (4.0 * n + 2.0));
        double pn = 0, dpn = 0;
        for (int it = 0; it < 100; ++it) {
            legendre_pn(n, z, pn, dpn);
            double dz = pn / dpn;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        legendre_pn(n, z, pn, dpn);
        double wi = 2.0 / ((1.0 - z * z) * dpn * dpn);
        // nodes ascending: index i from the right end
        x[n - 1 - i] = z;
        x[i] = -z;
        w[n - 1 - i] = wi;
        w[i] = wi;
    }
    if (n % 2 == 1) x[n / 2] = 0.0;
    QuadratureGrid g;
    g.lo = lo;
    g.hi = hi;
    g.nodes.resize(n);
    g.weights.resize(n);
    const double h = 0.5 * (hi - lo), m = 0.5 * (hi + lo);
    for (int i = 0; i < n; ++i) {
        g.nodes[i] = m + h * x[i];
        g.weights[i] = h * w[i];
    }
    return g;
}

QuadratureGrid gauss_panels(const std::vector<double>& breaks, int order)
{
    if (breaks.size() < 2) throw std::invalid_argument("gauss_panels: need at least one panel");
    QuadratureGrid ref = gauss_legendre(order);
    QuadratureGrid g;
    g.lo = breaks.front();
    g.hi = breaks.back();
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        double a = breaks[p], b = breaks[p + 1];
        if (!(a < b)) throw std::invalid_argument("gauss_panels: breaks must increase");
        double h = 0.5 * (b - a), m = 0.5 * (a + b);
        for (int i = 0; i < order; ++i) {
            g.nodes.push_back(m + h * ref.nodes[i]);
            g.weights.push_back(h * ref.weights[i]);
        }
    }
    return g;
}

double legendre_normalized(int m, double x)
{
    if (m < 0) throw std::invalid_argument("legendre_normalized: negative degree");
    if (std::abs(x) > 1.0) throw std::invalid_argument("legendre_normalized: |x| > 1");
    double p0 = 1.0, p1 = x;
    if (m == 0) return std::sqrt(0.5);
    for (int k = 2; k <= m; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return std::sqrt(m + 0.5) * p1;
}

void legendre_normalized_all(int n, double x, double* out)
{
    if (n <= 0) return;
    double p0 = 1.0, p1 = x;
    out[0] = std::sqrt(0.5);
    if (n > 1) out[1] = std::sqrt(1.5) * x;
    for (int k = 2; k < n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
        out[k] = std::sqrt(k + 0.5) * p2;
    }
}

void legendre_normalized_deriv_all(int n, double x, double* val, double* der)
{
    if (n <= 0) return;
    // P_k' = P_{k-2}' + (2k-1) P_{k-1}
    std::vector<double> p(n), dp(n);
    p[0] = 1.0;
    dp[0] = 0.0;
    if (n > 1) {
        p[1] = x;
        dp[1] = 1.0;
    }
    for (int k = 2; k < n; ++k) {
        p[k] = ((2.0 * k - 1.0) * x * p[k - 1] - (k - 1.0) * p[k - 2]) / k;
        dp[k] = dp[k - 2] + (2.0 * k - 1.0) * p[k - 1];
    }
    for (int k = 0; k < n; ++k) {
        double s = std::sqrt(k + 0.5);
        val[k] = s * p[k];
        der[k] = s * dp[k];
    }
}

double elliptic_K(double k)
{
    if (k < 0.0) k = -k;
    if (k >= 1.0) throw std::domain_error("elliptic_K: modulus must be < 1");
    return pi / (2.0 * agm(1.0, std::sqrt((1.0 - k) * (1.0 + k))));
}

double elliptic_K_complement(double kp)
{
    if (kp <= 0.0) throw std::domain_error("elliptic_K_complement: complement must be > 0");
    if (kp > 1.0) throw std::domain_error("elliptic_K_complement: complement must be <= 1");
    return pi / (2.0 * agm(1.0, kp));
}

std::vector<double> spherical_bessel_sequence(int kmax, double z)
{
    if (kmax < 0) throw std::invalid_argument("spherical_bessel: negative order");
    std::vector<double> j(kmax + 1, 0.0);
    if (z == 0.0) {
        j[0] = 1.0;
        return j;
    }
    const double sgn = z < 0 ? -1.0 : 1.0;
    const double az = std::abs(z);
    const int start = kmax + static_cast<int>(std::ceil(20.0 + az));
    double jp1 = 0.0, jk = 1e-300;
    // keep the recurrence in range; values at k > kmax are not stored
    for (int k = start; k > 0; --k) {
        double jm1 = (2.0 * k + 1.0) / az * jk - jp1;
        jp1 = jk;
        jk = jm1;
        if (k - 1 <= kmax) j[k - 1] = jk;
        if (k <= kmax) j[k] = jp1;
        if (std::abs(jk) > 1e250) {
            jk *= 1e-250;
            jp1 *= 1e-250;
            for (int i = k - 1; i <= kmax; ++i) j[i] *= 1e-250;
        }
    }
    double j0 = std::sin(az) / az;
    double j1 = std::sin(az) / (az * az) - std::cos(az) / az;
    double scale;
    if (kmax >= 1 && std::abs(j1) > std::abs(j0))
        scale = j1 / j[1];
    else if (kmax >= 1)
        scale = j0 / j[0];
    else {
        // j[1] was not stored; recompute the ratio from jp1
        scale = std::abs(j1) > std::abs(j0) ? j1 / jp1 : j0 / j[0];
    }
    for (int k = 0; k <= kmax; ++k) {
        j[k] *= scale;
        if (sgn < 0 && (k % 2 == 1)) j[k] = -j[k];
    }
    return j;
}

double spherical_bessel_ratio(int k, double z)
{
    return spherical_bessel_sequence(k, z)[k];
}

std::vector<double> gauss_barycentric_weights(const QuadratureGrid& g)
{
    const std::size_t n = g.size();
    std::vector<double> bw(n);
    const double h = 0.5 * (g.hi - g.lo), m = 0.5 * (g.hi + g.lo);
    for (std::size_t i = 0; i < n; ++i) {
        double x = (g.nodes[i] - m) / h;
        double w = g.weights[i] / h;
        bw[i] = ((i % 2) ? -1.0 : 1.0) * std::sqrt((1.0 - x * x) * w);
    }
    return bw;
}

double barycentric_eval(const QuadratureGrid& g, const std::vector<double>& bw,
                        const double* values, double x)
{
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double d = x - g.nodes[i];
        if (d == 0.0) return values[i];
        double t = bw[i] / d;
        num += t * values[i];
        den += t;
    }
    return num / den;
}

} // namespace sechprolate
