#include "sechprolate/sech_operator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
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

double l2_norm(const QuadratureGrid& g, const std::vector<std::complex<double>>& v)
{
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * std::norm(v[i]);
    return std::sqrt(s);
}

} // namespace

void OperatorParams::validate() const
{
    if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("b must be positive");
    if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("c must be positive");
}

double kernel(double c, double x, double y)
{
    return pi * c * sech(pi * c * (x - y) / 2.0);
}

int default_nystrom_size(int m_max)
{
    return std::max(200, 20 * (m_max + 1));
}

NystromSpectrum nystrom_eigensystem(double c, int n, int m_max)
{
    if (!(c > 0.0)) throw std::invalid_argument("nystrom_eigensystem: c must be positive");
    if (m_max < 0) throw std::invalid_argument("nystrom_eigensystem: m_max must be >= 0");
    if (n < 4 * (m_max + 1))
        throw std::invalid_argument("nystrom_eigensystem: need n >= 4 (m_max + 1)");

    NystromSpectrum s;
    s.c = c;
    s.n = n;
    s.grid = gauss_legendre(n);
    const auto& x = s.grid.nodes;
    const auto& w = s.grid.weights;
    std::vector<double> sw(n);
    for (int i = 0; i < n; ++i) sw[i] = std::sqrt(w[i]);

    // Gauss nodes are symmetric, so the symmetrized matrix splits into even and odd blocks
    // on the nonnegative nodes; eigenvectors then have exact parity.
    const int h = n / 2;
    const bool mid = n % 2 == 1;
    auto A = [&](int i, int j) { return sw[i] * kernel(c, x[i], x[j]) * sw[j]; };
    const int ne = h + (mid ? 1 : 0);
    Eigen::MatrixXd E(ne, ne), O(h, h);
    // block index k <-> node n - h + k (positive side), mirror node h - 1 - k
    for (int a = 0; a < h; ++a)
        for (int b = 0; b <= a; ++b) {
            const int i = n - h + a, j = n - h + b, jm = h - 1 - b;
            const double d = A(i, j), r = A(i, jm);
            E(a, b) = E(b, a) = d + r;
            O(a, b) = O(b, a) = d - r;
        }
    if (mid) {
        const int z = h;
        for (int a = 0; a < h; ++a) E(a, h) = E(h, a) = std::sqrt(2.0) * A(n - h + a, z);
        E(h, h) = A(z, z);
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ee(E), eo;
    if (h > 0) eo.compute(O);
    if (ee.info() != Eigen::Success || (h > 0 && eo.info() != Eigen::Success)) {
        std::ostringstream os;
        os << "nystrom_eigensystem: eigensolver failed (c=" << c << ", n=" << n << ")";
        throw NumericalError(os.str());
    }

    // merge the two ascending spectra into one decreasing list
    struct Entry {
        double rho;
        bool odd;
        int col;
    };
    std::vector<Entry> all;
    all.reserve(n);
    for (int k = 0; k < ne; ++k) all.push_back({ee.eigenvalues()(k), false, k});
    for (int k = 0; k < h; ++k) all.push_back({eo.eigenvalues()(k), true, k});
    std::stable_sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) { return a.rho > b.rho; });
    s.rho_all.resize(n);
    for (int i = 0; i < n; ++i) s.rho_all[i] = all[i].rho;

    const int cnt = m_max + 1;
    s.rho.assign(s.rho_all.begin(), s.rho_all.begin() + cnt);
    s.g.resize(n, cnt);
    s.trusted.resize(cnt);
    const double rho0 = s.rho_all[0];
    const double r2 = std::sqrt(0.5);
    for (int m = 0; m < cnt; ++m) {
        const Entry& e = all[m];
        Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
        if (e.odd) {
            const auto v = eo.eigenvectors().col(e.col);
            for (int a = 0; a < h; ++a) {
                u(n - h + a) = r2 * v(a);
                u(h - 1 - a) = -r2 * v(a);
            }
        } else {
            const auto v = ee.eigenvectors().col(e.col);
            for (int a = 0; a < h; ++a) {
                u(n - h + a) = r2 * v(a);
                u(h - 1 - a) = r2 * v(a);
            }
            if (mid) u(h) = v(h);
        }
        double nrm = 0.0;
        for (int i = 0; i < n; ++i) {
            s.g(i, m) = u(i) / sw[i];
            nrm += w[i] * s.g(i, m) * s.g(i, m);
        }
        nrm = std::sqrt(nrm);
        double sgn = s.g(n - 1, m) < 0 ? -1.0 : 1.0;
        for (int i = 0; i < n; ++i) s.g(i, m) *= sgn / nrm;
        s.trusted[m] = s.rho[m] > trust_floor * rho0;
        if (m + 1 < n && s.rho_all[m] - s.rho_all[m + 1] < 1e-10 * rho0) s.small_gaps.push_back(m);
    }
    return s;
}

double NystromSpectrum::eval(int m, double x) const
{
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += grid.weights[j] * kernel(c, x, grid.nodes[j]) * g(j, m);
    return acc / rho[m];
}

double rho_rayleigh(double c, const QuadratureGrid& grid, const std::vector<double>& g)
{
    if (!(c > 0.0)) throw std::invalid_argument("rho_rayleigh: c must be positive");
    if (g.size() != grid.size()) throw std::invalid_argument("rho_rayleigh: size mismatch");
    double nrm = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) nrm += grid.weights[i] * g[i] * g[i];
    if (std::abs(std::sqrt(nrm) - 1.0) > 1e-8)
        throw std::invalid_argument("rho_rayleigh: input must have unit L2 norm");

    // sech tail e^{-X/c} < 1e-18
    const double XT = c * 42.0 + 1.0;
    // ghat oscillates with unit frequency; panels of width <= 1
    const int panels = static_cast<int>(std::ceil(XT));
    std::vector<double> br(panels + 1);
    for (int p = 0; p <= panels; ++p) br[p] = XT * p / panels;
    QuadratureGrid outer = gauss_panels(br, 20);

    // The integrand is even in x for real g: integrate over (0, XT) and double.
    const std::size_t n = grid.size();
    double acc = 0.0;
    for (std::size_t k = 0; k < outer.size(); ++k) {
        const double x = outer.nodes[k];
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = x * grid.nodes[i];
            const double wg = grid.weights[i] * g[i];
            re += wg * std::cos(a);
            im += wg * std::sin(a);
        }
        acc += outer.weights[k] * sech(x / c) * (re * re + im * im);
    }
    return 2.0 * acc;
}

double rho_rayleigh(double c, const SampledFunction& g)
{
    std::vector<double> v(g.values.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::abs(g.values[i].imag()) > 1e-12 * (1.0 + std::abs(g.values[i].real())))
            throw std::invalid_argument("rho_rayleigh: expects a real function");
        v[i] = g.values[i].real();
    }
    return rho_rayleigh(c, g.grid, v);
}

SampledFunction apply_forward(const OperatorParams& params, const SampledFunction& f,
                              const std::vector<double>& y_grid)
{
    params.validate();
    if (f.values.size() != f.grid.size()) throw std::invalid_argument("apply_forward: size mismatch");
    const double T = std::max(std::abs(f.grid.lo), std::abs(f.grid.hi));
    if (params.c * T / pi > static_cast<double>(f.grid.size()) / 4.0)
        throw ResolutionError("apply_forward: grid too coarse for the oscillation");
    SampledFunction out;
    out.grid.nodes = y_grid;
    out.grid.weights.assign(y_grid.size(), 0.0);
    out.grid.lo = -1.0;
    out.grid.hi = 1.0;
    out.values.resize(y_grid.size());
    for (std::size_t k = 0; k < y_grid.size(); ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < f.grid.size(); ++i) {
            const double a = params.c * y_grid[k] * f.grid.nodes[i];
            acc += f.grid.weights[i] * std::complex<double>(std::cos(a), std::sin(a)) * f.values[i];
        }
        out.values[k] = acc;
    }
    return out;
}

SampledFunction apply_adjoint(const OperatorParams& params, const SampledFunction& h,
                              const std::vector<double>& x_grid)
{
    params.validate();
    if (h.values.size() != h.grid.size()) throw std::invalid_argument("apply_adjoint: size mismatch");
    SampledFunction out;
    out.grid.nodes = x_grid;
    out.grid.weights.assign(x_grid.size(), 0.0);
    if (!x_grid.empty()) {
        out.grid.lo = *std::min_element(x_grid.begin(), x_grid.end());
        out.grid.hi = *std::max_element(x_grid.begin(), x_grid.end());
    }
    out.values.resize(x_grid.size());
    for (std::size_t k = 0; k < x_grid.size(); ++k) {
        const double x = x_grid[k];
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < h.grid.size(); ++i) {
            const double a = -params.c * x * h.grid.nodes[i];
            acc += h.grid.weights[i] * std::complex<double>(std::cos(a), std::sin(a)) * h.values[i];
        }
        out.values[k] = sech(params.b * x) * acc;
    }
    return out;
}

QuadratureGrid real_line_grid(double b, double c, double T, int order)
{
    // geometric panels from the origin, capped by the decay and oscillation scales
    const double cap = std::min(2.0 / b, 2.0 * pi / c);
    double h = 0.25 * std::min(1.0 / b, 2.0 * pi / c);
    std::vector<double> right{0.0};
    while (right.back() < T) {
        double nxt = right.back() + h;
        if (nxt > T || T - nxt < 0.25 * h) nxt = T;
        right.push_back(nxt);
        h = std::min(cap, h * 1.2);
    }
    std::vector<double> br;
    for (auto it = right.rbegin(); it != right.rend(); ++it) br.push_back(-*it);
    for (std::size_t i = 1; i < right.size(); ++i) br.push_back(right[i]);
    return gauss_panels(br, order);
}

double verify_factorization(const OperatorParams& params, const SampledFunction& h)
{
    params.validate();
    const double hn = l2_norm(h.grid, h.values);
    if (hn == 0.0) return 0.0;

    // sech(bT) below 1e-14 relative
    const double T = 34.0 / params.b;
    QuadratureGrid xg = real_line_grid(params.b, 2.0 * params.c, T, 20);
    SampledFunction Fh = apply_adjoint(params, h, xg.nodes);
    Fh.grid = xg;

    std::vector<double> ys(h.grid.nodes);
    // forward map integrates over the real-line grid; resolution already built into the panels
    std::vector<std::complex<double>> lhs(ys.size());
    for (std::size_t k = 0; k < ys.size(); ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < xg.size(); ++i) {
            const double a = params.c * ys[k] * xg.nodes[i];
            acc += xg.weights[i] * std::complex<double>(std::cos(a), std::sin(a)) * Fh.values[i];
        }
        lhs[k] = params.c * acc;
    }
    const double cb = params.c / params.b;
    std::vector<std::complex<double>> diff(ys.size());
    for (std::size_t k = 0; k < ys.size(); ++k) {
        std::complex<double> q = 0.0;
        for (std::size_t j = 0; j < h.grid.size(); ++j)
            q += h.grid.weights[j] * kernel(cb, ys[k], h.grid.nodes[j]) * h.values[j];
        diff[k] = lhs[k] - q;
    }
    return l2_norm(h.grid, diff) / hn;
}

} // namespace sechprolate
