#include "sechprolate/extrapolation.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>

#include "sechprolate/bounds.hpp"
#include "sechprolate/errors.hpp"

namespace sechprolate {

namespace {

constexpr double pi = std::numbers::pi;

std::vector<double> linspace(double a, double b, int n)
{
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1.0);
    return v;
}

double sinc_normalized(double x)
{
    if (x == 0.0) return 1.0;
    return std::sin(pi * x) / (pi * x);
}

} // namespace

std::vector<double> coefficients(const ObservationWindow& obs, const std::vector<SvdTriplet>& svd)
{
    if (obs.samples.size() != obs.grid.size())
        throw std::invalid_argument("coefficients: samples do not match the window grid");
    for (double t : obs.grid.nodes)
        if (t < -1.0 || t > 1.0) throw std::invalid_argument("coefficients: window grid must lie in [-1, 1]");
    std::vector<double> d(svd.size(), 0.0);
    for (std::size_t m = 0; m < svd.size(); ++m) {
        double acc = 0.0;
        for (std::size_t i = 0; i < obs.grid.size(); ++i)
            acc += obs.grid.weights[i] * obs.samples[i] * svd[m].g_at(obs.grid.nodes[i]);
        d[m] = acc;
    }
    return d;
}

ModeReconstructions mode_reconstructions(const OperatorParams& params, const std::vector<SvdTriplet>& svd,
                                         double x0, int count, const ReconstructionOptions& opt)
{
    params.validate();
    if (count > static_cast<int>(svd.size())) throw std::invalid_argument("mode_reconstructions: count");
    double rho_min = svd.empty() ? 1.0 : svd[0].rho;
    for (int m = 0; m < count; ++m)
        if (svd[m].trusted && svd[m].rho > 0.0) rho_min = std::min(rho_min, svd[m].rho);
    const double T = opt.T > 0.0 ? opt.T : phi_extent(params, rho_min);
    const int nx = opt.n_fft;
    const std::vector<double> xs = linspace(-T, T, nx);
    const double dx = xs[1] - xs[0];

    // trapezoid-weighted phi_m on the uniform grid
    std::vector<std::vector<std::complex<double>>> wphi(count, std::vector<std::complex<double>>(nx));
    for (int m = 0; m < count; ++m)
        for (int k = 0; k < nx; ++k) {
            double w = (k == 0 || k == nx - 1) ? 0.5 * dx : dx;
            wphi[m][k] = w * phi_value(params, svd[m].g_grid, svd[m].g, svd[m].sigma, xs[k]);
        }

    ModeReconstructions out;
    out.y = linspace(x0 - opt.half_width, x0 + opt.half_width, opt.n_out);
    out.r.assign(count, std::vector<std::complex<double>>(opt.n_out));
    std::vector<std::complex<double>> acc(count);
    for (int j = 0; j < opt.n_out; ++j) {
        const double s = out.y[j] - x0;
        const std::complex<double> step(std::cos(dx * s), std::sin(dx * s));
        std::fill(acc.begin(), acc.end(), 0.0);
        std::complex<double> z;
        for (int k = 0; k < nx; ++k) {
            if (k % 256 == 0)
                z = std::complex<double>(std::cos(xs[k] * s), std::sin(xs[k] * s));
            else
                z *= step;
            for (int m = 0; m < count; ++m) acc[m] += z * wphi[m][k];
        }
        for (int m = 0; m < count; ++m) out.r[m][j] = acc[m];
    }
    return out;
}

CutoffEstimate cutoff_estimate(const std::vector<double>& d, const std::vector<SvdTriplet>& svd,
                               const ModeReconstructions& modes, int N)
{
    if (N < 0) throw std::invalid_argument("cutoff_estimate: N must be >= 0");
    if (N >= static_cast<int>(modes.r.size()) || N >= static_cast<int>(svd.size())
        || N >= static_cast<int>(d.size()))
        throw UntrustedIndexError("cutoff_estimate: N beyond the computed range");
    for (int m = 0; m <= N; ++m)
        if (!svd[m].trusted) throw UntrustedIndexError("cutoff_estimate: N beyond the trusted range");
    CutoffEstimate est;
    est.N = N;
    est.d.assign(d.begin(), d.begin() + N + 1);
    est.a.resize(N + 1);
    for (int m = 0; m <= N; ++m) est.a[m] = d[m] / svd[m].sigma;
    est.y = modes.y;
    est.f_hat.assign(modes.y.size(), 0.0);
    for (std::size_t j = 0; j < modes.y.size(); ++j) {
        std::complex<double> v = 0.0;
        for (int m = 0; m <= N; ++m) v += est.a[m] * modes.r[m][j];
        est.f_hat[j] = v.real();
    }
    return est;
}

CutoffEstimate cutoff_estimate(const ObservationWindow& obs, const OperatorParams& params,
                               const std::vector<SvdTriplet>& svd, int N, const ReconstructionOptions& opt)
{
    if (N >= static_cast<int>(svd.size())) throw UntrustedIndexError("cutoff_estimate: N beyond the computed range");
    std::vector<double> d = coefficients(obs, svd);
    ModeReconstructions modes = mode_reconstructions(params, svd, obs.x0, N + 1, opt);
    return cutoff_estimate(d, svd, modes, N);
}

std::vector<std::complex<double>> F_on_grid(const OperatorParams& params, const std::vector<SvdTriplet>& svd,
                                            const std::vector<double>& a, const std::vector<double>& x)
{
    std::vector<std::complex<double>> F(x.size(), 0.0);
    for (std::size_t m = 0; m < a.size(); ++m)
        for (std::size_t k = 0; k < x.size(); ++k)
            F[k] += a[m] * phi_value(params, svd[m].g_grid, svd[m].g, svd[m].sigma, x[k]);
    return F;
}

double window_error(const std::vector<double>& y, const std::vector<double>& f_hat,
                    const std::function<double(double)>& truth)
{
    if (!truth) throw std::invalid_argument("window_error: no truth available");
    double acc = 0.0;
    const std::size_t n = y.size();
    for (std::size_t j = 0; j + 1 < n; ++j) {
        double e0 = f_hat[j] - truth(y[j]);
        double e1 = f_hat[j + 1] - truth(y[j + 1]);
        acc += 0.5 * (y[j + 1] - y[j]) * (e0 * e0 + e1 * e1);
    }
    return std::sqrt(acc);
}

double sigma_penalty(const OperatorParams& params, double delta, int N)
{
    params.validate();
    const double bt = beta(params.c / params.b);
    return 2.0 * pi * params.c * delta * delta * std::exp(2.0 * bt * N) / (1.0 - std::exp(-2.0 * bt));
}

int n_max(double delta)
{
    if (!(delta > 0.0)) throw std::invalid_argument("n_max: delta must be positive");
    if (delta >= 1.0) {
        std::cerr << "warning: delta >= 1, N_max set to 0\n";
        return 0;
    }
    return static_cast<int>(std::floor(std::log(1.0 / delta)));
}

double coefficient_norm2(const std::vector<double>& d, const std::vector<SvdTriplet>& svd, int N, int N2)
{
    double acc = 0.0;
    for (int m = N + 1; m <= N2; ++m) {
        double v = 2.0 * pi * d[m] / svd[m].sigma;
        acc += v * v;
    }
    return acc;
}

AdaptiveResult adaptive_N(const std::vector<double>& d, const std::vector<SvdTriplet>& svd,
                          const OperatorParams& params, double delta, BVariant variant)
{
    AdaptiveResult r;
    r.N_max = n_max(delta);
    if (static_cast<int>(svd.size()) <= r.N_max || static_cast<int>(d.size()) <= r.N_max)
        throw UntrustedIndexError("adaptive_N: SVD does not cover N_max");
    for (int m = 0; m <= r.N_max; ++m)
        if (!svd[m].trusted) throw UntrustedIndexError("adaptive_N: SVD not trusted through N_max");
    const double sgn = variant == BVariant::Literal ? 1.0 : -1.0;
    r.Sigma.resize(r.N_max + 1);
    for (int N = 0; N <= r.N_max; ++N) r.Sigma[N] = sigma_penalty(params, delta, N);
    r.B.resize(r.N_max + 1);
    r.criterion.resize(r.N_max + 1);
    for (int N = 0; N <= r.N_max; ++N) {
        double B = 0.0;
        for (int N2 = N; N2 <= r.N_max; ++N2)
            B = std::max(B, std::max(0.0, coefficient_norm2(d, svd, N, N2) + sgn * r.Sigma[N2]));
        r.B[N] = B;
        r.criterion[N] = B + r.Sigma[N];
    }
    r.N_hat = 0;
    for (int N = 1; N <= r.N_max; ++N)
        if (r.criterion[N] < r.criterion[r.N_hat]) r.N_hat = N;
    return r;
}

AdaptiveResult adaptive_N(const ObservationWindow& obs, const std::vector<SvdTriplet>& svd,
                          const OperatorParams& params, BVariant variant)
{
    return adaptive_N(coefficients(obs, svd), svd, params, obs.delta, variant);
}

ObservationWindow make_window(const std::function<double(double)>& f, const std::function<double(double)>& xi,
                              double x0, double c, double delta, int n_window)
{
    ObservationWindow w;
    w.x0 = x0;
    w.c = c;
    w.delta = delta;
    w.grid = gauss_legendre(n_window);
    w.samples.resize(n_window);
    for (int i = 0; i < n_window; ++i) {
        const double t = w.grid.nodes[i];
        w.samples[i] = f(c * t + x0) + delta * xi(t);
    }
    w.truth = f;
    return w;
}

BuiltinCase builtin_case(const std::string& id, double delta, int n_window)
{
    BuiltinCase bc;
    bc.id = id;
    std::function<double(double)> f;
    double dflt;
    if (id == "a") {
        f = [](double x) { return 0.5 / std::cosh(2.0 * x); };
        bc.params = {1.0, 0.5};
        dflt = 0.05;
    } else if (id == "b") {
        f = [](double x) { return sinc_normalized(2.0 * x) / 6.0; };
        bc.params = {1.0 / 6.5, 0.5};
        dflt = 0.01;
    } else {
        throw std::invalid_argument("builtin_case: unknown case '" + id + "' (expected a or b)");
    }
    const double dl = delta < 0.0 ? dflt : delta;
    auto xi = [](double t) { return std::cos(50.0 * t); };
    bc.obs = make_window(f, xi, 0.0, bc.params.c, dl, n_window);
    return bc;
}

int rule_N(const OperatorParams& params, double delta)
{
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("rule_N: delta must be in (0, 1)");
    return static_cast<int>(std::floor(std::log(1.0 / delta) / (2.0 * beta(params.c / params.b))));
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("loglog_slope: need >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double a = std::log(x[i]), b = std::log(y[i]);
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

RateTable rate_sweep(const std::string& id, const std::vector<double>& deltas, BVariant variant,
                     const ReconstructionOptions& opt)
{
    if (deltas.empty()) throw std::invalid_argument("rate_sweep: empty delta list");
    for (double d : deltas)
        if (!(d > 0.0 && d <= 0.5)) throw std::invalid_argument("rate_sweep: delta must lie in (0, 0.5]");
    BuiltinCase proto = builtin_case(id, deltas.front());
    int need = 0;
    for (double d : deltas) need = std::max({need, n_max(d), rule_N(proto.params, d)});
    auto svd = compute_svd(proto.params, need);
    ModeReconstructions modes = mode_reconstructions(proto.params, svd, proto.obs.x0, need + 1, opt);

    RateTable tab;
    tab.id = id;
    std::vector<double> errs_rule, errs_hat;
    for (double dl : deltas) {
        BuiltinCase bc = builtin_case(id, dl);
        auto d = coefficients(bc.obs, svd);
        RateRow row{};
        row.delta = dl;
        row.N_rule = rule_N(bc.params, dl);
        row.err_rule = window_error(modes.y, cutoff_estimate(d, svd, modes, row.N_rule).f_hat, bc.obs.truth);
        row.N_hat = adaptive_N(d, svd, bc.params, dl, variant).N_hat;
        row.err_hat = window_error(modes.y, cutoff_estimate(d, svd, modes, row.N_hat).f_hat, bc.obs.truth);
        tab.rows.push_back(row);
        errs_rule.push_back(row.err_rule);
        errs_hat.push_back(row.err_hat);
    }
    if (deltas.size() >= 2) {
        tab.slope_rule = loglog_slope(deltas, errs_rule);
        tab.slope_hat = loglog_slope(deltas, errs_hat);
    }
    return tab;
}

} // namespace sechprolate
