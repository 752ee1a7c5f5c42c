#include "sechprolate/pswf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "sechprolate/errors.hpp"

namespace sechprolate {

namespace {

constexpr double pi = std::numbers::pi;

// one parity block, k = parity, parity + 2, ...
void block(double c, int n_b, int parity, Eigen::VectorXd& eval, Eigen::MatrixXd& evec, std::vector<int>& ks)
{
    ks.clear();
    for (int k = parity; k < n_b; k += 2) ks.push_back(k);
    const int n = static_cast<int>(ks.size());
    Eigen::VectorXd diag(n), sub(std::max(n - 1, 0));
    const double c2 = c * c;
    for (int i = 0; i < n; ++i) {
        const double k = ks[i];
        diag(i) = k * (k + 1.0) + c2 * (2.0 * k * (k + 1.0) - 1.0) / ((2.0 * k + 3.0) * (2.0 * k - 1.0));
        if (i + 1 < n)
            sub(i) = c2 * (k + 2.0) * (k + 1.0) / ((2.0 * k + 3.0) * std::sqrt((2.0 * k + 1.0) * (2.0 * k + 5.0)));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw NumericalError("pswf_basis: tridiagonal eigensolver failed");
    eval = es.eigenvalues();
    evec = es.eigenvectors();
}

} // namespace

double PswfBasis::psi(int m, double x) const
{
    std::vector<double> P(n_b);
    legendre_normalized_all(n_b, x, P.data());
    double acc = 0.0;
    for (int k = 0; k < n_b; ++k) acc += coeffs(k, m) * P[k];
    return acc;
}

std::complex<double> PswfBasis::image(int m, double x) const
{
    // int e^{-icxt} Pbar_k(t) dt = sqrt(k + 1/2) 2 (-i)^k j_k(cx)
    const std::vector<double> j = spherical_bessel_sequence(n_b - 1, c * x);
    double re = 0.0, im = 0.0;
    for (int k = 0; k < n_b; ++k) {
        const double v = coeffs(k, m) * std::sqrt(k + 0.5) * 2.0 * j[k];
        switch (k % 4) {
        case 0: re += v; break;
        case 1: im -= v; break;
        case 2: re -= v; break;
        default: im += v; break;
        }
    }
    return {re, im};
}

PswfBasis pswf_basis(double c, int m_max, int n_b)
{
    if (!(c > 0.0)) throw std::invalid_argument("pswf_basis: c must be positive");
    if (m_max < 0) throw std::invalid_argument("pswf_basis: m_max must be >= 0");
    if (n_b == 0) n_b = std::max(2 * m_max + 16, static_cast<int>(2.0 * c) + 40);
    if (n_b < 2 * m_max + 16) throw std::invalid_argument("pswf_basis: need n_b >= 2 m_max + 16");

    PswfBasis B;
    B.c = c;
    B.n_b = n_b;
    const int cnt = m_max + 1;
    B.coeffs = Eigen::MatrixXd::Zero(n_b, cnt);
    B.chi.resize(cnt);

    Eigen::VectorXd ev[2];
    Eigen::MatrixXd V[2];
    std::vector<int> ks[2];
    block(c, n_b, 0, ev[0], V[0], ks[0]);
    block(c, n_b, 1, ev[1], V[1], ks[1]);
    for (int m = 0; m < cnt; ++m) {
        const int par = m % 2, j = m / 2;
        if (j >= ev[par].size()) throw ResolutionError("pswf_basis: basis too small");
        B.chi[m] = ev[par](j);
        double at1 = 0.0;
        for (std::size_t i = 0; i < ks[par].size(); ++i) {
            B.coeffs(ks[par][i], m) = V[par](i, j);
            at1 += V[par](i, j) * std::sqrt(ks[par][i] + 0.5);
        }
        if (at1 < 0) B.coeffs.col(m) *= -1.0;
        // the expansion must have decayed inside the basis
        const double tail = std::abs(V[par](ks[par].size() - 1, j));
        if (tail > 1e-12) {
            std::ostringstream os;
            os << "pswf_basis: coefficient tail " << tail << " for m=" << m << " (n_b=" << n_b << ")";
            throw ResolutionError(os.str());
        }
    }
    for (int m = 1; m < cnt; ++m)
        if (!(B.chi[m] > B.chi[m - 1])) throw NumericalError("pswf_basis: eigenvalues out of order");

    // mu_m = ||image_m||_{L2(-1,1)}, nonnegative integrand
    QuadratureGrid xg = gauss_legendre(128 + static_cast<int>(2.0 * c));
    B.mu.resize(cnt);
    B.trusted.resize(cnt);
    for (int m = 0; m < cnt; ++m) {
        double acc = 0.0;
        for (std::size_t i = 0; i < xg.size(); ++i) acc += xg.weights[i] * std::norm(B.image(m, xg.nodes[i]));
        B.mu[m] = std::sqrt(acc);
    }
    for (int m = 0; m < cnt; ++m) B.trusted[m] = B.mu[m] * B.mu[m] > 1e-28 * B.mu[0] * B.mu[0];
    return B;
}

SampledFunction pswf_adjoint_image(const PswfBasis& basis, int m, const std::vector<double>& x_grid)
{
    if (m < 0 || m >= basis.count()) throw std::invalid_argument("pswf_adjoint_image: m out of range");
    SampledFunction out;
    out.grid.nodes = x_grid;
    out.grid.weights.assign(x_grid.size(), 0.0);
    out.values.resize(x_grid.size());
    for (std::size_t i = 0; i < x_grid.size(); ++i) out.values[i] = basis.image(m, x_grid[i]);
    return out;
}

PswfEstimate pswf_cutoff_estimate(const ObservationWindow& obs, const PswfBasis& basis, double b, int N,
                                  const ReconstructionOptions& opt)
{
    if (!(b > 0.0)) throw std::invalid_argument("pswf_cutoff_estimate: b must be positive");
    if (std::abs(basis.c - obs.c / b) > 1e-12 * basis.c)
        throw std::invalid_argument("pswf_cutoff_estimate: basis must be built at c/b");
    if (N < 0) throw std::invalid_argument("pswf_cutoff_estimate: N must be >= 0");
    if (N >= basis.count() || !basis.trusted[N])
        throw UntrustedIndexError("pswf_cutoff_estimate: N beyond the trusted range");
    if (obs.samples.size() != obs.grid.size())
        throw std::invalid_argument("pswf_cutoff_estimate: samples do not match the window grid");

    PswfEstimate est;
    est.N = N;
    est.d.assign(N + 1, 0.0);
    for (int m = 0; m <= N; ++m) {
        double acc = 0.0;
        for (std::size_t i = 0; i < obs.grid.size(); ++i)
            acc += obs.grid.weights[i] * obs.samples[i] * basis.psi(m, obs.grid.nodes[i]);
        est.d[m] = acc;
    }

    // G(u) = sum d_m / mu_m^2 image_m(u) on a Gauss grid over [-1, 1]
    const double H = opt.half_width;
    QuadratureGrid ug = gauss_legendre(std::max(128, static_cast<int>(4.0 * H / b) + 64));
    std::vector<std::complex<double>> G(ug.size(), 0.0);
    for (std::size_t i = 0; i < ug.size(); ++i)
        for (int m = 0; m <= N; ++m)
            G[i] += est.d[m] / (basis.mu[m] * basis.mu[m]) * basis.image(m, ug.nodes[i]);

    est.y.resize(opt.n_out);
    est.f_hat.resize(opt.n_out);
    for (int j = 0; j < opt.n_out; ++j) {
        const double y = obs.x0 - H + 2.0 * H * j / (opt.n_out - 1.0);
        est.y[j] = y;
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < ug.size(); ++i) {
            const double a = (y - obs.x0) * ug.nodes[i] / b;
            acc += ug.weights[i] * std::complex<double>(std::cos(a), std::sin(a)) * G[i];
        }
        est.f_hat[j] = acc.real();
    }
    return est;
}

} // namespace sechprolate
