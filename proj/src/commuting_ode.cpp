#include "sechprolate/commuting_ode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "sechprolate/errors.hpp"

namespace sechprolate {

namespace {

constexpr double pi = std::numbers::pi;

double sinhc(double z)
{
    if (std::abs(z) < 1e-4) return 1.0 + z * z / 6.0;
    return std::sinh(z) / z;
}

// cot^2(th) - th^-2
double cot2_minus_inv2(double th)
{
    if (th < 1e-2) {
        double t2 = th * th;
        return -2.0 / 3.0 + t2 / 15.0 + 2.0 * t2 * t2 / 189.0;
    }
    double ct = std::cos(th) / std::sin(th);
    return ct * ct - 1.0 / (th * th);
}

} // namespace

double ode_parameter(double c)
{
    return pi * c / 2.0;
}

Case1Coefficients case1_coefficients(double kappa, double x)
{
    if (std::abs(x) > 1.0) throw std::invalid_argument("case1_coefficients: |x| > 1");
    Case1Coefficients r;
    r.p = 2.0 * std::sinh(2.0 * kappa * (1.0 + x)) * std::sinh(2.0 * kappa * (1.0 - x));
    r.q = 3.0 * kappa * kappa * std::cosh(4.0 * kappa * x);
    return r;
}

double U_closed_form(double kappa)
{
    // K(tanh 2k) with complement sech 2k; sqrt(1 + cosh 4k) = sqrt(2) cosh 2k
    const double a = 2.0 * kappa;
    const double K = elliptic_K_complement(1.0 / std::cosh(a));
    return K / (kappa * std::sqrt(2.0) * std::cosh(a));
}

LiouvilleTransform::LiouvilleTransform(double kappa) : kappa_(kappa)
{
    if (!(kappa > 0.0)) throw std::invalid_argument("LiouvilleTransform: kappa must be positive");
    if (kappa > 170.0) throw std::domain_error("LiouvilleTransform: kappa too large (overflow)");
    U_ = U_closed_form(kappa);
    ref_ = gauss_legendre(64, 0.0, 1.0);
    panels_ = std::max(1, static_cast<int>(std::ceil(kappa / 2.0)));
}

double LiouvilleTransform::p(double x) const
{
    return 2.0 * std::sinh(2.0 * kappa_ * (1.0 + x)) * std::sinh(2.0 * kappa_ * (1.0 - x));
}

double LiouvilleTransform::h(double t) const
{
    const double k = kappa_;
    return 2.0 / std::sqrt(2.0 * std::sinh(2.0 * k * (2.0 - t * t)) * 2.0 * k * sinhc(2.0 * k * t * t));
}

double LiouvilleTransform::s_over_tau(double tau) const
{
    if (tau == 0.0) return h(0.0);
    double acc = 0.0;
    for (int pnl = 0; pnl < panels_; ++pnl) {
        for (std::size_t i = 0; i < ref_.size(); ++i) {
            double u = (pnl + ref_.nodes[i]) / panels_;
            acc += ref_.weights[i] * h(tau * u);
        }
    }
    return acc / panels_;
}

double LiouvilleTransform::s_of_tau(double tau) const
{
    return tau * s_over_tau(tau);
}

double LiouvilleTransform::ds_dtau(double tau) const
{
    return h(tau);
}

double LiouvilleTransform::s_of_x(double x) const
{
    if (std::abs(x) > 1.0) throw std::invalid_argument("s_of_x: |x| > 1");
    double s = s_of_tau(std::sqrt(1.0 - std::abs(x)));
    return x >= 0.0 ? s : U_ - s;
}

double LiouvilleTransform::X(double x) const
{
    double th = pi * s_of_tau(std::sqrt(1.0 - std::abs(x))) / U_;
    return std::copysign(pi / 2.0 - th, x);
}

double LiouvilleTransform::Y(double x) const
{
    if (std::abs(x) > 1.0) throw std::invalid_argument("Y: |x| > 1");
    double th = pi * s_of_tau(std::sqrt(1.0 - std::abs(x))) / U_;
    double y = std::cos(th);
    return x < 0.0 ? -y : y;
}

double LiouvilleTransform::tau_of_y(double y) const
{
    const double ay = std::abs(y);
    if (ay > 1.0) throw std::invalid_argument("Yinv: |y| > 1");
    if (ay == 1.0) return 0.0;
    const double target = U_ * std::acos(ay) / pi;
    double lo = 0.0, hi = 1.0;
    double t = std::clamp(target / h(0.0), 0.0, 1.0);
    for (int it = 0; it < 100; ++it) {
        double f = s_of_tau(t) - target;
        if (f > 0.0)
            hi = t;
        else
            lo = t;
        double tn = t - f / h(t);
        if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
        if (std::abs(tn - t) < 1e-16) {
            t = tn;
            break;
        }
        t = tn;
    }
    return t;
}

double LiouvilleTransform::Yinv(double y) const
{
    double t = tau_of_y(y);
    double x = 1.0 - t * t;
    return y < 0.0 ? -x : x;
}

double LiouvilleTransform::F_of_tau(double tau) const
{
    const double k = kappa_;
    const double p_t2 = 4.0 * k * std::sinh(2.0 * k * (2.0 - tau * tau)) * sinhc(2.0 * k * tau * tau);
    const double sot = s_over_tau(tau);
    const double th = pi * tau * sot / U_;
    const double sinc_th = th == 0.0 ? 1.0 : std::sin(th) / th;
    const double sin2_t2 = sinc_th * sinc_th * (pi * sot / U_) * (pi * sot / U_);
    return std::pow(p_t2 / sin2_t2, 0.25);
}

double LiouvilleTransform::F(double y) const
{
    return F_of_tau(tau_of_y(y));
}

LiouvilleTransform build_transform(double kappa)
{
    return LiouvilleTransform(kappa);
}

double q_c_potential_direct(const LiouvilleTransform& t, double x)
{
    const double k = t.kappa(), U = t.U();
    const double ax = std::abs(x);
    const double th = pi * t.s_of_tau(std::sqrt(1.0 - ax)) / U;
    const double tanX = std::cos(th) / std::sin(th);
    const double a = U * k / pi;
    const double sh = std::sinh(4.0 * k * ax);
    return 0.5 + 0.25 * tanX * tanX - a * a * (std::cosh(4.0 * k * ax) + sh * sh / t.p(ax));
}

double q_c_potential_tau(const LiouvilleTransform& t, double tau)
{
    const double x = 1.0 - tau * tau;
    if (x <= 0.5) return q_c_potential_direct(t, x);

    const double k = t.kappa(), U = t.U();
    const double a = U * k / pi;
    const double sot = t.s_over_tau(tau);
    const double th = pi * tau * sot / U;

    // (1 + v) / s^2 with v = s r', r = sqrt(p), via 1 + v = (p'/r) int_x^1 r p''/p'^2
    static const QuadratureGrid ref = gauss_legendre(64, 0.0, 1.0);
    double I = 0.0;  // int_x^1 r cosh(4k xi)/sinh^2(4k xi) dxi / tau^3
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const double u = ref.nodes[i];
        const double tt = tau * u;
        const double xi = 1.0 - tt * tt;
        const double A = 4.0 * k * std::sinh(2.0 * k * (2.0 - tt * tt)) * sinhc(2.0 * k * tt * tt);
        const double sh = std::sinh(4.0 * k * xi);
        I += ref.weights[i] * 2.0 * u * u * std::sqrt(A) * std::cosh(4.0 * k * xi) / (sh * sh);
    }
    const double A0 = 4.0 * k * std::sinh(2.0 * k * (2.0 - tau * tau)) * sinhc(2.0 * k * tau * tau);
    // r = tau sqrt(A0); (1+v) = 4k sinh(4kx)/r * tau^3 I; s^2 = tau^2 sot^2
    const double onepv_s2 = 4.0 * k * std::sinh(4.0 * k * x) * I / (std::sqrt(A0) * sot * sot);
    const double onepv = onepv_s2 * tau * tau * sot * sot;
    const double onemv = 2.0 - onepv;
    const double Up = U / pi;
    return 0.5 + 0.25 * cot2_minus_inv2(th) + Up * Up * onemv * onepv_s2 / 4.0
           - a * a * std::cosh(4.0 * k * x);
}

double q_c_potential(const LiouvilleTransform& t, double y)
{
    if (std::abs(y) > 1.0) throw std::invalid_argument("q_c_potential: |y| > 1");
    return q_c_potential_tau(t, t.tau_of_y(y));
}

double OdeSpectrum::Gamma(int m, double y) const
{
    std::vector<double> P(n_b);
    legendre_normalized_all(n_b, y, P.data());
    double acc = 0.0;
    for (int k = 0; k < n_b; ++k) acc += coeffs(k, m) * P[k];
    return acc;
}

double OdeSpectrum::g(int m, double x) const
{
    if (std::abs(x) > 1.0) throw std::invalid_argument("OdeSpectrum::g: |x| > 1");
    const double tau = std::sqrt(1.0 - std::abs(x));
    const double y = transform.Y(x);
    const double U = transform.U();
    return scale[m] * Gamma(m, y) * std::sqrt(pi / U) / transform.F_of_tau(tau);
}

namespace {

struct GalerkinCore {
    std::vector<double> mu;
    Eigen::MatrixXd vecs;
    std::vector<double> yq, qv;
};

GalerkinCore galerkin_core(const LiouvilleTransform& T, int n_b)
{
    const int nq = n_b + 32;
    QuadratureGrid yg = gauss_legendre(nq);
    GalerkinCore core;
    core.yq = yg.nodes;
    core.qv.resize(nq);
    Eigen::MatrixXd P(n_b, nq);
    std::vector<double> col(n_b);
    for (int i = 0; i < nq; ++i) {
        // q is even in y
        if (i >= nq / 2 && nq - 1 - i < i)
            core.qv[i] = core.qv[nq - 1 - i];
        else
            core.qv[i] = q_c_potential(T, yg.nodes[i]);
        legendre_normalized_all(n_b, yg.nodes[i], col.data());
        for (int k = 0; k < n_b; ++k) P(k, i) = col[k];
    }
    Eigen::MatrixXd M(n_b, n_b);
    Eigen::VectorXd wq(nq);
    for (int i = 0; i < nq; ++i) wq(i) = yg.weights[i] * core.qv[i];
    M = P * wq.asDiagonal() * P.transpose();
    for (int k = 0; k < n_b; ++k) M(k, k) += k * (k + 1.0);
    M = 0.5 * (M + M.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success) throw NumericalError("galerkin_eigensystem: eigensolver failed");
    core.mu.resize(n_b);
    for (int k = 0; k < n_b; ++k) core.mu[k] = es.eigenvalues()(k);
    core.vecs = es.eigenvectors();
    return core;
}

} // namespace

OdeSpectrum galerkin_eigensystem(double c, int n_b, int m_max, bool check_resolution)
{
    if (!(c > 0.0)) throw std::invalid_argument("galerkin_eigensystem: c must be positive");
    if (m_max < 0) throw std::invalid_argument("galerkin_eigensystem: m_max must be >= 0");
    if (n_b < 2 * (m_max + 1) + 10)
        throw std::invalid_argument("galerkin_eigensystem: need n_b >= 2 (m_max + 1) + 10");

    OdeSpectrum s;
    s.c = c;
    s.kappa = ode_parameter(c);
    s.transform = LiouvilleTransform(s.kappa);
    s.n_b = n_b;
    GalerkinCore core = galerkin_core(s.transform, n_b);

    if (check_resolution) {
        GalerkinCore coarse = galerkin_core(s.transform, n_b - 5);
        const double a = core.mu[m_max], b = coarse.mu[m_max];
        if (std::abs(a - b) > 1e-6 * std::max(1.0, std::abs(a))) {
            std::ostringstream os;
            os << "galerkin_eigensystem: basis too small (n_b=" << n_b << ", mu_" << m_max << " changes "
               << std::abs(a - b) << " when n_b drops by 5)";
            throw ResolutionError(os.str());
        }
    }

    const int cnt = m_max + 1;
    const double f = (pi / s.transform.U()) * (pi / s.transform.U());
    s.mu.assign(core.mu.begin(), core.mu.begin() + cnt);
    s.chi.resize(cnt);
    s.gap.resize(cnt);
    for (int m = 0; m < cnt; ++m) {
        s.chi[m] = f * s.mu[m];
        double g = f * (core.mu[m + 1] - core.mu[m]);
        if (m > 0) g = std::min(g, f * (core.mu[m] - core.mu[m - 1]));
        s.gap[m] = g;
    }
    s.coeffs = core.vecs.leftCols(cnt);
    s.q_nodes_y = core.yq;
    s.q_values = core.qv;

    // normalize g_m in L2(-1,1) and fix the sign so g_m(1) > 0
    s.scale.assign(cnt, 1.0);
    QuadratureGrid xg = gauss_legendre(256);
    for (int m = 0; m < cnt; ++m) {
        double at1 = 0.0;
        for (int k = 0; k < n_b; ++k) at1 += s.coeffs(k, m) * std::sqrt(k + 0.5);
        double nrm = 0.0;
        for (std::size_t i = 0; i < xg.size(); ++i) {
            double v = s.g(m, xg.nodes[i]);
            nrm += xg.weights[i] * v * v;
        }
        s.scale[m] = (at1 < 0 ? -1.0 : 1.0) / std::sqrt(nrm);
    }
    return s;
}

double commutation_residual(double c, const std::function<double(double)>& g, double chi)
{
    const double kappa = ode_parameter(c);
    const double L = 0.95;
    const int D = 90;
    QuadratureGrid fit = gauss_legendre(128);
    std::vector<double> a(D, 0.0), P(D), dP(D);
    for (std::size_t i = 0; i < fit.size(); ++i) {
        double gv = g(L * fit.nodes[i]);
        legendre_normalized_all(D, fit.nodes[i], P.data());
        for (int k = 0; k < D; ++k) a[k] += fit.weights[i] * gv * P[k];
    }
    QuadratureGrid ev = gauss_legendre(120, -0.9, 0.9);
    double res = 0.0, nrm = 0.0;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        const double x = ev.nodes[i];
        const double u = x / L;
        legendre_normalized_deriv_all(D, u, P.data(), dP.data());
        double v = 0.0, d1 = 0.0, d2 = 0.0;
        for (int k = 0; k < D; ++k) {
            double pp = (2.0 * u * dP[k] - k * (k + 1.0) * P[k]) / (1.0 - u * u);
            v += a[k] * P[k];
            d1 += a[k] * dP[k];
            d2 += a[k] * pp;
        }
        d1 /= L;
        d2 /= L * L;
        const auto cf = case1_coefficients(kappa, x);
        const double dp = -4.0 * kappa * std::sinh(4.0 * kappa * x);
        const double r = -(dp * d1 + cf.p * d2) + cf.q * v - chi * v;
        res += ev.weights[i] * r * r;
        nrm += ev.weights[i] * v * v;
    }
    return std::sqrt(res / nrm);
}

} // namespace sechprolate
