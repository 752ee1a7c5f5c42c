#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "sechprolate/special_functions.hpp"

namespace sechprolate {

struct OperatorParams {
    double b = 1.0;
    double c = 1.0;

    void validate() const;
};

struct SampledFunction {
    QuadratureGrid grid;
    std::vector<std::complex<double>> values;
};

struct NystromSpectrum {
    double c = 0.0;
    int n = 0;
    QuadratureGrid grid;
    std::vector<double> rho_all;   // all n eigenvalues, decreasing
    std::vector<double> rho;       // first m_max + 1
    Eigen::MatrixXd g;             // n x (m_max + 1), node values, unit L2 norm
    std::vector<bool> trusted;
    std::vector<int> small_gaps;   // indices m with rho_m - rho_{m+1} < 1e-10 rho_0

    int count() const { return static_cast<int>(rho.size()); }
    // Nystrom interpolation of g_m at arbitrary x in [-1, 1].
    double eval(int m, double x) const;
};

// pi c sech(pi c (x - y) / 2)
double kernel(double c, double x, double y);

// Relative floor below which Nystrom eigenvalues are not trusted.
inline constexpr double trust_floor = 1e3 * 2.220446049250313e-16;

NystromSpectrum nystrom_eigensystem(double c, int n, int m_max);

// Default grid size for a requested m_max.
int default_nystrom_size(int m_max);

// <Q_c g, g> = int sech(x/c) |int e^{ixt} g(t) dt|^2 dx for unit-norm g on a Gauss grid.
double rho_rayleigh(double c, const QuadratureGrid& grid, const std::vector<double>& g);
double rho_rayleigh(double c, const SampledFunction& g);

// (F_{b,c} f)(y) = int e^{icyt} f(t) dt.
SampledFunction apply_forward(const OperatorParams& params, const SampledFunction& f,
                              const std::vector<double>& y_grid);

// (F*_{b,c} h)(x) = sech(bx) int_{-1}^{1} e^{-icxt} h(t) dt.
SampledFunction apply_adjoint(const OperatorParams& params, const SampledFunction& h,
                              const std::vector<double>& x_grid);

// ||c F F* h - Q_{c/b} h|| / ||h||
double verify_factorization(const OperatorParams& params, const SampledFunction& h);

// Composite Gauss grid on (-T, T) resolving sech(b.) decay and e^{icx.} oscillation.
QuadratureGrid real_line_grid(double b, double c, double T, int order = 16);

} // namespace sechprolate
