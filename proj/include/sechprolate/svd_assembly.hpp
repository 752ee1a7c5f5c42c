#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sechprolate/commuting_ode.hpp"
#include "sechprolate/sech_operator.hpp"
#include "sechprolate/special_functions.hpp"

namespace sechprolate {

struct HybridOptions {
    int n = 0;                  // Nystrom size, 0 for default
    int n_b = 0;                // Galerkin basis, 0 for default (grown on resolution failure)
    bool need_ode = true;       // build the Galerkin spectrum even if every index is trusted
    bool rayleigh_all = false;  // rho from rho_rayleigh on ODE-route g for every m
};

// Eigenpairs of Q_c: Nystrom where trusted, Galerkin + Rayleigh beyond.
struct HybridSpectrum {
    double c = 0.0;
    std::shared_ptr<const NystromSpectrum> nys;
    std::shared_ptr<const OdeSpectrum> ode;  // may be null when need_ode is false
    QuadratureGrid grid;                     // the Nystrom grid
    std::vector<double> rho;
    std::vector<bool> nystrom_route;
    std::vector<bool> trusted;
    Eigen::MatrixXd g;                       // node values, unit norm

    int count() const { return static_cast<int>(rho.size()); }
    double g_at(int m, double x) const;
};

int default_basis_size(int m_max);

HybridSpectrum hybrid_spectrum(double c, int m_max, const HybridOptions& opt = {});

struct SvdTriplet {
    int m = 0;
    double sigma = 0.0;
    double rho = 0.0;
    QuadratureGrid g_grid;
    std::vector<double> g;
    QuadratureGrid phi_grid;
    std::vector<std::complex<double>> phi;
    bool trusted = true;
    std::string route;  // "nystrom" or "ode"
    std::vector<double> g_bw;  // barycentric weights of g_grid, filled on construction

    // g by barycentric interpolation through the Gauss nodes
    double g_at(double x) const;
};

struct SvdOptions {
    int n = 0;
    int n_b = 0;
    double T = 0.0;  // 0 -> phi_extent over the computed indices
    int phi_order = 16;
};

// Half-width of the phi grid. |int e^{-icxt} g| stays O(1) for large x, so the weighted tail of
// phi_m is about 8c e^{-bT} / (b rho_m); T = max(20, log(8c / (b rho_min)) + 18.5) / b keeps it below 1e-8.
double phi_extent(const OperatorParams& params, double rho_min);

// phi(x) = sech(bx) int e^{-icxt} g(t) dt / sigma
std::complex<double> phi_value(const OperatorParams& params, const QuadratureGrid& g_grid,
                               const std::vector<double>& g, double sigma, double x);

std::vector<SvdTriplet> compute_svd(const OperatorParams& params, int m_max, const SvdOptions& opt = {});

// phi^{b,c}(x) = sqrt(b) phi^{1,c/b}(bx), sampled on the (b, c) grid of extent phi_extent(b, c, rho).
SvdTriplet rescale_phi(double b, double c, const SvdTriplet& src, const SvdOptions& opt = {});

// <u, v> in L2(cosh(b.)) on a shared grid
std::complex<double> cosh_inner(double b, const QuadratureGrid& grid,
                                const std::vector<std::complex<double>>& u,
                                const std::vector<std::complex<double>>& v);

} // namespace sechprolate
