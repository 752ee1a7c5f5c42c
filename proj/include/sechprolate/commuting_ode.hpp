#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "sechprolate/special_functions.hpp"

namespace sechprolate {

// Parameter of the differential operator commuting with Q_c.
double ode_parameter(double c);

struct Case1Coefficients {
    double p;
    double q;
};

// p = cosh(4k) - cosh(4kx), q = 3k^2 cosh(4kx), k = kappa.
Case1Coefficients case1_coefficients(double kappa, double x);

class LiouvilleTransform {
public:
    explicit LiouvilleTransform(double kappa);

    double kappa() const { return kappa_; }
    double U() const { return U_; }

    // s(x) = int_x^1 p^{-1/2}, as a function of tau = sqrt(1 - x), x >= 0.
    double s_of_tau(double tau) const;
    // ds/dtau
    double ds_dtau(double tau) const;
    // s(x) for x in [-1, 1]
    double s_of_x(double x) const;

    double X(double x) const;
    double Y(double x) const;
    double Yinv(double y) const;
    // tau = sqrt(1 - |x|) of Yinv(y)
    double tau_of_y(double y) const;
    // (p(x) / (1 - y^2))^{1/4} at y = Y(x), computed from tau without cancellation
    double F_of_tau(double tau) const;
    double F(double y) const;

    double p(double x) const;
    // mean of h over [0, tau], i.e. s / tau
    double s_over_tau(double tau) const;

private:
    double kappa_;
    double U_;
    QuadratureGrid ref_;
    int panels_;

    double h(double t) const;
};

LiouvilleTransform build_transform(double kappa);

// U = K(tanh 2k) / (k sqrt(1 + cosh 4k)) from the AGM.
double U_closed_form(double kappa);

double q_c_potential(const LiouvilleTransform& t, double y);
// Same, given x = Yinv(y) >= 0 through tau = sqrt(1 - x).
double q_c_potential_tau(const LiouvilleTransform& t, double tau);
// Direct (literal) formula; loses accuracy as |x| -> 1.
double q_c_potential_direct(const LiouvilleTransform& t, double x);

struct OdeSpectrum {
    double c = 0.0;
    double kappa = 0.0;
    LiouvilleTransform transform{1.0};
    int n_b = 0;
    std::vector<double> mu;     // case-(2) eigenvalues, increasing
    std::vector<double> chi;    // (pi/U)^2 mu
    std::vector<double> gap;    // distance to the nearest neighbour in chi
    Eigen::MatrixXd coeffs;     // n_b x count, Legendre coefficients of Gamma~_m
    std::vector<double> scale;  // L2(-1,1) normalization and sign of g_m
    std::vector<double> q_nodes_y;
    std::vector<double> q_values;

    int count() const { return static_cast<int>(coeffs.cols()); }
    double Gamma(int m, double y) const;
    double g(int m, double x) const;
};

// c is the operator parameter; the ODE runs at kappa = ode_parameter(c).
OdeSpectrum galerkin_eigensystem(double c, int n_b, int m_max, bool check_resolution = true);

// ||-(p g')' + q g - chi g||_{L2(-0.9, 0.9)} / ||g|| with the case-(1) coefficients at kappa(c).
double commutation_residual(double c, const std::function<double(double)>& g, double chi);

} // namespace sechprolate
