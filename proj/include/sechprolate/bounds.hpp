#pragma once

#include <utility>
#include <vector>

namespace sechprolate {

inline constexpr double c0_nominal = 0.12059;

// Root of log(7 e^2 pi / (2c)) = pi / (4c).
double c0_bisection();

double beta(double c);
double theta(double c);
double theta_tilde(double c);

// 2 sin(2c)^2 / (e^2 c) exp(-2 log(7 e^2 pi / (2c)) m), 0 < c <= pi/4.
double lower_bound_small_c(double c, int m);
// pi exp(-pi (m + 1) / (2c))
double lower_bound_all_c(double c, int m);
// theta~(c) e^{-2 beta(c) m}
double lower_bound_combined(double c, int m);
// 2 sqrt(pi) c^{2m+1} / (sqrt(m + 3/4) (1 - c^2)), 0 < c < 1.
double upper_bound(double c, int m);

// pi K(sech pi c) / K(tanh pi c)
double widom_slope(double c);

// Quantities attached to the differential operator take its own parameter kappa.
double U_of(double kappa);
double R_of_c(double kappa);
double H_of_c(double kappa);
double supnorm_bound(double kappa, int m);
std::pair<double, double> chi_sandwich(double kappa, int m);
std::pair<double, double> U_bounds(double kappa);
// [1/2 - (U k/pi)^2 - R, 1/2 - (U k/pi)^2]
std::pair<double, double> q_band(double kappa);

// Least-squares slope of -log rho_m against m over [m_lo, m_hi].
double fit_slope(const std::vector<double>& rho, int m_lo, int m_hi);

struct BoundsRow {
    int m;
    double lower_small_c;  // NaN when c > pi/4
    double lower_all_c;
    double lower_combined;
    double rho_computed;
    double upper;          // NaN when c >= 1
    double chi_lo;
    double chi_hi;
    double chi_computed;
    double supnorm_bound;
    double supnorm_observed;
};

struct BoundsReport {
    double c = 0.0;
    double kappa = 0.0;
    std::vector<BoundsRow> rows;
    double widom = 0.0;
    double slope_fit = 0.0;  // NaN when fewer than 3 indices are available
};

struct BoundsOptions {
    int n = 0;        // Nystrom size, 0 for default
    int n_b = 0;      // Galerkin basis, 0 for default
    int sup_grid = 2000;
};

// Assemble the report from computed spectra (hybrid Nystrom/Rayleigh rho, Galerkin chi and g).
BoundsReport bounds_report(double c, int m_max, const BoundsOptions& opt = {});

} // namespace sechprolate
