#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "sechprolate/sech_operator.hpp"
#include "sechprolate/svd_assembly.hpp"

namespace sechprolate {

// f_delta(c t + x0) sampled at t in grid (a rule on (-1, 1)).
struct ObservationWindow {
    double x0 = 0.0;
    double c = 0.5;
    double delta = 0.0;
    QuadratureGrid grid;
    std::vector<double> samples;
    std::function<double(double)> truth;  // optional, for error reports
};

enum class BVariant { Literal, GL };

struct ReconstructionOptions {
    int n_fft = 4096;         // uniform samples of F^N over (-T, T)
    double T = 0.0;           // 0 -> phi_extent at the smallest rho used
    int n_out = 4096;         // uniform output grid over [x0 - half_width, x0 + half_width]
    double half_width = 6.0;
};

// d_m = <f_delta(c. + x0), g_m>
std::vector<double> coefficients(const ObservationWindow& obs, const std::vector<SvdTriplet>& svd);

// r_m(y) = int e^{ix(y - x0)} phi_m(x) dx on the output grid, for m < count.
struct ModeReconstructions {
    std::vector<double> y;
    std::vector<std::vector<std::complex<double>>> r;
};

ModeReconstructions mode_reconstructions(const OperatorParams& params, const std::vector<SvdTriplet>& svd,
                                         double x0, int count, const ReconstructionOptions& opt = {});

struct CutoffEstimate {
    int N = 0;
    std::vector<double> d;  // d_m, m <= N
    std::vector<double> a;  // d_m / sigma_m, coefficients of F^N in the phi basis
    std::vector<double> y;
    std::vector<double> f_hat;
};

CutoffEstimate cutoff_estimate(const ObservationWindow& obs, const OperatorParams& params,
                               const std::vector<SvdTriplet>& svd, int N,
                               const ReconstructionOptions& opt = {});
// Same, reusing precomputed coefficients and mode reconstructions.
CutoffEstimate cutoff_estimate(const std::vector<double>& d, const std::vector<SvdTriplet>& svd,
                               const ModeReconstructions& modes, int N);

// F^N sampled on a grid, sum_{m<=N} a_m phi_m(x).
std::vector<std::complex<double>> F_on_grid(const OperatorParams& params, const std::vector<SvdTriplet>& svd,
                                            const std::vector<double>& a, const std::vector<double>& x);

// L2 error on the output grid (trapezoid).
double window_error(const std::vector<double>& y, const std::vector<double>& f_hat,
                    const std::function<double(double)>& truth);

double sigma_penalty(const OperatorParams& params, double delta, int N);
int n_max(double delta);

// sum_{N < m <= N2} (2 pi d_m / sigma_m)^2
double coefficient_norm2(const std::vector<double>& d, const std::vector<SvdTriplet>& svd, int N, int N2);

struct AdaptiveResult {
    int N_hat = 0;
    int N_max = 0;
    std::vector<double> B;
    std::vector<double> Sigma;
    std::vector<double> criterion;
};

AdaptiveResult adaptive_N(const std::vector<double>& d, const std::vector<SvdTriplet>& svd,
                          const OperatorParams& params, double delta, BVariant variant = BVariant::Literal);
AdaptiveResult adaptive_N(const ObservationWindow& obs, const std::vector<SvdTriplet>& svd,
                          const OperatorParams& params, BVariant variant = BVariant::Literal);

struct BuiltinCase {
    std::string id;
    OperatorParams params;
    ObservationWindow obs;
};

// Benchmark instances; delta < 0 keeps the default noise level.
BuiltinCase builtin_case(const std::string& id, double delta = -1.0, int n_window = 2048);

// Observation window from a truth, noise xi and grid size.
ObservationWindow make_window(const std::function<double(double)>& f, const std::function<double(double)>& xi,
                              double x0, double c, double delta, int n_window);

enum class RateRule { LogDelta, Adaptive };

// N-bar = ln(1/delta) / (2 beta(c/b))
int rule_N(const OperatorParams& params, double delta);

struct RateRow {
    double delta;
    int N_rule;
    double err_rule;
    int N_hat;
    double err_hat;
};

struct RateTable {
    std::string id;
    std::vector<RateRow> rows;
    double slope_rule = 0.0;  // least-squares slope of log err against log delta
    double slope_hat = 0.0;
};

RateTable rate_sweep(const std::string& id, const std::vector<double>& deltas,
                     BVariant variant = BVariant::Literal, const ReconstructionOptions& opt = {});

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace sechprolate
