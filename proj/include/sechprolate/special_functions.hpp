#pragma once

#include <cstddef>
#include <vector>

namespace sechprolate {

struct QuadratureGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
    double lo = -1.0;
    double hi = 1.0;

    std::size_t size() const { return nodes.size(); }
};

// n-point Gauss-Legendre rule on (lo, hi).
QuadratureGrid gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

// Composite rule: `order`-point Gauss-Legendre on each panel [breaks[i], breaks[i+1]].
QuadratureGrid gauss_panels(const std::vector<double>& breaks, int order);

// sqrt(m + 1/2) P_m(x), orthonormal on (-1, 1).
double legendre_normalized(int m, double x);

// Pbar_0 .. Pbar_{n-1} at x.
void legendre_normalized_all(int n, double x, double* out);

// Values and first derivatives of Pbar_0 .. Pbar_{n-1}; |x| < 1 for the derivatives.
void legendre_normalized_deriv_all(int n, double x, double* val, double* der);

// Complete elliptic integral of the first kind, modulus k in [0, 1).
double elliptic_K(double k);

// K at the modulus whose complement is kp, i.e. K(sqrt(1 - kp^2)).
// Keeps full accuracy when the modulus is within rounding of 1.
double elliptic_K_complement(double kp);

// j_k(z) by downward recurrence. Negative z allowed (j_k(-z) = (-1)^k j_k(z)).
double spherical_bessel_ratio(int k, double z);

// j_0(z) .. j_kmax(z).
std::vector<double> spherical_bessel_sequence(int kmax, double z);

// Barycentric weights for interpolation through Gauss-Legendre nodes.
std::vector<double> gauss_barycentric_weights(const QuadratureGrid& g);

// Polynomial interpolant through (g.nodes, values) evaluated at x.
double barycentric_eval(const QuadratureGrid& g, const std::vector<double>& bw,
                        const double* values, double x);

} // namespace sechprolate
