#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "sechprolate/extrapolation.hpp"
#include "sechprolate/sech_operator.hpp"

namespace sechprolate {

struct PswfBasis {
    double c = 0.0;
    int n_b = 0;
    Eigen::MatrixXd coeffs;  // n_b x count, normalized-Legendre coefficients
    std::vector<double> chi; // eigenvalues of the prolate differential operator
    std::vector<double> mu;  // singular values of the [-1,1]-restricted transform
    std::vector<bool> trusted;

    int count() const { return static_cast<int>(coeffs.cols()); }
    double psi(int m, double x) const;
    // int_{-1}^{1} e^{-icxt} psi_m(t) dt through spherical Bessel functions
    std::complex<double> image(int m, double x) const;
};

PswfBasis pswf_basis(double c, int m_max, int n_b = 0);

SampledFunction pswf_adjoint_image(const PswfBasis& basis, int m, const std::vector<double>& x_grid);

struct PswfEstimate {
    int N = 0;
    std::vector<double> d;
    std::vector<double> y;
    std::vector<double> f_hat;
};

// Band assumed inside [-1/b, 1/b]; the basis must be built at c/b.
PswfEstimate pswf_cutoff_estimate(const ObservationWindow& obs, const PswfBasis& basis, double b, int N,
                                  const ReconstructionOptions& opt = {});

} // namespace sechprolate
