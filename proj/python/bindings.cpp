#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "sechprolate/bounds.hpp"
#include "sechprolate/commuting_ode.hpp"
#include "sechprolate/errors.hpp"
#include "sechprolate/extrapolation.hpp"
#include "sechprolate/pswf.hpp"
#include "sechprolate/sech_operator.hpp"
#include "sechprolate/special_functions.hpp"
#include "sechprolate/svd_assembly.hpp"

#define STR_(x) #x
#define STR(x) STR_(x)

namespace py = pybind11;
using namespace sechprolate;

namespace {

template <class T>
py::array_t<T> arr(const std::vector<T>& v)
{
    return py::array_t<T>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::array_t<double> columns(const Eigen::MatrixXd& g)
{
    py::array_t<double> out({static_cast<py::ssize_t>(g.rows()), static_cast<py::ssize_t>(g.cols())});
    auto r = out.mutable_unchecked<2>();
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j) r(i, j) = g(i, j);
    return out;
}

std::vector<bool> bools(const std::vector<bool>& v) { return v; }

py::dict triplet_dict(const SvdTriplet& t)
{
    py::dict d;
    d["m"] = t.m;
    d["sigma"] = t.sigma;
    d["rho"] = t.rho;
    d["trusted"] = t.trusted;
    d["route"] = t.route;
    d["g_nodes"] = arr(t.g_grid.nodes);
    d["g_weights"] = arr(t.g_grid.weights);
    d["g"] = arr(t.g);
    d["phi_nodes"] = arr(t.phi_grid.nodes);
    d["phi_weights"] = arr(t.phi_grid.weights);
    d["phi"] = arr(t.phi);
    return d;
}

BVariant variant_of(const std::string& s)
{
    if (s == "literal") return BVariant::Literal;
    if (s == "gl") return BVariant::GL;
    throw std::invalid_argument("variant must be 'literal' or 'gl'");
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Singular value decomposition of the truncated Fourier transform on L2(cosh(b.)), "
              "eigenvalue bounds and spectral cut-off extrapolation";
    m.attr("__version__") = STR(VERSION_INFO);

    auto num = py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<ResolutionError>(m, "ResolutionError", num.ptr());
    py::register_exception<UntrustedIndexError>(m, "UntrustedIndexError", num.ptr());

    m.def(
        "gauss_legendre",
        [](int n, double lo, double hi) {
            auto g = gauss_legendre(n, lo, hi);
            return py::make_tuple(arr(g.nodes), arr(g.weights));
        },
        py::arg("n"), py::arg("lo") = -1.0, py::arg("hi") = 1.0, "Gauss-Legendre nodes and weights.");
    m.def("elliptic_K", &elliptic_K, py::arg("k"), "Complete elliptic integral of the first kind, modulus k.");
    m.def("spherical_bessel", &spherical_bessel_sequence, py::arg("kmax"), py::arg("z"), "j_0(z) .. j_kmax(z).");

    m.def("kernel", &kernel, py::arg("c"), py::arg("x"), py::arg("y"), "pi c sech(pi c (x - y) / 2)");
    m.def(
        "nystrom",
        [](double c, int n, int m_max) {
            auto s = nystrom_eigensystem(c, n, m_max);
            py::dict d;
            d["nodes"] = arr(s.grid.nodes);
            d["weights"] = arr(s.grid.weights);
            d["rho"] = arr(s.rho);
            d["rho_all"] = arr(s.rho_all);
            d["g"] = columns(s.g);
            d["trusted"] = bools(s.trusted);
            d["small_gaps"] = s.small_gaps;
            return d;
        },
        py::arg("c"), py::arg("n"), py::arg("m_max"), "Eigenpairs of Q_c by the Nystrom method.");
    m.def(
        "rho_rayleigh",
        [](double c, const std::vector<double>& nodes, const std::vector<double>& weights, const std::vector<double>& g) {
            if (nodes.size() != weights.size() || nodes.size() != g.size())
                throw std::invalid_argument("nodes, weights and g must have equal length");
            QuadratureGrid q;
            q.nodes = nodes;
            q.weights = weights;
            return rho_rayleigh(c, q, g);
        },
        py::arg("c"), py::arg("nodes"), py::arg("weights"), py::arg("g"), "<Q_c g, g> for unit-norm g.");
    m.def(
        "hybrid_spectrum",
        [](double c, int m_max, bool rayleigh_all) {
            HybridOptions o;
            o.rayleigh_all = rayleigh_all;
            auto hs = hybrid_spectrum(c, m_max, o);
            py::dict d;
            d["nodes"] = arr(hs.grid.nodes);
            d["weights"] = arr(hs.grid.weights);
            d["rho"] = arr(hs.rho);
            d["g"] = columns(hs.g);
            d["trusted"] = bools(hs.trusted);
            d["nystrom_route"] = bools(hs.nystrom_route);
            return d;
        },
        py::arg("c"), py::arg("m_max"), py::arg("rayleigh_all") = false,
        "Eigenvalues of Q_c: Nystrom where trusted, Galerkin with Rayleigh quotients beyond.");
    m.def(
        "galerkin",
        [](double c, int n_b, int m_max) {
            auto s = galerkin_eigensystem(c, n_b, m_max);
            py::dict d;
            d["kappa"] = s.kappa;
            d["U"] = s.transform.U();
            d["mu"] = arr(s.mu);
            d["chi"] = arr(s.chi);
            d["q_nodes"] = arr(s.q_nodes_y);
            d["q_values"] = arr(s.q_values);
            return d;
        },
        py::arg("c"), py::arg("n_b"), py::arg("m_max"), "Spectrum of the commuting differential operator.");
    m.def("ode_parameter", &ode_parameter, py::arg("c"));

    m.def("beta", &beta, py::arg("c"));
    m.def("theta_tilde", &theta_tilde, py::arg("c"));
    m.def("c0", &c0_bisection);
    m.def("lower_bound", &lower_bound_combined, py::arg("c"), py::arg("m"), "theta~(c) e^{-2 beta(c) m}");
    m.def("upper_bound", &upper_bound, py::arg("c"), py::arg("m"));
    m.def("widom_slope", &widom_slope, py::arg("c"));
    m.def("chi_sandwich", &chi_sandwich, py::arg("kappa"), py::arg("m"));
    m.def("q_band", &q_band, py::arg("kappa"));
    m.def("supnorm_bound", &supnorm_bound, py::arg("kappa"), py::arg("m"));
    m.def(
        "bounds_report",
        [](double c, int m_max) {
            auto r = bounds_report(c, m_max);
            py::list rows;
            for (const auto& w : r.rows) {
                py::dict d;
                d["m"] = w.m;
                d["lower_small_c"] = w.lower_small_c;
                d["lower_all_c"] = w.lower_all_c;
                d["lower_combined"] = w.lower_combined;
                d["rho"] = w.rho_computed;
                d["upper"] = w.upper;
                d["chi_lo"] = w.chi_lo;
                d["chi"] = w.chi_computed;
                d["chi_hi"] = w.chi_hi;
                d["supnorm_bound"] = w.supnorm_bound;
                d["supnorm_observed"] = w.supnorm_observed;
                rows.append(d);
            }
            py::dict d;
            d["c"] = r.c;
            d["kappa"] = r.kappa;
            d["widom_slope"] = r.widom;
            d["slope_fit"] = r.slope_fit;
            d["rows"] = rows;
            return d;
        },
        py::arg("c"), py::arg("m_max"), "Bounds against the computed spectrum, row per index.");

    m.def(
        "compute_svd",
        [](double b, double c, int m_max) {
            py::list out;
            for (const auto& t : compute_svd(OperatorParams{b, c}, m_max)) out.append(triplet_dict(t));
            return out;
        },
        py::arg("b"), py::arg("c"), py::arg("m_max"), "Singular triplets (sigma, phi, g) for m <= m_max.");
    m.def(
        "pswf",
        [](double c, int m_max) {
            auto B = pswf_basis(c, m_max);
            py::dict d;
            d["chi"] = arr(B.chi);
            d["mu"] = arr(B.mu);
            d["coeffs"] = columns(B.coeffs);
            d["trusted"] = bools(B.trusted);
            return d;
        },
        py::arg("c"), py::arg("m_max"), "Prolate spheroidal basis on [-1, 1].");

    m.def("n_max", &n_max, py::arg("delta"));
    m.def(
        "sigma_penalty", [](double b, double c, double delta, int N) { return sigma_penalty(OperatorParams{b, c}, delta, N); },
        py::arg("b"), py::arg("c"), py::arg("delta"), py::arg("N"));
    m.def(
        "extrapolate",
        [](const std::string& case_id, std::optional<double> delta, std::optional<int> N, const std::string& variant,
           int n_window) {
            BuiltinCase bc = builtin_case(case_id, delta.value_or(-1.0), n_window);
            const int Nmax = n_max(bc.obs.delta);
            const int m_max = std::max(Nmax, N.value_or(0));
            auto svd = compute_svd(bc.params, m_max);
            auto d = coefficients(bc.obs, svd);
            auto ar = adaptive_N(d, svd, bc.params, bc.obs.delta, variant_of(variant));
            const int use = N.value_or(ar.N_hat);
            auto modes = mode_reconstructions(bc.params, svd, bc.obs.x0, use + 1);
            auto est = cutoff_estimate(d, svd, modes, use);
            std::vector<double> ft;
            for (double y : est.y) ft.push_back(bc.obs.truth(y));
            py::dict r;
            r["b"] = bc.params.b;
            r["c"] = bc.params.c;
            r["delta"] = bc.obs.delta;
            r["N"] = use;
            r["N_hat"] = ar.N_hat;
            r["N_max"] = ar.N_max;
            r["B"] = arr(ar.B);
            r["Sigma"] = arr(ar.Sigma);
            r["d"] = arr(d);
            r["y"] = arr(est.y);
            r["f_hat"] = arr(est.f_hat);
            r["f_true"] = arr(ft);
            r["error"] = window_error(est.y, est.f_hat, bc.obs.truth);
            return r;
        },
        py::arg("case"), py::arg("delta") = py::none(), py::arg("N") = py::none(), py::arg("variant") = "literal",
        py::arg("n_window") = 2048, "Run a built-in benchmark ('a' or 'b') with adaptive or fixed N.");
    m.def(
        "rate_sweep",
        [](const std::string& case_id, const std::vector<double>& deltas, const std::string& variant) {
            auto t = rate_sweep(case_id, deltas, variant_of(variant));
            py::list rows;
            for (const auto& r : t.rows) {
                py::dict d;
                d["delta"] = r.delta;
                d["N_rule"] = r.N_rule;
                d["err_rule"] = r.err_rule;
                d["N_hat"] = r.N_hat;
                d["err_hat"] = r.err_hat;
                rows.append(d);
            }
            py::dict d;
            d["rows"] = rows;
            d["slope_rule"] = t.slope_rule;
            d["slope_hat"] = t.slope_hat;
            return d;
        },
        py::arg("case"), py::arg("deltas"), py::arg("variant") = "literal", "Errors across noise levels with slope fits.");
}
