#include "sechprolate/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sechprolate/bounds.hpp"
#include "sechprolate/errors.hpp"
#include "sechprolate/extrapolation.hpp"
#include "sechprolate/io.hpp"
#include "sechprolate/pswf.hpp"
#include "sechprolate/svd_assembly.hpp"

#ifndef SECHPROLATE_VERSION
#define SECHPROLATE_VERSION "0.0.0"
#endif

namespace sechprolate {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Manifest {
public:
    Manifest(std::string command, fs::path dir)
        : command_(std::move(command)), dir_(std::move(dir)), start_(std::chrono::steady_clock::now())
    {
    }

    json params = json::object();
    json input_hashes = json::object();
    json extra = json::object();

    void output(const fs::path& p, const std::string& content)
    {
        write_file_atomic(dir_ / p, content);
        outputs_.push_back(p.string());
    }

    void write()
    {
        for (const auto& o : outputs_) {
            fs::path p = dir_ / o;
            if (!fs::exists(p) || fs::file_size(p) == 0)
                throw NumericalError("manifest: output " + p.string() + " missing or empty");
        }
        json j;
        j["command"] = command_;
        j["parameters"] = params;
        j["version"] = SECHPROLATE_VERSION;
        j["input_hashes"] = input_hashes;
        j["outputs"] = outputs_;
        j["results"] = extra;
        j["wall_time_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        write_file_atomic(dir_ / "manifest.json", j.dump(2) + "\n");
    }

private:
    std::string command_;
    fs::path dir_;
    std::chrono::steady_clock::time_point start_;
    std::vector<std::string> outputs_;
};

std::string svd_key(const OperatorParams& p, int m_max, int n)
{
    std::ostringstream os;
    os << "svd;b=" << csv_number(p.b) << ";c=" << csv_number(p.c) << ";m_max=" << m_max << ";n=" << n
       << ";version=" << SECHPROLATE_VERSION << ";layout=2";
    return sha256_hex(os.str());
}

struct SvdDocs {
    std::string json_text;
    std::string summary;
    std::string key;
    bool cache_hit = false;
};

SvdDocs svd_documents(const OperatorParams& p, int m_max, int n, bool use_cache)
{
    SvdDocs d;
    d.key = svd_key(p, m_max, n);
    const fs::path dir = cache_dir();
    const fs::path fj = dir / (d.key + ".json"), fc = dir / (d.key + ".csv");
    if (use_cache && fs::exists(fj) && fs::exists(fc)) {
        d.json_text = read_file(fj);
        d.summary = read_file(fc);
        d.cache_hit = true;
        return d;
    }
    SvdOptions opt;
    opt.n = n;
    auto svd = compute_svd(p, m_max, opt);
    d.json_text = svd_to_json(p, svd).dump() + "\n";
    d.summary = svd_summary_csv(svd);
    if (use_cache) {
        try {
            write_file_atomic(fj, d.json_text);
            write_file_atomic(fc, d.summary);
        } catch (const std::exception& e) {
            std::cerr << "warning: cache not written: " << e.what() << "\n";
        }
    }
    return d;
}

std::vector<SvdTriplet> svd_for(const OperatorParams& p, int m_max, bool use_cache)
{
    if (!use_cache) return compute_svd(p, m_max);
    SvdDocs d = svd_documents(p, m_max, 0, true);
    return svd_from_json(json::parse(d.json_text));
}

int cmd_svd(double b, double c, int m_max, int n, const fs::path& out, bool use_cache)
{
    OperatorParams p{b, c};
    p.validate();
    if (m_max < 0) throw std::invalid_argument("--m-max must be >= 0");
    if (n != 0 && n < 4 * (m_max + 1)) throw std::invalid_argument("--n must be >= 4 (m_max + 1)");
    Manifest man("svd", out);
    man.params = {{"b", b}, {"c", c}, {"m_max", m_max}, {"n", n}};
    SvdDocs d = svd_documents(p, m_max, n, use_cache);
    man.input_hashes["parameters"] = d.key;
    man.extra["cache_hit"] = d.cache_hit;
    man.output("svd.json", d.json_text);
    man.output("svd_summary.csv", d.summary);
    man.write();
    return 0;
}

int cmd_bounds(const std::vector<double>& cs, int m_max, int n, int n_b, const fs::path& out)
{
    if (cs.empty()) throw std::invalid_argument("--c needs at least one value");
    if (m_max < 0) throw std::invalid_argument("--m-max must be >= 0");
    for (double c : cs)
        if (!(c > 0.0)) throw std::invalid_argument("--c values must be positive");
    Manifest man("bounds", out);
    man.params = {{"c", cs}, {"m_max", m_max}, {"n", n}, {"n_b", n_b}};
    std::vector<BoundsReport> reps;
    BoundsOptions opt;
    opt.n = n;
    opt.n_b = n_b;
    json arr = json::array();
    for (double c : cs) {
        reps.push_back(bounds_report(c, m_max, opt));
        arr.push_back(bounds_to_json(reps.back()));
    }
    man.input_hashes["parameters"] = sha256_hex(man.params.dump());
    man.output("bounds.csv", bounds_csv(reps));
    man.output("bounds_summary.csv", bounds_summary_csv(reps));
    man.output("bounds.json", arr.dump(1) + "\n");
    man.write();
    return 0;
}

int cmd_widom(const std::vector<double>& cs, int m_lo, int m_hi, const fs::path& out)
{
    if (cs.empty()) throw std::invalid_argument("--c needs at least one value");
    if (m_lo < 0 || m_hi <= m_lo) throw std::invalid_argument("need 0 <= --m-lo < --m-hi");
    Manifest man("widom", out);
    man.params = {{"c", cs}, {"m_lo", m_lo}, {"m_hi", m_hi}};
    std::ostringstream summ, rows;
    summ << "c,two_beta,two_log_inv_c,widom_slope,slope_fit\n";
    rows << "c,m,rho\n";
    for (double c : cs) {
        if (!(c > 0.0)) throw std::invalid_argument("--c values must be positive");
        HybridOptions ho;
        ho.rayleigh_all = true;
        HybridSpectrum hs = hybrid_spectrum(c, m_hi, ho);
        for (int m = 0; m <= m_hi; ++m) rows << csv_number(c) << ',' << m << ',' << csv_number(hs.rho[m]) << '\n';
        double ul = c < 1.0 ? 2.0 * std::log(1.0 / c) : std::nan("");
        summ << csv_number(c) << ',' << csv_number(2.0 * beta(c)) << ',' << csv_number(ul) << ','
             << csv_number(widom_slope(c)) << ',' << csv_number(fit_slope(hs.rho, m_lo, m_hi)) << '\n';
    }
    man.input_hashes["parameters"] = sha256_hex(man.params.dump());
    man.output("widom.csv", summ.str());
    man.output("widom_rho.csv", rows.str());
    man.write();
    return 0;
}

ObservationWindow window_from_csv(const fs::path& p, double b, double c, double x0, double delta)
{
    auto rows = read_window_csv(p);
    std::vector<std::pair<double, double>> tf;
    for (auto [x, f] : rows) {
        double t = (x - x0) / c;
        if (t < -1.0 - 1e-12 || t > 1.0 + 1e-12)
            throw ParseError(p.string() + ": x = " + csv_number(x) + " lies outside [x0 - c, x0 + c]");
        tf.emplace_back(std::clamp(t, -1.0, 1.0), f);
    }
    std::sort(tf.begin(), tf.end());
    ObservationWindow w;
    w.x0 = x0;
    w.c = c;
    w.delta = delta;
    (void)b;
    const std::size_t n = tf.size();
    w.grid.lo = tf.front().first;
    w.grid.hi = tf.back().first;
    for (std::size_t i = 0; i < n; ++i) {
        double wl = i > 0 ? 0.5 * (tf[i].first - tf[i - 1].first) : 0.0;
        double wr = i + 1 < n ? 0.5 * (tf[i + 1].first - tf[i].first) : 0.0;
        w.grid.nodes.push_back(tf[i].first);
        w.grid.weights.push_back(wl + wr);
        w.samples.push_back(tf[i].second);
    }
    return w;
}

struct ExtrapolateArgs {
    std::string case_id;
    std::string input;
    double b = 1.0, c = 0.5, x0 = 0.0;
    double delta = -1.0;
    int N = -1;
    std::string variant = "literal";
    bool sweep = false;
    bool pswf = false;
    std::vector<double> deltas{1e-1, 1e-2, 1e-3};
    int n_window = 2048;
    fs::path out = ".";
    bool use_cache = true;
};

int cmd_extrapolate(const ExtrapolateArgs& a)
{
    if (a.case_id.empty() == a.input.empty()) throw std::invalid_argument("give exactly one of --case or --input");
    const BVariant var = a.variant == "gl" ? BVariant::GL : BVariant::Literal;
    if (a.variant != "gl" && a.variant != "literal") throw std::invalid_argument("--variant must be literal or gl");
    Manifest man("extrapolate", a.out);

    OperatorParams params;
    ObservationWindow obs;
    if (!a.case_id.empty()) {
        BuiltinCase bc = builtin_case(a.case_id, a.delta, a.n_window);
        params = bc.params;
        obs = bc.obs;
        man.params["case"] = a.case_id;
    } else {
        if (!(a.delta > 0.0)) throw std::invalid_argument("--delta is required with --input");
        params = {a.b, a.c};
        params.validate();
        obs = window_from_csv(a.input, a.b, a.c, a.x0, a.delta);
        man.input_hashes[fs::path(a.input).filename().string()] = sha256_file(a.input);
    }
    man.params["b"] = params.b;
    man.params["c"] = params.c;
    man.params["x0"] = obs.x0;
    man.params["delta"] = obs.delta;
    man.params["variant"] = a.variant;
    man.params["n_window"] = static_cast<int>(obs.grid.size());
    if (man.input_hashes.empty()) man.input_hashes["parameters"] = sha256_hex(man.params.dump());

    const int Nmax = n_max(obs.delta);
    const int m_max = std::max(Nmax, a.N);
    auto svd = svd_for(params, m_max, a.use_cache);
    for (int m = 0; m <= m_max; ++m)
        if (!svd[m].trusted) throw UntrustedIndexError("index " + std::to_string(m) + " is below the trust floor");
    auto d = coefficients(obs, svd);
    AdaptiveResult ar = adaptive_N(d, svd, params, obs.delta, var);
    const int N = a.N >= 0 ? a.N : ar.N_hat;
    ModeReconstructions modes = mode_reconstructions(params, svd, obs.x0, m_max + 1);
    CutoffEstimate est = cutoff_estimate(d, svd, modes, N);

    man.params["N"] = a.N >= 0 ? json(a.N) : json("adaptive");
    man.extra["N_used"] = N;
    man.extra["N_hat"] = ar.N_hat;
    man.extra["N_max"] = ar.N_max;
    man.extra["B"] = ar.B;
    man.extra["Sigma"] = ar.Sigma;
    man.extra["criterion"] = ar.criterion;
    man.extra["d"] = d;

    std::vector<double> ft;
    if (obs.truth) {
        for (double y : est.y) ft.push_back(obs.truth(y));
        man.extra["error"] = window_error(est.y, est.f_hat, obs.truth);
        std::vector<double> by_N;
        for (int k = 0; k <= m_max; ++k)
            by_N.push_back(window_error(est.y, cutoff_estimate(d, svd, modes, k).f_hat, obs.truth));
        man.extra["errors_by_N"] = by_N;
    }
    man.output("reconstruction.csv", reconstruction_csv(est.y, est.f_hat, obs.truth ? &ft : nullptr));

    if (a.pswf) {
        PswfBasis basis = pswf_basis(params.c / params.b, std::max(N, 8));
        PswfEstimate pe = pswf_cutoff_estimate(obs, basis, params.b, N);
        man.output("reconstruction_pswf.csv", reconstruction_csv(pe.y, pe.f_hat, obs.truth ? &ft : nullptr));
        if (obs.truth) man.extra["error_pswf"] = window_error(pe.y, pe.f_hat, obs.truth);
    }

    if (a.sweep) {
        if (a.case_id.empty()) throw std::invalid_argument("--sweep needs --case");
        RateTable tab = rate_sweep(a.case_id, a.deltas, var);
        std::ostringstream os;
        os << "delta,N_rule,err_rule,N_hat,err_hat\n";
        for (const auto& r : tab.rows)
            os << csv_number(r.delta) << ',' << r.N_rule << ',' << csv_number(r.err_rule) << ',' << r.N_hat << ','
               << csv_number(r.err_hat) << '\n';
        man.output("sweep.csv", os.str());
        man.extra["slope_rule"] = tab.slope_rule;
        man.extra["slope_hat"] = tab.slope_hat;
    }
    man.write();
    return 0;
}

int cmd_selftest(const fs::path& out)
{
    Manifest man("selftest", out);
    man.params = {{"b", 1.0}, {"c", 1.0}, {"m_max", 6}, {"n", 200}, {"cases", {"a", "b"}}};
    man.input_hashes["parameters"] = sha256_hex(man.params.dump());
    std::ostringstream checks;
    checks << "check,value,pass\n";
    bool ok = true;
    auto check = [&](const std::string& name, double value, bool pass) {
        checks << name << ',' << csv_number(value) << ',' << (pass ? 1 : 0) << '\n';
        ok = ok && pass;
    };

    const OperatorParams p{1.0, 1.0};
    SvdOptions so;
    so.n = 200;
    auto svd = compute_svd(p, 6, so);
    man.output("svd.json", svd_to_json(p, svd).dump() + "\n");
    man.output("svd_summary.csv", svd_summary_csv(svd));

    NystromSpectrum ns = nystrom_eigensystem(1.0, 200, 6);
    double tr = std::accumulate(ns.rho_all.begin(), ns.rho_all.end(), 0.0);
    double rel = std::abs(tr - 2.0 * std::numbers::pi) / (2.0 * std::numbers::pi);
    check("trace_relative_error", rel, rel < 1e-10);
    bool dec = true;
    for (std::size_t m = 1; m < svd.size(); ++m) dec = dec && svd[m].sigma < svd[m - 1].sigma;
    check("sigma_decreasing", dec ? 1.0 : 0.0, dec);
    double worst = 0.0;
    for (const auto& t : svd) worst = std::max(worst, std::abs(t.sigma - std::sqrt(t.rho / p.c)) / t.sigma);
    check("sigma_rho_identity", worst, worst < 1e-12);

    std::vector<BoundsReport> reps{bounds_report(0.5, 6)};
    man.output("bounds.csv", bounds_csv(reps));
    bool low = true;
    for (const auto& r : reps[0].rows) low = low && r.lower_combined <= r.rho_computed;
    check("lower_bound_c0.5", low ? 1.0 : 0.0, low);

    for (const char* id : {"a", "b"}) {
        BuiltinCase bc = builtin_case(id);
        const int Nmax = n_max(bc.obs.delta);
        auto s = compute_svd(bc.params, Nmax);
        auto d = coefficients(bc.obs, s);
        AdaptiveResult ar = adaptive_N(d, s, bc.params, bc.obs.delta);
        check(std::string("N_hat_le_N_max_") + id, ar.N_hat, ar.N_hat <= ar.N_max);
        ModeReconstructions modes = mode_reconstructions(bc.params, s, 0.0, ar.N_hat + 1);
        CutoffEstimate est = cutoff_estimate(d, s, modes, ar.N_hat);
        std::vector<double> ft;
        for (double y : est.y) ft.push_back(bc.obs.truth(y));
        double err = window_error(est.y, est.f_hat, bc.obs.truth);
        check(std::string("error_finite_") + id, err, std::isfinite(err));
        man.output(std::string("reconstruction_") + id + ".csv", reconstruction_csv(est.y, est.f_hat, &ft));
    }
    man.output("checks.csv", checks.str());
    man.extra["passed"] = ok;
    man.write();
    if (!ok) {
        std::cerr << "selftest: some checks failed, see " << (out / "checks.csv").string() << "\n";
        return 3;
    }
    return 0;
}

} // namespace

int run_cli(int argc, char** argv)
{
    CLI::App app{"SVD of the truncated Fourier transform on L2(cosh(b.)), eigenvalue bounds and extrapolation"};
    app.set_version_flag("--version", SECHPROLATE_VERSION);
    app.require_subcommand(1);

    double b = 1.0, c = 1.0;
    int m_max = 12, n = 0, n_b = 0;
    std::string out = ".";
    bool no_cache = false;
    auto* svd = app.add_subcommand("svd", "compute and cache singular triplets");
    svd->add_option("--b", b, "weight growth rate")->check(CLI::PositiveNumber);
    svd->add_option("--c", c, "half-width of the Fourier window")->check(CLI::PositiveNumber);
    svd->add_option("--m-max", m_max, "largest index")->check(CLI::NonNegativeNumber);
    svd->add_option("--n", n, "Nystrom grid size (0: default)")->check(CLI::NonNegativeNumber);
    svd->add_option("--out", out, "output directory");
    svd->add_flag("--no-cache", no_cache, "bypass the disk cache");

    std::vector<double> cs{0.5};
    int bm = 10;
    std::string bout = ".";
    auto* bnd = app.add_subcommand("bounds", "eigenvalue bounds against computed spectra");
    bnd->add_option("--c", cs, "values of c")->delimiter(',');
    bnd->add_option("--m-max", bm, "largest index")->check(CLI::NonNegativeNumber);
    bnd->add_option("--n", n, "Nystrom grid size (0: default)")->check(CLI::NonNegativeNumber);
    bnd->add_option("--n-b", n_b, "Galerkin basis size (0: default)")->check(CLI::NonNegativeNumber);
    bnd->add_option("--out", bout, "output directory");

    std::vector<double> wcs{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0};
    int m_lo = 6, m_hi = 12;
    std::string wout = ".";
    auto* wid = app.add_subcommand("widom", "spectral slopes against the Widom asymptotics");
    wid->add_option("--c", wcs, "values of c")->delimiter(',');
    wid->add_option("--m-lo", m_lo, "first index of the fit");
    wid->add_option("--m-hi", m_hi, "last index of the fit");
    wid->add_option("--out", wout, "output directory");

    ExtrapolateArgs ea;
    bool adaptive = false;
    auto* ext = app.add_subcommand("extrapolate", "spectral cut-off extrapolation");
    ext->add_option("--case", ea.case_id, "built-in benchmark (a or b)")->check(CLI::IsMember({"a", "b"}));
    ext->add_option("--input", ea.input, "CSV with columns x,f_delta")->check(CLI::ExistingFile);
    ext->add_option("--b", ea.b, "weight growth rate (with --input)")->check(CLI::PositiveNumber);
    ext->add_option("--c", ea.c, "window half-width (with --input)")->check(CLI::PositiveNumber);
    ext->add_option("--x0", ea.x0, "window centre (with --input)");
    ext->add_option("--delta", ea.delta, "noise level")->check(CLI::PositiveNumber);
    auto* optN = ext->add_option("--N", ea.N, "fixed truncation level")->check(CLI::NonNegativeNumber);
    auto* optA = ext->add_flag("--adaptive", adaptive, "choose N by the data-driven rule (default)");
    optN->excludes(optA);
    ext->add_option("--variant", ea.variant, "B(N) form: literal or gl")->check(CLI::IsMember({"literal", "gl"}));
    ext->add_flag("--sweep", ea.sweep, "run the delta sweep");
    ext->add_option("--deltas", ea.deltas, "noise levels for --sweep")->delimiter(',');
    ext->add_flag("--pswf", ea.pswf, "also run the prolate-basis estimator at the same N");
    ext->add_option("--n-window", ea.n_window, "window quadrature size")->check(CLI::PositiveNumber);
    std::string eout = ".";
    ext->add_option("--out", eout, "output directory");
    ext->add_flag("--no-cache", no_cache, "bypass the disk cache");

    std::string sout = "selftest_out";
    auto* st = app.add_subcommand("selftest", "deterministic end-to-end run");
    st->add_option("--out", sout, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*svd) return cmd_svd(b, c, m_max, n, out, !no_cache);
        if (*bnd) return cmd_bounds(cs, bm, n, n_b, bout);
        if (*wid) return cmd_widom(wcs, m_lo, m_hi, wout);
        if (*ext) {
            ea.out = eout;
            ea.use_cache = !no_cache;
            return cmd_extrapolate(ea);
        }
        if (*st) return cmd_selftest(sout);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

} // namespace sechprolate
