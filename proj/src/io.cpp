#include "sechprolate/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <openssl/evp.h>

namespace sechprolate {

namespace fs = std::filesystem;

std::string sha256_hex(const std::string& data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1
        || EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx, md, &len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("sha256: digest failed");
    }
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string sha256_file(const fs::path& p)
{
    return sha256_hex(read_file(p));
}

std::string csv_number(double v)
{
    if (std::isnan(v)) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file_atomic(const fs::path& p, const std::string& content)
{
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    fs::path tmp = p;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot write " + tmp.string());
        os << content;
        os.flush();
        if (!os) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, p);
}

std::string read_file(const fs::path& p)
{
    std::ifstream is(p, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fs::path cache_dir()
{
    if (const char* e = std::getenv("SECHPROLATE_CACHE"); e && *e) return e;
    if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return fs::path(x) / "sechprolate";
    if (const char* h = std::getenv("HOME"); h && *h) return fs::path(h) / ".cache" / "sechprolate";
    return fs::path(".sechprolate_cache");
}

nlohmann::json svd_to_json(const OperatorParams& params, const std::vector<SvdTriplet>& svd)
{
    nlohmann::json j;
    j["b"] = params.b;
    j["c"] = params.c;
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& t : svd) {
        nlohmann::json e;
        e["m"] = t.m;
        e["sigma"] = t.sigma;
        e["rho"] = t.rho;
        e["trusted"] = t.trusted;
        e["route"] = t.route;
        e["g"] = {{"nodes", t.g_grid.nodes}, {"weights", t.g_grid.weights}, {"values", t.g}};
        std::vector<double> re(t.phi.size()), im(t.phi.size());
        for (std::size_t k = 0; k < t.phi.size(); ++k) {
            re[k] = t.phi[k].real();
            im[k] = t.phi[k].imag();
        }
        e["phi"] = {{"nodes", t.phi_grid.nodes}, {"weights", t.phi_grid.weights}, {"re", re}, {"im", im}};
        entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);
    return j;
}

std::vector<SvdTriplet> svd_from_json(const nlohmann::json& j, OperatorParams* params)
{
    if (params) {
        params->b = j.at("b").get<double>();
        params->c = j.at("c").get<double>();
    }
    std::vector<SvdTriplet> out;
    for (const auto& e : j.at("entries")) {
        SvdTriplet t;
        t.m = e.at("m").get<int>();
        t.sigma = e.at("sigma").get<double>();
        t.rho = e.at("rho").get<double>();
        t.trusted = e.value("trusted", true);
        t.route = e.value("route", std::string("nystrom"));
        t.g_grid.nodes = e.at("g").at("nodes").get<std::vector<double>>();
        t.g_grid.weights = e.at("g").at("weights").get<std::vector<double>>();
        t.g = e.at("g").at("values").get<std::vector<double>>();
        t.g_bw = gauss_barycentric_weights(t.g_grid);
        t.phi_grid.nodes = e.at("phi").at("nodes").get<std::vector<double>>();
        t.phi_grid.weights = e.at("phi").at("weights").get<std::vector<double>>();
        if (!t.phi_grid.nodes.empty()) {
            t.phi_grid.lo = t.phi_grid.nodes.front();
            t.phi_grid.hi = t.phi_grid.nodes.back();
        }
        auto re = e.at("phi").at("re").get<std::vector<double>>();
        auto im = e.at("phi").at("im").get<std::vector<double>>();
        t.phi.resize(re.size());
        for (std::size_t k = 0; k < re.size(); ++k) t.phi[k] = {re[k], im[k]};
        out.push_back(std::move(t));
    }
    return out;
}

std::string svd_summary_csv(const std::vector<SvdTriplet>& svd)
{
    std::ostringstream os;
    os << "m,sigma,rho,trust\n";
    for (const auto& t : svd)
        os << t.m << ',' << csv_number(t.sigma) << ',' << csv_number(t.rho) << ',' << (t.trusted ? 1 : 0) << '\n';
    return os.str();
}

std::string bounds_csv(const std::vector<BoundsReport>& reports)
{
    std::ostringstream os;
    os << "c,m,lower_small_c,lower_all_c,lower_combined,rho,upper,chi_lo,chi,chi_hi,supnorm_bound,supnorm_observed\n";
    for (const auto& r : reports)
        for (const auto& w : r.rows)
            os << csv_number(r.c) << ',' << w.m << ',' << csv_number(w.lower_small_c) << ','
               << csv_number(w.lower_all_c) << ',' << csv_number(w.lower_combined) << ','
               << csv_number(w.rho_computed) << ',' << csv_number(w.upper) << ',' << csv_number(w.chi_lo) << ','
               << csv_number(w.chi_computed) << ',' << csv_number(w.chi_hi) << ','
               << csv_number(w.supnorm_bound) << ',' << csv_number(w.supnorm_observed) << '\n';
    return os.str();
}

std::string bounds_summary_csv(const std::vector<BoundsReport>& reports)
{
    std::ostringstream os;
    os << "c,two_beta,two_log_inv_c,widom_slope,slope_fit\n";
    for (const auto& r : reports) {
        double ul = r.c < 1.0 ? 2.0 * std::log(1.0 / r.c) : std::nan("");
        os << csv_number(r.c) << ',' << csv_number(2.0 * beta(r.c)) << ',' << csv_number(ul) << ','
           << csv_number(r.widom) << ',' << csv_number(r.slope_fit) << '\n';
    }
    return os.str();
}

nlohmann::json bounds_to_json(const BoundsReport& r)
{
    auto num = [](double v) -> nlohmann::json {
        if (std::isnan(v)) return nullptr;
        return v;
    };
    nlohmann::json j;
    j["c"] = r.c;
    j["kappa"] = r.kappa;
    j["widom_slope"] = r.widom;
    j["slope_fit"] = num(r.slope_fit);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& w : r.rows)
        rows.push_back({{"m", w.m},
                        {"lower_small_c", num(w.lower_small_c)},
                        {"lower_all_c", w.lower_all_c},
                        {"lower_combined", w.lower_combined},
                        {"rho_computed", w.rho_computed},
                        {"upper", num(w.upper)},
                        {"chi_lo", w.chi_lo},
                        {"chi_hi", w.chi_hi},
                        {"chi_computed", w.chi_computed},
                        {"supnorm_bound", w.supnorm_bound},
                        {"supnorm_observed", w.supnorm_observed}});
    j["rows"] = std::move(rows);
    return j;
}

std::string reconstruction_csv(const std::vector<double>& y, const std::vector<double>& f_hat,
                               const std::vector<double>* f_true)
{
    std::ostringstream os;
    os << (f_true ? "x,f_hat,f_true\n" : "x,f_hat\n");
    for (std::size_t j = 0; j < y.size(); ++j) {
        os << csv_number(y[j]) << ',' << csv_number(f_hat[j]);
        if (f_true) os << ',' << csv_number((*f_true)[j]);
        os << '\n';
    }
    return os.str();
}

std::vector<std::pair<double, double>> read_window_csv(const fs::path& p)
{
    std::ifstream is(p);
    if (!is) throw ParseError("cannot open " + p.string());
    std::vector<std::pair<double, double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1 && line.find_first_of("0123456789") != 0 && line[0] != '-' && line[0] != '+'
            && line[0] != '.') {
            continue;  // header
        }
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError(p.string() + ":" + std::to_string(lineno) + ": expected two comma-separated columns");
        try {
            std::size_t used1 = 0, used2 = 0;
            std::string a = line.substr(0, comma), b = line.substr(comma + 1);
            double x = std::stod(a, &used1);
            double f = std::stod(b, &used2);
            if (a.find_first_not_of(" \t", used1) != std::string::npos
                || b.find_first_not_of(" \t", used2) != std::string::npos)
                throw std::invalid_argument("trailing characters");
            rows.emplace_back(x, f);
        } catch (const std::exception&) {
            throw ParseError(p.string() + ":" + std::to_string(lineno) + ": malformed number");
        }
    }
    if (rows.size() < 2) throw ParseError(p.string() + ": need at least two data rows");
    return rows;
}

} // namespace sechprolate
