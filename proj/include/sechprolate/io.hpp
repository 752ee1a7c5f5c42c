#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sechprolate/bounds.hpp"
#include "sechprolate/svd_assembly.hpp"

namespace sechprolate {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::filesystem::path& p);

// 17 significant digits; empty string for NaN
std::string csv_number(double v);

void write_file_atomic(const std::filesystem::path& p, const std::string& content);
std::string read_file(const std::filesystem::path& p);

// SECHPROLATE_CACHE, else $XDG_CACHE_HOME/sechprolate, else $HOME/.cache/sechprolate
std::filesystem::path cache_dir();

nlohmann::json svd_to_json(const OperatorParams& params, const std::vector<SvdTriplet>& svd);
std::vector<SvdTriplet> svd_from_json(const nlohmann::json& j, OperatorParams* params = nullptr);
std::string svd_summary_csv(const std::vector<SvdTriplet>& svd);

std::string bounds_csv(const std::vector<BoundsReport>& reports);
std::string bounds_summary_csv(const std::vector<BoundsReport>& reports);
nlohmann::json bounds_to_json(const BoundsReport& r);

std::string reconstruction_csv(const std::vector<double>& y, const std::vector<double>& f_hat,
                               const std::vector<double>* f_true);

// Rows (x, f_delta) with a header line; errors carry the line number.
std::vector<std::pair<double, double>> read_window_csv(const std::filesystem::path& p);

} // namespace sechprolate
