#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace autoconv::cli {

/// Exit codes: success or inequality satisfied, usage or numeric error, inequality violated.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolation = 2;

/// Fully resolved parameters of one run; echoed into every report.
struct RunConfig {
    std::string subcommand;
    int dim = 1;
    double extent = 64.0;
    std::size_t points = 4096;
    std::string family;
    double a = 0.5;
    double t = 1.0;
    double sigma = 1.0;
    double mass = 0.1875;
    double half_width = 1.0;
    double delta = 0.01;
    std::string input;
    std::string out;
    std::string report;
    std::string method = "series";
    double epsilon = 0.0;
    std::size_t max_terms = 100000;
    double tolerance = 0.0;
    std::vector<double> p{1.0};
    int levels = 4;
    double fit_inner = -1.0;
    std::string kind = "finite_variance";
    std::vector<double> radii{1.0};
    std::vector<int> n_list{4, 16, 64, 256};
    std::size_t samples = 100000;
    std::uint64_t seed = 20201105;
    unsigned threads = 1;
    std::size_t n = 10;
};

nlohmann::json to_json(const RunConfig& config);

/**
 * Runs one subcommand (coeffs, family, construct, verify, moments, clt).
 * args excludes the program name. Reports go to `out` unless --report
 * names a file; errors are one JSON line on `err`. The thread count
 * defaults to $AUTOCONV_THREADS when set.
 */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace autoconv::cli
