#include "autoconv/cli.hpp"

#include "autoconv/analyze.hpp"
#include "autoconv/clt.hpp"
#include "autoconv/coeff.hpp"
#include "autoconv/construct.hpp"
#include "autoconv/families.hpp"
#include "autoconv/io.hpp"
#include "autoconv/report.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

namespace autoconv::cli {

namespace {

const std::vector<std::string> kSubcommands{"coeffs", "family", "construct",
                                            "verify", "moments", "clt"};

// Flags accepted in a --config file, by config key.
const std::set<std::string> kConfigKeys{
    "dim", "L", "N", "family", "a", "t", "sigma", "mass", "half-width", "delta", "input", "out",
    "report", "method", "epsilon", "max-terms", "tolerance", "p", "levels", "fit-inner", "kind",
    "R", "n", "samples", "seed", "threads"};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void add_grid_options(CLI::App* app, RunConfig& c) {
    app->add_option("--dim", c.dim, "Dimension d in {1,2,3}");
    app->add_option("--L", c.extent, "Half-width L of the window [-L, L)^d");
    app->add_option("--N", c.points, "Points per axis (power of two >= 8)");
}

void add_family_options(CLI::App* app, RunConfig& c) {
    app->add_option("--family", c.family,
                    "poisson | poisson-margin | gaussian | box | cosine | poisson-residual | "
                    "sinc | heavy-tail | reverse | zero");
    app->add_option("--a", c.a, "Family parameter a");
    app->add_option("--t", c.t, "Poisson scale t");
    app->add_option("--sigma", c.sigma, "Gaussian standard deviation");
    app->add_option("--mass", c.mass, "Mass of gaussian/box/cosine residuals");
    app->add_option("--half-width", c.half_width, "Half-width of the box family");
    app->add_option("--delta", c.delta, "Dip radius of the reverse example");
    app->add_option("--input", c.input, "Read the function from a .csv or .json file");
}

GridFunction make_function(const RunConfig& c) {
    if (!c.input.empty()) {
        return load(c.input);
    }
    const GridSpec spec(c.dim, c.extent, c.points);
    const std::string& f = c.family;
    if (f == "poisson") {
        return sample(spec, poisson({c.a, c.t, c.dim}));
    }
    if (f == "poisson-margin" || f == "poisson-residual") {
        return sample(spec, poisson_inequality_margin(c.a, c.t, c.dim));
    }
    if (f == "gaussian") {
        const Evaluator g = gaussian_density(c.sigma, c.dim);
        return sample(spec, [&](const Point& x) { return c.mass * g(x); });
    }
    if (f == "box") {
        return sample(spec, box(c.mass, c.half_width, c.dim));
    }
    if (f == "cosine") {
        return compact_bump(spec, c.mass, {CompactBump::Shape::cosine});
    }
    if (f == "sinc") {
        return sample(spec, sinc_counterexample({c.a}));
    }
    if (f == "heavy-tail") {
        return sample(spec, heavy_tail_density());
    }
    if (f == "reverse") {
        return reverse_example(spec, c.a, c.delta);
    }
    if (f == "zero") {
        return GridFunction(spec);
    }
    if (f.empty()) {
        throw UsageError("need --family or --input");
    }
    throw UsageError("unknown family '" + f + "'");
}

class Output {
public:
    Output(const std::string& path, std::ostream& fallback) {
        if (path.empty() || path == "-") {
            stream_ = &fallback;
        } else {
            file_.open(path);
            if (!file_) {
                throw std::runtime_error("cannot write '" + path + "'");
            }
            stream_ = &file_;
        }
    }
    std::ostream& get() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_ = nullptr;
};

void emit_report(const RunConfig& c, const nlohmann::json& body, std::ostream& out) {
    nlohmann::json doc;
    doc["version"] = kVersion;
    doc["config"] = to_json(c);
    doc["report"] = body;
    Output sink(c.report, out);
    sink.get() << doc.dump(2) << '\n';
}

int run_coeffs(const RunConfig& c, std::ostream& out) {
    const CoeffTable table = build_coeffs(c.n);
    {
        Output csv(c.out, out);
        write_coeffs_csv(csv.get(), table);
    }
    if (!c.report.empty()) {
        emit_report(c,
                    {{"n_max", table.n_max()},
                     {"c_last", table.c(table.n_max())},
                     {"partial_sum", table.partial_sum(table.n_max())},
                     {"tail_at_q1", 1.0 - table.partial_sum(table.n_max())}},
                    out);
    }
    return kExitOk;
}

int run_family(const RunConfig& c, std::ostream& out) {
    const GridFunction g = make_function(c);
    if (c.out.empty() || c.out == "-") {
        write_csv(out, g);
    } else {
        save(c.out, g);
    }
    if (!c.report.empty()) {
        emit_report(c,
                    {{"mass", integrate(g)},
                     {"min", g.values().minCoeff()},
                     {"max", g.values().maxCoeff()},
                     {"positivity", positivity_check(g).nonnegative}},
                    out);
    }
    return kExitOk;
}

int run_construct(const RunConfig& c, std::ostream& out) {
    if (c.method != "series" && c.method != "spectral" && c.method != "both") {
        throw UsageError("--method must be series, spectral or both");
    }
    const GridFunction u = make_function(c);
    nlohmann::json body;
    const double b = integrate(u);
    body["b"] = b;
    body["mass_law"] = 0.5 - 0.5 * std::sqrt(std::max(0.0, 1.0 - 4.0 * b));

    std::optional<SeriesBuild> series;
    std::optional<GridFunction> spectral;
    if (c.method != "spectral") {
        SeriesOptions options;
        options.epsilon = c.epsilon;
        options.max_terms = c.max_terms;
        series = build_series(u, options);
        body["series"] = to_json(*series);
        body["series"]["min_f"] = series->f.values().minCoeff();
    }
    if (c.method != "series") {
        spectral = build_spectral(u);
        body["spectral"] = {{"mass_f", integrate(*spectral)},
                            {"min_f", spectral->values().minCoeff()}};
    }
    if (series && spectral) {
        body["crosscheck_l1"] = crosscheck(*series, *spectral);
    }
    if (!c.out.empty()) {
        save(c.out, series ? series->f : *spectral);
    }
    emit_report(c, body, out);
    return kExitOk;
}

int run_verify(const RunConfig& c, std::ostream& out) {
    const GridFunction f = make_function(c);
    const SolutionReport r = verify(f, c.tolerance);
    if (!c.out.empty()) {
        save(c.out, r.residual);
    }
    emit_report(c, to_json(r), out);
    return r.verdict == Verdict::solution ? kExitOk : kExitViolation;
}

int run_moments(const RunConfig& c, std::ostream& out) {
    const GridFunction f = make_function(c);
    nlohmann::json scans = nlohmann::json::array();
    for (const double p : c.p) {
        scans.push_back(to_json(moment_scan(f, p, c.levels)));
    }
    nlohmann::json body{{"scans", scans}};
    if (c.fit_inner >= 0.0) {
        body["tail_fit"] = to_json(exp_tail_fit(f, c.fit_inner));
    }
    emit_report(c, body, out);
    return kExitOk;
}

int run_clt(const RunConfig& c, std::ostream& out) {
    CltOptions options;
    options.seed = c.seed;
    options.threads = c.threads;
    const auto results =
        run_experiment(parse_variance_class(c.kind), c.radii, c.n_list, c.samples, options);
    {
        Output csv(c.out, out);
        csv.get() << "R,n,p_grid,phi,p_mc,stderr\n" << std::setprecision(17);
        for (const auto& r : results) {
            for (std::size_t i = 0; i < r.n_list.size(); ++i) {
                csv.get() << r.R << ',' << r.n_list[i] << ',' << r.p_values[i] << ','
                          << r.phi_values[i] << ',';
                if (r.mc_values.empty()) {
                    csv.get() << ",\n";
                } else {
                    csv.get() << r.mc_values[i] << ',' << r.mc_stderr[i] << '\n';
                }
            }
        }
    }
    if (!c.report.empty()) {
        nlohmann::json body = nlohmann::json::array();
        for (const auto& r : results) {
            body.push_back(to_json(r));
        }
        emit_report(c, body, out);
    }
    return kExitOk;
}

// Config-file entries become flags, unless the same flag is on the command line.
std::vector<std::string> merge_config(const std::string& path, std::vector<std::string> args) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot read config '" + path + "'");
    }
    const nlohmann::json config = nlohmann::json::parse(in);
    if (!config.is_object()) {
        throw UsageError("config must be a JSON object");
    }
    std::vector<std::string> merged;
    if (config.contains("subcommand")) {
        merged.push_back(config.at("subcommand").get<std::string>());
        if (!args.empty() && args.front() == merged.front()) {
            args.erase(args.begin());
        }
    }
    auto scalar = [](const nlohmann::json& v) {
        if (v.is_string()) {
            return v.get<std::string>();
        }
        std::ostringstream s;
        s << std::setprecision(17);
        if (v.is_number_float()) {
            s << v.get<double>();
        } else {
            s << v.dump();
        }
        return s.str();
    };
    for (const auto& [key, value] : config.items()) {
        if (key == "subcommand") {
            continue;
        }
        if (!kConfigKeys.count(key)) {
            throw UsageError("unknown config key '" + key + "'");
        }
        const std::string flag = "--" + key;
        if (std::find(args.begin(), args.end(), flag) != args.end()) {
            continue;
        }
        merged.push_back(flag);
        if (value.is_array()) {
            for (const auto& v : value) {
                merged.push_back(scalar(v));
            }
        } else {
            merged.push_back(scalar(value));
        }
    }
    merged.insert(merged.end(), args.begin(), args.end());
    return merged;
}

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

}  // namespace

nlohmann::json to_json(const RunConfig& c) {
    return {
        {"subcommand", c.subcommand},
        {"dim", c.dim},
        {"L", c.extent},
        {"N", c.points},
        {"family", c.family},
        {"a", c.a},
        {"t", c.t},
        {"sigma", c.sigma},
        {"mass", c.mass},
        {"half_width", c.half_width},
        {"delta", c.delta},
        {"input", c.input},
        {"out", c.out},
        {"report", c.report},
        {"method", c.method},
        {"epsilon", c.epsilon},
        {"max_terms", c.max_terms},
        {"tolerance", c.tolerance},
        {"p", c.p},
        {"levels", c.levels},
        {"fit_inner", c.fit_inner},
        {"kind", c.kind},
        {"R", c.radii},
        {"n_list", c.n_list},
        {"samples", c.samples},
        {"seed", c.seed},
        {"threads", c.threads},
        {"n", c.n},
    };
}

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
    auto fail = [&err](const std::string& message) {
        err << nlohmann::json{{"error", one_line(message)}}.dump() << '\n';
        return kExitError;
    };

    try {
        std::vector<std::string> args = args_in;
        const auto config_flag = std::find(args.begin(), args.end(), "--config");
        if (config_flag != args.end()) {
            if (config_flag + 1 == args.end()) {
                return fail("--config needs a path");
            }
            const std::string path = *(config_flag + 1);
            args.erase(config_flag, config_flag + 2);
            args = merge_config(path, args);
        }

        RunConfig c;
        if (const char* env = std::getenv("AUTOCONV_THREADS")) {
            c.threads = static_cast<unsigned>(std::max(1L, std::strtol(env, nullptr, 10)));
        }

        CLI::App app{"Solutions of f >= f*f: construction, verification and moment analysis", "autoconv"};
        app.require_subcommand(1);

        auto* coeffs = app.add_subcommand("coeffs", "Taylor coefficients of sqrt(1-x) as CSV");
        coeffs->add_option("--n", c.n, "Number of coefficients")->required();
        coeffs->add_option("--out", c.out, "CSV path (default stdout)");
        coeffs->add_option("--report", c.report, "JSON report path");

        auto* family = app.add_subcommand("family", "Sample a closed-form family");
        add_grid_options(family, c);
        add_family_options(family, c);
        family->add_option("--out", c.out, "Output .csv or .json (default CSV on stdout)");
        family->add_option("--report", c.report, "JSON report path");

        auto* construct = app.add_subcommand("construct", "Build f from a residual u");
        add_grid_options(construct, c);
        add_family_options(construct, c);
        construct->add_option("--method", c.method, "series | spectral | both");
        construct->add_option("--epsilon", c.epsilon, "L1 truncation target (0 = by q)");
        construct->add_option("--max-terms", c.max_terms, "Hard cap on series terms");
        construct->add_option("--out", c.out, "Write f to .csv or .json");
        construct->add_option("--report", c.report, "JSON report path (default stdout)");

        auto* verify_cmd = app.add_subcommand("verify", "Check f >= f*f (exit 2 on violation)");
        add_grid_options(verify_cmd, c);
        add_family_options(verify_cmd, c);
        verify_cmd->add_option("--tolerance", c.tolerance, "Violation tolerance (0 = 1e-6 max|f|)");
        verify_cmd->add_option("--out", c.out, "Write the residual u = f - f*f");
        verify_cmd->add_option("--report", c.report, "JSON report path (default stdout)");

        auto* moments = app.add_subcommand("moments", "Nested-window moment scans");
        add_grid_options(moments, c);
        add_family_options(moments, c);
        moments->add_option("--p", c.p, "Moment orders")->expected(1, -1);
        moments->add_option("--levels", c.levels, "Number of nested windows");
        moments->add_option("--fit-inner", c.fit_inner, "Also fit an exponential tail from |x| = this");
        moments->add_option("--report", c.report, "JSON report path (default stdout)");

        auto* clt = app.add_subcommand("clt", "Ball masses of rescaled n-fold convolutions");
        clt->add_option("--kind", c.kind, "finite_variance | infinite_variance");
        clt->add_option("--R", c.radii, "Ball radii")->expected(1, -1);
        clt->add_option("--n", c.n_list, "Increasing list of n")->expected(1, -1);
        clt->add_option("--samples", c.samples, "Monte Carlo replicates per n (0 = none)");
        clt->add_option("--seed", c.seed, "Master seed");
        clt->add_option("--threads", c.threads, "Monte Carlo worker threads");
        clt->add_option("--out", c.out, "CSV path (default stdout)");
        clt->add_option("--report", c.report, "JSON report path");

        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try {
            app.parse(reversed);
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return kExitOk;
        } catch (const CLI::ParseError& e) {
            return fail(e.what());
        }

        for (const auto& name : kSubcommands) {
            if (app.got_subcommand(name)) {
                c.subcommand = name;
            }
        }
        if (c.subcommand == "coeffs") return run_coeffs(c, out);
        if (c.subcommand == "family") return run_family(c, out);
        if (c.subcommand == "construct") return run_construct(c, out);
        if (c.subcommand == "verify") return run_verify(c, out);
        if (c.subcommand == "moments") return run_moments(c, out);
        if (c.subcommand == "clt") return run_clt(c, out);
        return fail("no subcommand");
    } catch (const std::exception& e) {
        return fail(e.what());
    }
}

}  // namespace autoconv::cli
