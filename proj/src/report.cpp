#include "autoconv/report.hpp"


namespace autoconv {

nlohmann::json to_json(const Point& x) {
    return std::vector<double>(x.data(), x.data() + x.size());
}

nlohmann::json to_json(const SolutionReport& r) {
    return {
        {"a", r.a},
        {"b", r.b},
        {"min_residual", r.min_residual},
        {"min_f", r.min_f},
        {"mass_relation_gap", r.mass_relation_gap},
        {"verdict", to_string(r.verdict)},
        {"worst_location", to_json(r.worst_location)},
        {"tolerance", r.tolerance},
        {"band_width", r.band_width},
        {"band_min_residual", r.band_min_residual},
    };
}

nlohmann::json to_json(const MomentReport& r) {
    return {
        {"p", r.p},
        {"windows", r.windows},
        {"values", r.values},
        {"growth_increments", r.growth_increments},
        {"classification", to_string(r.classification)},
        {"note", r.note},
    };
}

nlohmann::json to_json(const TailFit& fit) {
    return {
        {"rate", fit.rate},
        {"intercept", fit.intercept},
        {"residual", fit.residual},
        {"points", fit.points},
        {"exponential", is_exponential(fit)},
    };
}

nlohmann::json to_json(const MomentDemo& demo) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : demo.rows) {
        nlohmann::json j = to_json(row.report);
        j["expected"] = row.expected ? nlohmann::json(to_string(*row.expected)) : nlohmann::json();
        rows.push_back(std::move(j));
    }
    return {
        {"regime", to_string(demo.regime)},
        {"b", demo.b},
        {"q", demo.q},
        {"n_terms", demo.n_terms},
        {"tail_l1", demo.tail_l1},
        {"a", demo.a},
        {"scan_extent", demo.scan_extent},
        {"rows", rows},
    };
}

nlohmann::json to_json(const SeriesBuild& build) {
    return {
        {"b", build.b},
        {"q", build.q},
        {"epsilon", build.epsilon},
        {"n_terms", build.n_terms},
        {"tail_l1", build.tail_l1},
        {"mass_f", integrate(build.f)},
        {"warnings", build.warnings},
    };
}

nlohmann::json to_json(const CltResult& r) {
    nlohmann::json j = {
        {"R", r.R},
        {"variance_class", to_string(r.variance_class)},
        {"n_list", r.n_list},
        {"p_values", r.p_values},
        {"phi_values", r.phi_values},
        {"masses", r.masses},
        {"mc_values", r.mc_values},
        {"mc_stderr", r.mc_stderr},
        {"seed", r.seed},
        {"warnings", r.warnings},
    };
    if (r.variance_class == VarianceClass::finite) {
        j["gaussian_target"] = r.gaussian_target;
    }
    return j;
}

}  // namespace autoconv
