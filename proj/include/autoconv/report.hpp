#pragma once

#include "autoconv/analyze.hpp"
#include "autoconv/clt.hpp"
#include "autoconv/construct.hpp"

#include "json.hpp"

namespace autoconv {

/// JSON views of result types. Field names follow the struct members.
nlohmann::json to_json(const Point& x);
nlohmann::json to_json(const SolutionReport& r);
nlohmann::json to_json(const MomentReport& r);
nlohmann::json to_json(const TailFit& fit);
nlohmann::json to_json(const MomentDemo& demo);
/// Diagnostics only; the sampled f is written separately.
nlohmann::json to_json(const SeriesBuild& build);
nlohmann::json to_json(const CltResult& r);

}  // namespace autoconv
