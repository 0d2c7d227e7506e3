#include "autoconv/io.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace autoconv {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

void write_csv(std::ostream& out, const GridFunction& g) {
    static const char* axes[] = {"x", "y", "z"};
    const GridSpec& spec = g.spec();
    for (int a = 0; a < spec.dim(); ++a) {
        out << axes[a] << ',';
    }
    out << "value\n" << std::setprecision(17);
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        const Point x = spec.node(flat);
        for (int a = 0; a < spec.dim(); ++a) {
            out << x[a] << ',';
        }
        out << g[flat] << '\n';
    }
}

GridFunction read_csv(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) {
        throw std::runtime_error("read_csv: empty input");
    }
    int dim = 0;
    for (const char c : header) {
        dim += c == ',' ? 1 : 0;
    }
    if (dim < 1 || dim > 3) {
        throw std::runtime_error("read_csv: header must have 2 to 4 columns");
    }
    std::vector<double> first;
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(row, cell, ',')) {
            cells.push_back(std::stod(cell));
        }
        if (static_cast<int>(cells.size()) != dim + 1) {
            throw std::runtime_error("read_csv: malformed row '" + line + "'");
        }
        if (first.empty()) {
            first = cells;
        }
        values.push_back(cells.back());
    }
    const auto n = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(values.size()), 1.0 / dim)));
    if (values.empty() || -first[0] <= 0.0) {
        throw std::runtime_error("read_csv: cannot infer grid from first node");
    }
    const GridSpec spec(dim, -first[0], n);
    if (spec.size() != values.size()) {
        throw std::runtime_error("read_csv: row count is not N^d");
    }
    return GridFunction(spec, Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())));
}

void write_json(std::ostream& out, const GridFunction& g) {
    nlohmann::json j;
    j["dim"] = g.spec().dim();
    j["extent"] = g.spec().extent();
    j["points_per_axis"] = g.spec().points_per_axis();
    j["values"] = std::vector<double>(g.values().data(), g.values().data() + g.size());
    out << j.dump() << '\n';
}

GridFunction read_json(std::istream& in) {
    const nlohmann::json j = nlohmann::json::parse(in);
    const GridSpec spec(j.at("dim").get<int>(), j.at("extent").get<double>(),
                        j.at("points_per_axis").get<std::size_t>());
    std::vector<double> values = j.at("values").get<std::vector<double>>();
    return GridFunction(spec, Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())));
}

void save(const std::string& path, const GridFunction& g) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    if (ends_with(path, ".json")) {
        write_json(out, g);
    } else {
        write_csv(out, g);
    }
}

GridFunction load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read '" + path + "'");
    }
    return ends_with(path, ".json") ? read_json(in) : read_csv(in);
}

}  // namespace autoconv
