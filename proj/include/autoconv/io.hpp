#pragma once

#include "autoconv/grid.hpp"

#include <iosfwd>
#include <string>

namespace autoconv {

/// Version string embedded in every report.
inline constexpr const char* kVersion = "1.0.0";

/**
 * CSV: header "x,value" ("x,y,value", "x,y,z,value" for d = 2, 3), one row
 * per node in storage order, 17 significant digits so values read back
 * bit-identically. The grid is recovered from the first coordinate (-L)
 * and the row count.
 */
void write_csv(std::ostream& out, const GridFunction& g);
GridFunction read_csv(std::istream& in);

/// JSON: {"dim", "extent", "points_per_axis", "values": [...]}.
void write_json(std::ostream& out, const GridFunction& g);
GridFunction read_json(std::istream& in);

/// JSON for a .json extension, CSV otherwise.
void save(const std::string& path, const GridFunction& g);
GridFunction load(const std::string& path);

}  // namespace autoconv
