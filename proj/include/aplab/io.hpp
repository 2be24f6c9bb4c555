#pragma once

#include <filesystem>

#include "aplab/grid.hpp"

namespace aplab {

// CSV with header "x,value", one row per cell center, full round-trip
// precision. Reading infers the uniform grid from the centers.
void write_grid_function_csv(const GridFunction& f,
                             const std::filesystem::path& path);
GridFunction read_grid_function_csv(const std::filesystem::path& path);

// Shortest exact decimal form of a double (round-trips bit-exactly).
std::string format_double(double v);

}  // namespace aplab
