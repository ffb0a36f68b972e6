#pragma once

#include <string>

#include "dsr/milp.hpp"

namespace dsr {

/// Free-format MPS. Rows and columns keep model order; binaries are
/// declared with BV bounds. Throws std::invalid_argument on names that free
/// MPS cannot carry (whitespace) or on duplicate row names.
std::string write_mps(const MilpModel& model);

/// Reads the subset of free MPS produced by write_mps plus RANGES and
/// INTORG/INTEND markers. Ranged rows come back as a pair of rows.
MilpModel read_mps(const std::string& text);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

}  // namespace dsr
