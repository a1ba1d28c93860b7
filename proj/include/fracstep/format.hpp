#pragma once

#include <string>

namespace fracstep {

/// Formats a double with 15 significant digits, the precision used in every
/// data row the library writes.
std::string format_number(double value);

}  // namespace fracstep
