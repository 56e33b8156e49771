#pragma once

#include <string>

namespace frfx {

/// Shortest decimal form that round-trips the double exactly.
std::string format_full(double value);

}  // namespace frfx
