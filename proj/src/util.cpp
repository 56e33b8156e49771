#include "frfx/util.hpp"

#include <charconv>

namespace frfx {

std::string format_full(double value) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace frfx
