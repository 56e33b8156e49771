#include <string>
#include <vector>

#include "frfx/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return frfx::run_cli(args);
}
