#include <string>
#include <vector>

#include "abrade/runner.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return abrade::cli::run_cli(args);
}
