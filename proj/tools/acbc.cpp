#include <string>
#include <vector>

#include "acbc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return acbc::cli::run(args);
}
