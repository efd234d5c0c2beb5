#include <string>
#include <vector>

#include "tdirac/cli.hpp"

int main(int argc, char** argv) {
  return tdirac::cli::run(std::vector<std::string>(argv, argv + argc));
}
