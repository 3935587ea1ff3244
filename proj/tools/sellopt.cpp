#include <string>
#include <vector>

#include "sellopt/cli.hpp"

int main(int argc, char** argv) {
  return sellopt::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
