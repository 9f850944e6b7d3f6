#include <vector>

#include "codisco/harness.hpp"

int main(int argc, char** argv) {
  return codisco::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
