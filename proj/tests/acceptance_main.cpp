#include <cstdlib>
#include <iostream>
#include <string>

#include "stablab/acceptance.hpp"

int main(int argc, char** argv) {
  stablab::AcceptanceOptions options;
  if (argc > 1) options.seed = std::stoull(argv[1]);
  bool all = true;
  for (int id = 1; id <= 8; ++id) {
    auto r = stablab::run_criterion(id, options);
    std::cout << stablab::format_result(r) << std::endl;
    all = all && r.pass;
  }
  return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
