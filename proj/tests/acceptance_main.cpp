// Runs the full verification suite at reference scale and reports one
// pass/fail line per criterion. Exit code 0 only when everything passes.
#include <cstring>
#include <iostream>

#include "photocount/verify.hpp"

int main(int argc, char** argv) {
  photocount::verify::Options opts;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0)
      opts.quick = true;
  }
  const auto results = photocount::verify::run_all(opts);
  photocount::verify::print_table(results, std::cout);
  return photocount::verify::all_passed(results) ? 0 : 1;
}
