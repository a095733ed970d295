#pragma once
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace photocount::verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

struct Options {
  /// Quick mode shrinks sample sizes and horizons and widens the statistical
  /// tolerances by the matching standard-error factors; deterministic checks
  /// are unchanged. Full mode runs the pinned reference values.
  bool quick = false;
  std::uint64_t seed = 20260706;
};

/// Runs every verification criterion once, in order. Stochastic checks are
/// fully seeded and reproducible.
std::vector<CheckResult> run_all(const Options& opts = {});

bool all_passed(const std::vector<CheckResult>& results);

/// One pass/fail line per criterion with wall time and a short detail.
void print_table(const std::vector<CheckResult>& results, std::ostream& os);

} // namespace photocount::verify
