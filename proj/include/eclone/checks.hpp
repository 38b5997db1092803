#pragma once

// One-shot reproduction harness: evaluates every reference number of the
// cloning experiment that the simulator is expected to reproduce and reports
// computed vs expected values.

#include <cstdint>
#include <string>
#include <vector>

namespace eclone::checks {

enum class Comparison {
  within,    // |computed - expected| <= tolerance
  at_least,  // computed >= expected
  above,     // computed > expected
  at_most,   // computed <= expected
  holds,     // boolean property; computed is 1 or 0
};

struct CheckResult {
  std::string id;           // e.g. "C1.local_state"
  std::string description;
  double computed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::within;
  bool passed = false;
};

struct CheckOptions {
  std::uint64_t seed = 2020;
  unsigned threads = 1;
  // Visibility used to fit the mode overlap of the noisy model.
  double measured_visibility = 0.731;
  // Skip the Monte Carlo error-bar check (the slowest one).
  bool skip_monte_carlo = false;
};

std::vector<CheckResult> run_all(const CheckOptions& options = {});

const char* comparison_name(Comparison c);

}  // namespace eclone::checks
