#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace qsure::acceptance {

struct CriterionResult {
  int index;
  std::string name;
  bool passed;
  std::string detail;   // one-line summary: key numbers, or the first failure
  double seconds;
};

// Runs the full acceptance battery. Every criterion is independent: a failure
// or exception in one is recorded and the next still runs. The seed feeds the
// randomized corpora; fixed default for reproducible reports.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed = 2024,
                                            std::ostream* progress = nullptr);

// Renders "PASS criterion-name: detail" lines; returns true when all passed.
bool print_results(const std::vector<CriterionResult>& results, std::ostream& out);

}  // namespace qsure::acceptance
