#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qsure::cli {

// Command-line front end. `args` excludes the program name. Exit codes:
//   0  success
//   1  usage or input error (bad flags, unparsable scenario, unknown names,
//      exhausted budgets)
//   2  adverse mathematical verdict (arbitrage found, hedge unbounded,
//      aggregation conflict, inconsistent pricing characterization, failed
//      self test)
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace qsure::cli
