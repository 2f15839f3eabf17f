#pragma once

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qsure/core.hpp"
#include "qsure/market.hpp"
#include "qsure/risk.hpp"

namespace qsure::scenario {

// Plain-text scenario description. Rationals are written p, -p or p/q.
// Comments run from '#' to end of line. Grammar, by example:
//
//   model {
//     outcomes 3
//     prior 1/2 1/2 0
//     prior 0 1/3 2/3
//     convex            # optional: read the prior list as its convex hull
//   }
//   rv payoff 1 2 3
//   measure q 1/2 1/2 0
//   risk rho {
//     constraint 1/2 1/2 0 penalty 0
//   }
//   market m {
//     initial 1
//     terminal 2 1 0    # one line per asset
//   }
//   interval box {
//     lower 0 0 0
//     upper 2 2 2
//   }
//   family fam {
//     entry q 1 2 3     # view measure by name, then the prescribed values
//   }
//   targets goal {
//     prior 1 1 2 3     # 1-based prior index, then the target values
//   }
//   continuum {
//     m_grid 1 2 5 10
//     n_grid 10 100 1000
//   }
struct IntervalSpec {
  std::vector<Rat> lower;
  std::vector<Rat> upper;
};

struct FamilyEntry {
  std::string measure;
  std::vector<Rat> values;
};

struct TargetsSpec {
  // pairs of (0-based prior index, target values)
  std::vector<std::pair<std::size_t, std::vector<Rat>>> per_prior;
};

struct ContinuumSpec {
  std::vector<Rat> m_grid;
  std::vector<long> n_grid;
};

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(int line_number, const std::string& message)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + message),
        line(line_number) {}
  int line;
};

struct Scenario {
  std::optional<core::RobustModel> model;
  std::vector<std::pair<std::string, core::Rv>> rvs;
  std::vector<std::pair<std::string, core::ProbabilityMeasure>> measures;
  std::vector<std::pair<std::string, risk::MaxAffineRiskMeasure>> risks;
  std::vector<std::pair<std::string, market::MarketModel>> markets;
  std::vector<std::pair<std::string, IntervalSpec>> intervals;
  std::vector<std::pair<std::string, std::vector<FamilyEntry>>> families;
  std::vector<std::pair<std::string, TargetsSpec>> targets;
  std::optional<ContinuumSpec> continuum;

  const core::Rv* find_rv(const std::string& name) const;
  const core::ProbabilityMeasure* find_measure(const std::string& name) const;
  const risk::MaxAffineRiskMeasure* find_risk(const std::string& name) const;
  const market::MarketModel* find_market(const std::string& name) const;
  const IntervalSpec* find_interval(const std::string& name) const;
  const std::vector<FamilyEntry>* find_family(const std::string& name) const;
  const TargetsSpec* find_targets(const std::string& name) const;
};

// Throws ScenarioError with a 1-based line number on any malformed input.
Scenario parse_scenario(std::istream& in);
Scenario parse_scenario_file(const std::string& path);

}  // namespace qsure::scenario
