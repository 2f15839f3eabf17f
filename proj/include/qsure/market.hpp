#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "qsure/core.hpp"
#include "qsure/lp.hpp"

namespace qsure::market {

// One-period market: today's prices and one terminal price vector per outcome.
struct MarketModel {
  std::vector<Rat> initial;                 // one entry per asset
  std::vector<std::vector<Rat>> terminal;   // terminal[asset][outcome]
  int assets() const { return static_cast<int>(initial.size()); }
  int outcomes() const {
    return terminal.empty() ? 0 : static_cast<int>(terminal.front().size());
  }
};

MarketModel make_market(const core::RobustModel& model, std::vector<Rat> initial,
                        std::vector<std::vector<Rat>> terminal);

// Price increments terminal - initial, per asset and outcome.
std::vector<std::vector<Rat>> increments(const MarketModel& market);

struct Strategy {
  std::vector<Rat> holdings;
};

struct NaReport {
  bool no_arbitrage;
  std::optional<Strategy> witness;  // gain >= 0 everywhere on the support,
  std::optional<int> witness_outcome;  // strictly positive here
};

// Quasi-sure no-arbitrage, decided geometrically: for each supported outcome,
// maximize the gain there subject to non-negative gains on the support and a
// box on holdings; any positive optimum certifies an arbitrage.
NaReport check_NA_geometric(const core::RobustModel& model, const MarketModel& market);

enum class SelectorKind {
  Martingale,                   // all martingale measures charging no polar set
  EquivalentToSomeMartingale,   // measures sharing a support with some martingale measure
  DominatedByPrior,             // martingale measures dominated by a model measure
  EquivalentToPrior,            // martingale measures equivalent to a model measure
  EquivalentTo,                 // martingale measures equivalent to a fixed base measure
};

struct MartingaleSetSelector {
  SelectorKind kind = SelectorKind::Martingale;
  std::optional<core::ProbabilityMeasure> base;  // required for EquivalentTo
};

// A deterministic member of the selected set, or nullopt when it is empty.
std::optional<core::ProbabilityMeasure> martingale_set_element(
    const core::RobustModel& model, const MarketModel& market,
    const MartingaleSetSelector& selector);

enum class PiConjugate { Zero, Infinite };

// The superhedging functional's conjugate at a measure takes only the values
// 0 (martingale measures supported inside the model support) and +inf.
PiConjugate conjugate_pi_classification(const core::RobustModel& model,
                                        const MarketModel& market,
                                        const core::ProbabilityMeasure& r);

struct HedgeResult {
  ExtRat price;
  std::optional<Strategy> strategy;  // present when the price is finite
};

// Cheapest superhedging price over the model support and an optimal strategy.
// The price is -inf exactly when the market admits unbounded-profit hedges
// (no-arbitrage fails on the support in a non-degenerate way).
HedgeResult superhedge(const core::RobustModel& model, const MarketModel& market,
                       const core::Rv& x);

HedgeResult subhedge(const core::RobustModel& model, const MarketModel& market,
                     const core::Rv& x);

// Superhedging required only on the view's support.
HedgeResult superhedge_Q(const core::RobustModel& model, const MarketModel& market,
                         const core::QView& q, const core::Rv& x);

// sup of E_R[X] over the selected martingale set; -inf when the set is empty.
ExtRat superhedge_dual(const core::RobustModel& model, const MarketModel& market,
                       const core::Rv& x, const MartingaleSetSelector& selector);

class ArbitrageError : public std::runtime_error {
 public:
  ArbitrageError(Strategy w, int outcome)
      : std::runtime_error("market admits an arbitrage"),
        witness(std::move(w)),
        witness_outcome(outcome) {}
  Strategy witness;
  int witness_outcome;
};

// The uniform mixture of the model measures: a single dominating measure whose
// classical no-arbitrage is equivalent to the robust one. Throws when the
// market admits an arbitrage under it.
core::ProbabilityMeasure consistent_mixture(const core::RobustModel& model,
                                            const MarketModel& market);

struct FtapPriorResult {
  std::size_t prior_index;
  std::optional<core::ProbabilityMeasure> dominating;
};

struct FtapReport {
  bool na_geometric;
  std::vector<FtapPriorResult> per_prior;
  bool all_dominated;  // every model measure dominated by a selected measure
  bool consistent;     // the two verdicts agree
  std::optional<Strategy> arbitrage_witness;
  std::optional<int> witness_outcome;
};

// Pricing-measure characterization of no-arbitrage: NA holds iff every model
// measure is dominated by some member of the selected martingale set.
FtapReport ftap_check(const core::RobustModel& model, const MarketModel& market,
                      const MartingaleSetSelector& selector);

// All vertices of the polytope of martingale measures supported inside the
// model support, by exhaustive basis enumeration. Guarded by a support-size
// cap since the enumeration is combinatorial.
std::vector<core::ProbabilityMeasure> martingale_polytope_vertices(
    const core::RobustModel& model, const MarketModel& market, int max_support = 12);

}  // namespace qsure::market
