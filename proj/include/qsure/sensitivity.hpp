#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qsure/core.hpp"
#include "qsure/risk.hpp"

namespace qsure::sensitivity {

// A family of random variables indexed by views: one prescribed restriction
// per view. Entry order is meaningful (ties are broken by lowest index).
struct RvFamily {
  std::vector<std::pair<core::QView, core::Rv>> entries;
};

// An explicit finite set of (canonical) random variables.
struct FiniteRvSet {
  std::vector<core::Rv> members;
  bool contains(const core::Rv& x) const {
    for (const auto& m : members)
      if (m == x) return true;
    return false;
  }
};

// Membership in the view's restriction image: some member of the set must
// agree with x on supp(Q).
bool jQ_member(const FiniteRvSet& set, const core::QView& q, const core::Rv& x);

struct CoherenceConflict {
  std::size_t first_entry;
  std::size_t second_entry;
  int outcome;
  Rat first_value;
  Rat second_value;
};

struct CoherenceResult {
  std::optional<core::Rv> aggregator;  // canonical patch, zero off the union support
  std::optional<CoherenceConflict> conflict;
  bool coherent() const { return aggregator.has_value(); }
};

// A family is coherent when the prescriptions agree wherever two views'
// supports overlap; the patchwork of the prescriptions is then an aggregator.
CoherenceResult is_coherent(const core::RobustModel& model, const RvFamily& family);

struct AggregatorClass {
  bool trivial;             // equals one of the prescribed members globally
  std::size_t entry_index;  // lowest such index when trivial
};

// Throws std::invalid_argument when x fails to restrict to the family.
AggregatorClass classify_aggregator(const core::RobustModel& model, const RvFamily& family,
                                    const core::Rv& x);

class SearchBudgetError : public std::runtime_error {
 public:
  explicit SearchBudgetError(std::uint64_t need, std::uint64_t budget)
      : std::runtime_error("stability search space exceeds budget"),
        required(need),
        allowed(budget) {}
  std::uint64_t required;
  std::uint64_t allowed;
};

struct StabilityResult {
  bool stable;
  // A witness aggregator lying outside the set when not stable.
  std::optional<core::Rv> missing_aggregator;
};

// The set C is stable for the given views when every patchwork of members
// along the views, completed arbitrarily with member-attained values on the
// uncovered part of the support, lands back inside C. Exhaustive search with
// an explicit budget on the number of candidates.
StabilityResult is_Q_stable(const core::RobustModel& model, const FiniteRvSet& set,
                            const std::vector<core::QView>& views,
                            std::uint64_t budget = 2000000);

struct IdentityRow {
  core::Rv x;
  Rat direct;
  ExtRat localized_sup;
  bool equal;
};

struct IdentityReport {
  std::vector<IdentityRow> rows;
  bool identity_holds;
};

// Checks rho(X) == sup over the views of the restriction-localized value, for
// each sample. Holds whenever the views include one whose support is the
// whole model support.
IdentityReport localization_identity_check(const core::RobustModel& model,
                                           const risk::MaxAffineRiskMeasure& rho,
                                           const std::vector<core::QView>& views,
                                           const std::vector<core::Rv>& samples);

}  // namespace qsure::sensitivity
