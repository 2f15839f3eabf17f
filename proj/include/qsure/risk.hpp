#pragma once

#include <vector>

#include "qsure/core.hpp"
#include "qsure/lp.hpp"

namespace qsure::risk {

// Worst-case-over-scenarios functional with affine penalties:
//   rho(X) = max_i ( E_{R_i}[X] - alpha_i ).
// Coherent exactly when every penalty is zero.
struct Constraint {
  core::ProbabilityMeasure scenario;
  Rat penalty;
};

struct MaxAffineRiskMeasure {
  std::vector<Constraint> constraints;
  bool coherent() const {
    for (const auto& c : constraints)
      if (c.penalty != 0) return false;
    return true;
  }
};

// Validates: at least one constraint, scenarios dimensioned to the model and
// charging no polar outcome, penalties non-negative.
MaxAffineRiskMeasure make_risk_measure(const core::RobustModel& model,
                                       std::vector<Constraint> constraints);

Rat evaluate(const MaxAffineRiskMeasure& rho, const core::Rv& x);

// Convex conjugate at a measure R: the cheapest penalty of a representation
// of R as a mixture of the constraint scenarios, +inf when R lies outside
// their convex hull. Computed by LP over mixture weights.
ExtRat conjugate(const MaxAffineRiskMeasure& rho, const core::ProbabilityMeasure& r);

// Restriction-based localized value: the infimum of rho over extensions that
// agree with X on supp(Q). For this family the infimum is reached by sending
// the off-support values down, which kills every constraint charging the
// complement of supp(Q); -inf when no constraint survives.
ExtRat localize_primal_E(const MaxAffineRiskMeasure& rho, const core::QView& q,
                         const core::Rv& x);

// Dual localized value: sup of E_R[X] - conjugate(R) over representable R
// concentrated on supp(Q). Computed as an LP over mixture weights with the
// off-support mass pinned to zero; -inf when that system is infeasible.
ExtRat localize_dual_D(const MaxAffineRiskMeasure& rho, const core::QView& q,
                       const core::Rv& x);

// Whether the localized functional is finite anywhere (equivalently at 0):
// some constraint scenario must live inside supp(Q).
bool is_relevant(const MaxAffineRiskMeasure& rho, const core::QView& q);

std::vector<core::QView> q_rel_set(const MaxAffineRiskMeasure& rho,
                                   const std::vector<core::QView>& candidates);

// localize_primal_E minus localize_dual_D with the convention that two equal
// infinities cancel; identically zero on finite spaces, which the dedicated
// tests pin down, while the continuum module exhibits nonzero limits.
ExtRat bubble_gap(const MaxAffineRiskMeasure& rho, const core::QView& q, const core::Rv& x);

}  // namespace qsure::risk
