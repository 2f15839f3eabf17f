#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "qsure/core.hpp"
#include "qsure/risk.hpp"
#include "qsure/sensitivity.hpp"

namespace qsure::optimize {

// Coordinatewise box of random variables, lower <= upper in the quasi-sure
// order.
struct IntervalSet {
  core::Rv lower;
  core::Rv upper;
};

IntervalSet make_interval(const core::RobustModel& model, core::Rv lower, core::Rv upper);

// Per-view objectives: squared distance to a target under the view, or a
// worst-case-affine functional whose scenarios live inside the view.
struct SquaredError {
  core::Rv target;
};

struct MaxAffineObjective {
  risk::MaxAffineRiskMeasure rho;
};

using PerViewObjective = std::variant<SquaredError, MaxAffineObjective>;
using FeasibleSet = std::variant<IntervalSet, sensitivity::FiniteRvSet>;

struct LocalizedProblem {
  std::vector<std::pair<core::QView, PerViewObjective>> objectives;
  FeasibleSet feasible;
};

// Validates: non-empty objective list, max-affine scenarios supported inside
// their view, finite feasible sets non-empty with correctly sized members.
LocalizedProblem make_problem(const core::RobustModel& model,
                              std::vector<std::pair<core::QView, PerViewObjective>> objectives,
                              FeasibleSet feasible);

// The aggregate objective: the largest of the per-view values at x.
Rat objective_value(const core::RobustModel& model, const LocalizedProblem& problem,
                    const core::Rv& x);

class IncoherentOptimizersError : public std::runtime_error {
 public:
  explicit IncoherentOptimizersError(sensitivity::CoherenceConflict c)
      : std::runtime_error("per-view minimizers disagree on overlapping support"),
        conflict(c) {}
  sensitivity::CoherenceConflict conflict;
};

struct SolveResult {
  core::Rv minimizer;
  Rat value;
  std::vector<core::Rv> per_view_minimizers;
  int verification_samples;  // random feasible points the minimizer beat
};

// Minimizes each per-view objective over the feasible set restricted to the
// view's support, patches the localized minimizers into one aggregate, and
// spot-checks global optimality against sampled feasible points. Throws
// IncoherentOptimizersError when the localized solutions cannot be patched,
// and std::invalid_argument when a patched aggregate falls outside a finite
// feasible set.
SolveResult solve_localized(const core::RobustModel& model, const LocalizedProblem& problem,
                            std::uint64_t seed = 1, int verification_samples = 64);

// Closest feasible point to a family of per-view targets under squared error:
// clamp each target to the box on its view's support and patch the results.
core::Rv bliss_point(const core::RobustModel& model, const IntervalSet& box,
                     const sensitivity::RvFamily& targets);

}  // namespace qsure::optimize
