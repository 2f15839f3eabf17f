#pragma once

#include <optional>
#include <vector>

#include "qsure/continuum.hpp"
#include "qsure/core.hpp"
#include "qsure/lp.hpp"

// Slow, obviously-correct reference implementations. Everything here is
// independent of the production code paths it is used to check: different
// algorithm, same answer.
namespace qsure::oracle {

// sup over subsets B of A of |mu(B)| + |mu(A \ B)| by full enumeration.
Rat total_variation_subset_sup(const core::SignedMeasure& mu, const core::OutcomeSet& a);

// Quasi-sure domination decided from the definition: every null set of the
// dominating family is null for the dominated one. Enumerates all 2^n sets.
bool dominates_by_null_sets(int n_outcomes,
                            const std::vector<core::ProbabilityMeasure>& dominating,
                            const std::vector<core::ProbabilityMeasure>& dominated);

struct VertexOptimum {
  Rat value;
  std::vector<Rat> point;
};

// Optimum of a bounded-feasible program by enumerating candidate vertices:
// every square subsystem of active constraints (rows and finite bounds).
// Returns nullopt when no candidate vertex is feasible. Only meaningful for
// programs whose optimum sits at a vertex (e.g. fully box-bounded ones).
std::optional<VertexOptimum> lp_vertex_optimum(const lp::LinearProgram& prog);

// Simpson's rule applied piecewise: exact for polynomials of degree <= 3,
// which is everything the continuum module can represent.
Rat integrate_simpson(const continuum::PiecewisePoly& f, const Rat& a, const Rat& b);

Rat expect_simpson(const continuum::IntervalMixture& mu, const continuum::PiecewisePoly& f);

}  // namespace qsure::oracle
