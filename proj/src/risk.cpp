#include "qsure/risk.hpp"

#include <stdexcept>
#include <utility>

namespace qsure::risk {

MaxAffineRiskMeasure make_risk_measure(const core::RobustModel& model,
                                       std::vector<Constraint> constraints) {
  if (constraints.empty())
    throw std::invalid_argument("risk measure: needs at least one constraint");
  for (const auto& c : constraints) {
    if (static_cast<int>(c.scenario.mass.size()) != model.n_outcomes())
      throw std::invalid_argument("risk measure: scenario has wrong dimension");
    for (int w = 0; w < model.n_outcomes(); ++w)
      if (c.scenario.mass[w] != 0 && model.polar().contains(w))
        throw std::invalid_argument("risk measure: scenario charges a polar outcome");
    if (c.penalty < 0)
      throw std::invalid_argument("risk measure: penalty must be non-negative");
  }
  return MaxAffineRiskMeasure{std::move(constraints)};
}

Rat evaluate(const MaxAffineRiskMeasure& rho, const core::Rv& x) {
  if (rho.constraints.empty()) throw std::invalid_argument("risk measure: empty");
  bool first = true;
  Rat best = 0;
  for (const auto& c : rho.constraints) {
    Rat v = core::expectation(c.scenario, x) - c.penalty;
    if (first || v > best) best = v;
    first = false;
  }
  return best;
}

namespace {

// Mass a scenario places outside a support set.
Rat mass_outside(const core::ProbabilityMeasure& r, const core::OutcomeSet& support) {
  Rat total = 0;
  for (int w = 0; w < static_cast<int>(r.mass.size()); ++w)
    if (!support.contains(w)) total += r.mass[w];
  return total;
}

}  // namespace

ExtRat conjugate(const MaxAffineRiskMeasure& rho, const core::ProbabilityMeasure& r) {
  const std::size_t k = rho.constraints.size();
  const std::size_t n = r.mass.size();
  lp::LinearProgram prog;
  prog.sense = lp::Sense::Minimize;
  prog.objective.resize(k);
  for (std::size_t i = 0; i < k; ++i) prog.objective[i] = rho.constraints[i].penalty;
  for (std::size_t w = 0; w < n; ++w) {
    lp::Row row;
    row.coeffs.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      if (rho.constraints[i].scenario.mass.size() != n)
        throw std::invalid_argument("conjugate: dimension mismatch");
      row.coeffs[i] = rho.constraints[i].scenario.mass[w];
    }
    row.rel = lp::Relation::Equal;
    row.rhs = r.mass[w];
    prog.rows.push_back(std::move(row));
  }
  {
    lp::Row row;
    row.coeffs.assign(k, Rat(1));
    row.rel = lp::Relation::Equal;
    row.rhs = 1;
    prog.rows.push_back(std::move(row));
  }
  prog.lower.assign(k, Rat(0));
  auto out = lp::solve(prog);
  return out.value(lp::Sense::Minimize);
}

ExtRat localize_primal_E(const MaxAffineRiskMeasure& rho, const core::QView& q,
                         const core::Rv& x) {
  bool any = false;
  Rat best = 0;
  for (const auto& c : rho.constraints) {
    if (mass_outside(c.scenario, q.support) != 0) continue;
    Rat v = core::expectation(c.scenario, x) - c.penalty;
    if (!any || v > best) best = v;
    any = true;
  }
  if (!any) return ExtRat::neg_inf();
  return ExtRat(best);
}

ExtRat localize_dual_D(const MaxAffineRiskMeasure& rho, const core::QView& q,
                       const core::Rv& x) {
  const std::size_t k = rho.constraints.size();
  lp::LinearProgram prog;
  prog.sense = lp::Sense::Maximize;
  prog.objective.resize(k);
  for (std::size_t i = 0; i < k; ++i)
    prog.objective[i] =
        core::expectation(rho.constraints[i].scenario, x) - rho.constraints[i].penalty;
  {
    lp::Row row;
    row.coeffs.assign(k, Rat(1));
    row.rel = lp::Relation::Equal;
    row.rhs = 1;
    prog.rows.push_back(std::move(row));
  }
  {
    // Total mixture mass off the view's support must vanish.
    lp::Row row;
    row.coeffs.resize(k);
    for (std::size_t i = 0; i < k; ++i)
      row.coeffs[i] = mass_outside(rho.constraints[i].scenario, q.support);
    row.rel = lp::Relation::Equal;
    row.rhs = 0;
    prog.rows.push_back(std::move(row));
  }
  prog.lower.assign(k, Rat(0));
  auto out = lp::solve(prog);
  return out.value(lp::Sense::Maximize);
}

bool is_relevant(const MaxAffineRiskMeasure& rho, const core::QView& q) {
  for (const auto& c : rho.constraints)
    if (mass_outside(c.scenario, q.support) == 0) return true;
  return false;
}

std::vector<core::QView> q_rel_set(const MaxAffineRiskMeasure& rho,
                                   const std::vector<core::QView>& candidates) {
  std::vector<core::QView> kept;
  for (const auto& q : candidates)
    if (is_relevant(rho, q)) kept.push_back(q);
  return kept;
}

ExtRat bubble_gap(const MaxAffineRiskMeasure& rho, const core::QView& q, const core::Rv& x) {
  return ExtRat::gap(localize_primal_E(rho, q, x), localize_dual_D(rho, q, x));
}

}  // namespace qsure::risk
