#include "qsure/optimize.hpp"

#include <random>

#include "qsure/lp.hpp"

namespace qsure::optimize {

IntervalSet make_interval(const core::RobustModel& model, core::Rv lower, core::Rv upper) {
  core::Rv lo = core::make_rv(model, lower.values);
  core::Rv hi = core::make_rv(model, upper.values);
  if (!core::qs_leq(model, lo, hi))
    throw std::invalid_argument("interval: lower bound exceeds upper bound");
  return IntervalSet{std::move(lo), std::move(hi)};
}

namespace {

Rat squared_error_value(const core::QView& view, const core::Rv& target, const core::Rv& x) {
  Rat total = 0;
  for (int w : view.support.outcomes()) {
    Rat d = target.values[w] - x.values[w];
    total += view.measure.mass[w] * d * d;
  }
  return total;
}

Rat per_view_value(const core::QView& view, const PerViewObjective& obj, const core::Rv& x) {
  if (const auto* se = std::get_if<SquaredError>(&obj))
    return squared_error_value(view, se->target, x);
  return risk::evaluate(std::get<MaxAffineObjective>(obj).rho, x);
}

Rat clamp(const Rat& v, const Rat& lo, const Rat& hi) {
  if (v < lo) return lo;
  if (v > hi) return hi;
  return v;
}

// Minimize a worst-case-affine objective over a coordinate box, only the
// view's coordinates being live.
std::vector<Rat> min_max_affine_over_box(const core::QView& view,
                                         const risk::MaxAffineRiskMeasure& rho,
                                         const IntervalSet& box) {
  auto coords = view.support.outcomes();
  const int m = static_cast<int>(coords.size());
  lp::LinearProgram prog;
  prog.sense = lp::Sense::Minimize;
  prog.objective.assign(m + 1, Rat(0));
  prog.objective[m] = 1;
  for (const auto& c : rho.constraints) {
    lp::Row row;
    row.coeffs.assign(m + 1, Rat(0));
    for (int j = 0; j < m; ++j) row.coeffs[j] = -c.scenario.mass[coords[j]];
    row.coeffs[m] = 1;
    row.rel = lp::Relation::GreaterEq;
    row.rhs = -c.penalty;
    prog.rows.push_back(std::move(row));
  }
  prog.lower.assign(m + 1, std::nullopt);
  prog.upper.assign(m + 1, std::nullopt);
  for (int j = 0; j < m; ++j) {
    prog.lower[j] = box.lower.values[coords[j]];
    prog.upper[j] = box.upper.values[coords[j]];
  }
  auto out = lp::solve(prog);
  if (out.status != lp::Status::Optimal)
    throw std::logic_error("localized solve: box program not optimal");
  return {out.primal.begin(), out.primal.begin() + m};
}

}  // namespace

LocalizedProblem make_problem(const core::RobustModel& model,
                              std::vector<std::pair<core::QView, PerViewObjective>> objectives,
                              FeasibleSet feasible) {
  if (objectives.empty())
    throw std::invalid_argument("localized problem: needs at least one objective");
  const int n = model.n_outcomes();
  for (const auto& [view, obj] : objectives) {
    if (const auto* se = std::get_if<SquaredError>(&obj)) {
      if (static_cast<int>(se->target.values.size()) != n)
        throw std::invalid_argument("localized problem: target has wrong dimension");
    } else {
      const auto& rho = std::get<MaxAffineObjective>(obj).rho;
      for (const auto& c : rho.constraints)
        if (!core::support_of(c.scenario).subset_of(view.support))
          throw std::invalid_argument("localized problem: objective reads outside its view");
    }
  }
  if (const auto* fin = std::get_if<sensitivity::FiniteRvSet>(&feasible)) {
    if (fin->members.empty())
      throw std::invalid_argument("localized problem: empty feasible set");
    for (const auto& m : fin->members)
      if (static_cast<int>(m.values.size()) != n)
        throw std::invalid_argument("localized problem: feasible member has wrong dimension");
  } else {
    const auto& box = std::get<IntervalSet>(feasible);
    if (static_cast<int>(box.lower.values.size()) != n ||
        static_cast<int>(box.upper.values.size()) != n)
      throw std::invalid_argument("localized problem: box has wrong dimension");
    if (!core::qs_leq(model, box.lower, box.upper))
      throw std::invalid_argument("localized problem: empty box");
  }
  return LocalizedProblem{std::move(objectives), std::move(feasible)};
}

Rat objective_value(const core::RobustModel& model, const LocalizedProblem& problem,
                    const core::Rv& x) {
  (void)model;
  bool first = true;
  Rat best = 0;
  for (const auto& [view, obj] : problem.objectives) {
    Rat v = per_view_value(view, obj, x);
    if (first || v > best) best = v;
    first = false;
  }
  return best;
}

SolveResult solve_localized(const core::RobustModel& model, const LocalizedProblem& problem,
                            std::uint64_t seed, int verification_samples) {
  const int n = model.n_outcomes();
  const auto* box = std::get_if<IntervalSet>(&problem.feasible);
  const auto* fin = std::get_if<sensitivity::FiniteRvSet>(&problem.feasible);

  // Localized minimizers, one per view.
  std::vector<core::Rv> mins;
  for (const auto& [view, obj] : problem.objectives) {
    std::vector<Rat> values(n, Rat(0));
    if (box) {
      for (int w = 0; w < n; ++w) values[w] = box->lower.values[w];
      if (const auto* se = std::get_if<SquaredError>(&obj)) {
        for (int w : view.support.outcomes())
          values[w] = clamp(se->target.values[w], box->lower.values[w], box->upper.values[w]);
      } else {
        auto coords = view.support.outcomes();
        auto sol = min_max_affine_over_box(view, std::get<MaxAffineObjective>(obj).rho, *box);
        for (std::size_t j = 0; j < coords.size(); ++j) values[coords[j]] = sol[j];
      }
      mins.push_back(core::make_rv(model, values));
    } else {
      std::size_t best = 0;
      bool first = true;
      Rat best_value = 0;
      for (std::size_t k = 0; k < fin->members.size(); ++k) {
        Rat v = per_view_value(view, obj, fin->members[k]);
        if (first || v < best_value) {
          best = k;
          best_value = v;
          first = false;
        }
      }
      mins.push_back(core::make_rv(model, fin->members[best].values));
    }
  }

  sensitivity::RvFamily family;
  for (std::size_t i = 0; i < problem.objectives.size(); ++i)
    family.entries.emplace_back(problem.objectives[i].first, mins[i]);
  auto coh = sensitivity::is_coherent(model, family);
  if (!coh.coherent()) throw IncoherentOptimizersError(*coh.conflict);

  core::OutcomeSet covered = core::OutcomeSet::none(n);
  for (const auto& [view, obj] : problem.objectives) covered = covered.unite(view.support);

  core::Rv aggregate = *coh.aggregator;
  if (box) {
    std::vector<Rat> values = aggregate.values;
    for (int w : model.support().outcomes())
      if (!covered.contains(w)) values[w] = box->lower.values[w];
    aggregate = core::make_rv(model, values);
  } else {
    // Any member matching the patch on the covered set is a valid aggregate.
    bool found = false;
    for (const auto& m : fin->members) {
      if (core::agree_on(m, aggregate, covered)) {
        aggregate = core::make_rv(model, m.values);
        found = true;
        break;
      }
    }
    if (!found)
      throw std::invalid_argument(
          "localized solve: patched minimizers leave the finite feasible set");
  }

  SolveResult result;
  result.minimizer = aggregate;
  result.value = objective_value(model, problem, aggregate);
  result.per_view_minimizers = std::move(mins);
  result.verification_samples = 0;

  std::mt19937_64 gen(seed);
  for (int s = 0; s < verification_samples; ++s) {
    core::Rv probe = aggregate;
    if (box) {
      std::vector<Rat> values(n);
      std::uniform_int_distribution<int> steps(0, 16);
      for (int w = 0; w < n; ++w) {
        Rat u(BigInt(steps(gen)), BigInt(16));
        values[w] = box->lower.values[w] +
                    (box->upper.values[w] - box->lower.values[w]) * u;
      }
      probe = core::make_rv(model, values);
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, fin->members.size() - 1);
      probe = core::make_rv(model, fin->members[pick(gen)].values);
    }
    if (objective_value(model, problem, probe) < result.value)
      throw std::logic_error("localized solve: sampled point beats the aggregate");
    ++result.verification_samples;
  }
  return result;
}

core::Rv bliss_point(const core::RobustModel& model, const IntervalSet& box,
                     const sensitivity::RvFamily& targets) {
  if (targets.entries.empty())
    throw std::invalid_argument("bliss point: needs at least one target");
  const int n = model.n_outcomes();
  sensitivity::RvFamily clamped;
  core::OutcomeSet covered = core::OutcomeSet::none(n);
  for (const auto& [view, target] : targets.entries) {
    if (static_cast<int>(target.values.size()) != n)
      throw std::invalid_argument("bliss point: target has wrong dimension");
    std::vector<Rat> values(n, Rat(0));
    for (int w : view.support.outcomes())
      values[w] = clamp(target.values[w], box.lower.values[w], box.upper.values[w]);
    clamped.entries.emplace_back(view, core::make_rv(model, values));
    covered = covered.unite(view.support);
  }
  auto coh = sensitivity::is_coherent(model, clamped);
  if (!coh.coherent()) throw IncoherentOptimizersError(*coh.conflict);
  std::vector<Rat> values = coh.aggregator->values;
  for (int w : model.support().outcomes())
    if (!covered.contains(w)) values[w] = box.lower.values[w];
  return core::make_rv(model, values);
}

}  // namespace qsure::optimize
