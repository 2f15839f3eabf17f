#include "qsure/sensitivity.hpp"

#include <algorithm>

namespace qsure::sensitivity {

bool jQ_member(const FiniteRvSet& set, const core::QView& q, const core::Rv& x) {
  for (const auto& m : set.members)
    if (core::agree_on(m, x, q.support)) return true;
  return false;
}

CoherenceResult is_coherent(const core::RobustModel& model, const RvFamily& family) {
  const int n = model.n_outcomes();
  std::vector<bool> pinned(n, false);
  std::vector<Rat> value(n, Rat(0));
  std::vector<std::size_t> owner(n, 0);
  for (std::size_t e = 0; e < family.entries.size(); ++e) {
    const auto& [view, rv] = family.entries[e];
    if (static_cast<int>(rv.values.size()) != n)
      throw std::invalid_argument("family: prescription has wrong dimension");
    for (int w : view.support.outcomes()) {
      if (!pinned[w]) {
        pinned[w] = true;
        value[w] = rv.values[w];
        owner[w] = e;
      } else if (value[w] != rv.values[w]) {
        CoherenceResult res;
        res.conflict = CoherenceConflict{owner[w], e, w, value[w], rv.values[w]};
        return res;
      }
    }
  }
  CoherenceResult res;
  res.aggregator = core::make_rv(model, value);
  return res;
}

AggregatorClass classify_aggregator(const core::RobustModel& model, const RvFamily& family,
                                    const core::Rv& x) {
  for (const auto& [view, rv] : family.entries)
    if (!core::agree_on(x, rv, view.support))
      throw std::invalid_argument("classify: not an aggregator of the family");
  for (std::size_t e = 0; e < family.entries.size(); ++e) {
    core::Rv member = core::make_rv(model, family.entries[e].second.values);
    if (member == x) return AggregatorClass{true, e};
  }
  return AggregatorClass{false, 0};
}

StabilityResult is_Q_stable(const core::RobustModel& model, const FiniteRvSet& set,
                            const std::vector<core::QView>& views, std::uint64_t budget) {
  const int n = model.n_outcomes();
  for (const auto& m : set.members)
    if (static_cast<int>(m.values.size()) != n)
      throw std::invalid_argument("stability: member has wrong dimension");

  core::OutcomeSet covered = core::OutcomeSet::none(n);
  for (const auto& v : views) covered = covered.unite(v.support);
  std::vector<int> free_outcomes;
  for (int w : model.support().outcomes())
    if (!covered.contains(w)) free_outcomes.push_back(w);

  // Distinct member-attained values per uncovered outcome.
  std::vector<std::vector<Rat>> free_values;
  for (int w : free_outcomes) {
    std::vector<Rat> vals;
    for (const auto& m : set.members)
      if (std::find(vals.begin(), vals.end(), m.values[w]) == vals.end())
        vals.push_back(m.values[w]);
    free_values.push_back(std::move(vals));
  }

  // Budget check on the raw candidate count.
  std::uint64_t count = 1;
  auto mul_capped = [&count, budget](std::uint64_t f) {
    if (f == 0) {
      count = 0;
      return;
    }
    if (count > budget / f + 1) {
      count = budget + 1;
      return;
    }
    count *= f;
  };
  for (std::size_t i = 0; i < views.size(); ++i) mul_capped(set.members.size());
  for (const auto& vals : free_values) mul_capped(vals.size());
  if (count > budget) throw SearchBudgetError(count, budget);
  if (set.members.empty()) return StabilityResult{true, std::nullopt};

  std::vector<std::size_t> pick(views.size(), 0);
  for (;;) {
    // Patch the picked members along the views; skip incoherent picks.
    std::vector<bool> pinned(n, false);
    std::vector<Rat> value(n, Rat(0));
    bool ok = true;
    for (std::size_t v = 0; v < views.size() && ok; ++v) {
      const auto& member = set.members[pick[v]];
      for (int w : views[v].support.outcomes()) {
        if (!pinned[w]) {
          pinned[w] = true;
          value[w] = member.values[w];
        } else if (value[w] != member.values[w]) {
          ok = false;
          break;
        }
      }
    }
    if (ok) {
      std::vector<std::size_t> fpick(free_outcomes.size(), 0);
      for (;;) {
        for (std::size_t i = 0; i < free_outcomes.size(); ++i)
          value[free_outcomes[i]] = free_values[i][fpick[i]];
        core::Rv candidate = core::make_rv(model, value);
        if (!set.contains(candidate))
          return StabilityResult{false, std::move(candidate)};
        std::size_t i = 0;
        for (; i < fpick.size(); ++i) {
          if (++fpick[i] < free_values[i].size()) break;
          fpick[i] = 0;
        }
        if (i == fpick.size()) break;
      }
    }
    std::size_t v = 0;
    for (; v < pick.size(); ++v) {
      if (++pick[v] < set.members.size()) break;
      pick[v] = 0;
    }
    if (v == pick.size()) break;
  }
  return StabilityResult{true, std::nullopt};
}

IdentityReport localization_identity_check(const core::RobustModel& model,
                                           const risk::MaxAffineRiskMeasure& rho,
                                           const std::vector<core::QView>& views,
                                           const std::vector<core::Rv>& samples) {
  (void)model;
  IdentityReport report;
  report.identity_holds = true;
  for (const auto& x : samples) {
    IdentityRow row;
    row.x = x;
    row.direct = risk::evaluate(rho, x);
    ExtRat sup = ExtRat::neg_inf();
    for (const auto& q : views) sup = max(sup, risk::localize_primal_E(rho, q, x));
    row.localized_sup = sup;
    row.equal = sup.is_finite() && sup.finite() == row.direct;
    report.identity_holds = report.identity_holds && row.equal;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace qsure::sensitivity
