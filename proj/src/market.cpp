#include "qsure/market.hpp"

#include <algorithm>
#include <utility>

#include "qsure/linalg.hpp"

namespace qsure::market {

MarketModel make_market(const core::RobustModel& model, std::vector<Rat> initial,
                        std::vector<std::vector<Rat>> terminal) {
  if (initial.empty()) throw std::invalid_argument("market: needs at least one asset");
  if (terminal.size() != initial.size())
    throw std::invalid_argument("market: one terminal price row per asset required");
  for (const auto& row : terminal)
    if (static_cast<int>(row.size()) != model.n_outcomes())
      throw std::invalid_argument("market: terminal prices have wrong dimension");
  return MarketModel{std::move(initial), std::move(terminal)};
}

std::vector<std::vector<Rat>> increments(const MarketModel& market) {
  std::vector<std::vector<Rat>> ds(market.assets());
  for (int i = 0; i < market.assets(); ++i) {
    ds[i].resize(market.outcomes());
    for (int w = 0; w < market.outcomes(); ++w)
      ds[i][w] = market.terminal[i][w] - market.initial[i];
  }
  return ds;
}

namespace {

// Equality system of a martingale measure constrained to a support set:
// total mass one, zero expected increment per asset, no mass off `allowed`.
lp::LinearProgram martingale_system(const MarketModel& market,
                                    const core::OutcomeSet& allowed) {
  const int n = market.outcomes();
  auto ds = increments(market);
  lp::LinearProgram prog;
  prog.sense = lp::Sense::Maximize;
  prog.objective.assign(n, Rat(0));
  {
    lp::Row row;
    row.coeffs.assign(n, Rat(1));
    row.rel = lp::Relation::Equal;
    row.rhs = 1;
    prog.rows.push_back(std::move(row));
  }
  for (int i = 0; i < market.assets(); ++i) {
    lp::Row row;
    row.coeffs = ds[i];
    row.rel = lp::Relation::Equal;
    row.rhs = 0;
    prog.rows.push_back(std::move(row));
  }
  prog.lower.assign(n, Rat(0));
  prog.upper.assign(n, std::nullopt);
  for (int w = 0; w < n; ++w)
    if (!allowed.contains(w)) prog.upper[w] = Rat(0);
  return prog;
}

core::ProbabilityMeasure measure_from_point(const std::vector<Rat>& q, int n) {
  std::vector<Rat> mass(q.begin(), q.begin() + n);
  return core::make_probability(std::move(mass));
}

// Maximize the smallest mass placed on `floor_set` over martingale measures
// supported inside `allowed`. A positive optimum certifies a member charging
// all of `floor_set`.
struct FloorResult {
  core::ProbabilityMeasure measure;
  Rat floor;
};

std::optional<FloorResult> max_min_mass(const MarketModel& market,
                                        const core::OutcomeSet& allowed,
                                        const core::OutcomeSet& floor_set) {
  const int n = market.outcomes();
  lp::LinearProgram prog = martingale_system(market, allowed);
  // Append the floor variable t: maximize t with q_w - t >= 0 on floor_set.
  for (auto& row : prog.rows) row.coeffs.push_back(Rat(0));
  prog.objective.assign(n + 1, Rat(0));
  prog.objective[n] = 1;
  prog.lower.push_back(Rat(0));
  prog.upper.push_back(Rat(1));
  for (int w : floor_set.outcomes()) {
    lp::Row row;
    row.coeffs.assign(n + 1, Rat(0));
    row.coeffs[w] = 1;
    row.coeffs[n] = -1;
    row.rel = lp::Relation::GreaterEq;
    row.rhs = 0;
    prog.rows.push_back(std::move(row));
  }
  auto out = lp::solve(prog);
  if (out.status != lp::Status::Optimal) return std::nullopt;
  return FloorResult{measure_from_point(out.primal, n), out.primal[n]};
}

// Deterministic candidate supports for measures equivalent to some model
// measure. Without the convex flag these are the individual supports; with it,
// every union of a non-empty subfamily (the supports realized inside the hull).
std::vector<core::OutcomeSet> equivalence_supports(const core::RobustModel& model) {
  std::vector<core::OutcomeSet> result;
  auto push_unique = [&result](const core::OutcomeSet& s) {
    for (const auto& seen : result)
      if (seen == s) return;
    result.push_back(s);
  };
  const auto& priors = model.priors();
  if (!model.convex()) {
    for (const auto& p : priors) push_unique(core::support_of(p));
    return result;
  }
  const std::size_t k = priors.size();
  if (k > 20) throw std::invalid_argument("market: too many measures for hull supports");
  std::vector<core::OutcomeSet> supports;
  for (const auto& p : priors) supports.push_back(core::support_of(p));
  for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << k); ++mask) {
    core::OutcomeSet u = core::OutcomeSet::none(model.n_outcomes());
    for (std::size_t j = 0; j < k; ++j)
      if (mask & (std::uint64_t(1) << j)) u = u.unite(supports[j]);
    push_unique(u);
  }
  return result;
}

}  // namespace

NaReport check_NA_geometric(const core::RobustModel& model, const MarketModel& market) {
  const int d = market.assets();
  auto ds = increments(market);
  auto supported = model.support().outcomes();
  for (int w0 : supported) {
    lp::LinearProgram prog;
    prog.sense = lp::Sense::Maximize;
    prog.objective.resize(d);
    for (int i = 0; i < d; ++i) prog.objective[i] = ds[i][w0];
    for (int w : supported) {
      lp::Row row;
      row.coeffs.resize(d);
      for (int i = 0; i < d; ++i) row.coeffs[i] = ds[i][w];
      row.rel = lp::Relation::GreaterEq;
      row.rhs = 0;
      prog.rows.push_back(std::move(row));
    }
    prog.lower.assign(d, Rat(-1));
    prog.upper.assign(d, Rat(1));
    auto out = lp::solve(prog);
    if (out.status != lp::Status::Optimal)
      throw std::logic_error("arbitrage search: box-bounded program not optimal");
    if (*out.objective_value > 0)
      return NaReport{false, Strategy{out.primal}, w0};
  }
  return NaReport{true, std::nullopt, std::nullopt};
}

std::optional<core::ProbabilityMeasure> martingale_set_element(
    const core::RobustModel& model, const MarketModel& market,
    const MartingaleSetSelector& selector) {
  const int n = market.outcomes();
  if (n != model.n_outcomes())
    throw std::invalid_argument("market: outcome count differs from model");
  switch (selector.kind) {
    case SelectorKind::Martingale:
    case SelectorKind::EquivalentToSomeMartingale: {
      // Any martingale measure works for both: a measure is equivalent to
      // itself, and the wider set is empty exactly when this one is.
      auto out = lp::solve(martingale_system(market, model.support()));
      if (out.status != lp::Status::Optimal) return std::nullopt;
      return measure_from_point(out.primal, n);
    }
    case SelectorKind::DominatedByPrior: {
      if (model.convex()) {
        // The uniform mixture dominates everything supported in the model
        // support, so domination is no extra constraint.
        auto out = lp::solve(martingale_system(market, model.support()));
        if (out.status != lp::Status::Optimal) return std::nullopt;
        return measure_from_point(out.primal, n);
      }
      for (const auto& p : model.priors()) {
        auto out = lp::solve(martingale_system(market, core::support_of(p)));
        if (out.status == lp::Status::Optimal) return measure_from_point(out.primal, n);
      }
      return std::nullopt;
    }
    case SelectorKind::EquivalentToPrior: {
      for (const auto& u : equivalence_supports(model)) {
        auto res = max_min_mass(market, u, u);
        if (res && res->floor > 0) return res->measure;
      }
      return std::nullopt;
    }
    case SelectorKind::EquivalentTo: {
      if (!selector.base) throw std::invalid_argument("selector: base measure required");
      if (static_cast<int>(selector.base->mass.size()) != n)
        throw std::invalid_argument("selector: base measure has wrong dimension");
      core::OutcomeSet u = core::support_of(*selector.base);
      if (!u.subset_of(model.support())) return std::nullopt;
      auto res = max_min_mass(market, u, u);
      if (res && res->floor > 0) return res->measure;
      return std::nullopt;
    }
  }
  throw std::logic_error("selector: unknown kind");
}

PiConjugate conjugate_pi_classification(const core::RobustModel& model,
                                        const MarketModel& market,
                                        const core::ProbabilityMeasure& r) {
  if (static_cast<int>(r.mass.size()) != market.outcomes())
    throw std::invalid_argument("conjugate: measure has wrong dimension");
  if (!core::support_of(r).subset_of(model.support())) return PiConjugate::Infinite;
  auto ds = increments(market);
  for (int i = 0; i < market.assets(); ++i) {
    Rat e = 0;
    for (int w = 0; w < market.outcomes(); ++w) e += r.mass[w] * ds[i][w];
    if (e != 0) return PiConjugate::Infinite;
  }
  return PiConjugate::Zero;
}

namespace {

HedgeResult hedge_over(const MarketModel& market, const core::OutcomeSet& where,
                       const core::Rv& x, bool super) {
  const int d = market.assets();
  auto ds = increments(market);
  lp::LinearProgram prog;
  prog.sense = super ? lp::Sense::Minimize : lp::Sense::Maximize;
  prog.objective.assign(d + 1, Rat(0));
  prog.objective[0] = 1;
  for (int w : where.outcomes()) {
    lp::Row row;
    row.coeffs.assign(d + 1, Rat(0));
    row.coeffs[0] = 1;
    for (int i = 0; i < d; ++i) row.coeffs[i + 1] = ds[i][w];
    row.rel = super ? lp::Relation::GreaterEq : lp::Relation::LessEq;
    row.rhs = x.values[w];
    prog.rows.push_back(std::move(row));
  }
  auto out = lp::solve(prog);
  HedgeResult res{out.value(prog.sense), std::nullopt};
  if (out.status == lp::Status::Optimal)
    res.strategy = Strategy{{out.primal.begin() + 1, out.primal.end()}};
  return res;
}

}  // namespace

HedgeResult superhedge(const core::RobustModel& model, const MarketModel& market,
                       const core::Rv& x) {
  return hedge_over(market, model.support(), x, true);
}

HedgeResult subhedge(const core::RobustModel& model, const MarketModel& market,
                     const core::Rv& x) {
  return hedge_over(market, model.support(), x, false);
}

HedgeResult superhedge_Q(const core::RobustModel& model, const MarketModel& market,
                         const core::QView& q, const core::Rv& x) {
  (void)model;
  return hedge_over(market, q.support, x, true);
}

ExtRat superhedge_dual(const core::RobustModel& model, const MarketModel& market,
                       const core::Rv& x, const MartingaleSetSelector& selector) {
  const int n = market.outcomes();
  auto expectation_over = [&market, &x, n](const core::OutcomeSet& allowed) -> ExtRat {
    lp::LinearProgram prog = martingale_system(market, allowed);
    for (int w = 0; w < n; ++w) prog.objective[w] = x.values[w];
    auto out = lp::solve(prog);
    return out.value(lp::Sense::Maximize);
  };
  switch (selector.kind) {
    case SelectorKind::Martingale:
    case SelectorKind::EquivalentToSomeMartingale:
      // Expectations are still taken over martingale measures; passing to an
      // equivalent representative changes the support class, not the set of
      // attainable prices.
      return expectation_over(model.support());
    case SelectorKind::DominatedByPrior: {
      if (model.convex()) return expectation_over(model.support());
      ExtRat best = ExtRat::neg_inf();
      for (const auto& p : model.priors())
        best = max(best, expectation_over(core::support_of(p)));
      return best;
    }
    case SelectorKind::EquivalentToPrior: {
      ExtRat best = ExtRat::neg_inf();
      for (const auto& u : equivalence_supports(model)) {
        auto res = max_min_mass(market, u, u);
        if (!res || res->floor == 0) continue;
        // The full-support members are dense in the face, so the sup over
        // them equals the polytope maximum.
        best = max(best, expectation_over(u));
      }
      return best;
    }
    case SelectorKind::EquivalentTo: {
      if (!selector.base) throw std::invalid_argument("selector: base measure required");
      core::OutcomeSet u = core::support_of(*selector.base);
      if (!u.subset_of(model.support())) return ExtRat::neg_inf();
      auto res = max_min_mass(market, u, u);
      if (!res || res->floor == 0) return ExtRat::neg_inf();
      return expectation_over(u);
    }
  }
  throw std::logic_error("selector: unknown kind");
}

core::ProbabilityMeasure consistent_mixture(const core::RobustModel& model,
                                            const MarketModel& market) {
  core::ProbabilityMeasure mix = core::find_dominating_measure(model);
  auto na = check_NA_geometric(model, market);
  if (!na.no_arbitrage) throw ArbitrageError(*na.witness, *na.witness_outcome);
  return mix;
}

FtapReport ftap_check(const core::RobustModel& model, const MarketModel& market,
                      const MartingaleSetSelector& selector) {
  FtapReport report;
  auto na = check_NA_geometric(model, market);
  report.na_geometric = na.no_arbitrage;
  report.arbitrage_witness = na.witness;
  report.witness_outcome = na.witness_outcome;
  report.all_dominated = true;

  auto dominating_for = [&](const core::OutcomeSet& need)
      -> std::optional<core::ProbabilityMeasure> {
    switch (selector.kind) {
      case SelectorKind::Martingale:
      case SelectorKind::EquivalentToSomeMartingale: {
        // If any measure with a martingale-equivalent support dominated the
        // model measure, so would the martingale measure itself.
        auto res = max_min_mass(market, model.support(), need);
        if (res && res->floor > 0) return res->measure;
        return std::nullopt;
      }
      case SelectorKind::DominatedByPrior: {
        if (model.convex()) {
          auto res = max_min_mass(market, model.support(), need);
          if (res && res->floor > 0) return res->measure;
          return std::nullopt;
        }
        for (const auto& p : model.priors()) {
          core::OutcomeSet sp = core::support_of(p);
          if (!need.subset_of(sp)) continue;
          auto res = max_min_mass(market, sp, need);
          if (res && res->floor > 0) return res->measure;
        }
        return std::nullopt;
      }
      case SelectorKind::EquivalentToPrior: {
        for (const auto& u : equivalence_supports(model)) {
          if (!need.subset_of(u)) continue;
          auto res = max_min_mass(market, u, u);
          if (res && res->floor > 0) return res->measure;
        }
        return std::nullopt;
      }
      case SelectorKind::EquivalentTo: {
        if (!selector.base) throw std::invalid_argument("selector: base measure required");
        core::OutcomeSet u = core::support_of(*selector.base);
        if (!u.subset_of(model.support()) || !need.subset_of(u)) return std::nullopt;
        auto res = max_min_mass(market, u, u);
        if (res && res->floor > 0) return res->measure;
        return std::nullopt;
      }
    }
    throw std::logic_error("selector: unknown kind");
  };

  for (std::size_t j = 0; j < model.priors().size(); ++j) {
    FtapPriorResult pr;
    pr.prior_index = j;
    pr.dominating = dominating_for(core::support_of(model.priors()[j]));
    report.all_dominated = report.all_dominated && pr.dominating.has_value();
    report.per_prior.push_back(std::move(pr));
  }
  report.consistent = (report.na_geometric == report.all_dominated);
  return report;
}

std::vector<core::ProbabilityMeasure> martingale_polytope_vertices(
    const core::RobustModel& model, const MarketModel& market, int max_support) {
  core::OutcomeSet t = model.support();
  const auto cols = t.outcomes();
  const int m = static_cast<int>(cols.size());
  if (m > max_support)
    throw std::invalid_argument("vertex enumeration: support exceeds the cap");
  auto ds = increments(market);

  linalg::Mat eq;
  std::vector<Rat> rhs;
  eq.emplace_back(m, Rat(1));
  rhs.push_back(Rat(1));
  for (int i = 0; i < market.assets(); ++i) {
    linalg::Vec row(m);
    for (int j = 0; j < m; ++j) row[j] = ds[i][cols[j]];
    eq.push_back(std::move(row));
    rhs.push_back(Rat(0));
  }

  // Consistency: a dependent equation with an incompatible right side means
  // the affine system, hence the polytope, is empty.
  linalg::Mat augmented = eq;
  for (std::size_t i = 0; i < eq.size(); ++i) augmented[i].push_back(rhs[i]);
  if (linalg::rank(augmented) != linalg::rank(eq)) return {};

  auto keep = linalg::maximal_independent_rows(eq);
  const int r = static_cast<int>(keep.size());
  if (r > m) return {};

  std::vector<core::ProbabilityMeasure> vertices;
  auto seen = [&vertices](const std::vector<Rat>& mass) {
    for (const auto& v : vertices)
      if (v.mass == mass) return true;
    return false;
  };

  std::vector<int> comb(r);
  for (int i = 0; i < r; ++i) comb[i] = i;
  auto advance = [&comb, m, r]() {
    int i = r - 1;
    while (i >= 0 && comb[i] == m - r + i) --i;
    if (i < 0) return false;
    ++comb[i];
    for (int j = i + 1; j < r; ++j) comb[j] = comb[j - 1] + 1;
    return true;
  };
  if (r == 0) return {};
  do {
    linalg::Mat basis(r, linalg::Vec(r));
    linalg::Vec f(r);
    for (int a = 0; a < r; ++a) {
      for (int b = 0; b < r; ++b) basis[a][b] = eq[keep[a]][comb[b]];
      f[a] = rhs[keep[a]];
    }
    auto sol = linalg::solve_square(basis, f);
    if (!sol) continue;
    bool nonneg = true;
    for (const auto& v : *sol)
      if (v < 0) {
        nonneg = false;
        break;
      }
    if (!nonneg) continue;
    std::vector<Rat> mass(market.outcomes(), Rat(0));
    for (int b = 0; b < r; ++b) mass[cols[comb[b]]] = (*sol)[b];
    if (!seen(mass)) vertices.push_back(core::make_probability(std::move(mass)));
  } while (advance());
  return vertices;
}

}  // namespace qsure::market
