#include "qsure/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qsure/continuum.hpp"
#include "qsure/core.hpp"
#include "qsure/lp.hpp"
#include "qsure/market.hpp"
#include "qsure/optimize.hpp"
#include "qsure/oracle.hpp"
#include "qsure/risk.hpp"
#include "qsure/sensitivity.hpp"

namespace qsure::acceptance {
namespace {

using core::OutcomeSet;
using core::ProbabilityMeasure;
using core::QView;
using core::RobustModel;
using core::Rv;

Rat rq(long num, long den) { return Rat(BigInt(num), BigInt(den)); }

std::string fmt_secs(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

// First-failure collector: criteria report the earliest violation and keep
// the rest of the battery running.
struct Check {
  bool ok = true;
  std::string first;
  void fail(std::string what) {
    if (ok) {
      ok = false;
      first = std::move(what);
    }
  }
  void expect(bool cond, const char* what) {
    if (!cond) fail(what);
  }
};

struct Gen {
  std::mt19937_64 eng;
  explicit Gen(std::uint64_t seed) : eng(seed) {}
  int irange(int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(eng);
  }
  bool coin() { return irange(0, 1) == 1; }
  // dyadic rational in [lo/2, hi/2]
  Rat halves(int lo, int hi) { return Rat(BigInt(irange(lo, hi)), BigInt(2)); }
};

std::vector<int> random_nonempty_subset(Gen& g, const std::vector<int>& pool) {
  while (true) {
    std::vector<int> out;
    for (int w : pool)
      if (g.coin()) out.push_back(w);
    if (!out.empty()) return out;
  }
}

ProbabilityMeasure random_measure(Gen& g, int n, const std::vector<int>& allowed) {
  std::vector<int> supp = random_nonempty_subset(g, allowed);
  std::vector<BigInt> weight(n, BigInt(0));
  BigInt total(0);
  for (int idx : supp) {
    BigInt v(g.irange(1, 4));
    weight[idx] = v;
    total += v;
  }
  std::vector<Rat> mass(n);
  for (int i = 0; i < n; ++i) mass[i] = Rat(weight[i], total);
  return core::make_probability(std::move(mass));
}

RobustModel random_model(Gen& g, bool convex, int max_outcomes = 6) {
  int n = g.irange(2, max_outcomes);
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  int k = g.irange(1, 3);
  std::vector<ProbabilityMeasure> priors;
  priors.reserve(k);
  for (int j = 0; j < k; ++j) priors.push_back(random_measure(g, n, all));
  return RobustModel(n, std::move(priors), convex);
}

market::MarketModel random_market(Gen& g, const RobustModel& model) {
  int d = g.irange(1, 2);
  int n = model.n_outcomes();
  std::vector<Rat> initial(d);
  std::vector<std::vector<Rat>> terminal(d, std::vector<Rat>(n));
  for (int i = 0; i < d; ++i) {
    initial[i] = g.halves(2, 8);
    for (int w = 0; w < n; ++w) terminal[i][w] = g.halves(0, 12);
  }
  return market::make_market(model, std::move(initial), std::move(terminal));
}

Rv random_rv(Gen& g, const RobustModel& model) {
  std::vector<Rat> values(model.n_outcomes());
  for (auto& v : values) v = g.halves(-8, 8);
  return core::make_rv(model, std::move(values));
}

risk::MaxAffineRiskMeasure random_risk(Gen& g, const RobustModel& model, bool coherent) {
  std::vector<int> supported = model.support().outcomes();
  int k = g.irange(1, 3);
  std::vector<risk::Constraint> constraints;
  constraints.reserve(k);
  for (int i = 0; i < k; ++i) {
    Rat penalty = coherent ? Rat(0) : g.halves(0, 4);
    constraints.push_back({random_measure(g, model.n_outcomes(), supported), penalty});
  }
  return risk::make_risk_measure(model, std::move(constraints));
}

QView random_view(Gen& g, const RobustModel& model) {
  std::vector<int> supported = model.support().outcomes();
  return core::make_qview(model, random_measure(g, model.n_outcomes(), supported));
}

// ---------------------------------------------------------------- criterion 1

std::pair<bool, std::string> crit_scale_family() {
  Check chk;
  continuum::PiecewisePoly claim = continuum::benchmark_claim();
  auto t0 = std::chrono::steady_clock::now();
  for (long n = 1; n <= 100 && chk.ok; ++n) {
    Rat expected(BigInt(-2), BigInt(n) * BigInt(n + 1));
    Rat got = continuum::member_expectation(n, claim);
    if (got != expected)
      chk.fail("member " + std::to_string(n) + " expectation " + format_rational(got));
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  chk.expect(secs < 1.0, "hundred closed-form expectations took a full second");
  for (long n : {1L, 2L, 3L, 10L, 100L}) {
    Rat quad = oracle::expect_simpson(continuum::scale_family_member(n), claim);
    Rat expected(BigInt(-2), BigInt(n) * BigInt(n + 1));
    if (quad != expected) chk.fail("quadrature disagrees at member " + std::to_string(n));
  }
  return {chk.ok,
          chk.ok ? "members 1..100 match -2/(n(n+1)) exactly in " + fmt_secs(secs) +
                       "; independent quadrature agrees on spot checks"
                 : chk.first};
}

// ---------------------------------------------------------------- criterion 2

std::pair<bool, std::string> crit_bubble_grid() {
  Check chk;
  std::vector<Rat> m_grid;
  std::vector<long> n_grid;
  for (long v = 1; v <= 10; ++v) {
    m_grid.push_back(Rat(BigInt(v)));
    n_grid.push_back(v);
  }
  auto cells =
      continuum::bubble_table(continuum::PiecewisePoly::constant(Rat(0)), m_grid, n_grid);
  chk.expect(cells.size() == 100, "grid size");
  for (const auto& cell : cells) {
    Rat expected = -cell.m / Rat(BigInt(cell.n_max));
    if (cell.value != expected) {
      chk.fail("cell m=" + format_rational(cell.m) + " N=" + std::to_string(cell.n_max) +
               " value " + format_rational(cell.value));
      break;
    }
  }
  // strict monotonicity across the table: worse in m, recovering in N
  for (int mi = 0; mi < 10 && chk.ok; ++mi)
    for (int ni = 0; ni < 10; ++ni) {
      const Rat& here = cells[mi * 10 + ni].value;
      if (mi + 1 < 10 && !(cells[(mi + 1) * 10 + ni].value < here)) {
        chk.fail("not strictly decreasing in the bubble weight");
        break;
      }
      if (ni + 1 < 10 && !(cells[mi * 10 + ni + 1].value > here)) {
        chk.fail("not strictly increasing in the truncation depth");
        break;
      }
    }
  // spot values through the direct path rather than the table
  continuum::PiecewisePoly bubble =
      continuum::PiecewisePoly::indicator(rq(1, 2), Rat(1));
  if (continuum::worst_case_truncated(bubble.scaled(Rat(-5)), 500) != rq(-1, 100))
    chk.fail("worst case of -5 on the bubble, depth 500");
  if (continuum::worst_case_truncated(bubble.scaled(Rat(-100)), 5) != Rat(-20))
    chk.fail("worst case of -100 on the bubble, depth 5");
  return {chk.ok, chk.ok ? "10x10 grid equals -m/N exactly, strictly monotone both ways; "
                           "spot values -1/100 and -20 confirmed"
                         : chk.first};
}

// ---------------------------------------------------------------- criterion 3

std::pair<bool, std::string> crit_truncated_gap() {
  Check chk;
  Rat neg_half = rq(-1, 2);
  continuum::PiecewisePoly w = -continuum::benchmark_claim();
  if (continuum::view_expectation(w) != neg_half) chk.fail("dual value via antiderivatives");
  if (oracle::expect_simpson(continuum::reference_view(), w) != neg_half)
    chk.fail("dual value via quadrature");

  std::vector<Rat> m_grid = {Rat(1), Rat(2), Rat(5), Rat(10)};
  std::vector<long> n_grid = {10, 100, 1000};
  auto report = continuum::truncated_gap_report(m_grid, n_grid);
  chk.expect(report.dual_value == neg_half, "reported dual value");
  chk.expect(report.rows.size() == 12, "row count");
  for (const auto& row : report.rows) {
    long n = row.n_max;
    // closed form of the deepest member's expectation, the maximum over the
    // truncated family for these weights
    Rat term = Rat(BigInt(-(n - 1)), BigInt(n) * BigInt(n + 1)) - row.m / Rat(BigInt(n));
    Rat expected = term > neg_half ? term : neg_half;
    if (row.kappa != expected) {
      chk.fail("kappa at m=" + format_rational(row.m) + " N=" + std::to_string(n));
      break;
    }
    if (row.gap != expected - neg_half) {
      chk.fail("gap at m=" + format_rational(row.m) + " N=" + std::to_string(n));
      break;
    }
    Rat floor = -(row.m + 1) / Rat(BigInt(n));
    if (!(row.kappa >= floor && row.kappa <= Rat(0))) {
      chk.fail("kappa outside [-(m+1)/N, 0] at m=" + format_rational(row.m) + " N=" +
               std::to_string(n));
      break;
    }
  }
  // per weight, the truncated value recovers strictly as the depth grows
  for (std::size_t block = 0; block + 2 < report.rows.size() && chk.ok; block += 3) {
    if (!(report.rows[block].kappa < report.rows[block + 1].kappa &&
          report.rows[block + 1].kappa < report.rows[block + 2].kappa))
      chk.fail("kappa not strictly recovering in depth for m=" +
               format_rational(report.rows[block].m));
  }
  // frozen corner cell and the persistent-gap threshold
  const auto& corner = report.rows.back();
  chk.expect(corner.m == Rat(10) && corner.n_max == 1000, "corner cell identity");
  chk.expect(corner.kappa == rq(-11009, 1001000), "corner kappa");
  chk.expect(corner.gap == rq(489491, 1001000), "corner gap");
  chk.expect(neg_half + corner.gap >= rq(-1, 50) && corner.gap < rq(49, 100),
             "corner gap within 1/50 of 1/2 yet below 49/100");
  auto deeper = continuum::truncated_gap_report({Rat(10)}, {1100});
  chk.expect(deeper.rows.size() == 1 && deeper.rows.front().gap == rq(593441, 1211100) &&
                 deeper.rows.front().gap >= rq(49, 100),
             "threshold cell at depth 1100");
  return {chk.ok, chk.ok ? "dual -1/2 on both routes; 12-cell grid exact and recovering; "
                           "gap(10,1000)=489491/1001000 just below 49/100, first crossing "
                           "at depth 1100 with 593441/1211100"
                         : chk.first};
}

// ---------------------------------------------------------------- criterion 4

std::pair<bool, std::string> crit_superhedge_duality(std::uint64_t seed) {
  Check chk;
  Gen g(seed * 1000003ULL + 4);
  auto t0 = std::chrono::steady_clock::now();
  int made = 0;
  long attempts = 0;
  while (made < 200 && chk.ok) {
    if (++attempts > 100000) {
      chk.fail("corpus generation stalled");
      break;
    }
    RobustModel model = random_model(g, g.coin());
    market::MarketModel mkt = random_market(g, model);
    if (!market::check_NA_geometric(model, mkt).no_arbitrage) continue;
    ++made;
    auto vertices = market::martingale_polytope_vertices(model, mkt);
    if (vertices.empty()) {
      chk.fail("no pricing vertex despite no-arbitrage, instance " + std::to_string(made));
      break;
    }
    Rv x = random_rv(g, model);
    ExtRat primal = market::superhedge(model, mkt, x).price;
    ExtRat dual = market::superhedge_dual(model, mkt, x, market::MartingaleSetSelector{});
    Rat best = core::expectation(vertices.front(), x);
    for (std::size_t i = 1; i < vertices.size(); ++i) {
      Rat v = core::expectation(vertices[i], x);
      if (v > best) best = v;
    }
    if (!primal.is_finite() || primal != dual || primal != ExtRat(best)) {
      chk.fail("hedge/dual/vertex mismatch at instance " + std::to_string(made) + ": " +
               primal.str() + " / " + dual.str() + " / " + format_rational(best));
      break;
    }
    if (!(market::subhedge(model, mkt, x).price <= primal)) {
      chk.fail("buyer price above seller price at instance " + std::to_string(made));
      break;
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  chk.expect(secs < 30.0, "thirty-second budget exceeded");
  return {chk.ok, chk.ok ? "200 no-arbitrage markets: hedge price = pricing-set supremum = "
                           "vertex maximum exactly, buyer below seller, in " +
                               fmt_secs(secs)
                         : chk.first};
}

// ---------------------------------------------------------------- criterion 5

std::pair<bool, std::string> crit_ftap_consistency(std::uint64_t seed) {
  Check chk;
  Gen g(seed * 1000003ULL + 5);
  int na_count = 0, arbitrage_count = 0;
  long attempts = 0;
  while ((na_count < 200 || arbitrage_count < 60) && chk.ok) {
    if (++attempts > 200000) {
      chk.fail("corpus generation stalled");
      break;
    }
    RobustModel model = random_model(g, false);
    market::MarketModel mkt = random_market(g, model);
    bool na = market::check_NA_geometric(model, mkt).no_arbitrage;
    if (na) {
      if (na_count >= 200) continue;
      ++na_count;
    } else {
      if (arbitrage_count >= 60) continue;
      ++arbitrage_count;
    }
    auto label = [&] {
      return std::string(na ? "no-arbitrage" : "arbitrage") + " instance " +
             std::to_string(na ? na_count : arbitrage_count);
    };

    auto base_report = market::ftap_check(model, mkt, market::MartingaleSetSelector{});
    if (base_report.na_geometric != na || !base_report.consistent ||
        base_report.all_dominated != na) {
      chk.fail("pricing-set characterization disagrees on " + label());
      break;
    }
    if (!na) {
      // the witness must be a genuine arbitrage: non-negative gains on the
      // support, strictly positive at the flagged outcome
      if (!base_report.arbitrage_witness || !base_report.witness_outcome) {
        chk.fail("missing arbitrage witness on " + label());
        break;
      }
      auto ds = market::increments(mkt);
      const auto& h = base_report.arbitrage_witness->holdings;
      OutcomeSet support = model.support();
      bool witness_ok = support.contains(*base_report.witness_outcome);
      for (int w : support.outcomes()) {
        Rat gain(0);
        for (std::size_t i = 0; i < h.size(); ++i) gain += h[i] * ds[i][w];
        if (gain < 0) witness_ok = false;
        if (w == *base_report.witness_outcome && !(gain > 0)) witness_ok = false;
      }
      if (!witness_ok) {
        chk.fail("invalid arbitrage witness on " + label());
        break;
      }
    }

    // support-equivalence relative to the dominating mixture: guaranteed to
    // characterize no-arbitrage even without convexity
    market::MartingaleSetSelector equiv{market::SelectorKind::EquivalentTo,
                                        core::find_dominating_measure(model)};
    auto equiv_report = market::ftap_check(model, mkt, equiv);
    if (!equiv_report.consistent || equiv_report.all_dominated != na) {
      chk.fail("mixture-equivalence characterization disagrees on " + label());
      break;
    }

    // convex closure: domination and prior-equivalence selectors characterize
    // no-arbitrage as well
    RobustModel convex_model(model.n_outcomes(), model.priors(), true);
    for (market::SelectorKind kind :
         {market::SelectorKind::Martingale, market::SelectorKind::DominatedByPrior,
          market::SelectorKind::EquivalentToPrior}) {
      auto convex_report =
          market::ftap_check(convex_model, mkt, market::MartingaleSetSelector{kind, {}});
      if (convex_report.na_geometric != na || !convex_report.consistent ||
          convex_report.all_dominated != na) {
        chk.fail("convex selector disagrees on " + label());
        break;
      }
    }
  }
  return {chk.ok, chk.ok ? "200 no-arbitrage + 60 arbitrage markets: geometric and "
                           "pricing-set verdicts agree under every guaranteed selector, "
                           "witnesses check out"
                         : chk.first};
}

// ---------------------------------------------------------------- criterion 6

std::pair<bool, std::string> crit_localization_identity(std::uint64_t seed) {
  Check chk;
  Gen g(seed * 1000003ULL + 6);
  for (int instance = 0; instance < 100 && chk.ok; ++instance) {
    RobustModel model = random_model(g, g.coin());
    risk::MaxAffineRiskMeasure rho = random_risk(g, model, g.coin());
    std::vector<QView> views;
    for (const auto& c : rho.constraints) views.push_back(core::make_qview(model, c.scenario));
    views.push_back(core::make_qview(model, core::find_dominating_measure(model)));
    if (risk::q_rel_set(rho, views).size() != views.size()) {
      chk.fail("a scenario view reported irrelevant, instance " + std::to_string(instance));
      break;
    }
    std::vector<Rv> samples;
    for (int s = 0; s < 20; ++s) samples.push_back(random_rv(g, model));
    auto report = sensitivity::localization_identity_check(model, rho, views, samples);
    if (!report.identity_holds) {
      for (const auto& row : report.rows)
        if (!row.equal) {
          chk.fail("direct value " + format_rational(row.direct) + " vs localized sup " +
                   row.localized_sup.str() + ", instance " + std::to_string(instance));
          break;
        }
      break;
    }
  }
  return {chk.ok, chk.ok ? "100 scenario functionals x 20 positions: direct evaluation "
                           "equals the supremum of localized values over the relevant views"
                         : chk.first};
}

// ---------------------------------------------------------------- criterion 7

std::pair<bool, std::string> crit_zero_gap(std::uint64_t seed) {
  Check chk;
  Gen g(seed * 1000003ULL + 7);
  int finite_count = 0, empty_count = 0;
  for (int i = 0; i < 500 && chk.ok; ++i) {
    RobustModel model = random_model(g, g.coin());
    risk::MaxAffineRiskMeasure rho = random_risk(g, model, g.coin());
    QView q = random_view(g, model);
    Rv x = random_rv(g, model);
    ExtRat restricted = risk::localize_primal_E(rho, q, x);
    ExtRat represented = risk::localize_dual_D(rho, q, x);
    if (restricted != represented) {
      chk.fail("localized values differ at instance " + std::to_string(i) + ": " +
               restricted.str() + " vs " + represented.str());
      break;
    }
    if (restricted.is_neg_inf() != !risk::is_relevant(rho, q)) {
      chk.fail("relevance flag inconsistent at instance " + std::to_string(i));
      break;
    }
    if (risk::bubble_gap(rho, q, x) != ExtRat(Rat(0))) {
      chk.fail("nonzero reported gap at instance " + std::to_string(i));
      break;
    }
    (restricted.is_finite() ? finite_count : empty_count)++;
  }
  chk.expect(finite_count > 0 && empty_count > 0, "coverage: both value kinds must occur");
  return {chk.ok, chk.ok ? "500 triples: restriction and representation localizations "
                           "coincide (" +
                               std::to_string(finite_count) + " finite, " +
                               std::to_string(empty_count) + " vacuous)"
                         : chk.first};
}

// ---------------------------------------------------------------- criterion 8

std::pair<bool, std::string> crit_property_battery(std::uint64_t seed) {
  Check chk;
  Gen g(seed * 1000003ULL + 8);

  // (a) + (b): scenario functionals and their localizations
  for (int instance = 0; instance < 60 && chk.ok; ++instance) {
    RobustModel model = random_model(g, g.coin());
    bool coherent = g.coin();
    risk::MaxAffineRiskMeasure rho = random_risk(g, model, coherent);
    QView q = random_view(g, model);
    std::string tag = ", functional instance " + std::to_string(instance);
    for (int s = 0; s < 10 && chk.ok; ++s) {
      Rv x = random_rv(g, model);
      Rv y = random_rv(g, model);
      Rat c = g.halves(0, 6);
      Rat lambda(BigInt(g.irange(0, 4)), BigInt(4));
      int n = model.n_outcomes();

      std::vector<Rat> raised(n), shifted(n), mixed(n);
      for (int w = 0; w < n; ++w) {
        raised[w] = x.values[w] + g.halves(0, 4);
        shifted[w] = x.values[w] + c;
        mixed[w] = lambda * x.values[w] + (Rat(1) - lambda) * y.values[w];
      }
      Rv xr = core::make_rv(model, std::move(raised));
      Rv xc = core::make_rv(model, std::move(shifted));
      Rv xm = core::make_rv(model, std::move(mixed));

      Rat vx = risk::evaluate(rho, x);
      Rat vy = risk::evaluate(rho, y);
      if (!(vx <= risk::evaluate(rho, xr))) chk.fail("monotonicity" + tag);
      if (risk::evaluate(rho, xc) != vx + c) chk.fail("cash additivity" + tag);
      Rat hull = lambda * vx + (Rat(1) - lambda) * vy;
      if (!(risk::evaluate(rho, xm) <= hull)) chk.fail("convexity" + tag);
      if (coherent) {
        Rat t = g.halves(0, 4);
        std::vector<Rat> scaled_vals(n), summed(n);
        for (int w = 0; w < n; ++w) {
          scaled_vals[w] = t * x.values[w];
          summed[w] = x.values[w] + y.values[w];
        }
        if (risk::evaluate(rho, core::make_rv(model, std::move(scaled_vals))) != t * vx)
          chk.fail("positive homogeneity" + tag);
        if (!(risk::evaluate(rho, core::make_rv(model, std::move(summed))) <= vx + vy))
          chk.fail("subadditivity" + tag);
      }

      // the same shape survives localization, in the extended-value sense
      ExtRat ex = risk::localize_primal_E(rho, q, x);
      ExtRat ey = risk::localize_primal_E(rho, q, y);
      ExtRat er = risk::localize_primal_E(rho, q, xr);
      ExtRat ec = risk::localize_primal_E(rho, q, xc);
      ExtRat em = risk::localize_primal_E(rho, q, xm);
      if (!(ex <= er)) chk.fail("localized monotonicity" + tag);
      if (ec != ex + c) chk.fail("localized cash additivity" + tag);
      if (!(ex <= ExtRat(vx))) chk.fail("localization never exceeds the direct value" + tag);
      if (em.is_finite()) {
        if (!ex.is_finite() || !ey.is_finite())
          chk.fail("localized finiteness must not depend on the position" + tag);
        else if (!(em.finite() <= lambda * ex.finite() + (Rat(1) - lambda) * ey.finite()))
          chk.fail("localized convexity" + tag);
      } else if (!ex.is_neg_inf() || !ey.is_neg_inf()) {
        chk.fail("localized finiteness must not depend on the position" + tag);
      }
      if (coherent) {
        Rat t = g.halves(1, 4);
        std::vector<Rat> scaled_vals(n);
        for (int w = 0; w < n; ++w) scaled_vals[w] = t * x.values[w];
        ExtRat es = risk::localize_primal_E(rho, q, core::make_rv(model, std::move(scaled_vals)));
        ExtRat want = ex.is_finite() ? ExtRat(t * ex.finite()) : ex;
        if (es != want) chk.fail("localized positive homogeneity" + tag);
      }
    }
  }

  // (c) worst-case functional over the truncated scale family
  auto random_poly = [&](Gen& gen) {
    Rat cut(BigInt(gen.irange(1, 7)), BigInt(8));
    std::vector<continuum::PiecewisePoly::Coeffs> pieces(2);
    for (auto& piece : pieces)
      piece = {gen.halves(-4, 4), gen.halves(-4, 4), gen.halves(-2, 2), gen.halves(-1, 1)};
    return continuum::PiecewisePoly::from_pieces({Rat(0), cut, Rat(1)}, std::move(pieces));
  };
  for (int i = 0; i < 40 && chk.ok; ++i) {
    continuum::PiecewisePoly f = random_poly(g);
    continuum::PiecewisePoly h = random_poly(g);
    long depth = g.irange(1, 12);
    Rat c = g.halves(0, 4);
    Rat t = g.halves(0, 4);
    std::string tag = ", worst-case instance " + std::to_string(i);
    Rat wf = continuum::worst_case_truncated(f, depth);
    if (continuum::worst_case_truncated(f + continuum::PiecewisePoly::constant(c), depth) !=
        wf + c)
      chk.fail("worst-case cash additivity" + tag);
    if (!(continuum::worst_case_truncated(f + h, depth) <=
          wf + continuum::worst_case_truncated(h, depth)))
      chk.fail("worst-case subadditivity" + tag);
    if (continuum::worst_case_truncated(f.scaled(t), depth) != t * wf)
      chk.fail("worst-case positive homogeneity" + tag);
    if (!(wf <= continuum::worst_case_truncated(f, depth + 7)))
      chk.fail("worst case must not shrink with depth" + tag);
    continuum::PiecewisePoly lift = continuum::PiecewisePoly::indicator(
        Rat(BigInt(g.irange(0, 3)), BigInt(8)), Rat(BigInt(g.irange(5, 8)), BigInt(8)));
    if (!(wf <= continuum::worst_case_truncated(f + lift.scaled(g.halves(0, 4)), depth)))
      chk.fail("worst-case monotonicity" + tag);
    for (long n = 1; n <= depth; ++n)
      if (!(continuum::member_expectation(n, f) <= wf)) {
        chk.fail("a family member beats its recorded worst case" + tag);
        break;
      }
  }

  // (d) hedge prices: localized dual = localized primal <= global primal, and
  // the cut-off construction reproduces the localized value inside the global
  // hedge
  int chain_samples = 0;
  while (chain_samples < 500 && chk.ok) {
    RobustModel model = random_model(g, g.coin());
    market::MarketModel mkt = random_market(g, model);
    Rv x = random_rv(g, model);
    QView q = random_view(g, model);
    std::string tag = ", hedge sample " + std::to_string(chain_samples);
    market::HedgeResult hedge = market::superhedge_Q(model, mkt, q, x);
    ExtRat local = hedge.price;
    ExtRat global = market::superhedge(model, mkt, x).price;
    if (!(local <= global)) chk.fail("localized hedge above the global one" + tag);

    ExtRat face = ExtRat::neg_inf();
    for (const auto& vertex : market::martingale_polytope_vertices(model, mkt))
      if (core::support_of(vertex).subset_of(q.support)) {
        Rat v = core::expectation(vertex, x);
        if (ExtRat(v) > face) face = ExtRat(v);
      }
    if (face != local) chk.fail("pricing-face supremum misses the localized hedge" + tag);

    if (local.is_finite()) {
      // push the claim far enough down off the view that the localized optimal
      // hedge stays feasible for the global program; the prices must then match
      auto ds = market::increments(mkt);
      OutcomeSet outside = model.support().minus(q.support);
      Rat depth(0);
      for (int w : outside.outcomes()) {
        Rat value = local.finite();
        for (std::size_t i = 0; i < hedge.strategy->holdings.size(); ++i)
          value += hedge.strategy->holdings[i] * ds[i][w];
        if (-value > depth) depth = -value;
      }
      depth += 1;
      std::vector<Rat> cut(model.n_outcomes(), Rat(0));
      for (int w : q.support.outcomes()) cut[w] = x.values[w];
      for (int w : outside.outcomes()) cut[w] = -depth;
      ExtRat through = market::superhedge(model, mkt, core::make_rv(model, std::move(cut))).price;
      if (through != local) chk.fail("cut-off hedge misses the localized price" + tag);
    }
    ++chain_samples;
  }

  // (e) localization is monotone in the view and exact at full support
  for (int i = 0; i < 300 && chk.ok; ++i) {
    RobustModel model = random_model(g, g.coin());
    risk::MaxAffineRiskMeasure rho = random_risk(g, model, g.coin());
    Rv x = random_rv(g, model);
    std::vector<int> supported = model.support().outcomes();
    std::vector<int> big = random_nonempty_subset(g, supported);
    std::vector<int> small = random_nonempty_subset(g, big);
    auto uniform_on = [&](const std::vector<int>& outcomes) {
      std::vector<Rat> mass(model.n_outcomes(), Rat(0));
      for (int w : outcomes) mass[w] = Rat(BigInt(1), BigInt(outcomes.size()));
      return core::make_qview(model, core::make_probability(std::move(mass)));
    };
    QView inner = uniform_on(small);
    QView outer = uniform_on(big);
    QView full = uniform_on(supported);
    std::string tag = ", nesting instance " + std::to_string(i);
    ExtRat ei = risk::localize_primal_E(rho, inner, x);
    ExtRat eo = risk::localize_primal_E(rho, outer, x);
    Rat direct = risk::evaluate(rho, x);
    if (!(ei <= eo)) chk.fail("localization not monotone in the view" + tag);
    if (!(eo <= ExtRat(direct))) chk.fail("localization exceeds the direct value" + tag);
    if (risk::localize_primal_E(rho, full, x) != ExtRat(direct))
      chk.fail("full-support localization must be exact" + tag);
  }

  return {chk.ok, chk.ok ? "functional axioms, localized transfers, truncated worst-case "
                           "axioms, 500 hedge chains and 300 view nestings all exact"
                         : chk.first};
}

// ---------------------------------------------------------------- criterion 9

std::pair<bool, std::string> crit_lp_battery(std::uint64_t seed) {
  Check chk;
  Gen g(seed * 1000003ULL + 9);
  int optimal_count = 0, infeasible_count = 0, unbounded_count = 0;
  for (int i = 0; i < 1000 && chk.ok; ++i) {
    lp::LinearProgram prog;
    prog.sense = g.coin() ? lp::Sense::Minimize : lp::Sense::Maximize;
    int mode = i % 5;
    int n = g.irange(1, 4);
    prog.objective.resize(n);
    for (auto& c : prog.objective) c = g.halves(-4, 4);
    int rows = mode == 3 ? g.irange(0, 2) : g.irange(1, 3);
    for (int r = 0; r < rows; ++r) {
      lp::Row row;
      row.coeffs.resize(n);
      for (auto& c : row.coeffs) c = g.halves(-4, 4);
      int rel = mode == 3 ? g.irange(0, 1) * 2 : g.irange(0, 2);
      row.rel = rel == 0   ? lp::Relation::LessEq
                : rel == 1 ? lp::Relation::Equal
                           : lp::Relation::GreaterEq;
      if (mode == 2 && g.coin()) row.rel = lp::Relation::Equal;
      row.rhs = g.halves(-4, 4);
      prog.rows.push_back(std::move(row));
    }
    bool boxed = mode <= 2 || (mode == 4 && g.coin());
    if (boxed) {
      prog.lower.resize(n);
      prog.upper.resize(n);
      for (int j = 0; j < n; ++j) {
        Rat lo = g.halves(-6, 0);
        prog.lower[j] = lo;
        prog.upper[j] = lo + g.halves(0, 8);
      }
    }
    if (mode == 4 && g.coin()) {
      // plant a contradiction on the first variable
      lp::Row a, b;
      a.coeffs.assign(n, Rat(0));
      b.coeffs.assign(n, Rat(0));
      a.coeffs[0] = Rat(1);
      b.coeffs[0] = Rat(1);
      Rat pivot = g.halves(-2, 2);
      a.rel = lp::Relation::GreaterEq;
      a.rhs = pivot + 1;
      b.rel = lp::Relation::LessEq;
      b.rhs = pivot;
      prog.rows.push_back(std::move(a));
      prog.rows.push_back(std::move(b));
    }

    lp::LpOutcome out;
    try {
      out = lp::solve(prog);
    } catch (const lp::PivotLimitError&) {
      chk.fail("pivot budget exhausted on program " + std::to_string(i));
      break;
    }
    if (!lp::verify_certificates(prog, out)) {
      chk.fail("certificate rejected on program " + std::to_string(i));
      break;
    }
    switch (out.status) {
      case lp::Status::Optimal: ++optimal_count; break;
      case lp::Status::Infeasible: ++infeasible_count; break;
      case lp::Status::Unbounded: ++unbounded_count; break;
    }
    if (boxed) {
      auto vertex = oracle::lp_vertex_optimum(prog);
      if (out.status == lp::Status::Optimal) {
        if (!vertex || vertex->value != *out.objective_value) {
          chk.fail("vertex enumeration disagrees on program " + std::to_string(i));
          break;
        }
      } else if (vertex) {
        chk.fail("vertex enumeration found a point in an infeasible program " +
                 std::to_string(i));
        break;
      }
    }
  }
  chk.expect(optimal_count >= 250, "optimal coverage");
  chk.expect(infeasible_count >= 60, "infeasible coverage");
  chk.expect(unbounded_count >= 40, "unbounded coverage");

  // the classic degenerate instance that cycles under naive pivoting
  lp::LinearProgram beale;
  beale.sense = lp::Sense::Minimize;
  beale.objective = {rq(-3, 4), Rat(150), rq(-1, 50), Rat(6)};
  lp::Row r1{{rq(1, 4), Rat(-60), rq(-1, 25), Rat(9)}, lp::Relation::LessEq, Rat(0)};
  lp::Row r2{{rq(1, 2), Rat(-90), rq(-1, 50), Rat(3)}, lp::Relation::LessEq, Rat(0)};
  lp::Row r3{{Rat(0), Rat(0), Rat(1), Rat(0)}, lp::Relation::LessEq, Rat(1)};
  beale.rows = {r1, r2, r3};
  beale.lower.assign(4, Rat(0));
  lp::SolveOptions tight;
  tight.max_pivots = 1000;
  auto degenerate = lp::solve(beale, tight);
  chk.expect(degenerate.status == lp::Status::Optimal &&
                 *degenerate.objective_value == rq(-1, 20) &&
                 lp::verify_certificates(beale, degenerate),
             "degenerate cycling-prone instance");
  return {chk.ok, chk.ok ? std::to_string(optimal_count) + " optimal / " +
                               std::to_string(infeasible_count) + " infeasible / " +
                               std::to_string(unbounded_count) +
                               " unbounded out of 1000, every certificate verified; "
                               "degenerate instance lands on -1/20"
                         : chk.first};
}

// --------------------------------------------------------------- criterion 10

std::pair<bool, std::string> crit_bliss_optimality(std::uint64_t seed) {
  Check chk;
  Gen g(seed * 1000003ULL + 10);
  long beaten = 0, samples_total = 0;
  for (int instance = 0; instance < 20 && chk.ok; ++instance) {
    RobustModel model = random_model(g, g.coin());
    int n = model.n_outcomes();
    std::string tag = ", instance " + std::to_string(instance);

    std::vector<Rat> lo(n), hi(n), target_vals(n);
    for (int w = 0; w < n; ++w) {
      lo[w] = g.halves(-6, 0);
      hi[w] = lo[w] + g.halves(0, 6);
      target_vals[w] = lo[w] + g.halves(-4, 4) * (hi[w] - lo[w] + 1);
    }
    optimize::IntervalSet box = optimize::make_interval(
        model, core::make_rv(model, lo), core::make_rv(model, hi));
    Rv target = core::make_rv(model, std::move(target_vals));

    std::vector<std::size_t> picked;
    for (std::size_t j = 0; j < model.priors().size(); ++j)
      if (g.coin() || j + 1 == model.priors().size()) picked.push_back(j);
    sensitivity::RvFamily targets;
    std::vector<std::pair<QView, optimize::PerViewObjective>> objectives;
    for (std::size_t j : picked) {
      QView view = core::make_qview(model, model.priors()[j]);
      targets.entries.emplace_back(view, target);
      objectives.emplace_back(view, optimize::SquaredError{target});
    }
    optimize::LocalizedProblem problem =
        optimize::make_problem(model, std::move(objectives), box);

    Rv closest = optimize::bliss_point(model, box, targets);
    optimize::SolveResult solved = optimize::solve_localized(model, problem, seed + instance);
    if (!(solved.minimizer == closest)) {
      chk.fail("clamped patch and localized solve disagree" + tag);
      break;
    }
    Rat value = optimize::objective_value(model, problem, closest);
    if (value != solved.value) {
      chk.fail("reported aggregate value mismatch" + tag);
      break;
    }
    for (int s = 0; s < 10000; ++s) {
      std::vector<Rat> candidate(n);
      for (int w = 0; w < n; ++w)
        candidate[w] = lo[w] + Rat(BigInt(g.irange(0, 8)), BigInt(8)) * (hi[w] - lo[w]);
      Rat other =
          optimize::objective_value(model, problem, core::make_rv(model, std::move(candidate)));
      ++samples_total;
      if (other < value) {
        ++beaten;
        chk.fail("a sampled feasible point beats the localized minimizer" + tag);
        break;
      }
    }
  }
  return {chk.ok, chk.ok ? "20 target-tracking instances: clamped patch = localized solve, "
                           "never beaten across " +
                               std::to_string(samples_total) + " sampled feasible points"
                         : chk.first};
}

CriterionResult run_one(int index, const std::string& name, std::ostream* progress,
                        const std::function<std::pair<bool, std::string>()>& body) {
  if (progress) *progress << "[" << index << "/10] " << name << " ..." << std::flush;
  auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  std::string detail;
  try {
    auto outcome = body();
    ok = outcome.first;
    detail = std::move(outcome.second);
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (progress) *progress << (ok ? " pass " : " FAIL ") << fmt_secs(secs) << "\n";
  return CriterionResult{index, name, ok, std::move(detail), secs};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::uint64_t seed, std::ostream* progress) {
  std::vector<CriterionResult> results;
  results.push_back(run_one(1, "scale-family-expectations", progress, crit_scale_family));
  results.push_back(run_one(2, "uniform-bubble-grid", progress, crit_bubble_grid));
  results.push_back(run_one(3, "truncated-localization-gap", progress, crit_truncated_gap));
  results.push_back(run_one(4, "superhedge-duality", progress,
                            [&] { return crit_superhedge_duality(seed); }));
  results.push_back(run_one(5, "pricing-measure-consistency", progress,
                            [&] { return crit_ftap_consistency(seed); }));
  results.push_back(run_one(6, "localization-identity", progress,
                            [&] { return crit_localization_identity(seed); }));
  results.push_back(run_one(7, "zero-gap-finite-spaces", progress,
                            [&] { return crit_zero_gap(seed); }));
  results.push_back(run_one(8, "functional-property-battery", progress,
                            [&] { return crit_property_battery(seed); }));
  results.push_back(run_one(9, "lp-certificate-battery", progress,
                            [&] { return crit_lp_battery(seed); }));
  results.push_back(run_one(10, "localized-bliss-optimality", progress,
                            [&] { return crit_bliss_optimality(seed); }));
  return results;
}

bool print_results(const std::vector<CriterionResult>& results, std::ostream& out) {
  bool all = true;
  for (const auto& r : results) {
    out << (r.passed ? "PASS" : "FAIL") << "  " << r.name << " (" << fmt_secs(r.seconds)
        << "): " << r.detail << "\n";
    all = all && r.passed;
  }
  out << (all ? "all criteria passed" : "ACCEPTANCE FAILURES PRESENT") << "\n";
  return all;
}

}  // namespace qsure::acceptance
