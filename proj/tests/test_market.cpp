#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "qsure/market.hpp"

using namespace qsure;

namespace {

core::ProbabilityMeasure pm(std::vector<Rat> mass) {
  return core::make_probability(std::move(mass));
}

Rat rat(const char* s) {
  auto r = parse_rational(s);
  REQUIRE(r.has_value());
  return *r;
}

core::RobustModel coin_model() {
  return core::RobustModel(2, {pm({rat("1/2"), rat("1/2")})});
}

// One risky asset at 1 today, worth 2 or 1/2 tomorrow.
market::MarketModel coin_market(const core::RobustModel& model) {
  return market::make_market(model, {Rat(1)}, {{Rat(2), rat("1/2")}});
}

core::RobustModel tri_model() {
  return core::RobustModel(3, {pm({rat("1/3"), rat("1/3"), rat("1/3")})});
}

market::MarketModel tri_market(const core::RobustModel& model) {
  return market::make_market(model, {Rat(1)}, {{Rat(2), Rat(1), rat("1/2")}});
}

bool same_measure_set(std::vector<core::ProbabilityMeasure> got,
                      std::vector<core::ProbabilityMeasure> want) {
  if (got.size() != want.size()) return false;
  for (const auto& w : want) {
    auto it = std::find(got.begin(), got.end(), w);
    if (it == got.end()) return false;
    got.erase(it);
  }
  return true;
}

}  // namespace

TEST_CASE("binomial market: unique pricing measure and matching hedge prices") {
  auto model = coin_model();
  auto mkt = coin_market(model);

  auto na = market::check_NA_geometric(model, mkt);
  CHECK(na.no_arbitrage);

  auto verts = market::martingale_polytope_vertices(model, mkt);
  REQUIRE(verts.size() == 1);
  CHECK(verts[0] == pm({rat("1/3"), rat("2/3")}));

  auto call = core::make_rv(model, {Rat(1), Rat(0)});
  auto sup = market::superhedge(model, mkt, call);
  auto sub = market::subhedge(model, mkt, call);
  REQUIRE(sup.price.is_finite());
  CHECK(sup.price == ExtRat(rat("1/3")));
  CHECK(sub.price == sup.price);  // complete market: buyer and seller agree
  REQUIRE(sup.strategy.has_value());
  CHECK(sup.strategy->holdings == std::vector<Rat>{rat("2/3")});

  market::MartingaleSetSelector sel;
  CHECK(market::superhedge_dual(model, mkt, call, sel) == ExtRat(rat("1/3")));

  auto elem = market::martingale_set_element(model, mkt, sel);
  REQUIRE(elem.has_value());
  CHECK(*elem == verts[0]);
}

TEST_CASE("conjugate of the seller functional vanishes exactly on pricing measures") {
  auto model = coin_model();
  auto mkt = coin_market(model);

  CHECK(market::conjugate_pi_classification(model, mkt, pm({rat("1/3"), rat("2/3")})) ==
        market::PiConjugate::Zero);
  // expected increment 1/4 under the uniform measure, so it prices nothing
  CHECK(market::conjugate_pi_classification(model, mkt, pm({rat("1/2"), rat("1/2")})) ==
        market::PiConjugate::Infinite);

  // measures leaking mass outside the model support are rejected too
  core::RobustModel gappy(3, {pm({rat("1/2"), rat("1/2"), Rat(0)})});
  auto gm = market::make_market(gappy, {Rat(1)}, {{Rat(2), rat("1/2"), Rat(1)}});
  CHECK(market::conjugate_pi_classification(gappy, gm, pm({Rat(0), Rat(0), Rat(1)})) ==
        market::PiConjugate::Infinite);
}

TEST_CASE("arbitrage is certified by a strictly profitable supported outcome") {
  auto model = coin_model();
  // terminal (2,1) never falls below today's price 1 and sometimes beats it
  auto mkt = market::make_market(model, {Rat(1)}, {{Rat(2), Rat(1)}});

  auto na = market::check_NA_geometric(model, mkt);
  CHECK_FALSE(na.no_arbitrage);
  REQUIRE(na.witness.has_value());
  REQUIRE(na.witness_outcome.has_value());

  // replay the witness from the increments
  auto ds = market::increments(mkt);
  for (int w = 0; w < 2; ++w) {
    Rat gain(0);
    for (int i = 0; i < mkt.assets(); ++i) gain += na.witness->holdings[i] * ds[i][w];
    CHECK(gain >= Rat(0));
    if (w == *na.witness_outcome) CHECK(gain > Rat(0));
  }
  for (const Rat& h : na.witness->holdings) {
    CHECK(h <= Rat(1));
    CHECK(h >= Rat(-1));
  }

  CHECK_THROWS_AS(market::consistent_mixture(model, mkt), market::ArbitrageError);
  try {
    market::consistent_mixture(model, mkt);
  } catch (const market::ArbitrageError& e) {
    CHECK(e.witness_outcome == *na.witness_outcome);
  }

  // the pricing polytope degenerates to the point mass at the flat outcome,
  // and linear-programming duality still equates the two sides
  auto verts = market::martingale_polytope_vertices(model, mkt);
  REQUIRE(verts.size() == 1);
  CHECK(verts[0] == pm({Rat(0), Rat(1)}));
  auto x = core::make_rv(model, {Rat(1), Rat(0)});
  CHECK(market::superhedge(model, mkt, x).price == ExtRat(Rat(0)));
  CHECK(market::superhedge_dual(model, mkt, x, {}) == ExtRat(Rat(0)));

  // the flat-outcome point mass dominates no full-support measure, so the
  // pricing characterization agrees with the arbitrage verdict
  auto report = market::ftap_check(model, mkt, {});
  CHECK_FALSE(report.na_geometric);
  CHECK_FALSE(report.all_dominated);
  CHECK(report.consistent);
  REQUIRE(report.arbitrage_witness.has_value());
}

TEST_CASE("markets with an empty pricing polytope superhedge at minus infinity") {
  auto model = coin_model();
  // both outcomes strictly above today's price: no measure prices the asset
  auto mkt = market::make_market(model, {Rat(1)}, {{Rat(2), Rat(2)}});

  CHECK(market::martingale_polytope_vertices(model, mkt).empty());
  auto x = core::make_rv(model, {Rat(3), Rat(5)});
  auto hedge = market::superhedge(model, mkt, x);
  CHECK(hedge.price.is_neg_inf());
  CHECK_FALSE(hedge.strategy.has_value());
  CHECK(market::superhedge_dual(model, mkt, x, {}).is_neg_inf());
  CHECK_FALSE(market::martingale_set_element(model, mkt, {}).has_value());
}

TEST_CASE("trinomial market: vertex enumeration and the buyer-seller interval") {
  auto model = tri_model();
  auto mkt = tri_market(model);

  CHECK(market::check_NA_geometric(model, mkt).no_arbitrage);

  auto verts = market::martingale_polytope_vertices(model, mkt);
  CHECK(same_measure_set(verts, {pm({Rat(0), Rat(1), Rat(0)}),
                                 pm({rat("1/3"), Rat(0), rat("2/3")})}));

  auto call = core::make_rv(model, {Rat(1), Rat(0), Rat(0)});
  auto sup = market::superhedge(model, mkt, call);
  auto sub = market::subhedge(model, mkt, call);
  CHECK(sup.price == ExtRat(rat("1/3")));
  CHECK(sub.price == ExtRat(Rat(0)));
  CHECK(sub.price <= sup.price);
  REQUIRE(sup.strategy.has_value());
  CHECK(sup.strategy->holdings == std::vector<Rat>{rat("2/3")});

  // seller price equals the sup over polytope vertices
  ExtRat best = ExtRat::neg_inf();
  for (const auto& v : verts) {
    ExtRat e{core::expectation(v, call)};
    if (best < e) best = e;
  }
  CHECK(best == sup.price);

  // the interior measure (1/6,1/2,1/3) prices the asset as well
  CHECK(market::conjugate_pi_classification(model, mkt, pm({rat("1/6"), rat("1/2"), rat("1/3")})) ==
        market::PiConjugate::Zero);

  // every equivalence-flavored selector sees the same closure here
  for (auto kind : {market::SelectorKind::Martingale,
                    market::SelectorKind::EquivalentToSomeMartingale,
                    market::SelectorKind::DominatedByPrior,
                    market::SelectorKind::EquivalentToPrior}) {
    market::MartingaleSetSelector sel;
    sel.kind = kind;
    CHECK(market::superhedge_dual(model, mkt, call, sel) == ExtRat(rat("1/3")));
  }
  market::MartingaleSetSelector fixed;
  fixed.kind = market::SelectorKind::EquivalentTo;
  fixed.base = pm({rat("1/6"), rat("1/2"), rat("1/3")});
  CHECK(market::superhedge_dual(model, mkt, call, fixed) == ExtRat(rat("1/3")));
}

TEST_CASE("equivalence to a thin base measure shrinks the dual price") {
  auto model = tri_model();
  auto mkt = tri_market(model);
  auto call = core::make_rv(model, {Rat(1), Rat(0), Rat(0)});

  // base concentrated on the flat outcome: only (0,1,0) is equivalent
  market::MartingaleSetSelector sel;
  sel.kind = market::SelectorKind::EquivalentTo;
  sel.base = pm({Rat(0), Rat(1), Rat(0)});
  CHECK(market::superhedge_dual(model, mkt, call, sel) == ExtRat(Rat(0)));
  auto elem = market::martingale_set_element(model, mkt, sel);
  REQUIRE(elem.has_value());
  CHECK(*elem == pm({Rat(0), Rat(1), Rat(0)}));

  // base on {0,1}: the martingale equation forces mass at outcome 2,
  // so no pricing measure matches that support
  sel.base = pm({rat("1/2"), rat("1/2"), Rat(0)});
  CHECK(market::superhedge_dual(model, mkt, call, sel).is_neg_inf());
  CHECK_FALSE(market::martingale_set_element(model, mkt, sel).has_value());
}

TEST_CASE("pricing characterization can break for per-prior equivalence without convexity") {
  // two priors with supports {0,1} and {1,2}; the increment (-1,-1,1) admits
  // no arbitrage, yet no pricing measure matches either support exactly
  std::vector<core::ProbabilityMeasure> priors = {
      pm({rat("1/2"), rat("1/2"), Rat(0)}), pm({Rat(0), rat("1/2"), rat("1/2")})};
  core::RobustModel plain(3, priors, false);
  auto mkt = market::make_market(plain, {Rat(1)}, {{Rat(0), Rat(0), Rat(2)}});

  CHECK(market::check_NA_geometric(plain, mkt).no_arbitrage);

  market::MartingaleSetSelector per_prior;
  per_prior.kind = market::SelectorKind::EquivalentToPrior;
  auto broken = market::ftap_check(plain, mkt, per_prior);
  CHECK(broken.na_geometric);
  CHECK_FALSE(broken.all_dominated);
  CHECK_FALSE(broken.consistent);  // the report owns up to the mismatch

  // reading the same priors as a convex set repairs the characterization
  core::RobustModel hull(3, priors, true);
  auto fixed = market::ftap_check(hull, mkt, per_prior);
  CHECK(fixed.na_geometric);
  CHECK(fixed.all_dominated);
  CHECK(fixed.consistent);

  // the plain-martingale selector never needed convexity
  auto plain_report = market::ftap_check(plain, mkt, {});
  CHECK(plain_report.consistent);
  CHECK(plain_report.all_dominated);
  for (const auto& pr : plain_report.per_prior) REQUIRE(pr.dominating.has_value());
}

TEST_CASE("superhedging only on a view is never dearer and matches its own dual") {
  auto model = tri_model();
  auto mkt = tri_market(model);
  auto call = core::make_rv(model, {Rat(1), Rat(0), Rat(0)});

  auto left = core::make_qview(model, pm({rat("1/2"), rat("1/2"), Rat(0)}));
  auto hedge = market::superhedge_Q(model, mkt, left, call);
  auto global = market::superhedge(model, mkt, call);
  CHECK(hedge.price <= global.price);

  // dual over pricing measures supported inside {0,1}: only (0,1,0) remains
  CHECK(hedge.price == ExtRat(Rat(0)));

  // on a single-outcome view the hedger can lever the moving asset without
  // bound, so the price collapses
  auto d0 = core::make_qview(model, pm({Rat(1), Rat(0), Rat(0)}));
  CHECK(market::superhedge_Q(model, mkt, d0, call).price.is_neg_inf());
}

TEST_CASE("adding an asset can only sharpen the seller price") {
  auto model = tri_model();
  auto one = tri_market(model);
  // second asset worth 1 today, paying the call itself tomorrow
  auto two = market::make_market(model, {Rat(1), rat("1/4")},
                                 {{Rat(2), Rat(1), rat("1/2")},
                                  {Rat(1), Rat(0), Rat(0)}});

  std::mt19937_64 eng(99);
  std::uniform_int_distribution<int> val(-4, 4);
  for (int it = 0; it < 30; ++it) {
    std::vector<Rat> vals;
    for (int w = 0; w < 3; ++w) vals.push_back(Rat(val(eng)));
    auto x = core::make_rv(model, vals);
    CHECK(market::superhedge(model, two, x).price <= market::superhedge(model, one, x).price);
  }
}

TEST_CASE("market constructor enforces shape agreement with the model") {
  auto model = tri_model();
  CHECK_THROWS_AS(market::make_market(model, {Rat(1), Rat(1)}, {{Rat(2), Rat(1), rat("1/2")}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(market::make_market(model, {Rat(1)}, {{Rat(2), Rat(1)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(market::make_market(model, {}, {}), std::invalid_argument);

  // a base leaking off the support selects an empty set: nothing supported
  // inside the model can be equivalent to it
  core::RobustModel gappy(3, {pm({rat("1/2"), rat("1/2"), Rat(0)})});
  auto gm = market::make_market(gappy, {Rat(1)}, {{Rat(2), rat("1/2"), Rat(1)}});
  market::MartingaleSetSelector sel;
  sel.kind = market::SelectorKind::EquivalentTo;
  sel.base = pm({Rat(0), Rat(0), Rat(1)});
  CHECK(market::superhedge_dual(gappy, gm, core::constant_rv(gappy, Rat(0)), sel).is_neg_inf());
  CHECK_FALSE(market::martingale_set_element(gappy, gm, sel).has_value());
  market::MartingaleSetSelector missing;
  missing.kind = market::SelectorKind::EquivalentTo;  // base left unset
  CHECK_THROWS_AS(market::superhedge_dual(gappy, gm, core::constant_rv(gappy, Rat(0)), missing),
                  std::invalid_argument);

  // vertex enumeration refuses oversized supports instead of blowing up
  std::vector<Rat> u(14, Rat(1, BigInt(14)));
  core::RobustModel wide(14, {pm(u)});
  std::vector<Rat> flat(14, Rat(1));
  auto wm = market::make_market(wide, {Rat(1)}, {flat});
  CHECK_THROWS_AS(market::martingale_polytope_vertices(wide, wm, 12), std::invalid_argument);
}

TEST_CASE("pricing measures of a submodel ignore polar outcomes") {
  core::RobustModel gappy(3, {pm({rat("1/2"), rat("1/2"), Rat(0)})});
  auto mkt = market::make_market(gappy, {Rat(1)}, {{Rat(2), rat("1/2"), Rat(100)}});

  for (const auto& v : market::martingale_polytope_vertices(gappy, mkt)) {
    CHECK(v.mass[2] == Rat(0));
    CHECK(core::support_of(v).subset_of(gappy.support()));
  }

  // the huge off-support payoff is invisible to hedging as well
  auto x = core::make_rv(gappy, {Rat(1), Rat(0), Rat(0)});
  CHECK(market::superhedge(gappy, mkt, x).price == ExtRat(rat("1/3")));
}

TEST_CASE("random no-arbitrage markets satisfy strong hedging duality") {
  std::mt19937_64 eng(31337);
  std::uniform_int_distribution<int> nd(2, 5);
  std::uniform_int_distribution<int> price(0, 16);
  std::uniform_int_distribution<int> val(-8, 8);
  std::uniform_int_distribution<int> coin(0, 1);

  int kept = 0;
  for (int it = 0; it < 400 && kept < 60; ++it) {
    int n = nd(eng);
    std::vector<Rat> u(n, Rat(1, BigInt(n)));
    core::RobustModel model(n, {pm(u)});
    int assets = 1 + coin(eng);
    std::vector<Rat> initial;
    std::vector<std::vector<Rat>> terminal;
    for (int i = 0; i < assets; ++i) {
      initial.push_back(Rat(4 + price(eng), 2));
      std::vector<Rat> row;
      for (int w = 0; w < n; ++w) row.push_back(Rat(price(eng), 2));
      terminal.push_back(std::move(row));
    }
    auto mkt = market::make_market(model, initial, terminal);
    if (!market::check_NA_geometric(model, mkt).no_arbitrage) continue;
    ++kept;

    std::vector<Rat> vals;
    for (int w = 0; w < n; ++w) vals.push_back(Rat(val(eng), 2));
    auto x = core::make_rv(model, vals);

    auto sup = market::superhedge(model, mkt, x);
    REQUIRE(sup.price.is_finite());
    CHECK(market::superhedge_dual(model, mkt, x, {}) == sup.price);
    CHECK(market::subhedge(model, mkt, x).price <= sup.price);

    ExtRat best = ExtRat::neg_inf();
    for (const auto& v : market::martingale_polytope_vertices(model, mkt)) {
      ExtRat e{core::expectation(v, x)};
      if (best < e) best = e;
    }
    CHECK(best == sup.price);
  }
  CHECK(kept >= 30);
}
