#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "qsure/oracle.hpp"
#include "qsure/risk.hpp"

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

// Three-outcome workhorse: one penalty-free scenario on {0,1} and one
// penalized scenario on {1,2}.
core::RobustModel tri_model() {
  return core::RobustModel(3, {pm({rat("1/3"), rat("1/3"), rat("1/3")})});
}

risk::MaxAffineRiskMeasure tri_risk(const core::RobustModel& model) {
  return risk::make_risk_measure(
      model, {{pm({rat("1/2"), rat("1/2"), Rat(0)}), Rat(0)},
              {pm({Rat(0), rat("1/2"), rat("1/2")}), rat("1/2")}});
}

}  // namespace

TEST_CASE("worst-case evaluation picks the best scenario net of penalty") {
  auto model = tri_model();
  auto rho = tri_risk(model);
  auto x = core::make_rv(model, {Rat(4), Rat(2), Rat(8)});

  // scenario 1: (4+2)/2 - 0 = 3; scenario 2: (2+8)/2 - 1/2 = 9/2.
  CHECK(risk::evaluate(rho, x) == rat("9/2"));

  auto flat = core::constant_rv(model, Rat(1));
  // constants see mass one under both scenarios; the penalty-free one wins.
  CHECK(risk::evaluate(rho, flat) == Rat(1));
  CHECK_FALSE(rho.coherent());

  auto coherent = risk::make_risk_measure(
      model, {{pm({Rat(1), Rat(0), Rat(0)}), Rat(0)}});
  CHECK(coherent.coherent());
}

TEST_CASE("risk constructor rejects malformed inputs") {
  auto model = tri_model();
  CHECK_THROWS_AS(risk::make_risk_measure(model, {}), std::invalid_argument);
  CHECK_THROWS_AS(
      risk::make_risk_measure(model, {{pm({rat("1/2"), rat("1/2")}), Rat(0)}}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      risk::make_risk_measure(
          model, {{pm({rat("1/2"), rat("1/2"), Rat(0)}), Rat(-1)}}),
      std::invalid_argument);

  // a scenario charging a polar outcome is rejected
  core::RobustModel gappy(3, {pm({rat("1/2"), rat("1/2"), Rat(0)})});
  CHECK(gappy.polar().contains(2));
  CHECK_THROWS_AS(
      risk::make_risk_measure(gappy, {{pm({Rat(0), Rat(0), Rat(1)}), Rat(0)}}),
      std::invalid_argument);
}

TEST_CASE("localized values match the closed form on a worked instance") {
  auto model = tri_model();
  auto rho = tri_risk(model);
  auto x = core::make_rv(model, {Rat(4), Rat(2), Rat(8)});

  auto full = core::make_qview(model, pm({rat("1/3"), rat("1/3"), rat("1/3")}));
  auto left = core::make_qview(model, pm({rat("1/2"), rat("1/2"), Rat(0)}));
  auto right = core::make_qview(model, pm({Rat(0), Rat(0), Rat(1)}));

  // full view: nothing is cut off
  CHECK(risk::localize_primal_E(rho, full, x) == ExtRat(rat("9/2")));
  CHECK(risk::localize_dual_D(rho, full, x) == ExtRat(rat("9/2")));

  // left view kills the penalized scenario; only scenario 1 survives
  CHECK(risk::localize_primal_E(rho, left, x) == ExtRat(Rat(3)));
  CHECK(risk::localize_dual_D(rho, left, x) == ExtRat(Rat(3)));

  // no scenario lives inside {2}: the localized functional is vacuous
  CHECK(risk::localize_primal_E(rho, right, x).is_neg_inf());
  CHECK(risk::localize_dual_D(rho, right, x).is_neg_inf());
  CHECK(risk::bubble_gap(rho, right, x) == ExtRat(Rat(0)));

  CHECK(risk::is_relevant(rho, full));
  CHECK(risk::is_relevant(rho, left));
  CHECK_FALSE(risk::is_relevant(rho, right));

  auto rel = risk::q_rel_set(rho, {full, left, right});
  REQUIRE(rel.size() == 2);
  CHECK(rel[0] == full);
  CHECK(rel[1] == left);
}

TEST_CASE("conjugate prices mixture membership of the scenario hull") {
  auto model = tri_model();
  auto rho = tri_risk(model);

  // a vertex of the hull costs its own penalty
  CHECK(risk::conjugate(rho, pm({rat("1/2"), rat("1/2"), Rat(0)})) ==
        ExtRat(Rat(0)));
  CHECK(risk::conjugate(rho, pm({Rat(0), rat("1/2"), rat("1/2")})) ==
        ExtRat(rat("1/2")));

  // the midpoint mixes the penalties: (0 + 1/2) / 2
  CHECK(risk::conjugate(rho, pm({rat("1/4"), rat("1/2"), rat("1/4")})) ==
        ExtRat(rat("1/4")));

  // outside the hull the conjugate is +inf
  CHECK(risk::conjugate(rho, pm({Rat(1), Rat(0), Rat(0)})).is_pos_inf());
  CHECK(risk::conjugate(rho, pm({Rat(0), Rat(0), Rat(1)})).is_pos_inf());
}

TEST_CASE("conjugate duality: evaluation dominates every penalized expectation") {
  auto model = tri_model();
  auto rho = tri_risk(model);
  std::mt19937_64 eng(404);
  std::uniform_int_distribution<int> val(-6, 6);
  std::uniform_int_distribution<int> lam(0, 8);

  for (int it = 0; it < 40; ++it) {
    std::vector<Rat> vals;
    for (int w = 0; w < 3; ++w) vals.push_back(Rat(val(eng)));
    auto x = core::make_rv(model, vals);
    Rat value = risk::evaluate(rho, x);

    // random mixture of the two scenarios
    Rat t(lam(eng), 8);
    std::vector<Rat> mix(3, Rat(0));
    for (int w = 0; w < 3; ++w)
      mix[w] = t * rho.constraints[0].scenario.mass[w] +
               (Rat(1) - t) * rho.constraints[1].scenario.mass[w];
    auto r = core::make_probability(mix);
    ExtRat penalty = risk::conjugate(rho, r);
    REQUIRE(penalty.is_finite());
    CHECK(ExtRat(core::expectation(r, x) - penalty.finite()) <= ExtRat(value));

    // and the bound is tight at one of the vertices
    bool tight = false;
    for (const auto& c : rho.constraints)
      if (core::expectation(c.scenario, x) - c.penalty == value) tight = true;
    CHECK(tight);
  }
}

TEST_CASE("restriction and representation localizations agree on random instances") {
  std::mt19937_64 eng(2718);
  std::uniform_int_distribution<int> nd(2, 5);
  std::uniform_int_distribution<int> val(-8, 8);
  std::uniform_int_distribution<int> wt(1, 4);
  std::uniform_int_distribution<int> coin(0, 1);

  int finite_seen = 0, vacuous_seen = 0;
  for (int it = 0; it < 120; ++it) {
    int n = nd(eng);
    // full-support uniform prior keeps the polar set empty
    std::vector<Rat> u(n, Rat(1, BigInt(n)));
    core::RobustModel model(n, {core::make_probability(u)});

    auto random_measure = [&](core::OutcomeSet allowed) {
      std::vector<Rat> w(n, Rat(0));
      Rat total(0);
      std::vector<int> picked;
      while (picked.empty())
        for (int o : allowed.outcomes())
          if (coin(eng)) picked.push_back(o);
      for (int o : picked) {
        w[o] = Rat(wt(eng));
        total += w[o];
      }
      for (auto& m : w) m /= total;
      return core::make_probability(w);
    };

    std::vector<risk::Constraint> cs;
    int k = 1 + coin(eng) + coin(eng);
    for (int i = 0; i < k; ++i)
      cs.push_back({random_measure(core::OutcomeSet::all(n)), Rat(wt(eng) - 1, 2)});
    auto rho = risk::make_risk_measure(model, cs);

    auto q = core::make_qview(model, random_measure(core::OutcomeSet::all(n)));
    std::vector<Rat> vals;
    for (int w = 0; w < n; ++w) vals.push_back(Rat(val(eng), 2));
    auto x = core::make_rv(model, vals);

    ExtRat e = risk::localize_primal_E(rho, q, x);
    ExtRat d = risk::localize_dual_D(rho, q, x);
    CHECK(e == d);
    CHECK(risk::bubble_gap(rho, q, x) == ExtRat(Rat(0)));
    CHECK(e.is_finite() == risk::is_relevant(rho, q));
    if (e.is_finite()) {
      ++finite_seen;
      // localizing can only lower the worst case
      CHECK(e <= ExtRat(risk::evaluate(rho, x)));
    } else {
      ++vacuous_seen;
    }
  }
  CHECK(finite_seen > 10);
  CHECK(vacuous_seen > 10);
}

TEST_CASE("localized functional is cash-additive and positively homogeneous when coherent") {
  auto model = tri_model();
  auto coherent = risk::make_risk_measure(
      model, {{pm({rat("1/2"), rat("1/2"), Rat(0)}), Rat(0)},
              {pm({Rat(0), Rat(0), Rat(1)}), Rat(0)}});
  auto left = core::make_qview(model, pm({rat("2/3"), rat("1/3"), Rat(0)}));
  auto x = core::make_rv(model, {Rat(4), Rat(-2), Rat(7)});

  ExtRat base = risk::localize_primal_E(coherent, left, x);
  REQUIRE(base.is_finite());

  // cash added on supp(Q) shifts the value by exactly that cash
  auto shifted = core::make_rv(model, {Rat(4 + 5), Rat(-2 + 5), Rat(7)});
  CHECK(risk::localize_primal_E(coherent, left, shifted) == base + Rat(5));

  // doubling the claim doubles a coherent localized value
  auto doubled = core::make_rv(model, {Rat(8), Rat(-4), Rat(14)});
  CHECK(risk::localize_primal_E(coherent, left, doubled) ==
        ExtRat(base.finite() * 2));

  // monotone: raising values on supp(Q) cannot lower the value
  auto raised = core::make_rv(model, {Rat(6), Rat(-2), Rat(0)});
  CHECK(base <= risk::localize_primal_E(coherent, left, raised));
}
