#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <string>

#include "qsure/scenario.hpp"

using namespace qsure;

namespace {

scenario::Scenario parse(const std::string& text) {
  std::istringstream in(text);
  return scenario::parse_scenario(in);
}

// returns the 1-based line the parser blames, or 0 when it accepts the input
int blamed_line(const std::string& text) {
  try {
    parse(text);
    return 0;
  } catch (const scenario::ScenarioError& e) {
    return e.line;
  }
}

Rat rat(const char* s) {
  auto r = parse_rational(s);
  REQUIRE(r.has_value());
  return *r;
}

// lines 1..2 hold a minimal two-outcome model used by the error probes below
const std::string kCoin =
    "model {\noutcomes 2\nprior 1/2 1/2\n}\n";  // closes on line 4

const char* kFull = R"(# one of everything
model {
  outcomes 3
  prior 1/2 1/2 0
  prior 0 1/3 2/3
  convex
}
rv payoff 1 2 3          # trailing comment
measure q 1/2 1/2 0
risk rho {
  constraint 1/2 1/2 0 penalty 0
  constraint 0 1/2 1/2 penalty 1/4
}
market m {
  initial 1 1/4
  terminal 2 1 0
  terminal 1 0 0
}
interval box {
  lower 0 0 0
  upper 2 2 2
}
family fam {
  entry q 1 2 0
}
targets goal {
  prior 1 1 2 3
}
continuum {
  m_grid 1 2 5 10
  n_grid 10 100 1000
}
)";

}  // namespace

TEST_CASE("a scenario with one of every block parses to the declared content") {
  auto sc = parse(kFull);

  REQUIRE(sc.model.has_value());
  CHECK(sc.model->n_outcomes() == 3);
  REQUIRE(sc.model->priors().size() == 2);
  CHECK(sc.model->priors()[0].mass == std::vector<Rat>{rat("1/2"), rat("1/2"), Rat(0)});
  CHECK(sc.model->convex());
  CHECK(sc.model->support() == core::OutcomeSet::all(3));

  REQUIRE(sc.rvs.size() == 1);
  CHECK(sc.rvs[0].first == "payoff");
  CHECK(sc.rvs[0].second.values == std::vector<Rat>{Rat(1), Rat(2), Rat(3)});

  REQUIRE(sc.measures.size() == 1);
  CHECK(sc.measures[0].first == "q");

  REQUIRE(sc.risks.size() == 1);
  REQUIRE(sc.risks[0].second.constraints.size() == 2);
  CHECK(sc.risks[0].second.constraints[1].penalty == rat("1/4"));

  REQUIRE(sc.markets.size() == 1);
  CHECK(sc.markets[0].second.assets() == 2);
  CHECK(sc.markets[0].second.initial == std::vector<Rat>{Rat(1), rat("1/4")});
  CHECK(sc.markets[0].second.terminal[1] == std::vector<Rat>{Rat(1), Rat(0), Rat(0)});

  REQUIRE(sc.intervals.size() == 1);
  CHECK(sc.intervals[0].second.lower == std::vector<Rat>{Rat(0), Rat(0), Rat(0)});
  CHECK(sc.intervals[0].second.upper == std::vector<Rat>{Rat(2), Rat(2), Rat(2)});

  REQUIRE(sc.families.size() == 1);
  REQUIRE(sc.families[0].second.size() == 1);
  CHECK(sc.families[0].second[0].measure == "q");
  CHECK(sc.families[0].second[0].values == std::vector<Rat>{Rat(1), Rat(2), Rat(0)});

  REQUIRE(sc.targets.size() == 1);
  REQUIRE(sc.targets[0].second.per_prior.size() == 1);
  CHECK(sc.targets[0].second.per_prior[0].first == 0);  // 1-based in text
  CHECK(sc.targets[0].second.per_prior[0].second ==
        std::vector<Rat>{Rat(1), Rat(2), Rat(3)});

  REQUIRE(sc.continuum.has_value());
  CHECK(sc.continuum->m_grid == std::vector<Rat>{Rat(1), Rat(2), Rat(5), Rat(10)});
  CHECK(sc.continuum->n_grid == std::vector<long>{10, 100, 1000});
}

TEST_CASE("lookups find declared names and reject unknown ones") {
  auto sc = parse(kFull);
  CHECK(sc.find_rv("payoff") != nullptr);
  CHECK(sc.find_rv("absent") == nullptr);
  CHECK(sc.find_measure("q") != nullptr);
  CHECK(sc.find_risk("rho") != nullptr);
  CHECK(sc.find_market("m") != nullptr);
  CHECK(sc.find_interval("box") != nullptr);
  CHECK(sc.find_family("fam") != nullptr);
  CHECK(sc.find_targets("goal") != nullptr);
  CHECK(sc.find_targets("fam") == nullptr);  // names do not leak across kinds
}

TEST_CASE("declaration order is preserved within each kind") {
  auto sc = parse(kCoin +
                  "rv b 1 0\nrv a 0 1\n"
                  "measure z 1 0\nmeasure y 0 1\n");
  REQUIRE(sc.rvs.size() == 2);
  CHECK(sc.rvs[0].first == "b");
  CHECK(sc.rvs[1].first == "a");
  CHECK(sc.measures[0].first == "z");
  CHECK(sc.measures[1].first == "y");
}

TEST_CASE("rvs are canonicalized against the model's polar set") {
  auto sc = parse(
      "model {\noutcomes 3\nprior 1/2 1/2 0\n}\n"
      "rv x 1 2 99\n");
  // outcome 2 is polar, so the stored representative zeroes it
  CHECK(sc.rvs[0].second.values == std::vector<Rat>{Rat(1), Rat(2), Rat(0)});
}

TEST_CASE("parse errors carry the offending 1-based line number") {
  CHECK(blamed_line("rv x 1 2\n") == 1);  // needs a model first
  CHECK(blamed_line(kCoin + "rv x 1\n") == 5);
  CHECK(blamed_line(kCoin + "rv x 1 oops\n") == 5);
  CHECK(blamed_line(kCoin + "measure q 1/2 1/3\n") == 5);  // mass must sum to one
  CHECK(blamed_line(kCoin + "blessing x 1 2\n") == 5);     // unknown directive
  CHECK(blamed_line(kCoin + "rv x 1 2\nrv x 2 1\n") == 6);  // duplicate name
  CHECK(blamed_line(kCoin + "model {\noutcomes 2\nprior 1 0\n}\n") == 5);
  CHECK(blamed_line("model {\nprior 1/2 1/2\noutcomes 2\n}\n") == 2);
  CHECK(blamed_line(kCoin + "market m {\ninitial 1\nterminal 1 1\n} extra\n") == 8);
  CHECK(blamed_line("model {\noutcomes 2\nprior 1/2 1/2\n") == 3);  // unterminated
  CHECK(blamed_line("}\n") == 1);

  // block-local complaints
  CHECK(blamed_line(kCoin + "market m {\ninitial 1\ninitial 2\nterminal 1 1\n}\n") == 7);
  CHECK(blamed_line(kCoin + "market m {\ninitial 1\nterminal 1 1 1\n}\n") == 7);
  CHECK(blamed_line(kCoin + "interval b {\nlower 0 0\n}\n") == 7);
  CHECK(blamed_line(kCoin + "interval b {\nlower 1 1\nupper 0 0\n}\n") == 8);
  CHECK(blamed_line(kCoin + "family f {\n}\n") == 6);
  CHECK(blamed_line(kCoin + "family f {\nentry ghost 1 2\n}\n") == 6);
  CHECK(blamed_line(kCoin + "targets t {\nprior 3 1 2\n}\n") == 6);
  CHECK(blamed_line(kCoin + "targets t {\nprior 0 1 2\n}\n") == 6);
  CHECK(blamed_line(kCoin + "risk r {\nconstraint 1/2 1/2\n}\n") == 6);
  CHECK(blamed_line(kCoin + "continuum {\nm_grid 1 2\nn_grid 0\n}\n") == 7);
  CHECK(blamed_line(kCoin + "continuum {\nm_grid 1 2\n}\n") == 7);

  // messages name the problem and lead with the line number
  try {
    parse(kCoin + "rv x 1 oops\n");
    FAIL("expected a parse error");
  } catch (const scenario::ScenarioError& e) {
    CHECK(e.line == 5);
    CHECK(std::string(e.what()).find("line 5:") == 0);
    CHECK(std::string(e.what()).find("oops") != std::string::npos);
  }
}

TEST_CASE("comments and blank lines are invisible to the grammar") {
  auto sc = parse(
      "# leading comment\n"
      "\n"
      "model {   # inline\n"
      "  outcomes 2\n"
      "  # pure comment line\n"
      "  prior 1/2 1/2\n"
      "}\n"
      "\n"
      "rv x 1 0   # trailing\n");
  REQUIRE(sc.model.has_value());
  CHECK(sc.rvs.size() == 1);
}

TEST_CASE("missing scenario files are reported by path") {
  CHECK_THROWS_WITH_AS(scenario::parse_scenario_file("/nonexistent/nowhere.qs"),
                       "cannot open scenario file: /nonexistent/nowhere.qs",
                       std::runtime_error);
}

TEST_CASE("the shipped fixture files parse cleanly") {
  for (const char* path : {"scenarios/binomial.qs", "scenarios/trinomial.qs",
                           "scenarios/arbitrage.qs", "scenarios/localize.qs",
                           "scenarios/aggregate.qs", "scenarios/bliss.qs",
                           "scenarios/continuum.qs"}) {
    CAPTURE(path);
    CHECK_NOTHROW(scenario::parse_scenario_file(path));
  }
}
