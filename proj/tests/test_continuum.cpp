#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "qsure/continuum.hpp"
#include "qsure/oracle.hpp"

using namespace qsure;
using continuum::PiecewisePoly;

namespace {

Rat rat(const char* s) {
  auto r = parse_rational(s);
  REQUIRE(r.has_value());
  return *r;
}

}  // namespace

TEST_CASE("piecewise algebra merges pieces and evaluates on the open gaps") {
  auto x = PiecewisePoly::identity();
  auto sq = x * x;
  CHECK(sq.eval(rat("1/3")) == rat("1/9"));
  CHECK(sq.eval(rat("3/4")) == rat("9/16"));

  auto ind = PiecewisePoly::indicator(rat("1/4"), rat("3/4"));
  CHECK(ind.eval(rat("1/2")) == Rat(1));
  CHECK(ind.eval(rat("1/8")) == Rat(0));
  CHECK(ind.eval(rat("7/8")) == Rat(0));

  // (x + x^2) on the window, zero outside
  auto combo = (x + sq) * ind;
  CHECK(combo.eval(rat("1/2")) == rat("3/4"));
  CHECK(combo.eval(rat("1/8")) == Rat(0));

  // adding matching halves collapses the breakpoint again
  auto leftc = PiecewisePoly::indicator(Rat(0), rat("1/2")).scaled(Rat(5));
  auto rightc = PiecewisePoly::indicator(rat("1/2"), Rat(1)).scaled(Rat(5));
  auto glued = leftc + rightc;
  CHECK(glued.breaks().size() == 2);
  CHECK(glued.eval(rat("1/2")) == Rat(5));
  CHECK(glued.eval(rat("99/100")) == Rat(5));

  CHECK((-x).eval(rat("1/4")) == rat("-1/4"));
  CHECK((x - x).eval(rat("2/3")) == Rat(0));
}

TEST_CASE("products beyond cubic degree are refused") {
  auto x = PiecewisePoly::identity();
  auto sq = x * x;
  auto cube = sq * x;
  CHECK(cube.eval(rat("1/2")) == rat("1/8"));
  CHECK_THROWS_AS(sq * sq, std::invalid_argument);
  CHECK_THROWS_AS(cube * x, std::invalid_argument);
}

TEST_CASE("from_pieces validates its breakpoint grid") {
  using C = PiecewisePoly::Coeffs;
  C zero{Rat(0), Rat(0), Rat(0), Rat(0)};
  C one{Rat(1), Rat(0), Rat(0), Rat(0)};

  CHECK_NOTHROW(PiecewisePoly::from_pieces({Rat(0), rat("1/2"), Rat(1)}, {zero, one}));
  // grid must start at 0, end at 1, strictly increase, and match the pieces
  CHECK_THROWS_AS(PiecewisePoly::from_pieces({rat("1/4"), Rat(1)}, {one}),
                  std::invalid_argument);
  CHECK_THROWS_AS(PiecewisePoly::from_pieces({Rat(0), rat("3/4")}, {one}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      PiecewisePoly::from_pieces({Rat(0), rat("1/2"), rat("1/2"), Rat(1)}, {zero, one, zero}),
      std::invalid_argument);
  CHECK_THROWS_AS(PiecewisePoly::from_pieces({Rat(0), Rat(1)}, {zero, one}),
                  std::invalid_argument);
}

TEST_CASE("exact integrals agree with a numeric oracle") {
  auto x = PiecewisePoly::identity();
  CHECK(x.integral(Rat(0), Rat(1)) == rat("1/2"));
  CHECK((x * x).integral(Rat(0), Rat(1)) == rat("1/3"));
  CHECK(PiecewisePoly::indicator(rat("1/8"), rat("5/8")).integral(Rat(0), Rat(1)) ==
        rat("1/2"));

  // integral across a breakpoint splits correctly
  auto ind = PiecewisePoly::indicator(rat("1/4"), rat("3/4"));
  CHECK(ind.integral(rat("1/2"), Rat(1)) == rat("1/4"));
  CHECK(ind.integral(Rat(0), rat("1/4")) == Rat(0));

  std::mt19937_64 eng(1234);
  std::uniform_int_distribution<int> c(-3, 3);
  for (int it = 0; it < 25; ++it) {
    PiecewisePoly::Coeffs lo{Rat(c(eng)), Rat(c(eng)), Rat(c(eng)), Rat(0)};
    PiecewisePoly::Coeffs hi{Rat(c(eng)), Rat(c(eng)), Rat(0), Rat(0)};
    auto f = PiecewisePoly::from_pieces({Rat(0), rat("1/3"), Rat(1)}, {lo, hi});
    // Simpson is exact on cubics and the oracle works in rationals, so the
    // two routes must agree to the bit
    CHECK(f.integral(Rat(0), Rat(1)) == oracle::integrate_simpson(f, Rat(0), Rat(1)));
  }
}

TEST_CASE("interval mixtures validate and integrate componentwise") {
  using Comp = continuum::IntervalMixture::Component;
  auto mix = continuum::make_interval_mixture(
      {Comp{rat("1/2"), Rat(0), rat("1/2")}, Comp{rat("1/2"), rat("1/2"), Rat(1)}});
  // E[x] = (1/4 + 3/4) / 2
  CHECK(continuum::expect(mix, PiecewisePoly::identity()) == rat("1/2"));

  CHECK_THROWS_AS(continuum::make_interval_mixture({Comp{rat("1/2"), Rat(0), Rat(1)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      continuum::make_interval_mixture({Comp{Rat(1), rat("1/2"), rat("1/2")}}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      continuum::make_interval_mixture(
          {Comp{Rat(2), Rat(0), rat("1/2")}, Comp{Rat(-1), rat("1/2"), Rat(1)}}),
      std::invalid_argument);
  CHECK_THROWS_AS(continuum::make_interval_mixture({}), std::invalid_argument);
}

TEST_CASE("scale family members interpolate between the bubble and its base") {
  // member 1 is the pure bubble component on (1/2, 1)
  auto first = continuum::scale_family_member(1);
  REQUIRE(first.components.size() == 1);
  CHECK(first.components[0].weight == Rat(1));
  CHECK(first.components[0].a == rat("1/2"));
  CHECK(first.components[0].b == Rat(1));

  auto third = continuum::scale_family_member(3);
  REQUIRE(third.components.size() == 2);
  CHECK(third.components[0].weight == rat("2/3"));
  CHECK(third.components[0].a == Rat(0));
  CHECK(third.components[0].b == rat("1/4"));
  CHECK(third.components[1].weight == rat("1/3"));

  // they are probability measures: mass one against the constant claim
  for (long n : {1L, 2L, 7L, 40L})
    CHECK(continuum::member_expectation(n, PiecewisePoly::constant(Rat(1))) == Rat(1));

  CHECK_THROWS_AS(continuum::scale_family_member(0), std::invalid_argument);
}

TEST_CASE("benchmark claim expectations follow the closed form") {
  auto z = continuum::benchmark_claim();
  CHECK(z.eval(rat("1/4")) == rat("1/2"));
  CHECK(z.eval(rat("3/4")) == Rat(-1));

  for (long n = 1; n <= 20; ++n) {
    Rat expected(BigInt(-2), BigInt(n) * BigInt(n + 1));
    CHECK(continuum::member_expectation(n, z) == expected);
  }
  // independent quadrature cross-check on a few members
  for (long n : {1L, 2L, 5L, 11L})
    CHECK(oracle::expect_simpson(continuum::scale_family_member(n), z) ==
          continuum::member_expectation(n, z));

  // the reference view never sees the bubble: E_Q[Z] = E[2x on (0,1/2)] = 1/2
  CHECK(continuum::view_expectation(z) == rat("1/2"));
}

TEST_CASE("uniform truncated worst case matches minus m over N") {
  std::vector<Rat> m_grid;
  std::vector<long> n_grid;
  for (int m = 1; m <= 6; ++m) m_grid.push_back(Rat(m));
  for (long n : {1L, 2L, 5L, 20L, 500L}) n_grid.push_back(n);

  auto cells = continuum::bubble_table(PiecewisePoly::constant(Rat(0)), m_grid, n_grid);
  REQUIRE(cells.size() == m_grid.size() * n_grid.size());
  for (const auto& cell : cells) {
    CHECK(cell.value == -cell.m / Rat(BigInt(cell.n_max), BigInt(1)));
  }

  // direct spot checks of the underlying truncated functional
  auto bubble_only = [&](const Rat& m) {
    return PiecewisePoly::indicator(rat("1/2"), Rat(1)).scaled(-m);
  };
  CHECK(continuum::worst_case_truncated(bubble_only(Rat(5)), 500) == rat("-1/100"));
  CHECK(continuum::worst_case_truncated(bubble_only(Rat(100)), 5) == Rat(-20));
  CHECK_THROWS_AS(continuum::worst_case_truncated(bubble_only(Rat(1)), 0),
                  std::invalid_argument);
}

TEST_CASE("nonzero base shifts the truncated worst case by its scaled moment") {
  // base x restricted to (0,1/2) minus 1 on the bubble, truncated at 5:
  // member n sees (n-1)/(2n(n+1)) - 1/n, worst at n = 5
  auto cells = continuum::bubble_table(PiecewisePoly::identity(), {Rat(1)}, {5L});
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].value == rat("-2/15"));
}

TEST_CASE("truncated localization gap report reproduces the frozen corner values") {
  auto report = continuum::truncated_gap_report({Rat(1), Rat(2), Rat(5), Rat(10)},
                                                {10L, 100L, 1000L});
  CHECK(report.dual_value == rat("-1/2"));
  REQUIRE(report.rows.size() == 12);

  for (const auto& row : report.rows) {
    // closed form: kappa = max(-1/2, -(N-1)/(N(N+1)) - m/N)
    Rat term = Rat(BigInt(-(row.n_max - 1)), BigInt(row.n_max) * BigInt(row.n_max + 1)) -
               row.m / Rat(BigInt(row.n_max), BigInt(1));
    Rat expect = term > rat("-1/2") ? term : rat("-1/2");
    CHECK(row.kappa == expect);
    CHECK(row.gap == row.kappa - report.dual_value);
    CHECK(row.gap >= Rat(0));
  }

  // deeper truncation pulls kappa up toward zero and widens the gap
  for (std::size_t i = 0; i + 1 < report.rows.size(); ++i) {
    if (report.rows[i].m == report.rows[i + 1].m) {
      CHECK(report.rows[i].kappa <= report.rows[i + 1].kappa);
      CHECK(report.rows[i].gap <= report.rows[i + 1].gap);
    }
  }

  const auto& corner = report.rows.back();
  CHECK(corner.m == Rat(10));
  CHECK(corner.n_max == 1000);
  CHECK(corner.kappa == rat("-11009/1001000"));
  CHECK(corner.gap == rat("489491/1001000"));
  CHECK(corner.gap < rat("49/100"));
  CHECK(corner.gap > rat("12/25"));

  // the first truncation depth at which the gap crosses 49/100 for m = 10
  auto deep = continuum::truncated_gap_report({Rat(10)}, {1099L, 1100L});
  REQUIRE(deep.rows.size() == 2);
  CHECK(deep.rows[0].gap < rat("49/100"));
  CHECK(deep.rows[1].gap == rat("593441/1211100"));
  CHECK(deep.rows[1].gap >= rat("49/100"));
}

TEST_CASE("dual value ignores the cut-off depth entirely") {
  // the bubble set is invisible to the reference view, so the dual side of
  // the report cannot depend on m
  for (const Rat& m : {rat("3/2"), Rat(7), Rat(100)}) {
    auto report = continuum::truncated_gap_report({m}, {10L});
    CHECK(report.dual_value == rat("-1/2"));
  }

  auto w = -continuum::benchmark_claim();
  for (const Rat& m : {Rat(1), Rat(4), Rat(25)}) {
    auto cut = w * PiecewisePoly::indicator(Rat(0), rat("1/2")) +
               PiecewisePoly::indicator(rat("1/2"), Rat(1)).scaled(-m);
    CHECK(continuum::expect(continuum::reference_view(), cut) == rat("-1/2"));
  }
}
