#pragma once

#include <array>
#include <vector>

#include "qsure/rational.hpp"

namespace qsure::continuum {

// Piecewise polynomial of degree at most three on (0,1) with rational
// breakpoints. Values at the breakpoints themselves never matter: every
// measure in this module is absolutely continuous.
class PiecewisePoly {
 public:
  using Coeffs = std::array<Rat, 4>;  // c0 + c1 x + c2 x^2 + c3 x^3

  static PiecewisePoly constant(const Rat& c);
  static PiecewisePoly identity();                        // x on (0,1)
  static PiecewisePoly indicator(const Rat& a, const Rat& b);
  static PiecewisePoly from_pieces(std::vector<Rat> breaks, std::vector<Coeffs> pieces);

  const std::vector<Rat>& breaks() const { return breaks_; }
  const std::vector<Coeffs>& pieces() const { return pieces_; }

  Rat eval(const Rat& x) const;  // uses the piece whose open interval holds x

  PiecewisePoly operator+(const PiecewisePoly& other) const;
  PiecewisePoly operator-(const PiecewisePoly& other) const;
  PiecewisePoly operator-() const;
  // Throws std::invalid_argument if the product degree exceeds three.
  PiecewisePoly operator*(const PiecewisePoly& other) const;
  PiecewisePoly scaled(const Rat& factor) const;

  // Exact integral over (a,b) within (0,1), via antiderivatives.
  Rat integral(const Rat& a, const Rat& b) const;

 private:
  PiecewisePoly() = default;
  void normalize();  // merge equal adjacent pieces
  std::vector<Rat> breaks_;          // 0 = b_0 < ... < b_k = 1
  std::vector<Coeffs> pieces_;       // one per gap
};

// Finite non-negative mixture of normalized Lebesgue restrictions
// sum_k w_k * lambda(. | (a_k, b_k)), weights summing to one.
struct IntervalMixture {
  struct Component {
    Rat weight;
    Rat a;
    Rat b;
  };
  std::vector<Component> components;
};

IntervalMixture make_interval_mixture(std::vector<IntervalMixture::Component> components);

Rat expect(const IntervalMixture& mu, const PiecewisePoly& f);

// The two-scale family: member n mixes weight (n-1)/n on (0, 1/(n+1)) with
// weight 1/n on (1/2, 1).
IntervalMixture scale_family_member(long n);

Rat member_expectation(long n, const PiecewisePoly& f);

// Worst case over the first N family members.
Rat worst_case_truncated(const PiecewisePoly& f, long n_max);

// The fixed reference view: the uniform distribution on (0, 1/2).
IntervalMixture reference_view();
Rat view_expectation(const PiecewisePoly& f);

// The benchmark claim: -1 on (1/2, 1) and 2x on (0, 1/2).
PiecewisePoly benchmark_claim();

// Worst case of (base restricted to (0,1/2)) minus m on (1/2,1), truncated at
// N, tabulated over the two grids.
struct BubbleCell {
  Rat m;
  long n_max;
  Rat value;
};

std::vector<BubbleCell> bubble_table(const PiecewisePoly& base, const std::vector<Rat>& m_grid,
                                     const std::vector<long>& n_grid);

// Report for the combined functional kappa = max(worst case, view expectation)
// applied to the negated benchmark claim: the localized dual value is the view
// expectation, while every truncated localized primal value stays near zero,
// leaving a persistent gap in the limit.
struct TruncatedGapRow {
  Rat m;
  long n_max;
  Rat kappa;   // kappa_N applied to the claim cut off at m outside the view
  Rat gap;     // kappa minus the dual value
};

struct TruncatedGapReport {
  Rat dual_value;  // view expectation of the negated claim
  std::vector<TruncatedGapRow> rows;
};

TruncatedGapReport truncated_gap_report(const std::vector<Rat>& m_grid,
                                        const std::vector<long>& n_grid);

}  // namespace qsure::continuum
