#include "qsure/continuum.hpp"

#include <stdexcept>
#include <utility>

namespace qsure::continuum {

namespace {

bool coeffs_equal(const PiecewisePoly::Coeffs& a, const PiecewisePoly::Coeffs& b) {
  for (int i = 0; i < 4; ++i)
    if (a[i] != b[i]) return false;
  return true;
}

Rat antiderivative(const PiecewisePoly::Coeffs& c, const Rat& x) {
  Rat x2 = x * x;
  Rat x3 = x2 * x;
  Rat x4 = x3 * x;
  return c[0] * x + c[1] * x2 / 2 + c[2] * x3 / 3 + c[3] * x4 / 4;
}

}  // namespace

void PiecewisePoly::normalize() {
  std::vector<Rat> nb;
  std::vector<Coeffs> np;
  nb.push_back(breaks_.front());
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (!np.empty() && coeffs_equal(np.back(), pieces_[i])) {
      nb.back() = breaks_[i + 1];
      continue;
    }
    np.push_back(pieces_[i]);
    nb.push_back(breaks_[i + 1]);
  }
  breaks_ = std::move(nb);
  pieces_ = std::move(np);
}

PiecewisePoly PiecewisePoly::from_pieces(std::vector<Rat> breaks,
                                         std::vector<Coeffs> pieces) {
  if (breaks.size() < 2 || pieces.size() + 1 != breaks.size())
    throw std::invalid_argument("piecewise: breakpoint and piece counts disagree");
  if (breaks.front() != 0 || breaks.back() != 1)
    throw std::invalid_argument("piecewise: domain must be the unit interval");
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    if (!(breaks[i] < breaks[i + 1]))
      throw std::invalid_argument("piecewise: breakpoints must increase");
  PiecewisePoly p;
  p.breaks_ = std::move(breaks);
  p.pieces_ = std::move(pieces);
  p.normalize();
  return p;
}

PiecewisePoly PiecewisePoly::constant(const Rat& c) {
  return from_pieces({Rat(0), Rat(1)}, {Coeffs{c, Rat(0), Rat(0), Rat(0)}});
}

PiecewisePoly PiecewisePoly::identity() {
  return from_pieces({Rat(0), Rat(1)}, {Coeffs{Rat(0), Rat(1), Rat(0), Rat(0)}});
}

PiecewisePoly PiecewisePoly::indicator(const Rat& a, const Rat& b) {
  if (!(Rat(0) <= a && a < b && b <= Rat(1)))
    throw std::invalid_argument("indicator: need 0 <= a < b <= 1");
  std::vector<Rat> breaks{Rat(0)};
  std::vector<Coeffs> pieces;
  Coeffs zero{Rat(0), Rat(0), Rat(0), Rat(0)};
  Coeffs one{Rat(1), Rat(0), Rat(0), Rat(0)};
  if (a > 0) {
    breaks.push_back(a);
    pieces.push_back(zero);
  }
  breaks.push_back(b);
  pieces.push_back(one);
  if (b < 1) {
    breaks.push_back(Rat(1));
    pieces.push_back(zero);
  }
  return from_pieces(std::move(breaks), std::move(pieces));
}

Rat PiecewisePoly::eval(const Rat& x) const {
  std::size_t i = 0;
  while (i + 1 < pieces_.size() && !(x < breaks_[i + 1])) ++i;
  const Coeffs& c = pieces_[i];
  return c[0] + x * (c[1] + x * (c[2] + x * c[3]));
}

namespace {

// Merge two breakpoint grids and combine the source pieces on each cell.
template <typename Combine>
PiecewisePoly combine(const PiecewisePoly& f, const PiecewisePoly& g, Combine&& fn) {
  std::vector<Rat> merged;
  std::size_t i = 0, j = 0;
  const auto& fb = f.breaks();
  const auto& gb = g.breaks();
  while (i < fb.size() || j < gb.size()) {
    Rat next;
    if (j == gb.size() || (i < fb.size() && fb[i] < gb[j]))
      next = fb[i++];
    else if (i == fb.size() || gb[j] < fb[i])
      next = gb[j++];
    else {
      next = fb[i++];
      ++j;
    }
    merged.push_back(next);
  }
  std::vector<PiecewisePoly::Coeffs> pieces;
  std::size_t fi = 0, gi = 0;
  for (std::size_t k = 0; k + 1 < merged.size(); ++k) {
    while (fb[fi + 1] <= merged[k]) ++fi;
    while (gb[gi + 1] <= merged[k]) ++gi;
    pieces.push_back(fn(f.pieces()[fi], g.pieces()[gi]));
  }
  return PiecewisePoly::from_pieces(std::move(merged), std::move(pieces));
}

}  // namespace

PiecewisePoly PiecewisePoly::operator+(const PiecewisePoly& other) const {
  return combine(*this, other, [](const Coeffs& a, const Coeffs& b) {
    Coeffs c;
    for (int i = 0; i < 4; ++i) c[i] = a[i] + b[i];
    return c;
  });
}

PiecewisePoly PiecewisePoly::operator-(const PiecewisePoly& other) const {
  return combine(*this, other, [](const Coeffs& a, const Coeffs& b) {
    Coeffs c;
    for (int i = 0; i < 4; ++i) c[i] = a[i] - b[i];
    return c;
  });
}

PiecewisePoly PiecewisePoly::operator-() const { return scaled(Rat(-1)); }

PiecewisePoly PiecewisePoly::operator*(const PiecewisePoly& other) const {
  return combine(*this, other, [](const Coeffs& a, const Coeffs& b) {
    Coeffs c{Rat(0), Rat(0), Rat(0), Rat(0)};
    for (int i = 0; i < 4; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < 4; ++j) {
        if (b[j] == 0) continue;
        if (i + j > 3)
          throw std::invalid_argument("piecewise: product degree exceeds three");
        c[i + j] += a[i] * b[j];
      }
    }
    return c;
  });
}

PiecewisePoly PiecewisePoly::scaled(const Rat& factor) const {
  PiecewisePoly p = *this;
  for (auto& piece : p.pieces_)
    for (auto& c : piece) c *= factor;
  p.normalize();
  return p;
}

Rat PiecewisePoly::integral(const Rat& a, const Rat& b) const {
  Rat lo = a < 0 ? Rat(0) : a;
  Rat hi = b > 1 ? Rat(1) : b;
  if (!(lo < hi)) return Rat(0);
  Rat total = 0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    Rat l = breaks_[i] > lo ? breaks_[i] : lo;
    Rat h = breaks_[i + 1] < hi ? breaks_[i + 1] : hi;
    if (!(l < h)) continue;
    total += antiderivative(pieces_[i], h) - antiderivative(pieces_[i], l);
  }
  return total;
}

IntervalMixture make_interval_mixture(std::vector<IntervalMixture::Component> components) {
  if (components.empty())
    throw std::invalid_argument("mixture: needs at least one component");
  Rat total = 0;
  for (const auto& c : components) {
    if (!(Rat(0) <= c.a && c.a < c.b && c.b <= Rat(1)))
      throw std::invalid_argument("mixture: component interval must sit inside (0,1)");
    if (c.weight < 0) throw std::invalid_argument("mixture: negative weight");
    total += c.weight;
  }
  if (total != 1) throw std::invalid_argument("mixture: weights must sum to one");
  return IntervalMixture{std::move(components)};
}

Rat expect(const IntervalMixture& mu, const PiecewisePoly& f) {
  Rat total = 0;
  for (const auto& c : mu.components) {
    if (c.weight == 0) continue;
    total += c.weight * f.integral(c.a, c.b) / (c.b - c.a);
  }
  return total;
}

IntervalMixture scale_family_member(long n) {
  if (n < 1) throw std::invalid_argument("family member index must be positive");
  Rat half(BigInt(1), BigInt(2));
  if (n == 1)
    return make_interval_mixture({{Rat(1), half, Rat(1)}});
  Rat w1(BigInt(n - 1), BigInt(n));
  Rat cut(BigInt(1), BigInt(n + 1));
  Rat w2(BigInt(1), BigInt(n));
  return make_interval_mixture({{w1, Rat(0), cut}, {w2, half, Rat(1)}});
}

Rat member_expectation(long n, const PiecewisePoly& f) {
  return expect(scale_family_member(n), f);
}

Rat worst_case_truncated(const PiecewisePoly& f, long n_max) {
  if (n_max < 1) throw std::invalid_argument("truncation must be positive");
  Rat best = member_expectation(1, f);
  for (long n = 2; n <= n_max; ++n) {
    Rat v = member_expectation(n, f);
    if (v > best) best = v;
  }
  return best;
}

IntervalMixture reference_view() {
  return make_interval_mixture({{Rat(1), Rat(0), Rat(BigInt(1), BigInt(2))}});
}

Rat view_expectation(const PiecewisePoly& f) { return expect(reference_view(), f); }

PiecewisePoly benchmark_claim() {
  Rat half(BigInt(1), BigInt(2));
  return PiecewisePoly::from_pieces(
      {Rat(0), half, Rat(1)},
      {PiecewisePoly::Coeffs{Rat(0), Rat(2), Rat(0), Rat(0)},
       PiecewisePoly::Coeffs{Rat(-1), Rat(0), Rat(0), Rat(0)}});
}

std::vector<BubbleCell> bubble_table(const PiecewisePoly& base, const std::vector<Rat>& m_grid,
                                     const std::vector<long>& n_grid) {
  Rat half(BigInt(1), BigInt(2));
  PiecewisePoly left = base * PiecewisePoly::indicator(Rat(0), half);
  PiecewisePoly right_indicator = PiecewisePoly::indicator(half, Rat(1));
  std::vector<BubbleCell> cells;
  for (const Rat& m : m_grid)
    for (long n_max : n_grid) {
      PiecewisePoly claim = left - right_indicator.scaled(m);
      cells.push_back(BubbleCell{m, n_max, worst_case_truncated(claim, n_max)});
    }
  return cells;
}

TruncatedGapReport truncated_gap_report(const std::vector<Rat>& m_grid,
                                        const std::vector<long>& n_grid) {
  Rat half(BigInt(1), BigInt(2));
  PiecewisePoly w = -benchmark_claim();
  TruncatedGapReport report;
  report.dual_value = view_expectation(w);
  PiecewisePoly left = w * PiecewisePoly::indicator(Rat(0), half);
  PiecewisePoly right_indicator = PiecewisePoly::indicator(half, Rat(1));
  for (const Rat& m : m_grid)
    for (long n_max : n_grid) {
      PiecewisePoly claim = left - right_indicator.scaled(m);
      Rat worst = worst_case_truncated(claim, n_max);
      Rat local = view_expectation(claim);
      Rat kappa = worst > local ? worst : local;
      report.rows.push_back(TruncatedGapRow{m, n_max, kappa, kappa - report.dual_value});
    }
  return report;
}

}  // namespace qsure::continuum
