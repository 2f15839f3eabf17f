#include "qsure/oracle.hpp"

#include <cstdint>

#include "qsure/linalg.hpp"

namespace qsure::oracle {

Rat total_variation_subset_sup(const core::SignedMeasure& mu, const core::OutcomeSet& a) {
  auto outcomes = a.outcomes();
  const std::size_t k = outcomes.size();
  Rat best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << k); ++mask) {
    Rat inside = 0, outside = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (std::uint64_t(1) << i))
        inside += mu.mass[outcomes[i]];
      else
        outside += mu.mass[outcomes[i]];
    }
    Rat v = abs(inside) + abs(outside);
    if (v > best) best = v;
  }
  return best;
}

bool dominates_by_null_sets(int n_outcomes,
                            const std::vector<core::ProbabilityMeasure>& dominating,
                            const std::vector<core::ProbabilityMeasure>& dominated) {
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n_outcomes); ++mask) {
    bool null_for_dominating = true;
    for (const auto& p : dominating) {
      Rat total = 0;
      for (int w = 0; w < n_outcomes; ++w)
        if (mask & (std::uint64_t(1) << w)) total += p.mass[w];
      if (total != 0) {
        null_for_dominating = false;
        break;
      }
    }
    if (!null_for_dominating) continue;
    for (const auto& p : dominated) {
      Rat total = 0;
      for (int w = 0; w < n_outcomes; ++w)
        if (mask & (std::uint64_t(1) << w)) total += p.mass[w];
      if (total != 0) return false;
    }
  }
  return true;
}

std::optional<VertexOptimum> lp_vertex_optimum(const lp::LinearProgram& prog) {
  const std::size_t n = prog.num_vars();
  // Collect every affine constraint as (coeffs, rhs, relation).
  struct Affine {
    linalg::Vec a;
    Rat b;
    lp::Relation rel;
  };
  std::vector<Affine> cons;
  for (const auto& row : prog.rows) cons.push_back({row.coeffs, row.rhs, row.rel});
  for (std::size_t j = 0; j < n; ++j) {
    if (!prog.lower.empty() && prog.lower[j]) {
      linalg::Vec e(n, Rat(0));
      e[j] = 1;
      cons.push_back({std::move(e), *prog.lower[j], lp::Relation::GreaterEq});
    }
    if (!prog.upper.empty() && prog.upper[j]) {
      linalg::Vec e(n, Rat(0));
      e[j] = 1;
      cons.push_back({std::move(e), *prog.upper[j], lp::Relation::LessEq});
    }
  }
  if (cons.size() < n) return std::nullopt;

  auto feasible = [&](const std::vector<Rat>& x) {
    for (const auto& c : cons) {
      Rat lhs = 0;
      for (std::size_t j = 0; j < n; ++j) lhs += c.a[j] * x[j];
      switch (c.rel) {
        case lp::Relation::LessEq:
          if (lhs > c.b) return false;
          break;
        case lp::Relation::GreaterEq:
          if (lhs < c.b) return false;
          break;
        case lp::Relation::Equal:
          if (lhs != c.b) return false;
          break;
      }
    }
    return true;
  };

  std::optional<VertexOptimum> best;
  const bool maximize = prog.sense == lp::Sense::Maximize;
  std::vector<std::size_t> comb(n);
  for (std::size_t i = 0; i < n; ++i) comb[i] = i;
  auto advance = [&comb, &cons, n]() {
    std::size_t m = cons.size();
    std::size_t i = n;
    while (i-- > 0) {
      if (comb[i] != m - n + i) {
        ++comb[i];
        for (std::size_t j = i + 1; j < n; ++j) comb[j] = comb[j - 1] + 1;
        return true;
      }
    }
    return false;
  };
  do {
    linalg::Mat sys(n, linalg::Vec(n));
    linalg::Vec rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      sys[i] = cons[comb[i]].a;
      rhs[i] = cons[comb[i]].b;
    }
    auto sol = linalg::solve_square(sys, rhs);
    if (!sol || !feasible(*sol)) continue;
    Rat value = 0;
    for (std::size_t j = 0; j < n; ++j) value += prog.objective[j] * (*sol)[j];
    if (!best || (maximize ? value > best->value : value < best->value))
      best = VertexOptimum{value, *sol};
  } while (advance());
  return best;
}

Rat integrate_simpson(const continuum::PiecewisePoly& f, const Rat& a, const Rat& b) {
  Rat lo = a < 0 ? Rat(0) : a;
  Rat hi = b > 1 ? Rat(1) : b;
  if (!(lo < hi)) return Rat(0);
  const auto& breaks = f.breaks();
  // Evaluate the piece's own polynomial at the cell endpoints: boundary
  // values of neighbouring pieces must not leak in.
  auto piece_at = [](const continuum::PiecewisePoly::Coeffs& c, const Rat& x) {
    return c[0] + x * (c[1] + x * (c[2] + x * c[3]));
  };
  Rat total = 0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    Rat l = breaks[i] > lo ? breaks[i] : lo;
    Rat h = breaks[i + 1] < hi ? breaks[i + 1] : hi;
    if (!(l < h)) continue;
    Rat mid = (l + h) / 2;
    const auto& c = f.pieces()[i];
    total += (h - l) / 6 * (piece_at(c, l) + 4 * piece_at(c, mid) + piece_at(c, h));
  }
  return total;
}

Rat expect_simpson(const continuum::IntervalMixture& mu, const continuum::PiecewisePoly& f) {
  Rat total = 0;
  for (const auto& c : mu.components) {
    if (c.weight == 0) continue;
    total += c.weight * integrate_simpson(f, c.a, c.b) / (c.b - c.a);
  }
  return total;
}

}  // namespace qsure::oracle
