#include "qsure/lp.hpp"

#include <algorithm>
#include <cassert>

namespace qsure::lp {

namespace {
long g_default_max_pivots = 100000;
}

long default_max_pivots() { return g_default_max_pivots; }

void set_default_max_pivots(long limit) {
  if (limit <= 0) throw std::invalid_argument("lp: pivot budget must be positive");
  g_default_max_pivots = limit;
}

void LinearProgram::validate() const {
  std::size_t n = objective.size();
  for (const Row& r : rows)
    if (r.coeffs.size() != n) throw std::invalid_argument("lp: row dimension mismatch");
  if (!lower.empty() && lower.size() != n)
    throw std::invalid_argument("lp: lower bound dimension mismatch");
  if (!upper.empty() && upper.size() != n)
    throw std::invalid_argument("lp: upper bound dimension mismatch");
}

namespace {

// Internal minimize-form row. kind 0: user row (index = row position),
// kind 1: lower bound on variable `index`, kind 2: upper bound.
struct IRow {
  std::vector<Rat> a;
  Relation rel;
  Rat rhs;
  int kind;
  int index;
};

struct Tableau {
  // columns: p_0..p_{n-1}, q_0..q_{n-1}, slacks, artificials; rhs kept apart
  std::vector<std::vector<Rat>> body;
  std::vector<Rat> rhs;
  std::vector<Rat> obj;  // reduced costs for the current phase
  Rat objval = 0;
  std::vector<int> basis;      // basic column per row
  std::vector<int> unit_col;   // the column that started as row i's basis
  std::vector<Rat> sigma;      // +-1 row normalization factors
  int n_user = 0;
  int first_slack = 0;
  int first_artificial = 0;
  int cols = 0;
};

void pivot(Tableau& t, int row, int col) {
  Rat p = t.body[row][col];
  for (Rat& v : t.body[row]) v /= p;
  t.rhs[row] /= p;
  for (std::size_t i = 0; i < t.body.size(); ++i) {
    if (static_cast<int>(i) == row) continue;
    Rat f = t.body[i][col];
    if (f == 0) continue;
    for (int j = 0; j < t.cols; ++j) t.body[i][j] -= f * t.body[row][j];
    t.rhs[i] -= f * t.rhs[row];
  }
  Rat f = t.obj[col];
  if (f != 0) {
    for (int j = 0; j < t.cols; ++j) t.obj[j] -= f * t.body[row][j];
    t.objval += f * t.rhs[row];
  }
  t.basis[row] = col;
}

// Bland: lowest eligible entering column; lowest basic index breaks ratio
// ties. Returns false when the current phase objective is optimal. Throws
// PivotLimitError against the shared budget. `allow` filters entering columns.
template <typename Allow>
bool bland_step(Tableau& t, const Allow& allow, long& pivots, long max_pivots,
                std::ostream* trace, bool& unbounded, int& unbounded_col) {
  int enter = -1;
  for (int j = 0; j < t.cols; ++j) {
    if (!allow(j)) continue;
    if (t.obj[j] < 0) {
      enter = j;
      break;
    }
  }
  if (enter < 0) return false;
  int leave = -1;
  Rat best_ratio = 0;
  for (std::size_t i = 0; i < t.body.size(); ++i) {
    if (t.body[i][enter] <= 0) continue;
    Rat ratio = t.rhs[i] / t.body[i][enter];
    if (leave < 0 || ratio < best_ratio ||
        (ratio == best_ratio && t.basis[i] < t.basis[leave])) {
      leave = static_cast<int>(i);
      best_ratio = ratio;
    }
  }
  if (leave < 0) {
    unbounded = true;
    unbounded_col = enter;
    return false;
  }
  if (++pivots > max_pivots) throw PivotLimitError(max_pivots);
  if (trace)
    *trace << "pivot " << pivots << ": col " << enter << " enters, col " << t.basis[leave]
           << " leaves, value " << t.objval << "\n";
  pivot(t, leave, enter);
  return true;
}

std::vector<Rat> phase_costs(const Tableau& t, const std::vector<Rat>& c_min, bool phase1) {
  std::vector<Rat> c(t.cols, 0);
  if (phase1) {
    for (int j = t.first_artificial; j < t.cols; ++j) c[j] = 1;
  } else {
    for (int j = 0; j < t.n_user; ++j) {
      c[j] = c_min[j];
      c[t.n_user + j] = -c_min[j];
    }
  }
  return c;
}

void rebuild_objective(Tableau& t, const std::vector<Rat>& costs) {
  t.obj.assign(t.cols, 0);
  t.objval = 0;
  for (int j = 0; j < t.cols; ++j) t.obj[j] = costs[j];
  for (std::size_t i = 0; i < t.body.size(); ++i) {
    Rat cb = costs[t.basis[i]];
    if (cb == 0) continue;
    for (int j = 0; j < t.cols; ++j) t.obj[j] -= cb * t.body[i][j];
    t.objval += cb * t.rhs[i];
  }
}

// Row multipliers w with w^T A0 = c0 - reduced costs, read off the columns
// that started as each row's basis (always unit columns of the original
// tableau). Valid for any current basis.
std::vector<Rat> multipliers(const Tableau& t, const std::vector<Rat>& costs) {
  std::vector<Rat> w(t.body.size());
  for (std::size_t i = 0; i < t.body.size(); ++i)
    w[i] = costs[t.unit_col[i]] - t.obj[t.unit_col[i]];
  return w;
}

}  // namespace

LpOutcome solve(const LinearProgram& lp, const SolveOptions& options) {
  lp.validate();
  int n = lp.num_vars();
  bool maximize = lp.sense == Sense::Maximize;

  std::vector<Rat> c_min(n);
  for (int j = 0; j < n; ++j) c_min[j] = maximize ? -lp.objective[j] : lp.objective[j];

  std::vector<IRow> irows;
  for (std::size_t i = 0; i < lp.rows.size(); ++i)
    irows.push_back({lp.rows[i].coeffs, lp.rows[i].rel, lp.rows[i].rhs, 0, static_cast<int>(i)});
  for (int j = 0; j < n; ++j) {
    if (!lp.lower.empty() && lp.lower[j]) {
      std::vector<Rat> a(n, 0);
      a[j] = 1;
      irows.push_back({std::move(a), Relation::GreaterEq, *lp.lower[j], 1, j});
    }
    if (!lp.upper.empty() && lp.upper[j]) {
      std::vector<Rat> a(n, 0);
      a[j] = 1;
      irows.push_back({std::move(a), Relation::LessEq, *lp.upper[j], 2, j});
    }
  }

  int m = static_cast<int>(irows.size());
  Tableau t;
  t.n_user = n;
  t.first_slack = 2 * n;
  int n_slacks = 0;
  for (const IRow& r : irows)
    if (r.rel != Relation::Equal) ++n_slacks;
  t.first_artificial = t.first_slack + n_slacks;

  // First pass: figure out which rows need artificials after sign
  // normalization (slack must come out with coefficient +1 to start basic).
  std::vector<int> slack_col(m, -1);
  std::vector<Rat> slack_coef(m, 0);
  t.sigma.assign(m, Rat(1));
  int next_slack = t.first_slack;
  for (int i = 0; i < m; ++i) {
    if (irows[i].rel != Relation::Equal) {
      slack_col[i] = next_slack++;
      slack_coef[i] = irows[i].rel == Relation::LessEq ? 1 : -1;
    }
    if (irows[i].rhs < 0) t.sigma[i] = -1;
  }
  std::vector<int> art_col(m, -1);
  int next_art = t.first_artificial;
  for (int i = 0; i < m; ++i)
    if (slack_col[i] < 0 || t.sigma[i] * slack_coef[i] != 1) art_col[i] = next_art++;
  t.cols = next_art;

  t.body.assign(m, std::vector<Rat>(t.cols, 0));
  t.rhs.assign(m, 0);
  t.basis.assign(m, 0);
  t.unit_col.assign(m, 0);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      Rat v = t.sigma[i] * irows[i].a[j];
      t.body[i][j] = v;
      t.body[i][n + j] = -v;
    }
    if (slack_col[i] >= 0) t.body[i][slack_col[i]] = t.sigma[i] * slack_coef[i];
    if (art_col[i] >= 0) t.body[i][art_col[i]] = 1;
    t.rhs[i] = t.sigma[i] * irows[i].rhs;
    t.basis[i] = art_col[i] >= 0 ? art_col[i] : slack_col[i];
    t.unit_col[i] = t.basis[i];
  }

  long pivots = 0;
  LpOutcome out;

  auto finish_duals = [&](const std::vector<Rat>& w, bool farkas) {
    out.dual_rows.assign(lp.rows.size(), Rat(0));
    out.dual_lower.assign(n, Rat(0));
    out.dual_upper.assign(n, Rat(0));
    for (int i = 0; i < m; ++i) {
      Rat y = t.sigma[i] * w[i];
      switch (irows[i].kind) {
        case 0: out.dual_rows[irows[i].index] = y; break;
        case 1: out.dual_lower[irows[i].index] = y; break;          // mu_lower = y >= 0
        default: out.dual_upper[irows[i].index] = -y; break;        // mu_upper = -y >= 0
      }
    }
    if (!farkas && maximize) {
      // map the internal minimize multipliers of -c to the maximize convention
      for (Rat& y : out.dual_rows) y = -y;
    }
  };

  // Phase 1: minimize the artificial mass. Bounded below by zero, so the
  // Bland loop can only stop at an optimum.
  std::vector<Rat> c1 = phase_costs(t, c_min, true);
  rebuild_objective(t, c1);
  bool unbounded = false;
  int ub_col = -1;
  while (bland_step(t, [](int) { return true; }, pivots, options.max_pivots, options.trace,
                    unbounded, ub_col)) {
  }
  assert(!unbounded);
  if (t.objval > 0) {
    out.status = Status::Infeasible;
    finish_duals(multipliers(t, c1), true);
    out.pivots = pivots;
    return out;
  }

  // Drive basic artificials out (rows that resist are redundant and keep a
  // zero-valued artificial that can never re-enter or leave).
  for (int i = 0; i < m; ++i) {
    if (t.basis[i] < t.first_artificial) continue;
    for (int j = 0; j < t.first_artificial; ++j) {
      if (t.body[i][j] != 0) {
        if (++pivots > options.max_pivots) throw PivotLimitError(options.max_pivots);
        pivot(t, i, j);
        break;
      }
    }
  }

  std::vector<Rat> c2 = phase_costs(t, c_min, false);
  rebuild_objective(t, c2);
  auto allow_real = [&](int j) { return j < t.first_artificial; };
  while (bland_step(t, allow_real, pivots, options.max_pivots, options.trace, unbounded,
                    ub_col)) {
  }
  out.pivots = pivots;

  auto user_point = [&]() {
    std::vector<Rat> x(n, 0);
    for (int i = 0; i < m; ++i) {
      int b = t.basis[i];
      if (b < n)
        x[b] += t.rhs[i];
      else if (b < 2 * n)
        x[b - n] -= t.rhs[i];
    }
    return x;
  };

  if (unbounded) {
    out.status = Status::Unbounded;
    out.primal = user_point();
    std::vector<Rat> d(n, 0);
    if (ub_col < n)
      d[ub_col] += 1;
    else if (ub_col < 2 * n)
      d[ub_col - n] -= 1;
    for (int i = 0; i < m; ++i) {
      int b = t.basis[i];
      Rat step = -t.body[i][ub_col];
      if (step == 0) continue;
      if (b < n)
        d[b] += step;
      else if (b < 2 * n)
        d[b - n] -= step;
    }
    out.ray = std::move(d);
    return out;
  }

  out.status = Status::Optimal;
  out.primal = user_point();
  out.objective_value = maximize ? -t.objval : t.objval;
  finish_duals(multipliers(t, c2), false);
  return out;
}

namespace {

Rat dot(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool relation_holds(const Rat& lhs, Relation rel, const Rat& rhs) {
  switch (rel) {
    case Relation::LessEq: return lhs <= rhs;
    case Relation::Equal: return lhs == rhs;
    default: return lhs >= rhs;
  }
}

}  // namespace

bool verify_certificates(const LinearProgram& lp, const LpOutcome& out) {
  lp.validate();
  int n = lp.num_vars();
  std::size_t m = lp.rows.size();
  bool maximize = lp.sense == Sense::Maximize;
  auto lower_at = [&](int j) { return lp.lower.empty() ? std::nullopt : lp.lower[j]; };
  auto upper_at = [&](int j) { return lp.upper.empty() ? std::nullopt : lp.upper[j]; };

  auto primal_feasible = [&](const std::vector<Rat>& x) {
    if (static_cast<int>(x.size()) != n) return false;
    for (const Row& r : lp.rows)
      if (!relation_holds(dot(r.coeffs, x), r.rel, r.rhs)) return false;
    for (int j = 0; j < n; ++j) {
      if (lower_at(j) && x[j] < *lower_at(j)) return false;
      if (upper_at(j) && x[j] > *upper_at(j)) return false;
    }
    return true;
  };

  auto dual_shape_ok = [&]() {
    return out.dual_rows.size() == m && out.dual_lower.size() == static_cast<std::size_t>(n) &&
           out.dual_upper.size() == static_cast<std::size_t>(n);
  };

  // Sign conditions for row duals; `min_orientation` covers both the
  // Minimize optimum and the Farkas certificate.
  auto row_signs_ok = [&](bool min_orientation) {
    for (std::size_t i = 0; i < m; ++i) {
      const Rat& y = out.dual_rows[i];
      switch (lp.rows[i].rel) {
        case Relation::GreaterEq:
          if (min_orientation ? y < 0 : y > 0) return false;
          break;
        case Relation::LessEq:
          if (min_orientation ? y > 0 : y < 0) return false;
          break;
        default: break;
      }
    }
    for (int j = 0; j < n; ++j) {
      if (out.dual_lower[j] < 0 || out.dual_upper[j] < 0) return false;
      if (!lower_at(j) && out.dual_lower[j] != 0) return false;
      if (!upper_at(j) && out.dual_upper[j] != 0) return false;
    }
    return true;
  };

  auto stationarity_ok = [&](bool with_objective) {
    for (int j = 0; j < n; ++j) {
      Rat lhs = 0;
      for (std::size_t i = 0; i < m; ++i) lhs += out.dual_rows[i] * lp.rows[i].coeffs[j];
      Rat bound_term = maximize && with_objective
                           ? Rat(out.dual_upper[j] - out.dual_lower[j])
                           : Rat(out.dual_lower[j] - out.dual_upper[j]);
      Rat target = with_objective ? lp.objective[j] : Rat(0);
      if (lhs + bound_term != target) return false;
    }
    return true;
  };

  auto dual_value = [&](bool farkas) {
    Rat v = 0;
    for (std::size_t i = 0; i < m; ++i) v += out.dual_rows[i] * lp.rows[i].rhs;
    for (int j = 0; j < n; ++j) {
      Rat lo = lower_at(j) ? *lower_at(j) : Rat(0);
      Rat hi = upper_at(j) ? *upper_at(j) : Rat(0);
      if (maximize && !farkas)
        v += -out.dual_lower[j] * lo + out.dual_upper[j] * hi;
      else
        v += out.dual_lower[j] * lo - out.dual_upper[j] * hi;
    }
    return v;
  };

  switch (out.status) {
    case Status::Optimal: {
      if (!out.objective_value || !dual_shape_ok()) return false;
      if (!primal_feasible(out.primal)) return false;
      if (dot(lp.objective, out.primal) != *out.objective_value) return false;
      if (!row_signs_ok(!maximize)) return false;
      if (!stationarity_ok(true)) return false;
      for (std::size_t i = 0; i < m; ++i)
        if (out.dual_rows[i] * (dot(lp.rows[i].coeffs, out.primal) - lp.rows[i].rhs) != 0)
          return false;
      for (int j = 0; j < n; ++j) {
        if (lower_at(j) && out.dual_lower[j] * (out.primal[j] - *lower_at(j)) != 0) return false;
        if (upper_at(j) && out.dual_upper[j] * (*upper_at(j) - out.primal[j]) != 0) return false;
      }
      return dual_value(false) == *out.objective_value;
    }
    case Status::Infeasible: {
      if (!dual_shape_ok()) return false;
      if (!row_signs_ok(true)) return false;
      if (!stationarity_ok(false)) return false;
      return dual_value(true) > 0;
    }
    case Status::Unbounded: {
      if (!primal_feasible(out.primal)) return false;
      if (out.ray.size() != static_cast<std::size_t>(n)) return false;
      for (const Row& r : lp.rows) {
        Rat v = dot(r.coeffs, out.ray);
        if (r.rel == Relation::Equal && v != 0) return false;
        if (r.rel == Relation::LessEq && v > 0) return false;
        if (r.rel == Relation::GreaterEq && v < 0) return false;
      }
      for (int j = 0; j < n; ++j) {
        if (lower_at(j) && out.ray[j] < 0) return false;
        if (upper_at(j) && out.ray[j] > 0) return false;
      }
      Rat drift = dot(lp.objective, out.ray);
      return maximize ? drift > 0 : drift < 0;
    }
  }
  return false;
}

}  // namespace qsure::lp
