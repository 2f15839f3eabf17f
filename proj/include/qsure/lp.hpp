#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "qsure/rational.hpp"

namespace qsure::lp {

enum class Sense { Minimize, Maximize };
enum class Relation { LessEq, Equal, GreaterEq };
enum class Status { Optimal, Infeasible, Unbounded };

struct Row {
  std::vector<Rat> coeffs;
  Relation rel = Relation::Equal;
  Rat rhs = 0;
};

// General-form program over rational data: optional per-variable bounds plus
// arbitrary relational rows. Bounds are expanded into rows internally, so the
// reported multipliers split into row duals and bound duals.
struct LinearProgram {
  Sense sense = Sense::Minimize;
  std::vector<Rat> objective;
  std::vector<Row> rows;
  std::vector<std::optional<Rat>> lower;  // empty or one entry per variable
  std::vector<std::optional<Rat>> upper;

  int num_vars() const { return static_cast<int>(objective.size()); }
  void validate() const;  // throws std::invalid_argument on shape errors
};

// Every status carries an exact certificate:
//  - Optimal: primal point, row duals y, bound duals mu_lower/mu_upper with
//    stationarity  c = A^T y + mu_lower - mu_upper   (Minimize)
//                  c = A^T y - mu_lower + mu_upper   (Maximize)
//    sign conditions (Minimize: y >= 0 on >= rows, y <= 0 on <= rows; flipped
//    for Maximize; bound duals always >= 0), complementary slackness, and
//    equality of primal and dual objective values.
//  - Infeasible: a Farkas vector in the same dual slots (minimize-orientation
//    signs regardless of sense): stationarity with c = 0 and positive dual
//    value, i.e. an aggregation of the constraints into 0 >= positive.
//  - Unbounded: a feasible point in `primal` plus an improving ray.
struct LpOutcome {
  Status status = Status::Optimal;
  std::optional<Rat> objective_value;
  std::vector<Rat> primal;
  std::vector<Rat> dual_rows;
  std::vector<Rat> dual_lower;
  std::vector<Rat> dual_upper;
  std::vector<Rat> ray;
  long pivots = 0;

  // Value in the extended sense: sup over the empty set is -inf for Maximize,
  // +inf for Minimize; an unbounded program hits the opposite infinity.
  ExtRat value(Sense sense) const {
    switch (status) {
      case Status::Optimal: return ExtRat(*objective_value);
      case Status::Unbounded:
        return sense == Sense::Maximize ? ExtRat::pos_inf() : ExtRat::neg_inf();
      default:
        return sense == Sense::Maximize ? ExtRat::neg_inf() : ExtRat::pos_inf();
    }
  }
};

// Thrown when the pivot budget is exhausted; distinct from any mathematical
// verdict so callers can tell resource exhaustion from infeasibility.
class PivotLimitError : public std::runtime_error {
 public:
  explicit PivotLimitError(long limit)
      : std::runtime_error("simplex pivot limit exceeded (" + std::to_string(limit) + ")") {}
};

// Pivot budget used by default-constructed SolveOptions. Settable so embedding
// tools can cap every internally constructed solve at once; always positive.
long default_max_pivots();
void set_default_max_pivots(long limit);

struct SolveOptions {
  long max_pivots = default_max_pivots();
  std::ostream* trace = nullptr;  // per-pivot tableau dump when set
};

// Two-phase dense-tableau simplex with Bland's rule (lowest eligible index
// enters; ratio ties leave by lowest basic index), exact throughout.
LpOutcome solve(const LinearProgram& lp, const SolveOptions& options = {});

// Re-checks the outcome's certificate against the program using only rational
// arithmetic; never solves anything.
bool verify_certificates(const LinearProgram& lp, const LpOutcome& outcome);

}  // namespace qsure::lp
