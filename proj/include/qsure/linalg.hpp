#pragma once

#include <optional>
#include <vector>

#include "qsure/rational.hpp"

namespace qsure::linalg {

using Vec = std::vector<Rat>;
using Mat = std::vector<Vec>;

// Exact rank via fraction-preserving Gaussian elimination.
int rank(Mat m);

// Unique solution of a square system, or nullopt when singular.
std::optional<Vec> solve_square(Mat a, Vec b);

// Indices of a maximal linearly independent subset of rows, scanning in
// order (earlier rows win ties). Used to drop redundant market assets.
std::vector<int> maximal_independent_rows(const Mat& m);

}  // namespace qsure::linalg
