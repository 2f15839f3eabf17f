#include "qsure/linalg.hpp"

#include <stdexcept>

namespace qsure::linalg {

int rank(Mat m) {
  if (m.empty()) return 0;
  std::size_t rows = m.size(), cols = m.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && m[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[pivot], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (m[i][c] == 0) continue;
      Rat f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return static_cast<int>(r);
}

std::optional<Vec> solve_square(Mat a, Vec b) {
  std::size_t n = a.size();
  if (n == 0 || a.front().size() != n || b.size() != n)
    throw std::invalid_argument("solve_square: dimension mismatch");
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && a[pivot][c] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[c]);
    std::swap(b[pivot], b[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      Rat f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
      b[i] -= f * b[c];
    }
  }
  Vec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

std::vector<int> maximal_independent_rows(const Mat& m) {
  std::vector<int> kept;
  if (m.empty()) return kept;
  Mat reduced;  // row-reduced copies of the kept rows
  std::size_t cols = m.front().size();
  for (std::size_t i = 0; i < m.size(); ++i) {
    Vec row = m[i];
    for (const Vec& r : reduced) {
      std::size_t lead = 0;
      while (lead < cols && r[lead] == 0) ++lead;
      if (lead < cols && row[lead] != 0) {
        Rat f = row[lead] / r[lead];
        for (std::size_t j = lead; j < cols; ++j) row[j] -= f * r[j];
      }
    }
    bool nonzero = false;
    for (const Rat& v : row) {
      if (v != 0) {
        nonzero = true;
        break;
      }
    }
    if (nonzero) {
      kept.push_back(static_cast<int>(i));
      // keep `reduced` in echelon form ordered by leading column
      reduced.push_back(row);
      for (std::size_t k = reduced.size(); k-- > 1;) {
        auto lead_col = [&](const Vec& v) {
          std::size_t l = 0;
          while (l < cols && v[l] == 0) ++l;
          return l;
        };
        if (lead_col(reduced[k]) < lead_col(reduced[k - 1]))
          std::swap(reduced[k], reduced[k - 1]);
        else
          break;
      }
    }
  }
  return kept;
}

}  // namespace qsure::linalg
