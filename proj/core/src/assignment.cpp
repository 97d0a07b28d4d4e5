#include "gymtrack/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gymtrack {

std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
  const std::size_t rows = cost.size();
  if (rows == 0) return {};
  const std::size_t cols = cost.front().size();
  for (const auto& row : cost) {
    if (row.size() != cols) throw std::invalid_argument("hungarian: ragged cost matrix");
    for (double v : row)
      if (!std::isfinite(v)) throw std::invalid_argument("hungarian: non-finite cost");
  }
  if (cols == 0) return std::vector<int>(rows, -1);

  // The solver below needs n <= m; transpose otherwise.
  const bool transposed = rows > cols;
  const std::size_t n = transposed ? cols : rows;
  const std::size_t m = transposed ? rows : cols;
  auto a = [&](std::size_t i, std::size_t j) {
    return transposed ? cost[j - 1][i - 1] : cost[i - 1][j - 1];
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> result(rows, -1);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] == 0) continue;
    if (transposed) {
      result[j - 1] = static_cast<int>(p[j] - 1);
    } else {
      result[p[j] - 1] = static_cast<int>(j - 1);
    }
  }
  return result;
}

AssignmentResult assign(const CostMatrix& D, double unmatched_threshold) {
  AssignmentResult out;
  const std::size_t rows = D.rows();
  const std::size_t cols = D.cols();

  double max_available = 0.0;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (const auto& d = D.at(r, c)) max_available = std::max(max_available, std::abs(*d));
  // Larger than any sum of available entries, so the solver never trades an
  // available pair for a sentinel one.
  const double sentinel = (max_available + 1.0) * static_cast<double>(std::max(rows, cols) + 1);

  std::vector<std::vector<double>> cost(rows, std::vector<double>(cols, sentinel));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (const auto& d = D.at(r, c)) cost[r][c] = *d;

  const auto match = hungarian(cost);
  std::vector<bool> col_used(cols, false);
  for (std::size_t r = 0; r < rows; ++r) {
    const int c = r < match.size() ? match[r] : -1;
    if (c < 0) {
      out.unmatched_rows.push_back(r);
      continue;
    }
    const auto& d = D.at(r, static_cast<std::size_t>(c));
    if (!d || *d > unmatched_threshold) {
      out.unmatched_rows.push_back(r);
      continue;
    }
    out.pairs.emplace_back(r, static_cast<std::size_t>(c));
    out.total_cost += *d;
    col_used[static_cast<std::size_t>(c)] = true;
  }
  for (std::size_t c = 0; c < cols; ++c)
    if (!col_used[c]) out.unmatched_cols.push_back(c);
  return out;
}

}  // namespace gymtrack
