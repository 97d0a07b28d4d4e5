#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace gymtrack {

/// Row-major cost matrix whose entries may be unavailable (nullopt).
class CostMatrix {
 public:
  CostMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const std::optional<double>& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, std::optional<double> v) { data_[r * cols_ + c] = v; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::optional<double>> data_;
};

/// Minimum-cost assignment of a dense rectangular matrix using the
/// shortest augmenting path form of the Hungarian method, O(n^2 m).
/// Every row of the smaller side is assigned. Returns the column of each
/// row, or -1 for rows left out when rows > cols.
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost);

struct AssignmentResult {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (row, col), ascending rows
  std::vector<std::size_t> unmatched_rows;
  std::vector<std::size_t> unmatched_cols;
  double total_cost = 0.0;
};

/// Optimal assignment over available entries. Unavailable entries are padded
/// with a sentinel that no accepted pair can carry; pairs above
/// `unmatched_threshold` are rejected afterwards.
AssignmentResult assign(const CostMatrix& D, double unmatched_threshold = 0.6);

}  // namespace gymtrack
