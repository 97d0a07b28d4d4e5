#pragma once

#include <cstddef>
#include <vector>

namespace gymtrack {

/// Pairwise distance that may be undefined (no shared frames) or forbidden
/// (same camera with shared frames).
class CrossViewDistance {
 public:
  enum class Kind { Finite, Empty, Infinite };

  static CrossViewDistance finite(double value) { return {Kind::Finite, value}; }
  static CrossViewDistance empty() { return {Kind::Empty, 0.0}; }
  static CrossViewDistance infinite() { return {Kind::Infinite, 0.0}; }

  Kind kind() const noexcept { return kind_; }
  bool is_finite() const noexcept { return kind_ == Kind::Finite; }
  bool is_empty() const noexcept { return kind_ == Kind::Empty; }
  bool is_infinite() const noexcept { return kind_ == Kind::Infinite; }
  /// Only meaningful for finite distances.
  double value() const noexcept { return value_; }

  bool operator==(const CrossViewDistance&) const = default;

 private:
  CrossViewDistance(Kind kind, double value) : kind_(kind), value_(value) {}

  Kind kind_;
  double value_;
};

/// Dense symmetric matrix; the diagonal is never read.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::size_t n)
      : n_(n), data_(n * n, CrossViewDistance::empty()) {}

  std::size_t size() const noexcept { return n_; }
  const CrossViewDistance& at(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, CrossViewDistance d) {
    data_[i * n_ + j] = d;
    data_[j * n_ + i] = d;
  }

 private:
  std::size_t n_;
  std::vector<CrossViewDistance> data_;
};

/// Merge rule for two clusters against a third: the larger of two defined
/// distances, the defined one when the other is empty, empty when both are.
/// Infinite dominates any finite value.
CrossViewDistance merge_linkage(const CrossViewDistance& a, const CrossViewDistance& b);

/// Complete-linkage agglomeration with empty-aware distance updates. While
/// more than one cluster remains and some finite distance is below `cutoff`,
/// the closest pair is merged; ties go to the lexicographically smallest
/// (i, j). The merged cluster takes slot i and slot j is removed.
///
/// Returns clusters as ascending lists of input indices, in final slot order.
std::vector<std::vector<std::size_t>> cluster_complete_linkage(const DistanceMatrix& distances,
                                                               double cutoff);

}  // namespace gymtrack
