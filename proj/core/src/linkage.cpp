#include "gymtrack/linkage.hpp"

#include <algorithm>

namespace gymtrack {

CrossViewDistance merge_linkage(const CrossViewDistance& a, const CrossViewDistance& b) {
  if (a.is_empty()) return b;
  if (b.is_empty()) return a;
  if (a.is_infinite() || b.is_infinite()) return CrossViewDistance::infinite();
  return CrossViewDistance::finite(std::max(a.value(), b.value()));
}

std::vector<std::vector<std::size_t>> cluster_complete_linkage(const DistanceMatrix& distances,
                                                               double cutoff) {
  const std::size_t n = distances.size();
  std::vector<std::vector<std::size_t>> clusters(n);
  for (std::size_t i = 0; i < n; ++i) clusters[i] = {i};

  // Working copy indexed by current slot.
  std::vector<std::vector<CrossViewDistance>> D(n, std::vector<CrossViewDistance>(n, CrossViewDistance::empty()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) D[i][j] = distances.at(i, j);

  while (clusters.size() > 1) {
    std::size_t best_i = 0, best_j = 0;
    bool found = false;
    double best = 0.0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        const auto& d = D[i][j];
        if (!d.is_finite() || !(d.value() < cutoff)) continue;
        if (!found || d.value() < best) {
          found = true;
          best = d.value();
          best_i = i;
          best_j = j;
        }
      }
    }
    if (!found) break;

    for (std::size_t q = 0; q < clusters.size(); ++q) {
      if (q == best_i || q == best_j) continue;
      const CrossViewDistance merged = merge_linkage(D[best_i][q], D[best_j][q]);
      D[best_i][q] = merged;
      D[q][best_i] = merged;
    }
    clusters[best_i].insert(clusters[best_i].end(), clusters[best_j].begin(), clusters[best_j].end());
    std::sort(clusters[best_i].begin(), clusters[best_i].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(best_j));
    D.erase(D.begin() + static_cast<std::ptrdiff_t>(best_j));
    for (auto& row : D) row.erase(row.begin() + static_cast<std::ptrdiff_t>(best_j));
  }
  return clusters;
}

}  // namespace gymtrack
