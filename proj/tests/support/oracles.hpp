#pragma once

// Reference implementations used only by tests. They favor obviousness over
// speed and share no code with the library routines they check.

#include "gymtrack/assignment.hpp"
#include "gymtrack/geometry.hpp"
#include "gymtrack/linkage.hpp"
#include "gymtrack/sim.hpp"

#include <optional>
#include <random>
#include <vector>

namespace oracle {

/// Empty-aware complete linkage by exhaustive scanning: cluster-to-cluster distances are
/// recomputed from all member pairs at every step instead of being updated
/// incrementally.
std::vector<std::vector<std::size_t>> cluster_by_scanning(const gymtrack::DistanceMatrix& D,
                                                          double cutoff);

/// Minimum total cost over all injective row/column pairings of the smaller
/// side into the larger one. Unavailable entries may not be used; among
/// pairings the one with the most available pairs wins first.
struct BruteAssignment {
  int pairs = 0;
  double cost = 0.0;
};
BruteAssignment brute_force_assignment(const std::vector<std::vector<std::optional<double>>>& D);

/// Distance from p to the line through a and b.
double point_line_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                           const Eigen::Vector2d& b);

/// Camera at `eye` looking at `target`, built from an explicit axis triple
/// rather than the library's look_at.
gymtrack::CameraModel camera_facing(int id, const Eigen::Vector3d& eye, const Eigen::Vector3d& target,
                                    double focal = 1000.0);

/// Random camera on a sphere shell around the origin, looking near it.
gymtrack::CameraModel random_camera(int id, std::mt19937_64& rng);

}  // namespace oracle
