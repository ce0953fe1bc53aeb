#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bridgenav/boundary.hpp"
#include "bridgenav/gmm.hpp"

namespace bridgenav {

/// Symmetric neighbour relation between cluster boundaries plus the shared
/// border polylines.
class NeighborInfo {
 public:
  NeighborInfo() = default;
  explicit NeighborInfo(std::size_t count);

  std::size_t size() const { return count_; }
  bool neighbors(std::size_t i, std::size_t j) const { return matrix_[i * count_ + j] != 0; }
  /// Border between i and j (same polyline for (i, j) and (j, i)).
  const std::vector<Point2>& border(std::size_t i, std::size_t j) const {
    return borders_[i * count_ + j];
  }
  double border_length(std::size_t i, std::size_t j) const;
  std::size_t neighbor_count(std::size_t i) const;

  void set(std::size_t i, std::size_t j, bool is_neighbor, std::vector<Point2> border);

 private:
  std::size_t count_ = 0;
  std::vector<char> matrix_;
  std::vector<std::vector<Point2>> borders_;
};

/// Border of each pair = longest run of boundary-i vertices within
/// `eps_border` of boundary j (taken from whichever side is longer);
/// neighbours iff its length >= l_b.
NeighborInfo neighbor_matrix(std::span<const Boundary> boundaries, double l_b, double eps_border);

struct NeighborStats {
  std::size_t n_c = 0;
  std::size_t n_m = 0;
  std::size_t n_s = 0;
  double r = 0.0;
};

/// r = n_m / (n_m + n_s) + n_m / n_c.
double selection_ratio(std::size_t n_m, std::size_t n_s, std::size_t n_c);

struct SegmentOptions {
  std::size_t n_min = 3;
  std::size_t n_max = 8;
  double l_b = 0.15;
  std::size_t sliding_factor = kDefaultSlidingFactor;
  std::uint64_t seed = 0;
  // <= 0 selects eps_border_factor x mean nearest-neighbour spacing.
  double eps_border = 0.0;
  double eps_border_factor = 4.0;
  bool bridge_borders = true;
  EmOptions em;
};

struct CandidateResult {
  NeighborStats stats;
  bool valid = false;  // false if a cluster was degenerate or no cluster had neighbours
  std::vector<std::size_t> neighbor_counts;
};

struct SegmentationResult {
  ClusterSet clusters;
  std::size_t chosen_k = 0;
  std::vector<CandidateResult> candidates;
  std::vector<Boundary> boundaries;
  NeighborInfo neighbors;
  double eps_border = 0.0;
};

/// Cluster point sets extended with the midpoint of each point and its nearest
/// point of another cluster, when closer than `radius`. The midpoint goes to
/// both clusters, so neighbouring boundaries share vertices instead of leaving
/// a sampling gap between them.
std::vector<std::vector<Point2>> bridged_clusters(const ClusterSet& clusters, double radius);

/// Boundaries for every cluster of a fit; nullopt if any cluster is degenerate.
/// A positive `bridge_radius` wraps the bridged point sets; centers stay the
/// centroids of the original clusters.
std::optional<std::vector<Boundary>> cluster_boundaries(const ClusterSet& clusters,
                                                        std::size_t sliding_factor,
                                                        double bridge_radius = 0.0);

SegmentationResult segment_structure(const PointCloud2D& cloud, const SegmentOptions& options);

}  // namespace bridgenav
