#pragma once

#include <functional>
#include <span>
#include <vector>

#include "bridgenav/geometry.hpp"

namespace bridgenav {

// Uniform bucket grid over a fixed point set.
class PointGrid {
 public:
  PointGrid(std::span<const Point2> points, double cell_size);

  /// Indices of the k points nearest to `q` among those accepted by `keep`,
  /// ordered by distance (ties by index).
  std::vector<std::size_t> nearest(const Point2& q, std::size_t k,
                                   const std::function<bool(std::size_t)>& keep = {}) const;

  /// Indices of all points within `radius` of `q`, in increasing order.
  std::vector<std::size_t> within(const Point2& q, double radius) const;

  const std::vector<Point2>& points() const { return points_; }

 private:
  std::vector<Point2> points_;
  Point2 origin_;
  double cell_ = 1.0;
  long cols_ = 1;
  long rows_ = 1;
  std::vector<std::vector<std::size_t>> buckets_;

  long col_of(double x) const;
  long row_of(double y) const;
};

/// Mean distance from each point to its nearest distinct neighbour.
double mean_nearest_neighbor_spacing(std::span<const Point2> points);

}  // namespace bridgenav
