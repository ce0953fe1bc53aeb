#pragma once

#include <vector>

#include "bridgenav/geometry.hpp"

namespace bridgenav {

// Ground-plane projection of a depth cloud. `intensity` is either empty or
// parallel to `points`.
struct PointCloud2D {
  std::vector<Point2> points;
  std::vector<double> intensity;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

}  // namespace bridgenav
