#pragma once

#include <span>
#include <vector>

#include "bridgenav/geometry.hpp"

namespace bridgenav {

struct Boundary {
  int cluster_id = 0;
  Polygon2 polygon;
  Point2 center;  // centroid of the cluster points
  std::size_t sliding_factor = 0;  // neighbourhood size that produced the polygon
  bool convex_fallback = false;
};

inline constexpr std::size_t kDefaultSlidingFactor = 12;

/// Concave hull by k-nearest-neighbour gift wrapping, k = sliding_factor.
/// Grows k on failure; falls back to the convex hull.
Boundary estimate_boundary(std::span<const Point2> cluster, std::size_t sliding_factor,
                           int cluster_id = 0);

Point2 cluster_center(std::span<const Point2> cluster);

/// Point at half the arc length of the border polyline.
Point2 border_midpoint(std::span<const Point2> border);

}  // namespace bridgenav
