#include "bridgenav/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "bridgenav/spatial_index.hpp"

namespace bridgenav {

namespace {

std::vector<Point2> dedup(std::span<const Point2> cluster) {
  std::vector<Point2> pts(cluster.begin(), cluster.end());
  std::sort(pts.begin(), pts.end(), lex_less);
  std::vector<Point2> out;
  out.reserve(pts.size());
  for (const auto& p : pts) {
    if (!out.empty() && distance(out.back(), p) <= kEpsLen) continue;
    out.push_back(p);
  }
  return out;
}

// Counter-clockwise angle from `from` to `to`, in (0, 2*pi].
double ccw_angle(const Point2& from, const Point2& to) {
  double a = std::atan2(cross(from, to), dot(from, to));
  if (a <= 0.0) a += 2.0 * std::numbers::pi;
  return a;
}

bool contains_all(const Polygon2& poly, std::span<const Point2> pts) {
  for (const auto& p : pts) {
    if (!point_in_polygon_raycast(p, poly)) return false;
  }
  return true;
}

// One gift-wrapping pass with neighbourhood size k. The walk keeps the
// region on its left, so the ring comes out counter-clockwise.
std::optional<Polygon2> wrap(const std::vector<Point2>& pts, const PointGrid& grid, std::size_t k) {
  const std::size_t n = pts.size();
  std::size_t first = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (pts[i].y < pts[first].y || (pts[i].y == pts[first].y && pts[i].x < pts[first].x)) {
      first = i;
    }
  }
  std::vector<char> active(n, 1);
  active[first] = 0;
  std::vector<std::size_t> hull{first};
  std::size_t current = first;
  Point2 back{-1.0, 0.0};

  while (true) {
    if (hull.size() == 3) active[first] = 1;
    auto cand = grid.nearest(pts[current], k, [&](std::size_t i) { return active[i] != 0; });
    if (cand.empty()) return std::nullopt;
    std::vector<std::pair<double, std::size_t>> ranked;
    ranked.reserve(cand.size());
    for (std::size_t c : cand) ranked.emplace_back(ccw_angle(back, pts[c] - pts[current]), c);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    std::optional<std::size_t> chosen;
    for (const auto& [angle, c] : ranked) {
      const Segment2 edge{pts[current], pts[c]};
      bool crosses = false;
      // Skip the edge ending at `current`, and the first edge when closing.
      const std::size_t last = hull.size() >= 2 ? hull.size() - 2 : 0;
      for (std::size_t i = 0; i + 1 < hull.size() && !crosses; ++i) {
        if (i == last) continue;
        if (c == first && i == 0) continue;
        crosses = segments_intersect(edge, {pts[hull[i]], pts[hull[i + 1]]});
      }
      if (!crosses) {
        chosen = c;
        break;
      }
    }
    if (!chosen) return std::nullopt;
    if (*chosen == first) break;
    back = pts[current] - pts[*chosen];
    current = *chosen;
    active[current] = 0;
    hull.push_back(current);
    if (hull.size() > n) return std::nullopt;
  }
  if (hull.size() < 3) return std::nullopt;

  std::vector<Point2> ring;
  ring.reserve(hull.size());
  for (std::size_t i : hull) ring.push_back(pts[i]);
  if (signed_area(ring) <= 0.0) return std::nullopt;
  try {
    Polygon2 poly(std::move(ring));
    if (!contains_all(poly, pts)) return std::nullopt;
    return poly;
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

Point2 cluster_center(std::span<const Point2> cluster) { return centroid(cluster); }

Point2 border_midpoint(std::span<const Point2> border) {
  if (border.empty()) throw Error(ErrorCode::TooFewPoints, "empty border");
  return point_along_polyline(border, 0.5 * polyline_length(border));
}

Boundary estimate_boundary(std::span<const Point2> cluster, std::size_t sliding_factor,
                           int cluster_id) {
  if (sliding_factor < 3) {
    throw Error(ErrorCode::InvalidArgument, "sliding_factor must be at least 3");
  }
  if (cluster.size() < 3) {
    throw Error(ErrorCode::TooFewPoints, "boundary needs at least 3 points");
  }
  const Point2 center = cluster_center(cluster);
  const auto pts = dedup(cluster);
  const auto hull = convex_hull(pts);
  if (hull.size() < 3 || std::abs(signed_area(hull)) <= kEpsLen * kEpsLen) {
    throw Error(ErrorCode::TooFewPoints, "cluster is degenerate (collinear or coincident)");
  }
  if (pts.size() == 3) return {cluster_id, Polygon2(hull), center, 3, false};

  const BoundingBox box = bounding_box(pts);
  const double area = std::max((box.max.x - box.min.x) * (box.max.y - box.min.y), 1e-12);
  const PointGrid grid(pts, 2.0 * std::sqrt(area / static_cast<double>(pts.size())));
  for (std::size_t k = std::min(sliding_factor, pts.size() - 1); k < pts.size(); ++k) {
    if (auto poly = wrap(pts, grid, k)) return {cluster_id, std::move(*poly), center, k, false};
  }
  return {cluster_id, Polygon2(hull), center, pts.size(), true};
}

}  // namespace bridgenav
