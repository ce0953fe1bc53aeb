#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "bridgenav/error.hpp"

namespace bridgenav {

/// Coincidence tolerance for points, in meters.
inline constexpr double kEpsLen = 1e-6;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Point2() = default;
  constexpr Point2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
  constexpr Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
  constexpr Point2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Point2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Point2& operator+=(const Point2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr bool operator==(const Point2&) const = default;

  double norm() const { return std::hypot(x, y); }
  constexpr double squared_norm() const { return x * x + y * y; }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline double distance(const Point2& a, const Point2& b) { return (a - b).norm(); }
constexpr double squared_distance(const Point2& a, const Point2& b) {
  return (a - b).squared_norm();
}
// Lexicographic (x, then y).
constexpr bool lex_less(const Point2& a, const Point2& b) {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

struct Segment2 {
  Point2 a;
  Point2 b;

  double length() const { return distance(a, b); }
};

// Infinite line through `origin` with unit `direction`.
class Line2 {
 public:
  Line2(Point2 origin, Point2 direction);

  const Point2& origin() const { return origin_; }
  const Point2& direction() const { return direction_; }
  Point2 at(double t) const { return origin_ + direction_ * t; }
  double parameter_of(const Point2& p) const { return dot(p - origin_, direction_); }
  // Positive on the left of the direction.
  double signed_distance(const Point2& p) const { return cross(direction_, p - origin_); }

 private:
  Point2 origin_;
  Point2 direction_;
};

/// Simple polygon with counter-clockwise vertex order. Construction
/// reorients clockwise input and rejects degenerate or self-intersecting rings.
class Polygon2 {
 public:
  explicit Polygon2(std::vector<Point2> vertices);

  const std::vector<Point2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point2& operator[](std::size_t i) const { return vertices_[i]; }
  Segment2 edge(std::size_t i) const {
    return {vertices_[i], vertices_[(i + 1) % vertices_.size()]};
  }
  double area() const;
  double perimeter() const;

 private:
  std::vector<Point2> vertices_;
};

struct PcaFit {
  Line2 line;
  double major_variance;
  double minor_variance;
  bool isotropic;  // eigenvalues equal; direction fell back to (1, 0)
};

struct BoundingBox {
  Point2 min;
  Point2 max;
};

double signed_area(std::span<const Point2> ring);
bool is_simple_ring(std::span<const Point2> ring);
Point2 centroid(std::span<const Point2> points);
BoundingBox bounding_box(std::span<const Point2> points);

PcaFit pca_fit(std::span<const Point2> points);
Line2 pca_principal_line(std::span<const Point2> points);

/// Crossings of an infinite line with the polygon's edges, deduplicated and
/// sorted by the parameter along the line.
std::vector<Point2> line_polygon_intersections(const Line2& line, const Polygon2& poly);

/// Even-odd ray cast. Points within kEpsLen of an edge count as inside.
bool point_in_polygon_raycast(const Point2& p, const Polygon2& poly);

double polyline_length(std::span<const Point2> points);
/// Point at arc length `s` along the polyline, clamped to its ends.
Point2 point_along_polyline(std::span<const Point2> points, double s);

double distance_to_segment(const Point2& p, const Segment2& s);
double distance_to_boundary(const Point2& p, const Polygon2& poly);

/// Proper or touching intersection of two closed segments.
bool segments_intersect(const Segment2& s, const Segment2& t);

/// Andrew's monotone chain; CCW without collinear points.
std::vector<Point2> convex_hull(std::span<const Point2> points);

}  // namespace bridgenav
