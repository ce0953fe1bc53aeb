#include "bridgenav/geometry.hpp"

#include <algorithm>
#include <numbers>

namespace bridgenav {

namespace {

// Sign of the orientation of (a, b, c). Near-collinear triples, within
// rounding of the operand lengths, count as collinear.
int orientation(const Point2& a, const Point2& b, const Point2& c) {
  const Point2 u = b - a;
  const Point2 w = c - a;
  const double v = cross(u, w);
  const double band = 1e-12 * u.norm() * w.norm();
  if (v > band) return 1;
  if (v < -band) return -1;
  return 0;
}

bool on_segment(const Point2& a, const Point2& b, const Point2& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

}  // namespace

Line2::Line2(Point2 origin, Point2 direction) : origin_(origin) {
  const double n = direction.norm();
  if (!(n > 0.0) || !std::isfinite(n) || !origin.finite()) {
    throw Error(ErrorCode::DegenerateInput, "line direction must be finite and non-zero");
  }
  direction_ = direction / n;
}

Polygon2::Polygon2(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) {
    throw Error(ErrorCode::DegenerateInput, "polygon needs at least 3 vertices");
  }
  for (const auto& v : vertices_) {
    if (!v.finite()) throw Error(ErrorCode::DegenerateInput, "polygon vertex is not finite");
  }
  const double a = signed_area(vertices_);
  if (std::abs(a) <= kEpsLen * kEpsLen) {
    throw Error(ErrorCode::DegenerateInput, "polygon has zero area");
  }
  if (a < 0.0) std::reverse(vertices_.begin(), vertices_.end());
  if (!is_simple_ring(vertices_)) {
    throw Error(ErrorCode::DegenerateInput, "polygon is not simple");
  }
}

double Polygon2::area() const { return signed_area(vertices_); }

double Polygon2::perimeter() const {
  double total = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) total += edge(i).length();
  return total;
}

double signed_area(std::span<const Point2> ring) {
  double twice = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) twice += cross(ring[i], ring[(i + 1) % n]);
  return 0.5 * twice;
}

bool segments_intersect(const Segment2& s, const Segment2& t) {
  const int o1 = orientation(s.a, s.b, t.a);
  const int o2 = orientation(s.a, s.b, t.b);
  const int o3 = orientation(t.a, t.b, s.a);
  const int o4 = orientation(t.a, t.b, s.b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(s.a, s.b, t.a)) return true;
  if (o2 == 0 && on_segment(s.a, s.b, t.b)) return true;
  if (o3 == 0 && on_segment(t.a, t.b, s.a)) return true;
  if (o4 == 0 && on_segment(t.a, t.b, s.b)) return true;
  return false;
}

bool is_simple_ring(std::span<const Point2> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (squared_distance(ring[i], ring[(i + 1) % n]) <= kEpsLen * kEpsLen) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Segment2 e{ring[i], ring[(i + 1) % n]};
    // Adjacent edges may only share their common vertex: reject folding back.
    const Point2& next = ring[(i + 2) % n];
    if (orientation(e.a, e.b, next) == 0 && dot(e.b - e.a, next - e.b) < 0.0) return false;
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const Segment2 f{ring[j], ring[(j + 1) % n]};
      if (segments_intersect(e, f)) return false;
    }
  }
  return true;
}

Point2 centroid(std::span<const Point2> points) {
  if (points.empty()) throw Error(ErrorCode::TooFewPoints, "centroid of an empty set");
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& p : points) {
    sx += p.x;
    sy += p.y;
  }
  const auto n = static_cast<double>(points.size());
  return {sx / n, sy / n};
}

BoundingBox bounding_box(std::span<const Point2> points) {
  if (points.empty()) throw Error(ErrorCode::TooFewPoints, "bounding box of an empty set");
  BoundingBox box{points.front(), points.front()};
  for (const auto& p : points) {
    box.min.x = std::min(box.min.x, p.x);
    box.min.y = std::min(box.min.y, p.y);
    box.max.x = std::max(box.max.x, p.x);
    box.max.y = std::max(box.max.y, p.y);
  }
  return box;
}

PcaFit pca_fit(std::span<const Point2> points) {
  if (points.size() < 2) {
    throw Error(ErrorCode::DegenerateInput, "principal line needs at least two points");
  }
  const Point2 c = centroid(points);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& p : points) {
    const Point2 d = p - c;
    sxx += d.x * d.x;
    sxy += d.x * d.y;
    syy += d.y * d.y;
  }
  const auto n = static_cast<double>(points.size());
  sxx /= n;
  sxy /= n;
  syy /= n;
  const double trace = sxx + syy;
  if (trace <= kEpsLen * kEpsLen) {
    throw Error(ErrorCode::DegenerateInput, "all points coincide");
  }
  const double gap = std::hypot(sxx - syy, 2.0 * sxy);
  const double major = 0.5 * (trace + gap);
  const double minor = 0.5 * (trace - gap);
  if (gap <= 1e-12 * trace) {
    return {Line2(c, {1.0, 0.0}), major, minor, true};
  }
  const double angle = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  Point2 dir{std::cos(angle), std::sin(angle)};
  // Sign convention: first non-zero component positive.
  if (dir.x < 0.0 || (dir.x == 0.0 && dir.y < 0.0)) dir = dir * -1.0;
  return {Line2(c, dir), major, minor, false};
}

Line2 pca_principal_line(std::span<const Point2> points) { return pca_fit(points).line; }

std::vector<Point2> line_polygon_intersections(const Line2& line, const Polygon2& poly) {
  std::vector<std::pair<double, Point2>> hits;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Segment2 e = poly.edge(i);
    double sa = line.signed_distance(e.a);
    double sb = line.signed_distance(e.b);
    if (std::abs(sa) <= kEpsLen) sa = 0.0;
    if (std::abs(sb) <= kEpsLen) sb = 0.0;
    if (sa == 0.0) hits.emplace_back(line.parameter_of(e.a), e.a);
    if (sb == 0.0) hits.emplace_back(line.parameter_of(e.b), e.b);
    if ((sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0)) {
      const double t = sa / (sa - sb);
      const Point2 p = e.a + (e.b - e.a) * t;
      hits.emplace_back(line.parameter_of(p), p);
    }
  }
  std::sort(hits.begin(), hits.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });
  std::vector<Point2> out;
  for (const auto& [t, p] : hits) {
    if (!out.empty() && distance(out.back(), p) <= kEpsLen) continue;
    out.push_back(p);
  }
  return out;
}

double distance_to_segment(const Point2& p, const Segment2& s) {
  const Point2 d = s.b - s.a;
  const double len2 = d.squared_norm();
  if (len2 == 0.0) return distance(p, s.a);
  const double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
  return distance(p, s.a + d * t);
}

double distance_to_boundary(const Point2& p, const Polygon2& poly) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    best = std::min(best, distance_to_segment(p, poly.edge(i)));
  }
  return best;
}

bool point_in_polygon_raycast(const Point2& p, const Polygon2& poly) {
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if (distance_to_segment(p, {v[j], v[i]}) <= kEpsLen) return true;
    if ((v[i].y > p.y) != (v[j].y > p.y)) {
      const double x_cross = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

double polyline_length(std::span<const Point2> points) {
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) total += distance(points[i - 1], points[i]);
  return total;
}

Point2 point_along_polyline(std::span<const Point2> points, double s) {
  if (points.empty()) throw Error(ErrorCode::TooFewPoints, "empty polyline");
  if (s <= 0.0) return points.front();
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double len = distance(points[i - 1], points[i]);
    if (s <= len) {
      if (len == 0.0) return points[i];
      return points[i - 1] + (points[i] - points[i - 1]) * (s / len);
    }
    s -= len;
  }
  return points.back();
}

std::vector<Point2> convex_hull(std::span<const Point2> points) {
  std::vector<Point2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const Point2& p = pts[i];
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace bridgenav
