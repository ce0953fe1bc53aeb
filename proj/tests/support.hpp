#pragma once

#include <cmath>
#include <numbers>
#include <tuple>
#include <vector>

#include "bridgenav/boundary.hpp"
#include "bridgenav/planner.hpp"
#include "bridgenav/rng.hpp"
#include "bridgenav/segmentation.hpp"
#include "bridgenav/structure_graph.hpp"
#include "bridgenav/synth.hpp"

namespace bridgenav::testing {

inline StructureGraph make_graph(int n, const std::vector<std::tuple<int, int, double>>& edges) {
  StructureGraph g;
  for (int i = 0; i < n; ++i) {
    g.add_vertex({std::cos(2.0 * std::numbers::pi * i / n), std::sin(2.0 * std::numbers::pi * i / n)},
                 VertexRole::Center, i);
  }
  for (const auto& [u, v, w] : edges) g.add_edge(u, v, w);
  return g;
}

inline StructureGraph path3() { return make_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}}); }
inline StructureGraph cycle4() {
  return make_graph(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 0, 1.0}});
}
inline StructureGraph k4() {
  return make_graph(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}, {1, 2, 1.0}, {1, 3, 1.0}, {2, 3, 1.0}});
}
// Two triangles sharing vertex 0.
inline StructureGraph bowtie() {
  return make_graph(5, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}, {0, 3, 1.0}, {3, 4, 1.0}, {4, 0, 1.0}});
}
// 3 columns x 2 rows, unit spacing.
inline StructureGraph grid3x2() {
  return make_graph(6, {{0, 1, 1.0}, {1, 2, 1.0}, {3, 4, 1.0}, {4, 5, 1.0}, {0, 3, 1.0}, {1, 4, 1.0},
                        {2, 5, 1.0}});
}

/// Random connected graph: a random spanning tree plus extra edges (parallel
/// edges allowed), weights in [0.5, 3).
inline StructureGraph random_connected_graph(Rng& rng, int max_vertices, int max_edges) {
  const int n = 2 + static_cast<int>(rng.index(static_cast<std::size_t>(max_vertices - 1)));
  std::vector<std::tuple<int, int, double>> edges;
  for (int v = 1; v < n; ++v) {
    edges.emplace_back(static_cast<int>(rng.index(static_cast<std::size_t>(v))), v, rng.uniform(0.5, 3.0));
  }
  const int extra = static_cast<int>(rng.index(static_cast<std::size_t>(max_edges - (n - 1) + 1)));
  for (int e = 0; e < extra; ++e) {
    const int u = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
    int v = static_cast<int>(rng.index(static_cast<std::size_t>(n - 1)));
    if (v >= u) ++v;
    edges.emplace_back(u, v, rng.uniform(0.5, 3.0));
  }
  return make_graph(n, edges);
}

inline std::vector<Point2> densify(const Polygon2& poly, double step) {
  std::vector<Point2> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto e = poly.edge(i);
    const int n = std::max(1, static_cast<int>(std::ceil(e.length() / step)));
    for (int k = 0; k < n; ++k) out.push_back(e.a + (e.b - e.a) * (static_cast<double>(k) / n));
  }
  return out;
}

inline Boundary boundary_of(std::vector<Point2> ring, Point2 center, int id = 0) {
  return {id, Polygon2(std::move(ring)), center, 3, false};
}

/// Axis-aligned rectangle boundary sampled every `step`, centered on its centroid.
inline Boundary rect_boundary(Point2 lo, Point2 hi, double step, int id = 0) {
  const Polygon2 rect({lo, {hi.x, lo.y}, hi, {lo.x, hi.y}});
  return boundary_of(densify(rect, step), (lo + hi) * 0.5, id);
}

/// r(theta) = 1 + 0.3 cos(5 theta) around the origin.
inline Boundary star_boundary(std::size_t vertices) {
  std::vector<Point2> ring;
  for (std::size_t i = 0; i < vertices; ++i) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(vertices);
    const double r = 1.0 + 0.3 * std::cos(5.0 * t);
    ring.push_back({r * std::cos(t), r * std::sin(t)});
  }
  return boundary_of(std::move(ring), {0.0, 0.0});
}

inline double mean_vertex_spacing(const Polygon2& poly) {
  return poly.perimeter() / static_cast<double>(poly.size());
}

/// Ground-truth region boundaries of a fixture, sampled every `step`, with
/// centers at the centroid of each region's points.
inline std::vector<Boundary> truth_boundaries(const synth::LabeledCloud& fixture, double step) {
  std::vector<Boundary> out;
  for (const auto& r : fixture.true_regions) {
    std::vector<Point2> pts;
    for (std::size_t i = 0; i < fixture.cloud.size(); ++i) {
      if (fixture.true_label[i] == r.id) pts.push_back(fixture.cloud.points[i]);
    }
    out.push_back({r.id, Polygon2(densify(r.polygon, step)), centroid(pts), 3, false});
  }
  return out;
}

/// Cross with one bar (the fourth) narrower than the robot footprint.
inline synth::StructureSpec narrow_bar_spec() {
  synth::StructureSpec spec;
  spec.shape = synth::Shape::Cross;
  spec.bar_lengths = {0.3};
  spec.bar_widths = {0.3, 0.3, 0.3, 0.1};
  return spec;
}

inline double jaccard(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::size_t both = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++both;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - both;
  return uni == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(uni);
}

struct Agreement {
  std::size_t tested = 0;
  std::size_t agree = 0;
  std::size_t permissive = 0;  // PIBC inside, oracle outside

  double rate() const { return tested == 0 ? 1.0 : static_cast<double>(agree) / static_cast<double>(tested); }
};

/// PIBC against the ray-cast oracle on random points at least
/// `margin_factor` x the mean vertex spacing away from the boundary.
inline Agreement pibc_agreement(const Boundary& b, std::size_t samples, std::uint64_t seed,
                                double margin_factor = 2.0, std::size_t m_p = 5) {
  const double margin = margin_factor * mean_vertex_spacing(b.polygon);
  const auto box = bounding_box(b.polygon.vertices());
  const double pad = 0.5 * std::max(box.max.x - box.min.x, box.max.y - box.min.y);
  Rng rng(seed);
  Agreement out;
  while (out.tested < samples) {
    const Point2 p{rng.uniform(box.min.x - pad, box.max.x + pad), rng.uniform(box.min.y - pad, box.max.y + pad)};
    if (distance_to_boundary(p, b.polygon) < margin) continue;
    const bool oracle = point_in_polygon_raycast(p, b.polygon);
    const bool pibc = pibc_point(p, b, m_p);
    ++out.tested;
    out.agree += oracle == pibc ? 1 : 0;
    out.permissive += pibc && !oracle ? 1 : 0;
  }
  return out;
}

inline Boundary regular_polygon_boundary(std::size_t corners, double radius, double step) {
  std::vector<Point2> ring;
  for (std::size_t i = 0; i < corners; ++i) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(corners);
    ring.push_back({radius * std::cos(t), radius * std::sin(t)});
  }
  return boundary_of(densify(Polygon2(ring), step), {0.0, 0.0});
}

/// Convex fixtures: square, rectangle, hexagon, triangle.
inline std::vector<Boundary> convex_fixtures() {
  return {rect_boundary({0, 0}, {1, 1}, 0.025), rect_boundary({0, 0}, {2, 1}, 0.025),
          regular_polygon_boundary(6, 1.0, 0.025), regular_polygon_boundary(3, 1.0, 0.025)};
}

}  // namespace bridgenav::testing
