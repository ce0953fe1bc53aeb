#include "doctest.h"

#include "bridgenav/segmentation.hpp"
#include "bridgenav/structure_graph.hpp"
#include "bridgenav/synth.hpp"
#include "support.hpp"

using namespace bridgenav;
using bridgenav::testing::make_graph;

namespace {

std::size_t role_count(const StructureGraph& g, VertexRole role) {
  std::size_t n = 0;
  for (const auto& v : g.vertices()) n += v.role == role ? 1 : 0;
  return n;
}

struct Built {
  std::vector<Boundary> boundaries;
  GraphBuild build;
};

Built truth_graph(const synth::StructureSpec& spec, double d_min) {
  const auto fx = synth::generate(spec);
  Built out{testing::truth_boundaries(fx, 0.01), {}};
  const auto nb = neighbor_matrix(out.boundaries, 0.05, 1e-3);
  out.build = build_graph(out.boundaries, nb, {d_min});
  return out;
}

Built segmented_graph(synth::Shape shape, std::uint64_t seed) {
  synth::StructureSpec spec;
  spec.shape = shape;
  spec.seed = seed;
  SegmentOptions o;
  o.seed = seed;
  auto seg = segment_structure(synth::generate(spec).cloud, o);
  Built out{seg.boundaries, build_graph(seg.boundaries, seg.neighbors)};
  return out;
}

void check_invariants(const Built& b, double d_min) {
  const auto& g = b.build.graph;
  for (const auto& v : g.vertices()) {
    if (v.role == VertexRole::BorderMid) CHECK(g.degree(v.id) >= 2);
    if (v.role == VertexRole::Endpoint) {
      CHECK(g.degree(v.id) == 1);
      const auto& poly = b.boundaries[static_cast<std::size_t>(v.cluster_id)].polygon;
      CHECK(point_in_polygon_raycast(v.position, poly));
    }
  }
  for (const auto& e : g.edges()) {
    const double d = distance(g.vertex(e.u).position, g.vertex(e.v).position);
    CHECK(e.weight == doctest::Approx(d).epsilon(1e-9));
  }
  for (const auto& a : g.vertices()) {
    for (const auto& c : g.vertices()) {
      if (a.id >= c.id) continue;
      const bool exempt = a.role != VertexRole::Endpoint && c.role != VertexRole::Endpoint;
      if (!exempt) CHECK(distance(a.position, c.position) > d_min);
    }
  }
}

}  // namespace

TEST_CASE("graph container basics") {
  StructureGraph g;
  const int a = g.add_vertex({0, 0}, VertexRole::Center, 0);
  const int b = g.add_vertex({3, 4}, VertexRole::Endpoint, 0);
  const int e = g.add_edge(a, b);
  CHECK(g.edge(e).weight == 5.0);
  CHECK(g.degree(a) == 1);
  CHECK(g.edge(e).other(a) == b);
  CHECK_THROWS_AS(g.add_edge(a, a), Error);
  CHECK_THROWS_AS(g.add_edge(a, 7), Error);
  CHECK_THROWS_AS(g.add_edge(a, b, 0.0), Error);
  CHECK_THROWS_AS(g.add_vertex({std::nan(""), 0}, VertexRole::Center, 0), Error);
  CHECK(g.connected());
  g.add_vertex({9, 9}, VertexRole::Center, 1);
  CHECK_FALSE(g.connected());
  CHECK(parse_vertex_role("border_mid") == VertexRole::BorderMid);
}

TEST_CASE("dijkstra on small graphs") {
  const auto path = make_graph(3, {{0, 1, 1.0}, {1, 2, 2.0}});
  const auto sp = dijkstra(path, 0);
  CHECK(sp.distance[2] == 3.0);
  CHECK(sp.predecessor[2] == 1);
  CHECK(sp.vertex_path(2) == std::vector<int>{0, 1, 2});

  const auto tri = make_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 3.0}});
  const auto st = dijkstra(tri, 0);
  CHECK(st.distance[2] == 2.0);
  CHECK(st.edge_path(2) == std::vector<int>{0, 1});

  auto split = make_graph(3, {{0, 1, 1.0}});
  const auto sd = dijkstra(split, 0);
  CHECK(sd.distance[2] == kUnreachable);
  CHECK_FALSE(sd.reachable(2));
  CHECK_THROWS_AS(sd.edge_path(2), Error);
  CHECK_THROWS_AS(dijkstra(split, 5), Error);
}

TEST_CASE("long-bar cross gives centers, border mids and endpoints") {
  synth::StructureSpec spec;
  const auto b = truth_graph(spec, 0.3);
  const auto& g = b.build.graph;
  CHECK(role_count(g, VertexRole::Center) == 5);
  CHECK(role_count(g, VertexRole::BorderMid) == 4);
  CHECK(role_count(g, VertexRole::Endpoint) == 4);
  CHECK(g.edge_count() == 12);
  CHECK(b.build.connected);
  check_invariants(b, 0.3);
}

TEST_CASE("short-bar cross gets no endpoints") {
  synth::StructureSpec spec;
  spec.bar_lengths = {0.3};
  const auto b = truth_graph(spec, 0.45);
  CHECK(role_count(b.build.graph, VertexRole::Endpoint) == 0);
  CHECK(b.build.graph.edge_count() == 8);
  check_invariants(b, 0.45);
}

TEST_CASE("single cluster graph") {
  const std::vector<Boundary> one{testing::rect_boundary({0, 0}, {2, 0.3}, 0.02)};
  const auto built = build_graph(one, NeighborInfo(1), {0.45});
  const auto& g = built.graph;
  CHECK(role_count(g, VertexRole::Center) == 1);
  CHECK(role_count(g, VertexRole::Endpoint) <= 2);
  CHECK(g.edge_count() <= 2);
  CHECK(g.edge_count() == role_count(g, VertexRole::Endpoint));
}

TEST_CASE("segmented fixtures satisfy the graph invariants") {
  for (auto shape : {synth::Shape::Cross, synth::Shape::T, synth::Shape::L}) {
    const auto b = segmented_graph(shape, 0);
    CHECK(b.build.connected);
    check_invariants(b, GraphOptions{}.d_min);
  }
}
