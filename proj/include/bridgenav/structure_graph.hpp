#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bridgenav/boundary.hpp"
#include "bridgenav/segmentation.hpp"

namespace bridgenav {

enum class VertexRole { Center, BorderMid, Endpoint };

std::string_view to_string(VertexRole role);
std::optional<VertexRole> parse_vertex_role(std::string_view name);

struct Vertex {
  int id = 0;
  Point2 position;
  VertexRole role = VertexRole::Center;
  int cluster_id = 0;  // for BorderMid, the lower-id cluster of the pair
};

struct Edge {
  int id = 0;
  int u = 0;
  int v = 0;
  double weight = 0.0;

  int other(int w) const { return w == u ? v : u; }
};

/// Undirected weighted multigraph. Ids are dense indices.
class StructureGraph {
 public:
  StructureGraph() = default;

  int add_vertex(Point2 position, VertexRole role, int cluster_id);
  /// Weight defaults to the Euclidean distance between the endpoints.
  int add_edge(int u, int v);
  int add_edge(int u, int v, double weight);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Vertex& vertex(int id) const;
  const Edge& edge(int id) const;
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  /// Incident edge ids in increasing order; a loop would appear twice.
  const std::vector<int>& incident(int v) const;
  std::size_t degree(int v) const { return incident(v).size(); }
  bool has_vertex(int id) const { return id >= 0 && static_cast<std::size_t>(id) < vertices_.size(); }
  /// True when every vertex is reachable from vertex 0 (vacuously for empty).
  bool connected() const;
  double total_weight() const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

struct GraphOptions {
  double d_min = 0.45;  // 1.5 x the default bar width
};

struct GraphBuild {
  StructureGraph graph;
  std::vector<int> center_of_cluster;
  bool connected = true;
};

GraphBuild build_graph(std::span<const Boundary> boundaries, const NeighborInfo& neighbors,
                       const GraphOptions& options = {});

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

struct ShortestPaths {
  int source = 0;
  std::vector<double> distance;    // kUnreachable if not reachable
  std::vector<int> predecessor;    // vertex, -1 for the source and unreachable
  std::vector<int> via_edge;       // edge into the vertex, -1 likewise

  bool reachable(int v) const { return distance[static_cast<std::size_t>(v)] < kUnreachable; }
  /// Edge ids from the source to `target`; empty when target == source.
  std::vector<int> edge_path(int target) const;
  std::vector<int> vertex_path(int target) const;
};

/// Ties on distance resolve to the smaller vertex id, and equal-cost
/// relaxations keep the first predecessor found, so the tree is deterministic.
ShortestPaths dijkstra(const StructureGraph& g, int source);

}  // namespace bridgenav
