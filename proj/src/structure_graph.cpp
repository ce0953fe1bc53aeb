#include "bridgenav/structure_graph.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <string>

namespace bridgenav {

std::string_view to_string(VertexRole role) {
  switch (role) {
    case VertexRole::Center: return "center";
    case VertexRole::BorderMid: return "border_mid";
    case VertexRole::Endpoint: return "endpoint";
  }
  return "?";
}

std::optional<VertexRole> parse_vertex_role(std::string_view name) {
  for (auto r : {VertexRole::Center, VertexRole::BorderMid, VertexRole::Endpoint}) {
    if (name == to_string(r)) return r;
  }
  return std::nullopt;
}

int StructureGraph::add_vertex(Point2 position, VertexRole role, int cluster_id) {
  if (!position.finite()) throw Error(ErrorCode::DegenerateInput, "vertex position is not finite");
  const int id = static_cast<int>(vertices_.size());
  vertices_.push_back({id, position, role, cluster_id});
  adjacency_.emplace_back();
  return id;
}

int StructureGraph::add_edge(int u, int v) {
  return add_edge(u, v, distance(vertex(u).position, vertex(v).position));
}

int StructureGraph::add_edge(int u, int v, double weight) {
  if (!has_vertex(u)) throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(u));
  if (!has_vertex(v)) throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(v));
  if (u == v) throw Error(ErrorCode::InvalidArgument, "edge endpoints must differ");
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw Error(ErrorCode::InvalidArgument, "edge weight must be positive and finite");
  }
  const int id = static_cast<int>(edges_.size());
  edges_.push_back({id, u, v, weight});
  adjacency_[static_cast<std::size_t>(u)].push_back(id);
  adjacency_[static_cast<std::size_t>(v)].push_back(id);
  return id;
}

const Vertex& StructureGraph::vertex(int id) const {
  if (!has_vertex(id)) throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(id));
  return vertices_[static_cast<std::size_t>(id)];
}

const Edge& StructureGraph::edge(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= edges_.size()) {
    throw Error(ErrorCode::InvalidArgument, "unknown edge " + std::to_string(id));
  }
  return edges_[static_cast<std::size_t>(id)];
}

const std::vector<int>& StructureGraph::incident(int v) const {
  if (!has_vertex(v)) throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(v));
  return adjacency_[static_cast<std::size_t>(v)];
}

bool StructureGraph::connected() const {
  if (vertices_.empty()) return true;
  std::vector<char> seen(vertices_.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int e : adjacency_[static_cast<std::size_t>(v)]) {
      const int w = edges_[static_cast<std::size_t>(e)].other(v);
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == vertices_.size();
}

double StructureGraph::total_weight() const {
  double s = 0.0;
  for (const auto& e : edges_) s += e.weight;
  return s;
}

GraphBuild build_graph(std::span<const Boundary> boundaries, const NeighborInfo& neighbors,
                       const GraphOptions& options) {
  if (boundaries.empty()) throw Error(ErrorCode::InvalidArgument, "no boundaries");
  if (neighbors.size() != boundaries.size()) {
    throw Error(ErrorCode::InvalidArgument, "neighbour matrix does not match the boundaries");
  }
  if (!(options.d_min >= 0.0)) throw Error(ErrorCode::InvalidArgument, "d_min must be non-negative");
  const std::size_t n = boundaries.size();
  GraphBuild out;
  StructureGraph& g = out.graph;

  for (std::size_t i = 0; i < n; ++i) {
    out.center_of_cluster.push_back(
        g.add_vertex(boundaries[i].center, VertexRole::Center, static_cast<int>(i)));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!neighbors.neighbors(i, j)) continue;
      const int mid = g.add_vertex(border_midpoint(neighbors.border(i, j)), VertexRole::BorderMid,
                                   static_cast<int>(i));
      g.add_edge(out.center_of_cluster[i], mid);
      g.add_edge(mid, out.center_of_cluster[j]);
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const PcaFit fit = pca_fit(boundaries[i].polygon.vertices());
    if (fit.isotropic) continue;
    for (const Point2& p : line_polygon_intersections(fit.line, boundaries[i].polygon)) {
      const bool far = std::all_of(g.vertices().begin(), g.vertices().end(), [&](const Vertex& v) {
        return distance(v.position, p) > options.d_min;
      });
      if (!far) continue;
      const int end = g.add_vertex(p, VertexRole::Endpoint, static_cast<int>(i));
      g.add_edge(out.center_of_cluster[i], end);
    }
  }
  out.connected = g.connected();
  return out;
}

std::vector<int> ShortestPaths::edge_path(int target) const {
  if (!reachable(target)) throw Error(ErrorCode::Disconnected, "vertex " + std::to_string(target) + " is unreachable");
  std::vector<int> path;
  for (int v = target; v != source; v = predecessor[static_cast<std::size_t>(v)]) {
    path.push_back(via_edge[static_cast<std::size_t>(v)]);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<int> ShortestPaths::vertex_path(int target) const {
  if (!reachable(target)) throw Error(ErrorCode::Disconnected, "vertex " + std::to_string(target) + " is unreachable");
  std::vector<int> path;
  for (int v = target; v != -1; v = predecessor[static_cast<std::size_t>(v)]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

ShortestPaths dijkstra(const StructureGraph& g, int source) {
  if (!g.has_vertex(source)) throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(source));
  const std::size_t n = g.vertex_count();
  ShortestPaths sp;
  sp.source = source;
  sp.distance.assign(n, kUnreachable);
  sp.predecessor.assign(n, -1);
  sp.via_edge.assign(n, -1);
  std::vector<char> done(n, 0);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  sp.distance[static_cast<std::size_t>(source)] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (done[static_cast<std::size_t>(v)]) continue;
    done[static_cast<std::size_t>(v)] = 1;
    for (int e : g.incident(v)) {
      const Edge& edge = g.edges()[static_cast<std::size_t>(e)];
      const int w = edge.other(v);
      const double nd = d + edge.weight;
      if (nd < sp.distance[static_cast<std::size_t>(w)]) {
        sp.distance[static_cast<std::size_t>(w)] = nd;
        sp.predecessor[static_cast<std::size_t>(w)] = v;
        sp.via_edge[static_cast<std::size_t>(w)] = e;
        queue.emplace(nd, w);
      }
    }
  }
  return sp;
}

}  // namespace bridgenav
