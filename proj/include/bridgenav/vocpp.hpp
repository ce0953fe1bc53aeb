#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "bridgenav/structure_graph.hpp"

namespace bridgenav {

/// Base graph plus re-traversals of existing edges.
struct AugmentedGraph {
  StructureGraph base;
  std::vector<int> duplicated_edges;  // base edge ids, repeated per extra traversal

  /// Degree counting duplicates.
  std::size_t degree(int v) const;
  /// Base edges followed by duplicates.
  std::vector<int> edge_multiset() const;
  double total_weight() const;
};

struct InspectionRoute {
  std::vector<int> walk;             // vertex ids, walk.size() == traversed_edges.size() + 1
  std::vector<int> traversed_edges;  // base edge ids
  double total_cost = 0.0;
};

enum class ParityCase {
  NoOdd,       // (a) every vertex even
  BothOdd,     // (b)
  TargetOdd,   // (c) start even, target odd
  StartOdd,    // (d) start odd, target even
  BothEven,    // (e) both even, odd vertices elsewhere
  ClosedWalk,  // start == target with odd vertices present
};

std::string_view to_string(ParityCase c);

struct RoutePlan {
  InspectionRoute route;
  AugmentedGraph augmented;
  ParityCase parity_case = ParityCase::NoOdd;
};

/// Odd-degree vertex ids in increasing order.
std::vector<int> odd_vertices(const StructureGraph& g);

RoutePlan plan_route(const StructureGraph& g, int v_s, int v_t);

/// Hierholzer's algorithm, always leaving a vertex by its lowest unused
/// edge instance. Returns base edge ids in traversal order.
std::vector<int> eulerian_trail(const AugmentedGraph& g, int start);

/// Replays edge ids from `start`; throws InvalidArgument if an edge does not
/// touch the current vertex.
std::vector<int> replay_walk(const StructureGraph& g, int start, const std::vector<int>& edges);

/// Exact minimum cost of a walk from v_s to v_t covering every edge, with at
/// most `max_traversals` edge traversals. Graphs above 12 edges, or with no
/// covering walk within the limit, raise BudgetExceeded.
double brute_force_ocpp(const StructureGraph& g, int v_s, int v_t, std::size_t max_traversals);

inline constexpr std::size_t kBruteForceMaxEdges = 12;
inline constexpr std::size_t kExactMatchingMax = 16;

}  // namespace bridgenav
