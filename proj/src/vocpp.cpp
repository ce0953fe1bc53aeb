#include "bridgenav/vocpp.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <queue>
#include <string>
#include <tuple>

namespace bridgenav {

namespace {

void require_vertex(const StructureGraph& g, int v) {
  if (!g.has_vertex(v)) throw Error(ErrorCode::MissingVertex, "vertex " + std::to_string(v));
}

// Dijkstra trees computed on demand.
class PathCache {
 public:
  explicit PathCache(const StructureGraph& g) : g_(g) {}

  const ShortestPaths& from(int v) {
    auto it = trees_.find(v);
    if (it == trees_.end()) it = trees_.emplace(v, dijkstra(g_, v)).first;
    return it->second;
  }
  double dist(int a, int b) { return from(a).distance[static_cast<std::size_t>(b)]; }

 private:
  const StructureGraph& g_;
  std::map<int, ShortestPaths> trees_;
};

// Minimum-weight perfect matching of `ids` under `cost`; pairs as index pairs.
std::vector<std::pair<int, int>> match_exact(const std::vector<int>& ids, PathCache& paths) {
  const std::size_t m = ids.size();
  const std::size_t full = (std::size_t{1} << m) - 1;
  std::vector<double> best(full + 1, kUnreachable);
  std::vector<int> partner(full + 1, -1);
  best[0] = 0.0;
  for (std::size_t mask = 1; mask <= full; ++mask) {
    if (std::popcount(mask) % 2 != 0) continue;
    const int i = std::countr_zero(mask);
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < m; ++j) {
      if (!(mask >> j & 1U)) continue;
      const std::size_t rest = mask & ~(std::size_t{1} << i) & ~(std::size_t{1} << j);
      const double c = best[rest] + paths.dist(ids[static_cast<std::size_t>(i)], ids[j]);
      if (c < best[mask]) {
        best[mask] = c;
        partner[mask] = static_cast<int>(j);
      }
    }
  }
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t mask = full; mask != 0;) {
    const int i = std::countr_zero(mask);
    const int j = partner[mask];
    pairs.emplace_back(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]);
    mask &= ~(std::size_t{1} << i) & ~(std::size_t{1} << j);
  }
  return pairs;
}

// Repeatedly pairs the globally closest remaining vertices.
std::vector<std::pair<int, int>> match_greedy(std::vector<int> ids, PathCache& paths) {
  std::vector<std::pair<int, int>> pairs;
  while (!ids.empty()) {
    std::size_t bi = 0;
    std::size_t bj = 1;
    double bd = kUnreachable;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        const double d = paths.dist(ids[i], ids[j]);
        if (d < bd) {
          bd = d;
          bi = i;
          bj = j;
        }
      }
    }
    pairs.emplace_back(ids[bi], ids[bj]);
    ids.erase(ids.begin() + static_cast<long>(bj));
    ids.erase(ids.begin() + static_cast<long>(bi));
  }
  return pairs;
}

std::vector<int> without(const std::vector<int>& ids, std::initializer_list<int> drop) {
  std::vector<int> out;
  for (int v : ids) {
    if (std::find(drop.begin(), drop.end(), v) == drop.end()) out.push_back(v);
  }
  return out;
}

// Closest odd vertex to `from`, skipping `exclude`; ties go to the smaller id.
int nearest_odd(int from, int exclude, const std::vector<int>& odd, PathCache& paths) {
  int best = -1;
  double bd = kUnreachable;
  for (int v : odd) {
    if (v == exclude) continue;
    const double d = paths.dist(from, v);
    if (d < bd) {
      bd = d;
      best = v;
    }
  }
  return best;
}

}  // namespace

std::string_view to_string(ParityCase c) {
  switch (c) {
    case ParityCase::NoOdd: return "no_odd";
    case ParityCase::BothOdd: return "both_odd";
    case ParityCase::TargetOdd: return "target_odd";
    case ParityCase::StartOdd: return "start_odd";
    case ParityCase::BothEven: return "both_even";
    case ParityCase::ClosedWalk: return "closed_walk";
  }
  return "?";
}

std::size_t AugmentedGraph::degree(int v) const {
  std::size_t d = base.degree(v);
  for (int e : duplicated_edges) {
    const Edge& edge = base.edge(e);
    d += (edge.u == v) + (edge.v == v);
  }
  return d;
}

std::vector<int> AugmentedGraph::edge_multiset() const {
  std::vector<int> out;
  out.reserve(base.edge_count() + duplicated_edges.size());
  for (const auto& e : base.edges()) out.push_back(e.id);
  out.insert(out.end(), duplicated_edges.begin(), duplicated_edges.end());
  return out;
}

double AugmentedGraph::total_weight() const {
  double s = base.total_weight();
  for (int e : duplicated_edges) s += base.edge(e).weight;
  return s;
}

std::vector<int> odd_vertices(const StructureGraph& g) {
  std::vector<int> out;
  for (const auto& v : g.vertices()) {
    if (g.degree(v.id) % 2 == 1) out.push_back(v.id);
  }
  return out;
}

RoutePlan plan_route(const StructureGraph& g, int v_s, int v_t) {
  require_vertex(g, v_s);
  require_vertex(g, v_t);
  if (!g.connected()) throw Error(ErrorCode::Disconnected, "graph is not connected");

  RoutePlan plan;
  plan.augmented.base = g;
  auto& dup = plan.augmented.duplicated_edges;
  PathCache paths(g);
  auto duplicate_path = [&](int a, int b) {
    for (int e : paths.from(a).edge_path(b)) dup.push_back(e);
  };

  const std::vector<int> odd = odd_vertices(g);
  auto is_odd = [&](int v) { return std::binary_search(odd.begin(), odd.end(), v); };
  std::vector<int> remaining;
  if (odd.empty()) {
    plan.parity_case = ParityCase::NoOdd;
    if (v_s != v_t) duplicate_path(v_s, v_t);
  } else if (v_s == v_t) {
    plan.parity_case = ParityCase::ClosedWalk;
    remaining = odd;
  } else if (is_odd(v_s) && is_odd(v_t)) {
    plan.parity_case = ParityCase::BothOdd;
    remaining = without(odd, {v_s, v_t});
  } else if (is_odd(v_t)) {
    plan.parity_case = ParityCase::TargetOdd;
    const int c = nearest_odd(v_s, v_t, odd, paths);
    duplicate_path(v_s, c);
    remaining = without(odd, {v_t, c});
  } else if (is_odd(v_s)) {
    plan.parity_case = ParityCase::StartOdd;
    const int c = nearest_odd(v_t, v_s, odd, paths);
    duplicate_path(v_t, c);
    remaining = without(odd, {v_s, c});
  } else {
    plan.parity_case = ParityCase::BothEven;
    int c1 = -1;
    int c2 = -1;
    double bd = kUnreachable;
    for (int a : odd) {
      for (int b : odd) {
        if (a == b) continue;
        const double d = paths.dist(v_s, a) + paths.dist(v_t, b);
        if (d < bd) {
          bd = d;
          c1 = a;
          c2 = b;
        }
      }
    }
    duplicate_path(v_s, c1);
    duplicate_path(v_t, c2);
    remaining = without(odd, {c1, c2});
  }

  const auto pairs = remaining.size() <= kExactMatchingMax ? match_exact(remaining, paths)
                                                           : match_greedy(remaining, paths);
  for (const auto& [a, b] : pairs) duplicate_path(a, b);

  auto& route = plan.route;
  route.traversed_edges = eulerian_trail(plan.augmented, v_s);
  route.walk = replay_walk(g, v_s, route.traversed_edges);
  for (int e : route.traversed_edges) route.total_cost += g.edge(e).weight;
  if (route.walk.back() != v_t) {
    throw Error(ErrorCode::NotEulerian, "trail does not end at the target vertex");
  }
  return plan;
}

std::vector<int> eulerian_trail(const AugmentedGraph& g, int start) {
  require_vertex(g.base, start);
  const std::vector<int> instances = g.edge_multiset();
  const std::size_t nv = g.base.vertex_count();
  if (instances.empty()) return {};

  std::vector<std::vector<int>> incident(nv);  // instance indices, increasing
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const Edge& e = g.base.edge(instances[i]);
    incident[static_cast<std::size_t>(e.u)].push_back(static_cast<int>(i));
    incident[static_cast<std::size_t>(e.v)].push_back(static_cast<int>(i));
  }
  std::vector<int> odd;
  for (std::size_t v = 0; v < nv; ++v) {
    if (incident[v].size() % 2 == 1) odd.push_back(static_cast<int>(v));
  }
  if (odd.size() != 0 && odd.size() != 2) {
    throw Error(ErrorCode::NotEulerian, std::to_string(odd.size()) + " odd vertices");
  }
  if (odd.size() == 2 && start != odd[0] && start != odd[1]) {
    throw Error(ErrorCode::NotEulerian, "start vertex " + std::to_string(start) + " is not odd");
  }
  if (incident[static_cast<std::size_t>(start)].empty()) {
    throw Error(ErrorCode::NotEulerian, "start vertex has no edges");
  }

  std::vector<char> used(instances.size(), 0);
  std::vector<std::size_t> cursor(nv, 0);
  // Stack of (vertex, instance used to arrive).
  std::vector<std::pair<int, int>> stack{{start, -1}};
  std::vector<int> reversed;
  while (!stack.empty()) {
    const int v = stack.back().first;
    auto& inc = incident[static_cast<std::size_t>(v)];
    auto& cur = cursor[static_cast<std::size_t>(v)];
    while (cur < inc.size() && used[static_cast<std::size_t>(inc[cur])]) ++cur;
    if (cur == inc.size()) {
      if (stack.back().second >= 0) reversed.push_back(stack.back().second);
      stack.pop_back();
      continue;
    }
    const int inst = inc[cur];
    used[static_cast<std::size_t>(inst)] = 1;
    stack.emplace_back(g.base.edge(instances[static_cast<std::size_t>(inst)]).other(v), inst);
  }
  if (reversed.size() != instances.size()) {
    throw Error(ErrorCode::NotEulerian, "edges are not connected");
  }
  std::vector<int> trail;
  trail.reserve(reversed.size());
  for (auto it = reversed.rbegin(); it != reversed.rend(); ++it) {
    trail.push_back(instances[static_cast<std::size_t>(*it)]);
  }
  return trail;
}

std::vector<int> replay_walk(const StructureGraph& g, int start, const std::vector<int>& edges) {
  require_vertex(g, start);
  std::vector<int> walk{start};
  for (int id : edges) {
    const Edge& e = g.edge(id);
    const int v = walk.back();
    if (e.u != v && e.v != v) {
      throw Error(ErrorCode::InvalidArgument,
                  "edge " + std::to_string(id) + " does not touch vertex " + std::to_string(v));
    }
    walk.push_back(e.other(v));
  }
  return walk;
}

double brute_force_ocpp(const StructureGraph& g, int v_s, int v_t, std::size_t max_traversals) {
  require_vertex(g, v_s);
  require_vertex(g, v_t);
  const std::size_t m = g.edge_count();
  if (m > kBruteForceMaxEdges) {
    throw Error(ErrorCode::BudgetExceeded,
                std::to_string(m) + " edges exceeds the limit of " + std::to_string(kBruteForceMaxEdges));
  }
  const std::size_t full = (std::size_t{1} << m) - 1;
  const std::size_t nv = g.vertex_count();

  // Lexicographic (cost, steps) search over (vertex, covered set). When the
  // cheapest walk is too long, fall back to tracking steps in the state.
  using Item = std::tuple<double, std::size_t, int, std::size_t>;
  {
    std::vector<double> best(nv * (full + 1), kUnreachable);
    std::vector<std::size_t> steps(nv * (full + 1), 0);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    best[static_cast<std::size_t>(v_s) * (full + 1)] = 0.0;
    queue.emplace(0.0, 0, v_s, 0);
    while (!queue.empty()) {
      const auto [c, s, v, mask] = queue.top();
      queue.pop();
      const std::size_t key = static_cast<std::size_t>(v) * (full + 1) + mask;
      if (c > best[key] || (c == best[key] && s > steps[key])) continue;
      if (mask == full && v == v_t) {
        if (s <= max_traversals) return c;
        break;
      }
      for (int e : g.incident(v)) {
        const Edge& edge = g.edges()[static_cast<std::size_t>(e)];
        const int w = edge.other(v);
        const std::size_t nm = mask | (std::size_t{1} << e);
        const std::size_t nk = static_cast<std::size_t>(w) * (full + 1) + nm;
        const double nc = c + edge.weight;
        if (nc < best[nk] || (nc == best[nk] && s + 1 < steps[nk])) {
          best[nk] = nc;
          steps[nk] = s + 1;
          queue.emplace(nc, s + 1, w, nm);
        }
      }
    }
  }

  const std::size_t layers = max_traversals + 1;
  std::vector<double> best(nv * (full + 1) * layers, kUnreachable);
  auto index = [&](int v, std::size_t mask, std::size_t s) {
    return (static_cast<std::size_t>(v) * (full + 1) + mask) * layers + s;
  };
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  best[index(v_s, 0, 0)] = 0.0;
  queue.emplace(0.0, 0, v_s, 0);
  while (!queue.empty()) {
    const auto [c, s, v, mask] = queue.top();
    queue.pop();
    if (c > best[index(v, mask, s)]) continue;
    if (mask == full && v == v_t) return c;
    if (s == max_traversals) continue;
    for (int e : g.incident(v)) {
      const Edge& edge = g.edges()[static_cast<std::size_t>(e)];
      const int w = edge.other(v);
      const std::size_t nm = mask | (std::size_t{1} << e);
      const double nc = c + edge.weight;
      if (nc < best[index(w, nm, s + 1)]) {
        best[index(w, nm, s + 1)] = nc;
        queue.emplace(nc, s + 1, w, nm);
      }
    }
  }
  throw Error(ErrorCode::BudgetExceeded,
              "no covering walk within " + std::to_string(max_traversals) + " traversals");
}

}  // namespace bridgenav
