#include "bridgenav/segmentation.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <limits>
#include <set>

#include "bridgenav/spatial_index.hpp"

namespace bridgenav {

namespace {

double distance_to_region(const Point2& p, const Polygon2& poly) {
  if (point_in_polygon_raycast(p, poly)) return 0.0;
  return distance_to_boundary(p, poly);
}

bool boxes_within(const BoundingBox& a, const BoundingBox& b, double eps) {
  return a.min.x - eps <= b.max.x && b.min.x - eps <= a.max.x && a.min.y - eps <= b.max.y &&
         b.min.y - eps <= a.max.y;
}

// Longest cyclic run of `from` vertices lying within eps of `to`.
std::vector<Point2> longest_border_run(const Polygon2& from, const Polygon2& to, double eps) {
  const auto& v = from.vertices();
  const std::size_t h = v.size();
  std::vector<char> near(h);
  std::size_t count = 0;
  for (std::size_t i = 0; i < h; ++i) {
    near[i] = distance_to_region(v[i], to) <= eps ? 1 : 0;
    count += near[i];
  }
  if (count == 0) return {};
  if (count == h) {
    std::vector<Point2> ring(v.begin(), v.end());
    ring.push_back(v.front());
    return ring;
  }
  std::size_t start = 0;
  while (near[start]) ++start;  // a vertex outside the border
  std::vector<Point2> best;
  double best_len = -1.0;
  std::vector<Point2> run;
  auto flush = [&] {
    if (run.empty()) return;
    const double len = polyline_length(run);
    if (len > best_len) {
      best_len = len;
      best = run;
    }
    run.clear();
  };
  for (std::size_t step = 1; step <= h; ++step) {
    const std::size_t i = (start + step) % h;
    if (near[i]) {
      run.push_back(v[i]);
    } else {
      flush();
    }
  }
  flush();
  return best;
}

}  // namespace

NeighborInfo::NeighborInfo(std::size_t count)
    : count_(count), matrix_(count * count, 0), borders_(count * count) {}

double NeighborInfo::border_length(std::size_t i, std::size_t j) const {
  return polyline_length(border(i, j));
}

std::size_t NeighborInfo::neighbor_count(std::size_t i) const {
  std::size_t c = 0;
  for (std::size_t j = 0; j < count_; ++j) c += neighbors(i, j) ? 1 : 0;
  return c;
}

void NeighborInfo::set(std::size_t i, std::size_t j, bool is_neighbor, std::vector<Point2> border) {
  if (i == j) throw Error(ErrorCode::InvalidArgument, "a cluster is not its own neighbour");
  matrix_[i * count_ + j] = matrix_[j * count_ + i] = is_neighbor ? 1 : 0;
  borders_[j * count_ + i] = border;
  borders_[i * count_ + j] = std::move(border);
}

NeighborInfo neighbor_matrix(std::span<const Boundary> boundaries, double l_b, double eps_border) {
  const std::size_t n = boundaries.size();
  NeighborInfo info(n);
  std::vector<BoundingBox> boxes;
  boxes.reserve(n);
  for (const auto& b : boundaries) boxes.push_back(bounding_box(b.polygon.vertices()));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!boxes_within(boxes[i], boxes[j], eps_border)) continue;
      auto ij = longest_border_run(boundaries[i].polygon, boundaries[j].polygon, eps_border);
      auto ji = longest_border_run(boundaries[j].polygon, boundaries[i].polygon, eps_border);
      auto& border = polyline_length(ji) > polyline_length(ij) ? ji : ij;
      const bool is_neighbor = !border.empty() && polyline_length(border) >= l_b;
      info.set(i, j, is_neighbor, std::move(border));
    }
  }
  return info;
}

double selection_ratio(std::size_t n_m, std::size_t n_s, std::size_t n_c) {
  if (n_c < 1) throw Error(ErrorCode::InvalidArgument, "n_c must be at least 1");
  if (n_s > n_m) throw Error(ErrorCode::InvalidArgument, "n_s must not exceed n_m");
  if (n_m + n_s == 0) throw Error(ErrorCode::UndefinedRatio, "n_m + n_s = 0");
  const auto m = static_cast<double>(n_m);
  return m / static_cast<double>(n_m + n_s) + m / static_cast<double>(n_c);
}

std::vector<std::vector<Point2>> bridged_clusters(const ClusterSet& clusters, double radius) {
  std::vector<Point2> points(clusters.labels.size());
  for (std::size_t j = 0; j < clusters.k(); ++j) {
    for (std::size_t i = 0; i < clusters.members[j].size(); ++i) {
      points[clusters.members[j][i]] = clusters.clusters[j][i];
    }
  }
  auto out = clusters.clusters;
  if (!(radius > 0.0) || points.empty()) return out;
  const PointGrid grid(points, radius);
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const int a = clusters.labels[i];
    std::size_t best = i;
    double best_d = radius * radius;
    for (std::size_t q : grid.within(points[i], radius)) {
      if (clusters.labels[q] == a) continue;
      const double d = squared_distance(points[i], points[q]);
      if (d < best_d || (d == best_d && best == i)) {
        best_d = d;
        best = q;
      }
    }
    if (best != i) pairs.emplace(std::min(i, best), std::max(i, best));
  }
  for (const auto& [i, q] : pairs) {
    const Point2 mid = (points[i] + points[q]) * 0.5;
    out[static_cast<std::size_t>(clusters.labels[i])].push_back(mid);
    out[static_cast<std::size_t>(clusters.labels[q])].push_back(mid);
  }
  return out;
}

std::optional<std::vector<Boundary>> cluster_boundaries(const ClusterSet& clusters,
                                                        std::size_t sliding_factor,
                                                        double bridge_radius) {
  const std::size_t k = clusters.k();
  const auto sets = bridge_radius > 0.0 ? bridged_clusters(clusters, bridge_radius)
                                        : clusters.clusters;
  std::vector<std::optional<Boundary>> slots(k);
  std::vector<char> failed(k, 0);
  const long count = static_cast<long>(k);
#ifdef BRIDGENAV_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long j = 0; j < count; ++j) {
    const auto u = static_cast<std::size_t>(j);
    try {
      slots[u] = estimate_boundary(sets[u], sliding_factor, static_cast<int>(u));
      slots[u]->center = cluster_center(clusters.clusters[u]);
    } catch (const Error&) {
      failed[u] = 1;
    }
  }
  std::vector<Boundary> out;
  out.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    if (failed[j]) return std::nullopt;
    out.push_back(std::move(*slots[j]));
  }
  return out;
}

SegmentationResult segment_structure(const PointCloud2D& cloud, const SegmentOptions& options) {
  if (options.n_min < 2 || options.n_max < options.n_min) {
    throw Error(ErrorCode::InvalidArgument, "cluster range must satisfy n_max >= n_min >= 2");
  }
  if (cloud.size() < options.n_max) {
    throw Error(ErrorCode::TooFewPoints, std::to_string(cloud.size()) + " points for n_max=" +
                                             std::to_string(options.n_max));
  }
  const double eps_border = options.eps_border > 0.0
                                ? options.eps_border
                                : options.eps_border_factor * mean_nearest_neighbor_spacing(cloud.points);

  struct Slot {
    std::optional<ClusterSet> fit;
    std::optional<std::vector<Boundary>> boundaries;
    NeighborInfo neighbors;
    CandidateResult result;
  };
  const std::size_t count = options.n_max - options.n_min + 1;
  std::vector<Slot> slots(count);
  std::vector<std::exception_ptr> errors(count);

  const long loop = static_cast<long>(count);
#ifdef BRIDGENAV_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long c = 0; c < loop; ++c) {
    const auto u = static_cast<std::size_t>(c);
    try {
      Slot& s = slots[u];
      const std::size_t k = options.n_min + u;
      s.fit = em_gmm_fit(cloud, k, options.seed, options.em);
      s.result.stats.n_c = k;
      s.boundaries = cluster_boundaries(*s.fit, options.sliding_factor,
                                        options.bridge_borders ? eps_border : 0.0);
      if (!s.boundaries) continue;
      s.neighbors = neighbor_matrix(*s.boundaries, options.l_b, eps_border);
      for (std::size_t j = 0; j < k; ++j) s.result.neighbor_counts.push_back(s.neighbors.neighbor_count(j));
      auto sorted = s.result.neighbor_counts;
      std::sort(sorted.begin(), sorted.end(), std::greater<>());
      s.result.stats.n_m = sorted[0];
      s.result.stats.n_s = sorted.size() > 1 ? sorted[1] : 0;
      if (s.result.stats.n_m + s.result.stats.n_s == 0) continue;
      s.result.stats.r = selection_ratio(s.result.stats.n_m, s.result.stats.n_s, k);
      s.result.valid = true;
    } catch (...) {
      errors[u] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::optional<std::size_t> best;
  for (std::size_t u = 0; u < count; ++u) {
    if (!slots[u].result.valid) continue;
    if (!best || slots[u].result.stats.r > slots[*best].result.stats.r) best = u;
  }
  if (!best) {
    throw Error(ErrorCode::DegenerateInput, "no cluster count produced neighbouring clusters");
  }

  SegmentationResult out;
  out.eps_border = eps_border;
  out.chosen_k = options.n_min + *best;
  for (const auto& s : slots) out.candidates.push_back(s.result);
  // Refitting with the chosen count and the same seed reproduces this fit exactly.
  out.clusters = std::move(*slots[*best].fit);
  out.boundaries = std::move(*slots[*best].boundaries);
  out.neighbors = std::move(slots[*best].neighbors);
  return out;
}

}  // namespace bridgenav
