#include "bridgenav/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bridgenav/rng.hpp"

namespace bridgenav {

namespace {

Cov2 sample_covariance(std::span<const Point2> pts, const Point2& mean) {
  Cov2 c;
  for (const auto& p : pts) {
    const Point2 d = p - mean;
    c.xx += d.x * d.x;
    c.xy += d.x * d.y;
    c.yy += d.y * d.y;
  }
  const auto n = static_cast<double>(pts.size());
  return {c.xx / n, c.xy / n, c.yy / n};
}

Cov2 regularized(Cov2 c, double floor) { return {c.xx + floor, c.xy, c.yy + floor}; }

// k-means++ seeding followed by one hard nearest-seed assignment.
GmmModel initial_model(std::span<const Point2> pts, std::size_t k, std::uint64_t seed,
                       double reg_floor) {
  const std::size_t n = pts.size();
  Rng rng(seed);
  std::vector<std::size_t> seeds{rng.index(n)};
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  while (seeds.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(pts[i], pts[seeds.back()]));
      total += d2[i];
    }
    std::size_t pick = n - 1;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      for (std::size_t i = 0; i < n; ++i) {
        target -= d2[i];
        if (target < 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.index(n);
    }
    seeds.push_back(pick);
  }

  std::vector<std::vector<Point2>> groups(k);
  for (const auto& p : pts) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k; ++j) {
      const double d = squared_distance(p, pts[seeds[j]]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    groups[best].push_back(p);
  }

  const Point2 global_mean = centroid(pts);
  const Cov2 global = sample_covariance(pts, global_mean);
  const double shrink = 1.0 / static_cast<double>(k * k);
  const Cov2 fallback{global.xx * shrink, global.xy * shrink, global.yy * shrink};

  GmmModel model;
  for (std::size_t j = 0; j < k; ++j) {
    const auto& g = groups[j];
    const double weight = std::max<double>(static_cast<double>(g.size()), 1.0);
    model.weights.push_back(weight);
    if (g.size() >= 3) {
      const Point2 m = centroid(g);
      Cov2 c = sample_covariance(g, m);
      if (c.det() <= 1e-12 * (c.xx + c.yy) * (c.xx + c.yy)) c = fallback;
      model.means.push_back(m);
      model.covariances.push_back(regularized(c, reg_floor));
    } else {
      model.means.push_back(pts[seeds[j]]);
      model.covariances.push_back(regularized(fallback, reg_floor));
    }
  }
  const double wsum = std::accumulate(model.weights.begin(), model.weights.end(), 0.0);
  for (auto& w : model.weights) w /= wsum;
  return model;
}

std::vector<int> hard_labels(std::span<const double> resp, std::size_t n, std::size_t k) {
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = resp.data() + i * k;
    labels[i] = static_cast<int>(std::max_element(row, row + k) - row);
  }
  return labels;
}

// Points ordered by ascending maximum responsibility (least confident first).
std::vector<std::size_t> least_confident(std::span<const double> resp, std::size_t n,
                                         std::size_t k) {
  std::vector<double> conf(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = resp.data() + i * k;
    conf[i] = *std::max_element(row, row + k);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return conf[a] < conf[b]; });
  return order;
}

}  // namespace

ClusterSet em_gmm_fit(const PointCloud2D& cloud, std::size_t k, std::uint64_t seed,
                      const EmOptions& options) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "cluster count must be at least 1");
  if (cloud.size() < k) {
    throw Error(ErrorCode::TooFewPoints, std::to_string(cloud.size()) + " points for k=" +
                                             std::to_string(k));
  }
  const std::size_t n = cloud.size();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lex_less(cloud.points[a], cloud.points[b]);
  });
  std::vector<Point2> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = cloud.points[order[i]];

  const Cov2 global = sample_covariance(pts, centroid(pts));
  const double shrink = 1.0 / static_cast<double>(k * k);
  const Cov2 reseed_cov =
      regularized({global.xx * shrink, global.xy * shrink, global.yy * shrink}, options.reg_floor);
  // Responsibility mass below which a component counts as empty.
  const double empty_mass = 0.5 / static_cast<double>(n);

  ClusterSet out;
  GmmModel model = initial_model(pts, k, seed, options.reg_floor);
  std::vector<double> resp(n * k);
  std::vector<int> labels;
  const std::size_t max_reseeds = 2 * k;

  auto reseed = [&](const std::vector<std::size_t>& empty) {
    const auto order_conf = least_confident(resp, n, k);
    std::size_t next = 0;
    for (std::size_t j : empty) {
      model.means[j] = pts[order_conf[next++ % n]];
      model.covariances[j] = reseed_cov;
      model.weights[j] = 1.0 / static_cast<double>(k);
    }
    const double wsum = std::accumulate(model.weights.begin(), model.weights.end(), 0.0);
    for (auto& w : model.weights) w /= wsum;
    out.reseeds.push_back(out.log_likelihood.size());
  };

  double prev = -std::numeric_limits<double>::infinity();
  for (int iter = 0;; ++iter) {
    const double ll = kernels::estep(pts, model, resp, options.backend);
    out.log_likelihood.push_back(ll);
    out.iterations = iter;
    const bool fresh = !out.reseeds.empty() && out.reseeds.back() + 1 == out.log_likelihood.size();
    const bool done = !fresh && std::isfinite(prev) &&
                      ll - prev < options.tol_ll * std::max(std::abs(prev), 1e-12);
    if (done || iter >= options.max_iter) {
      out.converged = done;
      labels = hard_labels(resp, n, k);
      std::vector<std::size_t> counts(k, 0);
      for (int l : labels) ++counts[static_cast<std::size_t>(l)];
      std::vector<std::size_t> empty;
      for (std::size_t j = 0; j < k; ++j) {
        if (counts[j] == 0) empty.push_back(j);
      }
      if (empty.empty() || out.reseeds.size() >= max_reseeds || iter >= options.max_iter) break;
      reseed(empty);
      prev = -std::numeric_limits<double>::infinity();
      continue;
    }
    prev = ll;
    model = kernels::mstep(pts, resp, k, options.reg_floor, options.backend);
    std::vector<std::size_t> empty;
    for (std::size_t j = 0; j < k; ++j) {
      if (model.weights[j] < empty_mass) empty.push_back(j);
    }
    if (!empty.empty()) {
      if (out.reseeds.size() >= max_reseeds) {
        throw Error(ErrorCode::SingularCovariance, "components keep collapsing");
      }
      reseed(empty);
      prev = -std::numeric_limits<double>::infinity();
    }
  }

  // Last resort: hand empty clusters their least confident points directly.
  {
    std::vector<std::size_t> counts(k, 0);
    for (int l : labels) ++counts[static_cast<std::size_t>(l)];
    const auto order_conf = least_confident(resp, n, k);
    std::size_t next = 0;
    for (std::size_t j = 0; j < k; ++j) {
      while (counts[j] == 0 && next < n) {
        const std::size_t i = order_conf[next++];
        const auto from = static_cast<std::size_t>(labels[i]);
        if (counts[from] <= 1) continue;
        --counts[from];
        labels[i] = static_cast<int>(j);
        ++counts[j];
      }
    }
  }

  out.model = model;
  out.labels.assign(n, 0);
  out.members.assign(k, {});
  out.clusters.assign(k, {});
  for (std::size_t i = 0; i < n; ++i) out.labels[order[i]] = labels[i];
  for (std::size_t i = 0; i < n; ++i) {
    const auto l = static_cast<std::size_t>(out.labels[i]);
    out.members[l].push_back(i);
    out.clusters[l].push_back(cloud.points[i]);
  }
  return out;
}

}  // namespace bridgenav
