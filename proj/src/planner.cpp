#include "bridgenav/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bridgenav/rng.hpp"

namespace bridgenav {

namespace {

constexpr double kPi = std::numbers::pi;

RobotConfig interpolate(const RobotConfig& a, const RobotConfig& b, double t) {
  const double dtheta = normalize_angle(b.theta - a.theta);
  return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t, a.theta + dtheta * t};
}

// Walks from a toward b at sub-steps of at most `sub` and returns the number
// of free sub-steps before the first blocked one, out of `steps`.
struct Extension {
  std::size_t free = 0;
  std::size_t steps = 0;
  RobotConfig last;
};

Extension extend(const RobotConfig& a, const RobotConfig& b, double rho, double sub,
                 std::span<const Boundary> boundaries, const RobotParams& params,
                 const PibcOptions& pibc) {
  const double d = config_distance(a, b, rho);
  Extension ext;
  ext.steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(d / sub)));
  ext.last = a;
  for (std::size_t i = 1; i <= ext.steps; ++i) {
    const RobotConfig c = interpolate(a, b, static_cast<double>(i) / static_cast<double>(ext.steps));
    if (!pibc_config_free(c, params, boundaries, pibc)) break;
    ext.last = c;
    ext.free = i;
  }
  return ext;
}

bool motion_free(const RobotConfig& a, const RobotConfig& b, double rho, double sub,
                 std::span<const Boundary> boundaries, const RobotParams& params,
                 const PibcOptions& pibc) {
  const Extension ext = extend(a, b, rho, sub, boundaries, params, pibc);
  return ext.free == ext.steps;
}

BoundingBox boundaries_box(std::span<const Boundary> boundaries) {
  std::vector<Point2> all;
  for (const auto& b : boundaries) {
    all.insert(all.end(), b.polygon.vertices().begin(), b.polygon.vertices().end());
  }
  return bounding_box(all);
}

// Slides the pose from `from` toward `toward`, at most `limit`, until it is free.
std::optional<RobotConfig> settle(const Point2& from, const Point2& toward, double theta,
                                  double step, double limit, std::span<const Boundary> boundaries,
                                  const RobotParams& params, const PibcOptions& pibc) {
  const double len = distance(from, toward);
  const Point2 dir = len > 0.0 ? (toward - from) / len : Point2{0.0, 0.0};
  limit = std::min(limit, len);
  for (double s = 0.0; s <= limit + 1e-12; s += step) {
    const Point2 p = from + dir * s;
    const RobotConfig c{p.x, p.y, theta};
    if (pibc_config_free(c, params, boundaries, pibc)) return c;
    if (len == 0.0) break;
  }
  return std::nullopt;
}

}  // namespace

double normalize_angle(double theta) {
  double t = std::remainder(theta, 2.0 * kPi);  // [-pi, pi]
  if (t <= -kPi) t += 2.0 * kPi;
  return t;
}

RobotConfig::RobotConfig(double x_, double y_, double theta_)
    : x(x_), y(y_), theta(normalize_angle(theta_)) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(theta_)) {
    throw Error(ErrorCode::InvalidArgument, "configuration must be finite");
  }
}

void RobotParams::validate() const {
  if (!(half_length > 0.0) || !(half_width > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "robot dimensions must be positive");
  }
  if (sample_points < 2) throw Error(ErrorCode::InvalidArgument, "sample_points must be at least 2");
}

std::vector<Point2> footprint_samples(const RobotConfig& c, const RobotParams& params) {
  params.validate();
  const double ct = std::cos(c.theta);
  const double st = std::sin(c.theta);
  auto world = [&](double lx, double ly) {
    return Point2{c.x + ct * lx - st * ly, c.y + st * lx + ct * ly};
  };
  const double hl = params.half_length;
  const double hw = params.half_width;
  const Point2 corners[4] = {{hl, -hw}, {hl, hw}, {-hl, hw}, {-hl, -hw}};
  const auto sp = params.sample_points;
  std::vector<Point2> out;
  out.reserve(4 * sp + 1);
  for (std::size_t k = 0; k < 4; ++k) {
    const Point2& a = corners[k];
    const Point2& b = corners[(k + 1) % 4];
    for (std::size_t i = 0; i < sp; ++i) {
      const Point2 local = a + (b - a) * (static_cast<double>(i) / static_cast<double>(sp));
      out.push_back(world(local.x, local.y));
    }
  }
  out.push_back({c.x, c.y});
  return out;
}

std::string_view to_string(PibcRule rule) {
  return rule == PibcRule::All ? "all" : "any";
}

std::optional<PibcRule> parse_pibc_rule(std::string_view name) {
  if (name == "all") return PibcRule::All;
  if (name == "any") return PibcRule::Any;
  return std::nullopt;
}

bool pibc_point(const Point2& p, const Boundary& boundary, std::size_t m_p, PibcRule rule) {
  if (m_p < 1) throw Error(ErrorCode::InvalidArgument, "m_p must be at least 1");
  const auto& v = boundary.polygon.vertices();
  const double d_s = distance(p, boundary.center);
  const std::size_t m = std::min(m_p, v.size());
  std::vector<std::pair<double, std::size_t>> near;
  near.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) near.emplace_back(squared_distance(p, v[i]), i);
  std::partial_sort(near.begin(), near.begin() + static_cast<long>(m), near.end());
  for (std::size_t j = 0; j < m; ++j) {
    const bool closer = d_s < distance(v[near[j].second], boundary.center);
    if (rule == PibcRule::All && !closer) return false;
    if (rule == PibcRule::Any && closer) return true;
  }
  return rule == PibcRule::All;
}

bool pibc_config_free(const RobotConfig& c, const RobotParams& params,
                      std::span<const Boundary> boundaries, const PibcOptions& options) {
  if (boundaries.empty()) throw Error(ErrorCode::InvalidArgument, "no boundaries");
  if (options.n < 1) throw Error(ErrorCode::InvalidArgument, "n must be at least 1");
  const std::size_t n = std::min(options.n, boundaries.size());
  std::vector<std::pair<double, std::size_t>> order(boundaries.size());
  for (const Point2& s : footprint_samples(c, params)) {
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
      order[i] = {squared_distance(s, boundaries[i].center), i};
    }
    std::partial_sort(order.begin(), order.begin() + static_cast<long>(n), order.end());
    bool inside = false;
    for (std::size_t j = 0; j < n && !inside; ++j) {
      inside = pibc_point(s, boundaries[order[j].second], options.m_p, options.rule);
    }
    if (!inside) return false;
  }
  return true;
}

bool footprint_inside_oracle(const RobotConfig& c, const RobotParams& params,
                             std::span<const Boundary> boundaries) {
  for (const Point2& s : footprint_samples(c, params)) {
    const bool inside = std::any_of(boundaries.begin(), boundaries.end(), [&](const Boundary& b) {
      return point_in_polygon_raycast(s, b.polygon);
    });
    if (!inside) return false;
  }
  return true;
}

double config_distance(const RobotConfig& a, const RobotConfig& b, double rho) {
  const double dtheta = normalize_angle(b.theta - a.theta);
  return std::sqrt((b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y) +
                   rho * rho * dtheta * dtheta);
}

PlannedPath rrt_plan(const RobotConfig& start, const RobotConfig& goal,
                     std::span<const Boundary> boundaries, const RobotParams& params,
                     std::uint64_t seed, const RrtOptions& options) {
  params.validate();
  if (!(options.step_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "step_max must be positive");
  if (!pibc_config_free(start, params, boundaries, options.pibc)) {
    throw Error(ErrorCode::InvalidEndpoint, "start configuration is not free");
  }
  if (!pibc_config_free(goal, params, boundaries, options.pibc)) {
    throw Error(ErrorCode::InvalidEndpoint, "goal configuration is not free");
  }
  const double rho = params.half_length;
  const double sub = options.step_max / 4.0;
  PlannedPath out;
  if (config_distance(start, goal, rho) <= options.goal_tolerance) {
    out.configs.push_back(start);
    return out;
  }

  const BoundingBox box = boundaries_box(boundaries);
  Rng rng(seed);
  std::vector<RobotConfig> nodes{start};
  std::vector<std::size_t> parent{0};
  auto finish = [&](std::size_t last) {
    std::vector<RobotConfig> rev{goal};
    for (std::size_t i = last;; i = parent[i]) {
      rev.push_back(nodes[i]);
      if (i == 0) break;
    }
    out.configs.assign(rev.rbegin(), rev.rend());
    return out;
  };

  auto try_goal = [&](std::size_t i) {
    return config_distance(nodes[i], goal, rho) <= options.step_max &&
           motion_free(nodes[i], goal, rho, sub, boundaries, params, options.pibc);
  };
  if (try_goal(0)) return finish(0);

  for (std::size_t iter = 0; iter < options.budget; ++iter) {
    RobotConfig q = goal;
    if (rng.uniform() >= options.goal_bias) {
      q = RobotConfig(rng.uniform(box.min.x, box.max.x), rng.uniform(box.min.y, box.max.y),
                      rng.uniform(-kPi, kPi));
    }
    std::size_t near = 0;
    double best = kUnreachable;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double d = config_distance(nodes[i], q, rho);
      if (d < best) {
        best = d;
        near = i;
      }
    }
    if (best <= 0.0) continue;
    const RobotConfig target =
        best > options.step_max ? interpolate(nodes[near], q, options.step_max / best) : q;
    // Keep the free part of a blocked extension.
    const Extension ext = extend(nodes[near], target, rho, sub, boundaries, params, options.pibc);
    if (ext.free == 0) continue;
    nodes.push_back(ext.last);
    parent.push_back(near);
    if (try_goal(nodes.size() - 1)) return finish(nodes.size() - 1);
  }
  throw Error(ErrorCode::BudgetExhausted,
              "no path within " + std::to_string(options.budget) + " iterations");
}

RoutePaths plan_along_route(const InspectionRoute& route, const StructureGraph& g,
                            std::span<const Boundary> boundaries, const RobotParams& params,
                            std::uint64_t seed, const RrtOptions& options) {
  RoutePaths out;
  if (route.traversed_edges.empty()) return out;
  if (route.walk.size() != route.traversed_edges.size() + 1) {
    throw Error(ErrorCode::InvalidArgument, "route walk and edge list do not match");
  }
  std::vector<char> failed(g.edge_count(), 0);
  const double settle_step = options.step_max / 4.0;
  const double settle_limit = options.settle_distance > 0.0 ? options.settle_distance
                                                            : params.half_length + params.half_width;
  for (std::size_t i = 0; i < route.traversed_edges.size(); ++i) {
    const int id = route.traversed_edges[i];
    if (failed[static_cast<std::size_t>(id)]) continue;
    const Point2 a = g.vertex(route.walk[i]).position;
    const Point2 b = g.vertex(route.walk[i + 1]).position;
    const double theta = std::atan2(b.y - a.y, b.x - a.x);
    auto fail = [&](std::string reason) {
      failed[static_cast<std::size_t>(id)] = 1;
      out.untraversable.push_back({id, std::move(reason)});
    };
    const auto start = settle(a, b, theta, settle_step, settle_limit, boundaries, params, options.pibc);
    const auto goal = settle(b, a, theta, settle_step, settle_limit, boundaries, params, options.pibc);
    if (!start || !goal) {
      fail("no free pose near the edge ends");
      continue;
    }
    try {
      PlannedPath p = rrt_plan(*start, *goal, boundaries, params, mix_seed(seed, i), options);
      p.edge_id = id;
      out.paths.push_back(std::move(p));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BudgetExhausted && e.code() != ErrorCode::InvalidEndpoint) throw;
      fail(e.what());
    }
  }
  return out;
}

}  // namespace bridgenav
