#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bridgenav/boundary.hpp"
#include "bridgenav/structure_graph.hpp"
#include "bridgenav/vocpp.hpp"

namespace bridgenav {

/// Wraps an angle to (-pi, pi].
double normalize_angle(double theta);

struct RobotConfig {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  RobotConfig() = default;
  RobotConfig(double x_, double y_, double theta_);

  Point2 position() const { return {x, y}; }
  bool operator==(const RobotConfig&) const = default;
};

struct RobotParams {
  double half_length = 0.1;
  double half_width = 0.06;
  std::size_t sample_points = 5;  // per footprint side

  void validate() const;
};

/// Perimeter samples (corners included) followed by the center;
/// 4 * sample_points + 1 points.
std::vector<Point2> footprint_samples(const RobotConfig& c, const RobotParams& params);

/// All: p is closer to the center than every one of its m_p nearest boundary
/// vertices. Any: closer than at least one of them (more permissive).
enum class PibcRule { All, Any };

std::string_view to_string(PibcRule rule);
std::optional<PibcRule> parse_pibc_rule(std::string_view name);

struct PibcOptions {
  std::size_t n = 3;    // candidate clusters per sample
  std::size_t m_p = 5;  // closest boundary vertices per cluster
  PibcRule rule = PibcRule::All;
};

/// Center-closest test against the m_p boundary vertices closest to p.
bool pibc_point(const Point2& p, const Boundary& boundary, std::size_t m_p,
                PibcRule rule = PibcRule::All);

/// Every footprint sample must pass pibc_point for one of the n boundaries
/// whose centers are closest to it.
bool pibc_config_free(const RobotConfig& c, const RobotParams& params,
                      std::span<const Boundary> boundaries, const PibcOptions& options = {});

/// Same rule with point_in_polygon_raycast as the inside test against every
/// boundary.
bool footprint_inside_oracle(const RobotConfig& c, const RobotParams& params,
                             std::span<const Boundary> boundaries);

struct RrtOptions {
  double step_max = 0.15;  // 0.5 x the default bar width
  double goal_bias = 0.1;
  std::size_t budget = 5000;
  double goal_tolerance = 1e-9;
  // How far plan_along_route may slide an edge-end pose to find a free one;
  // <= 0 selects half_length + half_width.
  double settle_distance = 0.0;
  PibcOptions pibc;
};

/// sqrt(dx^2 + dy^2 + (half_length * dtheta)^2).
double config_distance(const RobotConfig& a, const RobotConfig& b, double rho);

struct PlannedPath {
  int edge_id = -1;
  std::vector<RobotConfig> configs;
};

PlannedPath rrt_plan(const RobotConfig& start, const RobotConfig& goal,
                     std::span<const Boundary> boundaries, const RobotParams& params,
                     std::uint64_t seed, const RrtOptions& options = {});

struct UntraversableEdge {
  int edge_id = -1;
  std::string reason;
};

struct RoutePaths {
  std::vector<PlannedPath> paths;  // one per traversed edge that was planned
  std::vector<UntraversableEdge> untraversable;  // unique edge ids, first failure
};

/// Plans every traversed edge in order, heading along the edge. End poses that
/// are not free slide along the edge toward its other end, up to
/// settle_distance, before the edge is declared untraversable.
RoutePaths plan_along_route(const InspectionRoute& route, const StructureGraph& g,
                            std::span<const Boundary> boundaries, const RobotParams& params,
                            std::uint64_t seed, const RrtOptions& options = {});

}  // namespace bridgenav
