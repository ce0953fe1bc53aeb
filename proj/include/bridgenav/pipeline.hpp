#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bridgenav/planner.hpp"
#include "bridgenav/segmentation.hpp"
#include "bridgenav/structure_graph.hpp"
#include "bridgenav/vocpp.hpp"

namespace bridgenav {

/// Picks a graph vertex: the first or last id, an explicit id, or the vertex
/// nearest to a point (ties to the smaller id).
struct VertexSelector {
  enum class Kind { First, Last, Id, Nearest };
  Kind kind = Kind::First;
  int id = 0;
  Point2 point;

  static VertexSelector first() { return {Kind::First, 0, {}}; }
  static VertexSelector last() { return {Kind::Last, 0, {}}; }
  static VertexSelector vertex(int id) { return {Kind::Id, id, {}}; }
  static VertexSelector nearest(Point2 p) { return {Kind::Nearest, 0, p}; }

  int resolve(const StructureGraph& g) const;
  bool operator==(const VertexSelector&) const = default;
};

struct PipelineConfig {
  SegmentOptions segment;  // segment.seed is overwritten by `seed`
  GraphOptions graph;
  VertexSelector start = VertexSelector::first();
  VertexSelector target = VertexSelector::last();
  RobotParams robot;
  RrtOptions rrt;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class Stage { Segment, Graph, Route, Plan };

std::string_view to_string(Stage stage);
std::optional<Stage> parse_stage(std::string_view name);

struct CandidateRow {
  std::size_t k = 0;
  std::size_t n_m = 0;
  std::size_t n_s = 0;
  double r = 0.0;
  bool valid = false;
  std::vector<std::size_t> neighbor_counts;

  bool operator==(const CandidateRow&) const = default;
};

struct Diagnostics {
  std::size_t chosen_k = 0;
  double eps_border = 0.0;
  std::vector<CandidateRow> candidates;
  int em_iterations = 0;
  bool em_converged = false;
  std::vector<int> convex_fallback_clusters;
  bool graph_connected = true;
  std::string parity_case;
  std::vector<UntraversableEdge> untraversable;

  /// 0 when nothing needs attention, 1 otherwise.
  int severity() const;
};

struct RouteArtifact {
  int v_s = 0;
  int v_t = 0;
  InspectionRoute route;
  std::vector<int> duplicated_edges;
};

/// Everything a run produces; later stages are empty when the run stopped early.
struct RunArtifacts {
  PointCloud2D cloud;
  std::vector<int> labels;
  std::vector<Boundary> boundaries;
  std::optional<StructureGraph> graph;
  std::optional<RouteArtifact> route;
  std::optional<std::vector<PlannedPath>> paths;
  Diagnostics diagnostics;
};

/// Runs the stages up to and including `last`. Stage failures are rethrown as
/// StageError; a disconnected graph stops the run after the graph stage and is
/// reported in the diagnostics.
RunArtifacts run_pipeline(const PointCloud2D& cloud, const PipelineConfig& config,
                          Stage last = Stage::Plan);

/// File-based variant: reads the cloud (CSV or PLY) and an optional JSON
/// config, runs, and writes every artifact into `out_dir`.
RunArtifacts run_pipeline(const std::filesystem::path& cloud_file,
                          const std::optional<std::filesystem::path>& config_file,
                          const std::filesystem::path& out_dir, Stage last = Stage::Plan);

}  // namespace bridgenav
