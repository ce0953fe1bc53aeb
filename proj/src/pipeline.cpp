#include "bridgenav/pipeline.hpp"

#include <cmath>

#include "bridgenav/io.hpp"
#include "bridgenav/rng.hpp"
#include "bridgenav/svg.hpp"

namespace bridgenav {

namespace {

template <class F>
auto in_stage(Stage stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(std::string(to_string(stage)), e);
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, msg);
}

}  // namespace

int VertexSelector::resolve(const StructureGraph& g) const {
  if (g.vertex_count() == 0) throw Error(ErrorCode::MissingVertex, "graph has no vertices");
  switch (kind) {
    case Kind::First: return 0;
    case Kind::Last: return static_cast<int>(g.vertex_count()) - 1;
    case Kind::Id:
      if (!g.has_vertex(id)) {
        throw Error(ErrorCode::MissingVertex, "vertex " + std::to_string(id) + " is not in the graph");
      }
      return id;
    case Kind::Nearest: {
      int best = 0;
      double best_d = squared_distance(point, g.vertex(0).position);
      for (const auto& v : g.vertices()) {
        const double d = squared_distance(point, v.position);
        if (d < best_d) {
          best_d = d;
          best = v.id;
        }
      }
      return best;
    }
  }
  return 0;
}

void PipelineConfig::validate() const {
  const auto& s = segment;
  require(s.n_min >= 2 && s.n_max >= s.n_min, "cluster range must satisfy n_max >= n_min >= 2");
  require(s.l_b > 0.0, "l_b must be positive");
  require(s.sliding_factor >= 3, "sliding_factor must be at least 3");
  require(s.eps_border >= 0.0 && std::isfinite(s.eps_border), "eps_border must be >= 0");
  require(s.eps_border_factor > 0.0, "eps_border_factor must be positive");
  require(s.em.tol_ll > 0.0, "em.tol_ll must be positive");
  require(s.em.max_iter >= 1, "em.max_iter must be at least 1");
  require(s.em.reg_floor >= 0.0, "em.reg_floor must be non-negative");
  require(graph.d_min > 0.0, "d_min must be positive");
  if (start.kind == VertexSelector::Kind::Id) require(start.id >= 0, "start id must be >= 0");
  if (target.kind == VertexSelector::Kind::Id) require(target.id >= 0, "target id must be >= 0");
  robot.validate();
  require(rrt.step_max > 0.0, "step_max must be positive");
  require(rrt.goal_bias >= 0.0 && rrt.goal_bias <= 1.0, "goal_bias must be in [0, 1]");
  require(rrt.budget >= 1, "budget must be at least 1");
  require(rrt.goal_tolerance >= 0.0, "goal_tolerance must be non-negative");
  require(rrt.pibc.n >= 1, "pibc.n must be at least 1");
  require(rrt.pibc.m_p >= 1, "pibc.m_p must be at least 1");
}

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::Segment: return "segment";
    case Stage::Graph: return "graph";
    case Stage::Route: return "route";
    case Stage::Plan: return "plan";
  }
  return "?";
}

std::optional<Stage> parse_stage(std::string_view name) {
  for (auto s : {Stage::Segment, Stage::Graph, Stage::Route, Stage::Plan}) {
    if (name == to_string(s)) return s;
  }
  return std::nullopt;
}

int Diagnostics::severity() const { return !graph_connected || !untraversable.empty() ? 1 : 0; }

RunArtifacts run_pipeline(const PointCloud2D& cloud, const PipelineConfig& config, Stage last) {
  config.validate();
  RunArtifacts out;
  out.cloud = cloud;
  auto& diag = out.diagnostics;

  SegmentOptions seg_options = config.segment;
  seg_options.seed = config.seed;
  auto seg = in_stage(Stage::Segment, [&] { return segment_structure(cloud, seg_options); });
  out.labels = seg.clusters.labels;
  out.boundaries = seg.boundaries;
  diag.chosen_k = seg.chosen_k;
  diag.eps_border = seg.eps_border;
  diag.em_iterations = seg.clusters.iterations;
  diag.em_converged = seg.clusters.converged;
  for (std::size_t i = 0; i < seg.candidates.size(); ++i) {
    const auto& c = seg.candidates[i];
    diag.candidates.push_back({seg_options.n_min + i, c.stats.n_m, c.stats.n_s, c.stats.r, c.valid,
                               c.neighbor_counts});
  }
  for (const auto& b : seg.boundaries) {
    if (b.convex_fallback) diag.convex_fallback_clusters.push_back(b.cluster_id);
  }
  if (last == Stage::Segment) return out;

  auto built = in_stage(Stage::Graph, [&] { return build_graph(seg.boundaries, seg.neighbors, config.graph); });
  out.graph = std::move(built.graph);
  diag.graph_connected = built.connected;
  if (last == Stage::Graph || !built.connected) return out;

  in_stage(Stage::Route, [&] {
    const int v_s = config.start.resolve(*out.graph);
    const int v_t = config.target.resolve(*out.graph);
    auto plan = plan_route(*out.graph, v_s, v_t);
    diag.parity_case = std::string(to_string(plan.parity_case));
    out.route = RouteArtifact{v_s, v_t, std::move(plan.route), std::move(plan.augmented.duplicated_edges)};
  });
  if (last == Stage::Route) return out;

  in_stage(Stage::Plan, [&] {
    auto planned = plan_along_route(out.route->route, *out.graph, out.boundaries, config.robot,
                                    mix_seed(config.seed, 1), config.rrt);
    out.paths = std::move(planned.paths);
    diag.untraversable = std::move(planned.untraversable);
  });
  return out;
}

RunArtifacts run_pipeline(const std::filesystem::path& cloud_file,
                          const std::optional<std::filesystem::path>& config_file,
                          const std::filesystem::path& out_dir, Stage last) {
  const PointCloud2D cloud = io::read_cloud(cloud_file);
  const PipelineConfig config = config_file ? io::load_config(*config_file) : PipelineConfig{};
  RunArtifacts artifacts = run_pipeline(cloud, config, last);
  io::write_artifacts(artifacts, out_dir);
  write_svg_layers(artifacts, out_dir);
  return artifacts;
}

}  // namespace bridgenav
