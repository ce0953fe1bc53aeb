#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "bridgenav/io.hpp"
#include "bridgenav/pipeline.hpp"
#include "bridgenav/svg.hpp"
#include "bridgenav/synth.hpp"

namespace fs = std::filesystem;
using namespace bridgenav;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitError = 2;

struct StageArgs {
  std::string cloud;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
};

void add_stage_args(CLI::App* cmd, StageArgs& args) {
  cmd->add_option("cloud", args.cloud, "Input cloud (.csv or .ply)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--config", args.config, "JSON config")->check(CLI::ExistingFile);
  cmd->add_option("--seed", args.seed, "Seed overriding the config");
  cmd->add_option("--out", args.out, "Output directory")->capture_default_str();
}

int run_stage(const StageArgs& args, Stage last) {
  const PointCloud2D cloud = io::read_cloud(args.cloud);
  PipelineConfig config = args.config.empty() ? PipelineConfig{} : io::load_config(args.config);
  if (args.seed) config.seed = *args.seed;
  const RunArtifacts artifacts = run_pipeline(cloud, config, last);
  io::write_artifacts(artifacts, args.out);
  write_svg_layers(artifacts, args.out);

  const auto& d = artifacts.diagnostics;
  std::printf("clusters: %zu\n", d.chosen_k);
  if (artifacts.graph) {
    std::printf("graph: %zu vertices, %zu edges, %s\n", artifacts.graph->vertex_count(),
                artifacts.graph->edge_count(), d.graph_connected ? "connected" : "disconnected");
  }
  if (artifacts.route) {
    std::printf("route: %d -> %d, %zu steps, cost %.4f (%s)\n", artifacts.route->v_s, artifacts.route->v_t,
                artifacts.route->route.traversed_edges.size(), artifacts.route->route.total_cost,
                d.parity_case.c_str());
  }
  if (artifacts.paths) {
    std::printf("paths: %zu planned, %zu untraversable\n", artifacts.paths->size(), d.untraversable.size());
    for (const auto& u : d.untraversable) std::printf("  edge %d: %s\n", u.edge_id, u.reason.c_str());
  }
  std::printf("artifacts: %s\n", args.out.c_str());
  return d.severity() == 0 ? kExitOk : kExitDiagnostics;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Point-cloud segmentation, structure graph, inspection route and path planning"};
  app.require_subcommand(1);

  synth::StructureSpec spec;
  std::string shape = "Cross";
  std::string synth_out = "fixture";
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic fixture cloud and its ground truth");
  synth_cmd->add_option("--shape", shape, "Cross, T, K, L or I")->capture_default_str();
  synth_cmd->add_option("--bar-width", spec.bar_width, "Bar width [m]")->capture_default_str();
  synth_cmd->add_option("--bar-lengths", spec.bar_lengths, "Bar lengths [m], one or one per bar");
  synth_cmd->add_option("--bar-widths", spec.bar_widths, "Per-bar width overrides [m]");
  synth_cmd->add_option("--density", spec.density, "Points per m^2")->capture_default_str();
  synth_cmd->add_option("--noise", spec.noise_sigma, "Gaussian noise sigma [m]")->capture_default_str();
  synth_cmd->add_option("--dropout", spec.dropout_slope, "Dropout slope per m along +x")->capture_default_str();
  synth_cmd->add_option("--seed", spec.seed, "Seed")->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "Output directory")->capture_default_str();

  StageArgs segment_args, graph_args, route_args, plan_args, run_args;
  add_stage_args(app.add_subcommand("segment", "Cluster the cloud and estimate boundaries"), segment_args);
  add_stage_args(app.add_subcommand("graph", "Segment and build the structure graph"), graph_args);
  add_stage_args(app.add_subcommand("route", "Build the graph and plan the inspection route"), route_args);
  add_stage_args(app.add_subcommand("plan", "Plan footprint paths along the route"), plan_args);
  add_stage_args(app.add_subcommand("run", "Run every stage"), run_args);

  std::string render_in;
  std::string render_layer = "all";
  std::string render_out;
  auto* render_cmd = app.add_subcommand("render", "Render SVG layers from an artifact directory");
  render_cmd->add_option("artifacts", render_in, "Artifact directory")->required()->check(CLI::ExistingDirectory);
  render_cmd->add_option("--layer", render_layer, "segmentation, boundaries, graph, route, path or all")
      ->capture_default_str();
  render_cmd->add_option("--out", render_out, "Output file (one layer) or directory (all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (synth_cmd->parsed()) {
      const auto parsed = synth::parse_shape(shape);
      if (!parsed) throw Error(ErrorCode::InvalidSpec, "unknown shape '" + shape + "'");
      spec.shape = *parsed;
      const auto fixture = synth::generate(spec);
      fs::create_directories(synth_out);
      std::ofstream csv(fs::path(synth_out) / "cloud.csv", std::ios::binary);
      io::write_cloud_csv(csv, fixture.cloud);
      io::write_json(fs::path(synth_out) / "truth.json", io::truth_to_json(spec, fixture));
      std::printf("%zu points -> %s\n", fixture.cloud.size(), synth_out.c_str());
      return kExitOk;
    }
    const std::pair<CLI::App*, std::pair<StageArgs*, Stage>> stages[] = {
        {app.get_subcommand("segment"), {&segment_args, Stage::Segment}},
        {app.get_subcommand("graph"), {&graph_args, Stage::Graph}},
        {app.get_subcommand("route"), {&route_args, Stage::Route}},
        {app.get_subcommand("plan"), {&plan_args, Stage::Plan}},
        {app.get_subcommand("run"), {&run_args, Stage::Plan}},
    };
    for (const auto& [cmd, what] : stages) {
      if (cmd->parsed()) return run_stage(*what.first, what.second);
    }
    if (render_cmd->parsed()) {
      const RunArtifacts artifacts = io::load_artifacts(render_in);
      if (render_layer == "all") {
        const fs::path dir = render_out.empty() ? fs::path(render_in) : fs::path(render_out);
        fs::create_directories(dir);
        write_svg_layers(artifacts, dir);
        return kExitOk;
      }
      const auto layer = parse_svg_layer(render_layer);
      if (!layer) throw Error(ErrorCode::InvalidArgument, "unknown layer '" + render_layer + "'");
      const std::string svg = render_svg(artifacts, *layer);
      if (render_out.empty()) {
        std::cout << svg;
      } else {
        std::ofstream(render_out, std::ios::binary) << svg;
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
