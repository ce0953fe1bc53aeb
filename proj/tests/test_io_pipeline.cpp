#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "bridgenav/io.hpp"
#include "bridgenav/pipeline.hpp"
#include "bridgenav/svg.hpp"
#include "bridgenav/synth.hpp"

using namespace bridgenav;
namespace fs = std::filesystem;

namespace {

PointCloud2D fixture(synth::Shape shape, std::uint64_t seed = 0) {
  synth::StructureSpec spec;
  spec.shape = shape;
  spec.seed = seed;
  return synth::generate(spec).cloud;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("bridgenav_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("csv clouds") {
  std::istringstream ok("x,y\n0,1\n\n2.5,-3e-2\n");
  const auto c = io::read_cloud_csv(ok);
  REQUIRE(c.size() == 2);
  CHECK(c.points[1] == Point2{2.5, -0.03});
  std::istringstream with_i("x,y,intensity\n1,2,0.5\n");
  CHECK(io::read_cloud_csv(with_i).intensity == std::vector<double>{0.5});

  std::istringstream bad("x,y\n0,1\n1,zz\n");
  try {
    io::read_cloud_csv(bad);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::istringstream short_row("x,y\n1\n");
  CHECK(code_of([&] { io::read_cloud_csv(short_row); }) == ErrorCode::ParseError);
  std::istringstream no_header("1,2\n");
  CHECK(code_of([&] { io::read_cloud_csv(no_header); }) == ErrorCode::ParseError);
}

TEST_CASE("csv round trip is exact") {
  const auto cloud = fixture(synth::Shape::K);
  std::stringstream ss;
  io::write_cloud_csv(ss, cloud);
  CHECK(io::read_cloud_csv(ss).points == cloud.points);
}

TEST_CASE("ascii ply clouds") {
  std::istringstream ply(
      "ply\nformat ascii 1.0\ncomment test\nelement vertex 2\nproperty float x\nproperty float y\n"
      "property float z\nelement face 0\nproperty list uchar int vertex_indices\nend_header\n"
      "0 1 5\n2 3 6\n");
  const auto c = io::read_cloud_ply(ply);
  REQUIRE(c.size() == 2);
  CHECK(c.points[1] == Point2{2, 3});
  std::istringstream binary("ply\nformat binary_little_endian 1.0\nend_header\n");
  CHECK(code_of([&] { io::read_cloud_ply(binary); }) == ErrorCode::ParseError);
  std::istringstream truncated("ply\nformat ascii 1.0\nelement vertex 3\nproperty float x\nproperty float y\nend_header\n1 2\n");
  CHECK(code_of([&] { io::read_cloud_ply(truncated); }) == ErrorCode::ParseError);
}

TEST_CASE("config json") {
  PipelineConfig c;
  c.seed = 9;
  c.segment.n_max = 6;
  c.start = VertexSelector::nearest({1.5, -2.0});
  c.target = VertexSelector::vertex(3);
  c.rrt.pibc.rule = PibcRule::Any;
  const auto back = io::config_from_json(io::to_json(c));
  CHECK(io::to_json(back) == io::to_json(c));
  CHECK(back.start == c.start);
  CHECK(back.target == c.target);

  const auto partial = io::config_from_json(io::Json::parse(R"({"graph": {"d_min": 0.6}})"));
  CHECK(partial.graph.d_min == 0.6);
  CHECK(partial.segment.n_max == PipelineConfig{}.segment.n_max);

  CHECK(code_of([] { io::config_from_json(io::Json::parse(R"({"bogus": 1})")); }) == ErrorCode::ParseError);
  CHECK(code_of([] { io::config_from_json(io::Json::parse(R"({"graph": {"d_min": "x"}})")); }) ==
        ErrorCode::ParseError);
  CHECK(code_of([] { io::config_from_json(io::Json::parse(R"({"segmentation": {"n_min": 1}})")); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("vertex selectors") {
  StructureGraph g;
  g.add_vertex({0, 0}, VertexRole::Center, 0);
  g.add_vertex({2, 0}, VertexRole::Center, 1);
  g.add_vertex({4, 0}, VertexRole::Center, 2);
  CHECK(VertexSelector::first().resolve(g) == 0);
  CHECK(VertexSelector::last().resolve(g) == 2);
  CHECK(VertexSelector::nearest({2.9, 1}).resolve(g) == 1);
  CHECK(VertexSelector::nearest({1, 0}).resolve(g) == 0);
  CHECK(code_of([&] { VertexSelector::vertex(5).resolve(g); }) == ErrorCode::MissingVertex);
}

TEST_CASE("cross run produces a connected graph and a valid route") {
  PipelineConfig config;
  const auto a = run_pipeline(fixture(synth::Shape::Cross), config);
  CHECK(a.diagnostics.chosen_k == 5);
  REQUIRE(a.graph);
  CHECK(a.diagnostics.graph_connected);
  REQUIRE(a.route);
  CHECK(a.route->route.walk.front() == a.route->v_s);
  CHECK(a.route->route.walk.back() == a.route->v_t);
  REQUIRE(a.paths);
  CHECK(a.diagnostics.candidates.size() == 6);
}

TEST_CASE("cross run traverses every edge" * doctest::may_fail()) {
  const auto a = run_pipeline(fixture(synth::Shape::Cross), PipelineConfig{});
  CHECK(a.diagnostics.untraversable.empty());
}

TEST_CASE("stage errors carry the stage name") {
  PointCloud2D ten;
  for (int i = 0; i < 10; ++i) ten.points.push_back({static_cast<double>(i), static_cast<double>(i % 3)});
  PipelineConfig config;
  config.segment.n_max = 20;
  try {
    run_pipeline(ten, config);
    FAIL("expected StageError");
  } catch (const StageError& e) {
    CHECK(e.stage() == "segment");
    CHECK(e.code() == ErrorCode::TooFewPoints);
  }
}

TEST_CASE("partial runs stop at the requested stage") {
  const auto cloud = fixture(synth::Shape::L);
  const auto seg = run_pipeline(cloud, {}, Stage::Segment);
  CHECK_FALSE(seg.graph);
  const auto route = run_pipeline(cloud, {}, Stage::Route);
  CHECK(route.route);
  CHECK_FALSE(route.paths);
  CHECK(parse_stage("graph") == Stage::Graph);
}

TEST_CASE("artifacts round trip through json") {
  const auto a = run_pipeline(fixture(synth::Shape::T), {});
  const auto dir = scratch("roundtrip");
  io::write_artifacts(a, dir);
  const auto b = io::load_artifacts(dir);
  CHECK(b.cloud.points == a.cloud.points);
  CHECK(b.labels == a.labels);
  REQUIRE(b.boundaries.size() == a.boundaries.size());
  for (std::size_t i = 0; i < a.boundaries.size(); ++i) {
    CHECK(b.boundaries[i].polygon.vertices() == a.boundaries[i].polygon.vertices());
    CHECK(b.boundaries[i].center == a.boundaries[i].center);
    CHECK(b.boundaries[i].cluster_id == a.boundaries[i].cluster_id);
  }
  REQUIRE(b.graph);
  CHECK(io::graph_to_json(*b.graph) == io::graph_to_json(*a.graph));
  REQUIRE(b.route);
  CHECK(b.route->route.walk == a.route->route.walk);
  CHECK(b.route->route.traversed_edges == a.route->route.traversed_edges);
  CHECK(b.route->route.total_cost == a.route->route.total_cost);
  CHECK(b.route->duplicated_edges == a.route->duplicated_edges);
  REQUIRE(b.paths);
  CHECK(io::paths_to_json(*b.paths) == io::paths_to_json(*a.paths));
  CHECK(io::diagnostics_to_json(b.diagnostics) == io::diagnostics_to_json(a.diagnostics));
  fs::remove_all(dir);
}

TEST_CASE("artifact schemas") {
  const auto a = run_pipeline(fixture(synth::Shape::L), {}, Stage::Route);
  const auto clusters = io::clusters_to_json(a.labels);
  CHECK(clusters["0"].is_number_integer());
  const auto g = io::graph_to_json(*a.graph);
  for (const char* k : {"id", "x", "y", "role", "cluster"}) CHECK(g["vertices"][0].contains(k));
  for (const char* k : {"id", "u", "v", "weight"}) CHECK(g["edges"][0].contains(k));
  const auto r = io::route_to_json(*a.route, *a.graph);
  CHECK(r["walk"].size() == a.route->route.walk.size());
  CHECK(r.contains("cost"));
  CHECK(r["positions"].size() == r["walk"].size());
}

TEST_CASE("rendering") {
  CHECK(code_of([] { render_svg(RunArtifacts{}, SvgLayer::Segmentation); }) == ErrorCode::MissingLayer);
  CHECK(code_of([] { render_svg(RunArtifacts{}, SvgLayer::Route); }) == ErrorCode::MissingLayer);
  const auto a = run_pipeline(fixture(synth::Shape::Cross), {});
  const auto route = render_svg(a, SvgLayer::Route);
  CHECK(count(route, "class=\"route-step\"") == a.route->route.traversed_edges.size());
  CHECK(count(route, "marker-end=\"url(#arrow)\"") == a.route->route.traversed_edges.size());
  const auto graph = render_svg(a, SvgLayer::Graph);
  CHECK(count(graph, "class=\"vertex-label\"") == a.graph->vertex_count());
  CHECK(route.rfind("<?xml", 0) == 0);
  CHECK(route.find("version=\"1.1\"") != std::string::npos);
  CHECK(parse_svg_layer("path") == SvgLayer::Path);
}

TEST_CASE("file runs are byte-identical for a fixed seed") {
  const auto in = scratch("determinism_in");
  {
    std::ofstream csv(in / "cloud.csv", std::ios::binary);
    io::write_cloud_csv(csv, fixture(synth::Shape::Cross));
  }
  const auto a = scratch("determinism_a");
  const auto b = scratch("determinism_b");
  run_pipeline(in / "cloud.csv", std::nullopt, a);
  run_pipeline(in / "cloud.csv", std::nullopt, b);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename();
    CHECK_MESSAGE(slurp(a / name) == slurp(b / name), name.string());
    ++files;
  }
  CHECK(files >= 12);
  for (const auto& d : {in, a, b}) fs::remove_all(d);
}
