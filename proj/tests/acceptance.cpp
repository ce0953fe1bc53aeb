// Acceptance suite: one PASS/FAIL line per criterion. Exits 0 unless
// --strict is given and a criterion failed.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "bridgenav/gmm.hpp"
#include "bridgenav/io.hpp"
#include "bridgenav/kernels.hpp"
#include "bridgenav/pipeline.hpp"
#include "bridgenav/planner.hpp"
#include "bridgenav/segmentation.hpp"
#include "bridgenav/synth.hpp"
#include "bridgenav/vocpp.hpp"
#include "support.hpp"

using namespace bridgenav;
using namespace bridgenav::testing;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

synth::StructureSpec spec_for(synth::Shape shape, std::uint64_t seed) {
  synth::StructureSpec s;
  s.shape = shape;
  s.seed = seed;
  return s;
}

Outcome segmentation_suite() {
  const std::pair<synth::Shape, std::size_t> targets[] = {
      {synth::Shape::Cross, 5}, {synth::Shape::T, 4}, {synth::Shape::K, 4}, {synth::Shape::L, 3}};
  Outcome out;
  int ok = 0;
  int total = 0;
  int count_ok = 0;
  int hub_ok = 0;
  int jaccard_ok = 0;
  double worst_jaccard = 1.0;
  double slowest = 0.0;
  for (const auto& [shape, want] : targets) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto fx = synth::generate(spec_for(shape, seed));
      SegmentOptions o;
      o.seed = seed;
      const auto t0 = Clock::now();
      const auto r = segment_structure(fx.cloud, o);
      const double dt = seconds_since(t0);
      slowest = std::max(slowest, dt);

      std::vector<std::size_t> counts(r.chosen_k);
      for (std::size_t i = 0; i < r.chosen_k; ++i) counts[i] = r.neighbors.neighbor_count(i);
      const std::size_t top = *std::max_element(counts.begin(), counts.end());
      const auto hubs = static_cast<std::size_t>(std::count(counts.begin(), counts.end(), top));
      const auto hub = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
      const int cross_id = fx.true_regions.back().id;
      std::vector<std::size_t> truth;
      for (std::size_t i = 0; i < fx.cloud.size(); ++i) {
        if (fx.true_label[i] == cross_id) truth.push_back(i);
      }
      auto members = r.clusters.members[hub];
      std::sort(members.begin(), members.end());
      const double jac = jaccard(members, truth);
      worst_jaccard = std::min(worst_jaccard, jac);

      const bool pass = r.chosen_k == want && hubs == 1 && jac >= 0.8 && dt < 30.0;
      count_ok += r.chosen_k == want ? 1 : 0;
      hub_ok += hubs == 1 ? 1 : 0;
      jaccard_ok += jac >= 0.8 ? 1 : 0;
      ++total;
      ok += pass ? 1 : 0;
      std::printf("    %-5s seed %llu: n_o=%zu (want %zu), hubs=%zu, jaccard=%.3f, %.2fs\n",
                  std::string(synth::to_string(shape)).c_str(), static_cast<unsigned long long>(seed), r.chosen_k,
                  want, hubs, jac, dt);
    }
  }
  out.pass = ok == total;
  out.detail = fmt("%d/%d fixtures pass; n_o correct %d, unique hub %d, jaccard >= 0.8 %d (min %.3f); "
                   "slowest %.2fs (limit 30s)",
                   ok, total, count_ok, hub_ok, jaccard_ok, worst_jaccard, slowest);
  return out;
}

Outcome i_shape() {
  Outcome out;
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    PipelineConfig config;
    config.seed = seed;
    const auto a = run_pipeline(synth::generate(spec_for(synth::Shape::I, seed)).cloud, config, Stage::Route);
    bool valid = a.graph && a.diagnostics.graph_connected && a.route.has_value();
    if (valid) {
      const auto& r = a.route->route;
      std::vector<int> seen(a.graph->edge_count(), 0);
      for (int e : r.traversed_edges) seen[static_cast<std::size_t>(e)] = 1;
      valid = r.walk.front() == a.route->v_s && r.walk.back() == a.route->v_t &&
              std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }) &&
              replay_walk(*a.graph, a.route->v_s, r.traversed_edges) == r.walk;
    }
    ok += valid ? 1 : 0;
    std::printf("    I seed %llu: n_o=%zu, %s\n", static_cast<unsigned long long>(seed), a.diagnostics.chosen_k,
                valid ? "connected graph, valid route" : "no valid route");
  }
  out.pass = ok == 3;
  out.detail = fmt("%d/3 seeds give a connected graph and a valid route", ok);
  return out;
}

Outcome em_hygiene() {
  Rng rng(2025);
  double worst_drop = 0.0;
  double worst_row = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    PointCloud2D c;
    const int blobs = 1 + static_cast<int>(rng.index(4));
    for (int b = 0; b < blobs; ++b) {
      const Point2 m{rng.uniform(-3, 3), rng.uniform(-3, 3)};
      const double sx = rng.uniform(0.05, 1.0);
      const double sy = rng.uniform(0.05, 1.0);
      const int n = 40 + static_cast<int>(rng.index(200));
      for (int i = 0; i < n; ++i) c.points.push_back({m.x + sx * rng.normal(), m.y + sy * rng.normal()});
    }
    const std::size_t k = 1 + rng.index(6);
    const auto fit = em_gmm_fit(c, k, static_cast<std::uint64_t>(trial));
    for (std::size_t i = 1; i < fit.log_likelihood.size(); ++i) {
      if (std::find(fit.reseeds.begin(), fit.reseeds.end(), i) != fit.reseeds.end()) continue;
      worst_drop = std::max(worst_drop, fit.log_likelihood[i - 1] - fit.log_likelihood[i]);
    }
    std::vector<double> resp(c.size() * k);
    kernels::estep(c.points, fit.model, resp, kernels::default_backend());
    for (std::size_t i = 0; i < c.size(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < k; ++j) s += resp[i * k + j];
      worst_row = std::max(worst_row, std::abs(s - 1.0));
    }
  }
  return {worst_drop <= 1e-9 && worst_row <= 1e-9,
          fmt("50 clouds; max log-likelihood drop %.2e (tol 1e-9); max |row sum - 1| %.2e (tol 1e-9)",
              std::max(0.0, worst_drop), worst_row)};
}

Outcome ratio_values() {
  const bool pass = selection_ratio(4, 1, 5) == 1.6 && selection_ratio(2, 2, 4) == 1.0 &&
                    selection_ratio(3, 1, 4) == 1.5;
  return {pass, fmt("(4,1,5)=%.17g (2,2,4)=%.17g (3,1,4)=%.17g", selection_ratio(4, 1, 5),
                    selection_ratio(2, 2, 4), selection_ratio(3, 1, 4))};
}

bool route_valid(const StructureGraph& g, const RoutePlan& plan, int s, int t) {
  const auto& r = plan.route;
  if (r.walk.empty() || r.walk.front() != s || r.walk.back() != t) return false;
  if (replay_walk(g, s, r.traversed_edges) != r.walk) return false;
  std::vector<int> seen(g.edge_count(), 0);
  for (int e : r.traversed_edges) seen[static_cast<std::size_t>(e)] = 1;
  return std::all_of(seen.begin(), seen.end(), [](int x) { return x == 1; });
}

ParityCase parity_of(const StructureGraph& g, int s, int t) {
  const auto odd = odd_vertices(g);
  const auto is_odd = [&](int v) { return std::binary_search(odd.begin(), odd.end(), v); };
  if (odd.empty()) return ParityCase::NoOdd;
  if (s == t) return ParityCase::ClosedWalk;
  if (is_odd(s) && is_odd(t)) return ParityCase::BothOdd;
  if (is_odd(t)) return ParityCase::TargetOdd;
  if (is_odd(s)) return ParityCase::StartOdd;
  return ParityCase::BothEven;
}

Outcome vocpp_validity() {
  const auto t0 = Clock::now();
  Rng rng(4242);
  int valid = 0;
  int not_below = 0;
  int trials = 0;
  std::vector<int> cases(6, 0);
  // Draw until 200 graphs are tested and each of the five cases appears.
  while (trials < 200 || std::any_of(cases.begin(), cases.begin() + 5, [](int c) { return c == 0; })) {
    const auto g = random_connected_graph(rng, 8, 12);
    const int n = static_cast<int>(g.vertex_count());
    const int s = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
    const int t = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
    if (trials >= 200 && cases[static_cast<std::size_t>(parity_of(g, s, t))] > 0) continue;
    const auto plan = plan_route(g, s, t);
    ++cases[static_cast<std::size_t>(plan.parity_case)];
    valid += route_valid(g, plan, s, t) ? 1 : 0;
    not_below += plan.route.total_cost >= brute_force_ocpp(g, s, t, 3 * g.edge_count()) - 1e-9 ? 1 : 0;
    ++trials;
  }
  const std::pair<const char*, StructureGraph> curated[] = {
      {"path", path3()}, {"C4", cycle4()}, {"K4", k4()}, {"bowtie", bowtie()}, {"grid3x2", grid3x2()}};
  int exact = 0;
  int pairs = 0;
  for (const auto& [name, g] : curated) {
    const int n = static_cast<int>(g.vertex_count());
    for (int s = 0; s < n; ++s) {
      for (int t = 0; t < n; ++t) {
        const auto plan = plan_route(g, s, t);
        const double best = brute_force_ocpp(g, s, t, 3 * g.edge_count());
        exact += route_valid(g, plan, s, t) && std::abs(plan.route.total_cost - best) <= 1e-12 ? 1 : 0;
        ++pairs;
      }
    }
  }
  const double dt = seconds_since(t0);
  const bool all_cases = std::all_of(cases.begin(), cases.begin() + 5, [](int c) { return c > 0; });
  return {valid == trials && not_below == trials && all_cases && exact == pairs && dt < 10.0,
          fmt("%d random graphs: %d valid, %d at or above optimum; cases a-e: %d %d %d %d %d; "
              "curated %d/%d optimal; %.2fs",
              trials, valid, not_below, cases[0], cases[1], cases[2], cases[3], cases[4], exact, pairs, dt)};
}

Outcome eulerian() {
  Rng rng(99);
  int replayed = 0;
  int raised_ok = 0;
  int eulerian_cases = 0;
  int rejected_cases = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = random_connected_graph(rng, 8, 12);
    AugmentedGraph a{g, {}};
    const std::size_t extra = rng.index(5);
    for (std::size_t i = 0; i < extra; ++i) a.duplicated_edges.push_back(static_cast<int>(rng.index(g.edge_count())));
    std::vector<int> odd;
    for (int v = 0; v < static_cast<int>(g.vertex_count()); ++v) {
      if (a.degree(v) % 2) odd.push_back(v);
    }
    const int start = static_cast<int>(rng.index(g.vertex_count()));
    const bool ok = odd.empty() || (odd.size() == 2 && (odd[0] == start || odd[1] == start));
    try {
      auto trail = eulerian_trail(a, start);
      if (!ok) continue;
      ++eulerian_cases;
      replay_walk(g, start, trail);
      auto expected = a.edge_multiset();
      std::sort(trail.begin(), trail.end());
      std::sort(expected.begin(), expected.end());
      replayed += trail == expected ? 1 : 0;
    } catch (const Error& e) {
      if (ok) {
        ++eulerian_cases;
        continue;
      }
      ++rejected_cases;
      raised_ok += e.code() == ErrorCode::NotEulerian ? 1 : 0;
    }
  }
  const int wrong_raise = 100 - eulerian_cases - rejected_cases;
  return {replayed == eulerian_cases && raised_ok == rejected_cases && wrong_raise == 0,
          fmt("%d/%d trails replay every edge instance once; NotEulerian on %d/%d non-Eulerian starts; "
              "%d missed rejections",
              replayed, eulerian_cases, raised_ok, rejected_cases, wrong_raise)};
}

Outcome pibc_vs_oracle() {
  std::size_t convex_tested = 0, convex_agree = 0, permissive = 0;
  std::uint64_t seed = 10;
  for (const auto& b : convex_fixtures()) {
    const auto a = pibc_agreement(b, 5000, ++seed);
    convex_tested += a.tested;
    convex_agree += a.agree;
    permissive += a.permissive;
  }
  const auto star = pibc_agreement(star_boundary(400), 20000, 77);
  permissive += star.permissive;
  const double convex_rate = static_cast<double>(convex_agree) / static_cast<double>(convex_tested);
  return {convex_agree == convex_tested && star.rate() >= 0.99 && permissive == 0,
          fmt("convex %.4f%% of %zu points; star %.4f%% of %zu points; %zu permissive", 100.0 * convex_rate,
              convex_tested, 100.0 * star.rate(), star.tested, permissive)};
}

Outcome planner_soundness() {
  const RobotParams robot;
  // Part 1: every waypoint of the L end-to-end run.
  PipelineConfig config;
  const auto l = run_pipeline(synth::generate(spec_for(synth::Shape::L, 0)).cloud, config);
  std::size_t waypoints = 0, bad = 0;
  if (l.paths) {
    for (const auto& p : *l.paths) {
      for (const auto& c : p.configs) {
        ++waypoints;
        if (!pibc_config_free(c, robot, l.boundaries, config.rrt.pibc) ||
            !footprint_inside_oracle(c, robot, l.boundaries)) {
          ++bad;
        }
      }
    }
  }
  // Part 2: cross whose fourth bar is narrower than the robot.
  const auto fx = synth::generate(narrow_bar_spec());
  const auto bs = truth_boundaries(fx, 0.01);
  const auto built = build_graph(bs, neighbor_matrix(bs, 0.05, 1e-3), {0.45});
  const auto& g = built.graph;
  const auto plan = plan_route(g, 0, static_cast<int>(g.vertex_count()) - 1);
  const auto out = plan_along_route(plan.route, g, bs, robot, 0);
  int narrow_id = -1;
  for (const auto& e : g.edges()) {
    const auto& a = g.vertex(e.u);
    const auto& b = g.vertex(e.v);
    const bool center3 = (a.role == VertexRole::Center && a.cluster_id == 3) ||
                         (b.role == VertexRole::Center && b.cluster_id == 3);
    const bool mid = a.role == VertexRole::BorderMid || b.role == VertexRole::BorderMid;
    if (center3 && mid) narrow_id = e.id;
  }
  const bool exactly = out.untraversable.size() == 1 && out.untraversable[0].edge_id == narrow_id;
  std::string report;
  for (const auto& u : out.untraversable) report += (report.empty() ? "" : ",") + std::to_string(u.edge_id);
  return {waypoints > 0 && bad == 0 && exactly,
          fmt("L run: %zu waypoints over %zu paths, %zu failing (%zu untraversable edges); narrow bar: "
              "untraversable {%s}, expected {%d}",
              waypoints, l.paths ? l.paths->size() : 0, bad, l.diagnostics.untraversable.size(), report.c_str(),
              narrow_id)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const auto root = fs::temp_directory_path() / "bridgenav_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  {
    std::ofstream csv(root / "cloud.csv", std::ios::binary);
    io::write_cloud_csv(csv, synth::generate(spec_for(synth::Shape::Cross, 0)).cloud);
  }
  run_pipeline(root / "cloud.csv", std::nullopt, root / "a");
  run_pipeline(root / "cloud.csv", std::nullopt, root / "b");
  std::size_t files = 0, same = 0, json = 0, svg = 0;
  for (const auto& entry : fs::directory_iterator(root / "a")) {
    const auto name = entry.path().filename();
    ++files;
    same += slurp(root / "a" / name) == slurp(root / "b" / name) ? 1 : 0;
    json += name.extension() == ".json" ? 1 : 0;
    svg += name.extension() == ".svg" ? 1 : 0;
  }
  fs::remove_all(root);
  return {files > 0 && same == files && json > 0 && svg > 0,
          fmt("%zu/%zu files identical (%zu JSON, %zu SVG)", same, files, json, svg)};
}

Outcome runtime() {
  double slowest = 0.0;
  std::string per;
  for (auto shape : {synth::Shape::Cross, synth::Shape::T, synth::Shape::K, synth::Shape::L, synth::Shape::I}) {
    const auto cloud = synth::generate(spec_for(shape, 0)).cloud;
    const auto t0 = Clock::now();
    run_pipeline(cloud, PipelineConfig{});
    const double dt = seconds_since(t0);
    slowest = std::max(slowest, dt);
    per += fmt(" %s %.2fs", std::string(synth::to_string(shape)).c_str(), dt);
  }
  return {slowest < 60.0, "full run:" + per + " (limit 60s)"};
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  for (int i = 1; i < argc; ++i) strict |= std::strcmp(argv[i], "--strict") == 0;

  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"segmentation shape suite", segmentation_suite},
      {"I-shape tolerance", i_shape},
      {"EM hygiene", em_hygiene},
      {"selection ratio values", ratio_values},
      {"VOCPP validity", vocpp_validity},
      {"Eulerian correctness", eulerian},
      {"PIBC vs oracle", pibc_vs_oracle},
      {"planner soundness", planner_soundness},
      {"determinism", determinism},
      {"end-to-end runtime", runtime},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria pass\n", index - failed, index);
  return strict && failed > 0 ? 1 : 0;
}
