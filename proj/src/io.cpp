#include "bridgenav/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bridgenav::io {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(ErrorCode::ParseError, msg); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

double parse_number(std::string_view text, std::size_t line) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty()) {
    parse_fail("line " + std::to_string(line) + ": '" + std::string(text) + "' is not a number");
  }
  if (!std::isfinite(v)) parse_fail("line " + std::to_string(line) + ": non-finite value");
  return v;
}

Json point_json(const Point2& p) { return Json{{"x", p.x}, {"y", p.y}}; }
Point2 point_from(const Json& j) { return {j.at("x").get<double>(), j.at("y").get<double>()}; }

template <class T>
void take(const Json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

void only_keys(const Json& obj, std::initializer_list<std::string_view> keys, std::string_view where) {
  if (!obj.is_object()) parse_fail(std::string(where) + " must be an object");
  for (const auto& [k, _] : obj.items()) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      parse_fail("unknown key '" + k + "' in " + std::string(where));
    }
  }
}

Json selector_json(const VertexSelector& s) {
  switch (s.kind) {
    case VertexSelector::Kind::First: return "first";
    case VertexSelector::Kind::Last: return "last";
    case VertexSelector::Kind::Id: return s.id;
    case VertexSelector::Kind::Nearest: return point_json(s.point);
  }
  return nullptr;
}

VertexSelector selector_from(const Json& j) {
  if (j.is_string()) {
    if (j == "first") return VertexSelector::first();
    if (j == "last") return VertexSelector::last();
    parse_fail("vertex selector must be \"first\", \"last\", an id or {x, y}");
  }
  if (j.is_number_integer()) return VertexSelector::vertex(j.get<int>());
  if (j.is_object()) {
    only_keys(j, {"x", "y"}, "vertex selector");
    return VertexSelector::nearest(point_from(j));
  }
  parse_fail("vertex selector must be \"first\", \"last\", an id or {x, y}");
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    parse_fail(e.what());
  }
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

PointCloud2D read_cloud_csv(std::istream& in) {
  PointCloud2D cloud;
  std::string line;
  std::size_t number = 0;
  bool header = false;
  bool with_intensity = false;
  while (std::getline(in, line)) {
    ++number;
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto cells = split(text, ',');
    if (!header) {
      if (cells.size() >= 2 && cells[0] == "x" && cells[1] == "y" &&
          (cells.size() == 2 || (cells.size() == 3 && cells[2] == "intensity"))) {
        header = true;
        with_intensity = cells.size() == 3;
        continue;
      }
      parse_fail("line " + std::to_string(number) + ": expected header 'x,y' or 'x,y,intensity'");
    }
    const std::size_t want = with_intensity ? 3 : 2;
    if (cells.size() != want) {
      parse_fail("line " + std::to_string(number) + ": expected " + std::to_string(want) +
                 " fields, got " + std::to_string(cells.size()));
    }
    cloud.points.push_back({parse_number(cells[0], number), parse_number(cells[1], number)});
    if (with_intensity) cloud.intensity.push_back(parse_number(cells[2], number));
  }
  if (!header) parse_fail("line 1: empty file, expected header 'x,y'");
  return cloud;
}

PointCloud2D read_cloud_ply(std::istream& in) {
  std::string line;
  std::size_t number = 0;
  auto next = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++number;
    return true;
  };
  auto at = [&](const std::string& msg) { parse_fail("line " + std::to_string(number) + ": " + msg); };
  if (!next() || trim(line) != "ply") at("missing 'ply' magic");

  std::size_t vertex_count = 0;
  bool in_vertex = false;
  bool seen_vertex = false;
  std::vector<std::string> props;
  while (true) {
    if (!next()) at("header is not terminated by 'end_header'");
    const auto w = words(line);
    if (w.empty()) continue;
    if (w[0] == "end_header") break;
    if (w[0] == "comment" || w[0] == "obj_info") continue;
    if (w[0] == "format") {
      if (w.size() < 2 || w[1] != "ascii") at("only ASCII PLY is supported");
    } else if (w[0] == "element") {
      if (w.size() != 3) at("malformed element line");
      in_vertex = w[1] == "vertex";
      if (in_vertex) {
        if (seen_vertex) at("duplicate vertex element");
        seen_vertex = true;
        vertex_count = static_cast<std::size_t>(parse_number(w[2], number));
      } else if (!seen_vertex) {
        at("vertex element must come first");
      }
    } else if (w[0] == "property") {
      if (in_vertex) {
        if (w.size() < 3 || w[1] == "list") at("unsupported vertex property");
        props.emplace_back(w.back());
      }
    } else {
      at("unexpected header keyword '" + std::string(w[0]) + "'");
    }
  }
  const auto find = [&](std::string_view name) -> long {
    const auto it = std::find(props.begin(), props.end(), name);
    return it == props.end() ? -1 : static_cast<long>(it - props.begin());
  };
  const long ix = find("x");
  const long iy = find("y");
  const long ii = find("intensity");
  if (ix < 0 || iy < 0) parse_fail("PLY vertices need x and y properties");

  PointCloud2D cloud;
  cloud.points.reserve(vertex_count);
  while (cloud.points.size() < vertex_count) {
    if (!next()) parse_fail("line " + std::to_string(number + 1) + ": expected " +
                            std::to_string(vertex_count) + " vertices");
    const auto w = words(line);
    if (w.empty()) continue;
    if (w.size() != props.size()) at("expected " + std::to_string(props.size()) + " values");
    cloud.points.push_back({parse_number(w[static_cast<std::size_t>(ix)], number),
                            parse_number(w[static_cast<std::size_t>(iy)], number)});
    if (ii >= 0) cloud.intensity.push_back(parse_number(w[static_cast<std::size_t>(ii)], number));
  }
  return cloud;
}

PointCloud2D read_cloud(const fs::path& file) {
  std::ifstream in(file);
  if (!in) parse_fail("cannot open " + file.string());
  auto ext = file.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".ply") return read_cloud_ply(in);
  if (ext == ".csv" || ext == ".txt") return read_cloud_csv(in);
  parse_fail("unsupported cloud format '" + ext + "' (use .csv or .ply)");
}

void write_cloud_csv(std::ostream& out, const PointCloud2D& cloud) {
  const bool with_intensity = cloud.intensity.size() == cloud.size() && !cloud.empty();
  out << (with_intensity ? "x,y,intensity\n" : "x,y\n");
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    out << format_double(cloud.points[i].x) << ',' << format_double(cloud.points[i].y);
    if (with_intensity) out << ',' << format_double(cloud.intensity[i]);
    out << '\n';
  }
}

Json to_json(const PipelineConfig& c) {
  const auto& s = c.segment;
  return Json{
      {"seed", c.seed},
      {"segmentation",
       {{"n_min", s.n_min},
        {"n_max", s.n_max},
        {"l_b", s.l_b},
        {"sliding_factor", s.sliding_factor},
        {"eps_border", s.eps_border},
        {"eps_border_factor", s.eps_border_factor},
        {"bridge_borders", s.bridge_borders},
        {"em",
         {{"tol_ll", s.em.tol_ll},
          {"max_iter", s.em.max_iter},
          {"reg_floor", s.em.reg_floor},
          {"backend", s.em.backend == kernels::Backend::OpenMP ? "openmp" : "serial"}}}}},
      {"graph", {{"d_min", c.graph.d_min}}},
      {"start", selector_json(c.start)},
      {"target", selector_json(c.target)},
      {"robot",
       {{"half_length", c.robot.half_length},
        {"half_width", c.robot.half_width},
        {"sample_points", c.robot.sample_points}}},
      {"pibc", {{"n", c.rrt.pibc.n}, {"m_p", c.rrt.pibc.m_p}, {"rule", to_string(c.rrt.pibc.rule)}}},
      {"rrt",
       {{"step_max", c.rrt.step_max},
        {"goal_bias", c.rrt.goal_bias},
        {"budget", c.rrt.budget},
        {"settle_distance", c.rrt.settle_distance}}},
  };
}

PipelineConfig config_from_json(const Json& j) {
  return guarded([&] {
    PipelineConfig c;
    only_keys(j, {"seed", "segmentation", "graph", "start", "target", "robot", "pibc", "rrt"}, "config");
    take(j, "seed", c.seed);
    if (j.contains("segmentation")) {
      const auto& s = j.at("segmentation");
      only_keys(s, {"n_min", "n_max", "l_b", "sliding_factor", "eps_border", "eps_border_factor",
                    "bridge_borders", "em"},
                "segmentation");
      take(s, "n_min", c.segment.n_min);
      take(s, "n_max", c.segment.n_max);
      take(s, "l_b", c.segment.l_b);
      take(s, "sliding_factor", c.segment.sliding_factor);
      take(s, "eps_border", c.segment.eps_border);
      take(s, "eps_border_factor", c.segment.eps_border_factor);
      take(s, "bridge_borders", c.segment.bridge_borders);
      if (s.contains("em")) {
        const auto& e = s.at("em");
        only_keys(e, {"tol_ll", "max_iter", "reg_floor", "backend"}, "segmentation.em");
        take(e, "tol_ll", c.segment.em.tol_ll);
        take(e, "max_iter", c.segment.em.max_iter);
        take(e, "reg_floor", c.segment.em.reg_floor);
        if (e.contains("backend")) {
          const auto b = e.at("backend").get<std::string>();
          if (b == "serial") {
            c.segment.em.backend = kernels::Backend::Serial;
          } else if (b == "openmp") {
            c.segment.em.backend = kernels::Backend::OpenMP;
          } else {
            parse_fail("backend must be \"serial\" or \"openmp\"");
          }
        }
      }
    }
    if (j.contains("graph")) {
      only_keys(j.at("graph"), {"d_min"}, "graph");
      take(j.at("graph"), "d_min", c.graph.d_min);
    }
    if (j.contains("start")) c.start = selector_from(j.at("start"));
    if (j.contains("target")) c.target = selector_from(j.at("target"));
    if (j.contains("robot")) {
      const auto& r = j.at("robot");
      only_keys(r, {"half_length", "half_width", "sample_points"}, "robot");
      take(r, "half_length", c.robot.half_length);
      take(r, "half_width", c.robot.half_width);
      take(r, "sample_points", c.robot.sample_points);
    }
    if (j.contains("pibc")) {
      const auto& p = j.at("pibc");
      only_keys(p, {"n", "m_p", "rule"}, "pibc");
      take(p, "n", c.rrt.pibc.n);
      take(p, "m_p", c.rrt.pibc.m_p);
      if (p.contains("rule")) {
        const auto rule = parse_pibc_rule(p.at("rule").get<std::string>());
        if (!rule) parse_fail("pibc.rule must be \"all\" or \"any\"");
        c.rrt.pibc.rule = *rule;
      }
    }
    if (j.contains("rrt")) {
      const auto& r = j.at("rrt");
      only_keys(r, {"step_max", "goal_bias", "budget", "settle_distance"}, "rrt");
      take(r, "step_max", c.rrt.step_max);
      take(r, "goal_bias", c.rrt.goal_bias);
      take(r, "budget", c.rrt.budget);
      take(r, "settle_distance", c.rrt.settle_distance);
    }
    c.validate();
    return c;
  });
}

PipelineConfig load_config(const fs::path& file) { return config_from_json(read_json(file)); }

Json clusters_to_json(const std::vector<int>& labels) {
  Json j = Json::object();
  for (std::size_t i = 0; i < labels.size(); ++i) j[std::to_string(i)] = labels[i];
  return j;
}

std::vector<int> clusters_from_json(const Json& j) {
  return guarded([&] {
    if (!j.is_object()) parse_fail("clusters must be an object");
    std::vector<int> labels(j.size(), -1);
    for (const auto& [k, v] : j.items()) {
      std::size_t idx = 0;
      const auto [ptr, ec] = std::from_chars(k.data(), k.data() + k.size(), idx);
      if (ec != std::errc() || ptr != k.data() + k.size() || idx >= labels.size() || labels[idx] != -1) {
        parse_fail("bad point index '" + k + "' in clusters");
      }
      labels[idx] = v.get<int>();
    }
    return labels;
  });
}

Json boundaries_to_json(const std::vector<Boundary>& boundaries) {
  Json arr = Json::array();
  for (const auto& b : boundaries) {
    Json verts = Json::array();
    for (const auto& p : b.polygon.vertices()) verts.push_back(Json::array({p.x, p.y}));
    arr.push_back(Json{{"cluster_id", b.cluster_id},
                       {"center", point_json(b.center)},
                       {"sliding_factor", b.sliding_factor},
                       {"convex_fallback", b.convex_fallback},
                       {"vertices", std::move(verts)}});
  }
  return arr;
}

std::vector<Boundary> boundaries_from_json(const Json& j) {
  return guarded([&] {
    std::vector<Boundary> out;
    for (const auto& b : j) {
      std::vector<Point2> verts;
      for (const auto& v : b.at("vertices")) verts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
      out.push_back({b.at("cluster_id").get<int>(), Polygon2(std::move(verts)), point_from(b.at("center")),
                     b.at("sliding_factor").get<std::size_t>(), b.at("convex_fallback").get<bool>()});
    }
    return out;
  });
}

Json graph_to_json(const StructureGraph& g) {
  Json vertices = Json::array();
  for (const auto& v : g.vertices()) {
    vertices.push_back(Json{{"id", v.id},
                            {"x", v.position.x},
                            {"y", v.position.y},
                            {"role", to_string(v.role)},
                            {"cluster", v.cluster_id}});
  }
  Json edges = Json::array();
  for (const auto& e : g.edges()) {
    edges.push_back(Json{{"id", e.id}, {"u", e.u}, {"v", e.v}, {"weight", e.weight}});
  }
  return Json{{"vertices", std::move(vertices)}, {"edges", std::move(edges)}};
}

StructureGraph graph_from_json(const Json& j) {
  return guarded([&] {
    StructureGraph g;
    for (const auto& v : j.at("vertices")) {
      const auto role = parse_vertex_role(v.at("role").get<std::string>());
      if (!role) parse_fail("unknown vertex role");
      const int id = g.add_vertex({v.at("x").get<double>(), v.at("y").get<double>()}, *role,
                                  v.at("cluster").get<int>());
      if (id != v.at("id").get<int>()) parse_fail("vertex ids must be 0..n-1 in order");
    }
    for (const auto& e : j.at("edges")) {
      const int id = g.add_edge(e.at("u").get<int>(), e.at("v").get<int>(), e.at("weight").get<double>());
      if (id != e.at("id").get<int>()) parse_fail("edge ids must be 0..m-1 in order");
    }
    return g;
  });
}

Json route_to_json(const RouteArtifact& r, const StructureGraph& g) {
  Json positions = Json::array();
  for (int v : r.route.walk) positions.push_back(point_json(g.vertex(v).position));
  return Json{{"v_s", r.v_s},
              {"v_t", r.v_t},
              {"walk", r.route.walk},
              {"edges", r.route.traversed_edges},
              {"cost", r.route.total_cost},
              {"positions", std::move(positions)},
              {"duplicated_edges", r.duplicated_edges}};
}

RouteArtifact route_from_json(const Json& j) {
  return guarded([&] {
    RouteArtifact r;
    r.v_s = j.at("v_s").get<int>();
    r.v_t = j.at("v_t").get<int>();
    r.route.walk = j.at("walk").get<std::vector<int>>();
    r.route.traversed_edges = j.at("edges").get<std::vector<int>>();
    r.route.total_cost = j.at("cost").get<double>();
    r.duplicated_edges = j.at("duplicated_edges").get<std::vector<int>>();
    return r;
  });
}

Json paths_to_json(const std::vector<PlannedPath>& paths) {
  Json arr = Json::array();
  for (const auto& p : paths) {
    Json wp = Json::array();
    for (const auto& c : p.configs) wp.push_back(Json{{"x", c.x}, {"y", c.y}, {"theta", c.theta}});
    arr.push_back(Json{{"edge_id", p.edge_id}, {"waypoints", std::move(wp)}});
  }
  return arr;
}

std::vector<PlannedPath> paths_from_json(const Json& j) {
  return guarded([&] {
    std::vector<PlannedPath> out;
    for (const auto& p : j) {
      PlannedPath path;
      path.edge_id = p.at("edge_id").get<int>();
      for (const auto& w : p.at("waypoints")) {
        path.configs.emplace_back(w.at("x").get<double>(), w.at("y").get<double>(),
                                  w.at("theta").get<double>());
      }
      out.push_back(std::move(path));
    }
    return out;
  });
}

Json diagnostics_to_json(const Diagnostics& d) {
  Json candidates = Json::array();
  for (const auto& c : d.candidates) {
    candidates.push_back(Json{{"k", c.k},
                              {"n_m", c.n_m},
                              {"n_s", c.n_s},
                              {"r", c.r},
                              {"valid", c.valid},
                              {"neighbor_counts", c.neighbor_counts}});
  }
  Json untrav = Json::array();
  for (const auto& u : d.untraversable) untrav.push_back(Json{{"edge_id", u.edge_id}, {"reason", u.reason}});
  return Json{{"severity", d.severity()},
              {"chosen_k", d.chosen_k},
              {"eps_border", d.eps_border},
              {"candidates", std::move(candidates)},
              {"em_iterations", d.em_iterations},
              {"em_converged", d.em_converged},
              {"convex_fallback_clusters", d.convex_fallback_clusters},
              {"graph_connected", d.graph_connected},
              {"parity_case", d.parity_case},
              {"untraversable", std::move(untrav)}};
}

Diagnostics diagnostics_from_json(const Json& j) {
  return guarded([&] {
    Diagnostics d;
    d.chosen_k = j.at("chosen_k").get<std::size_t>();
    d.eps_border = j.at("eps_border").get<double>();
    for (const auto& c : j.at("candidates")) {
      d.candidates.push_back({c.at("k").get<std::size_t>(), c.at("n_m").get<std::size_t>(),
                              c.at("n_s").get<std::size_t>(), c.at("r").get<double>(),
                              c.at("valid").get<bool>(),
                              c.at("neighbor_counts").get<std::vector<std::size_t>>()});
    }
    d.em_iterations = j.at("em_iterations").get<int>();
    d.em_converged = j.at("em_converged").get<bool>();
    d.convex_fallback_clusters = j.at("convex_fallback_clusters").get<std::vector<int>>();
    d.graph_connected = j.at("graph_connected").get<bool>();
    d.parity_case = j.at("parity_case").get<std::string>();
    for (const auto& u : j.at("untraversable")) {
      d.untraversable.push_back({u.at("edge_id").get<int>(), u.at("reason").get<std::string>()});
    }
    return d;
  });
}

Json truth_to_json(const synth::StructureSpec& spec, const synth::LabeledCloud& cloud) {
  Json regions = Json::array();
  for (const auto& r : cloud.true_regions) {
    Json verts = Json::array();
    for (const auto& p : r.polygon.vertices()) verts.push_back(Json::array({p.x, p.y}));
    regions.push_back(Json{{"id", r.id},
                           {"role", r.role == synth::RegionRole::Bar ? "bar" : "cross"},
                           {"polygon", std::move(verts)}});
  }
  return Json{{"shape", synth::to_string(spec.shape)},
              {"bar_width", spec.bar_width},
              {"bar_lengths", spec.bar_lengths},
              {"bar_widths", spec.bar_widths},
              {"density", spec.density},
              {"noise_sigma", spec.noise_sigma},
              {"dropout_slope", spec.dropout_slope},
              {"seed", spec.seed},
              {"regions", std::move(regions)},
              {"labels", cloud.true_label}};
}

Json read_json(const fs::path& file) {
  std::ifstream in(file);
  if (!in) parse_fail("cannot open " + file.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    parse_fail(file.string() + ": " + e.what());
  }
}

void write_json(const fs::path& file, const Json& j) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + file.string());
  out << j.dump(2) << '\n';
}

void write_artifacts(const RunArtifacts& a, const fs::path& dir) {
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "cloud.csv", std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + (dir / "cloud.csv").string());
    write_cloud_csv(out, a.cloud);
  }
  if (!a.labels.empty()) write_json(dir / "clusters.json", clusters_to_json(a.labels));
  if (!a.boundaries.empty()) write_json(dir / "boundaries.json", boundaries_to_json(a.boundaries));
  if (a.graph) write_json(dir / "graph.json", graph_to_json(*a.graph));
  if (a.route && a.graph) write_json(dir / "route.json", route_to_json(*a.route, *a.graph));
  if (a.paths) write_json(dir / "paths.json", paths_to_json(*a.paths));
  write_json(dir / "diagnostics.json", diagnostics_to_json(a.diagnostics));
}

RunArtifacts load_artifacts(const fs::path& dir) {
  RunArtifacts a;
  if (fs::exists(dir / "cloud.csv")) a.cloud = read_cloud(dir / "cloud.csv");
  if (fs::exists(dir / "clusters.json")) a.labels = clusters_from_json(read_json(dir / "clusters.json"));
  if (fs::exists(dir / "boundaries.json")) {
    a.boundaries = boundaries_from_json(read_json(dir / "boundaries.json"));
  }
  if (fs::exists(dir / "graph.json")) a.graph = graph_from_json(read_json(dir / "graph.json"));
  if (fs::exists(dir / "route.json")) a.route = route_from_json(read_json(dir / "route.json"));
  if (fs::exists(dir / "paths.json")) a.paths = paths_from_json(read_json(dir / "paths.json"));
  if (fs::exists(dir / "diagnostics.json")) {
    a.diagnostics = diagnostics_from_json(read_json(dir / "diagnostics.json"));
  }
  return a;
}

}  // namespace bridgenav::io
