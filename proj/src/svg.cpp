#include "bridgenav/svg.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <limits>

#include "bridgenav/planner.hpp"

namespace bridgenav {

namespace {

constexpr double kCanvas = 800.0;
constexpr double kMargin = 20.0;

constexpr std::array<const char*, 10> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                               "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                               "#bcbd22", "#17becf"};

const char* color(int id) {
  if (id < 0) return "#000000";
  return kPalette[static_cast<std::size_t>(id) % kPalette.size()];
}

std::string num(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.3f", v);
  return buf.data();
}

// World-to-canvas map with y pointing up.
struct View {
  BoundingBox box{{0.0, 0.0}, {1.0, 1.0}};
  double scale = 1.0;
  double height = kCanvas;
  double width = kCanvas;

  explicit View(const std::vector<Point2>& pts) {
    if (!pts.empty()) box = bounding_box(pts);
    const double span = std::max({box.max.x - box.min.x, box.max.y - box.min.y, 1e-6});
    scale = (kCanvas - 2.0 * kMargin) / span;
    width = (box.max.x - box.min.x) * scale + 2.0 * kMargin;
    height = (box.max.y - box.min.y) * scale + 2.0 * kMargin;
  }
  std::string x(double wx) const { return num((wx - box.min.x) * scale + kMargin); }
  std::string y(double wy) const { return num((box.max.y - wy) * scale + kMargin); }
};

std::vector<Point2> extent(const RunArtifacts& a) {
  std::vector<Point2> pts = a.cloud.points;
  for (const auto& b : a.boundaries) {
    pts.insert(pts.end(), b.polygon.vertices().begin(), b.polygon.vertices().end());
  }
  if (a.graph) {
    for (const auto& v : a.graph->vertices()) pts.push_back(v.position);
  }
  return pts;
}

void polygons(std::string& out, const View& view, const std::vector<Boundary>& boundaries,
              double opacity) {
  out += "<g id=\"boundaries\">\n";
  for (const auto& b : boundaries) {
    out += "<polygon class=\"boundary\" data-cluster=\"" + std::to_string(b.cluster_id) + "\" points=\"";
    bool first = true;
    for (const auto& p : b.polygon.vertices()) {
      if (!first) out += ' ';
      first = false;
      out += view.x(p.x) + "," + view.y(p.y);
    }
    out += "\" fill=\"" + std::string(color(b.cluster_id)) + "\" fill-opacity=\"" + num(opacity) +
           "\" stroke=\"" + color(b.cluster_id) + "\" stroke-width=\"1.5\"/>\n";
  }
  out += "</g>\n";
}

void graph_layer(std::string& out, const View& view, const StructureGraph& g, bool edges) {
  if (edges) {
    out += "<g id=\"edges\">\n";
    for (const auto& e : g.edges()) {
      const auto& a = g.vertex(e.u).position;
      const auto& b = g.vertex(e.v).position;
      out += "<line class=\"edge\" data-edge=\"" + std::to_string(e.id) + "\" x1=\"" + view.x(a.x) +
             "\" y1=\"" + view.y(a.y) + "\" x2=\"" + view.x(b.x) + "\" y2=\"" + view.y(b.y) +
             "\" stroke=\"#444444\" stroke-width=\"2\"/>\n";
    }
    out += "</g>\n";
  }
  out += "<g id=\"vertices\">\n";
  for (const auto& v : g.vertices()) {
    const char* fill = v.role == VertexRole::Center     ? "#d62728"
                       : v.role == VertexRole::BorderMid ? "#1f77b4"
                                                         : "#2ca02c";
    out += "<circle class=\"vertex " + std::string(to_string(v.role)) + "\" cx=\"" +
           view.x(v.position.x) + "\" cy=\"" + view.y(v.position.y) + "\" r=\"5\" fill=\"" + fill +
           "\"/>\n";
    out += "<text class=\"vertex-label\" x=\"" + view.x(v.position.x) + "\" y=\"" +
           view.y(v.position.y) + "\" dx=\"6\" dy=\"-6\" font-size=\"12\">" + std::to_string(v.id) +
           "</text>\n";
  }
  out += "</g>\n";
}

}  // namespace

std::string_view to_string(SvgLayer layer) {
  switch (layer) {
    case SvgLayer::Segmentation: return "segmentation";
    case SvgLayer::Boundaries: return "boundaries";
    case SvgLayer::Graph: return "graph";
    case SvgLayer::Route: return "route";
    case SvgLayer::Path: return "path";
  }
  return "?";
}

std::optional<SvgLayer> parse_svg_layer(std::string_view name) {
  for (auto l : {SvgLayer::Segmentation, SvgLayer::Boundaries, SvgLayer::Graph, SvgLayer::Route,
                 SvgLayer::Path}) {
    if (name == to_string(l)) return l;
  }
  return std::nullopt;
}

std::string render_svg(const RunArtifacts& a, SvgLayer layer) {
  const auto missing = [&](const char* what) {
    throw Error(ErrorCode::MissingLayer,
                std::string(to_string(layer)) + " layer needs " + what);
  };
  switch (layer) {
    case SvgLayer::Segmentation:
      if (a.cloud.empty() || a.labels.size() != a.cloud.size()) missing("cloud and cluster labels");
      break;
    case SvgLayer::Boundaries:
      if (a.boundaries.empty()) missing("boundaries");
      break;
    case SvgLayer::Graph:
      if (!a.graph) missing("a graph");
      break;
    case SvgLayer::Route:
      if (!a.graph || !a.route) missing("a graph and a route");
      break;
    case SvgLayer::Path:
      if (!a.paths || a.boundaries.empty()) missing("boundaries and planned paths");
      break;
  }

  const View view(extent(a));
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(view.width) +
         "\" height=\"" + num(view.height) + "\" viewBox=\"0 0 " + num(view.width) + " " +
         num(view.height) + "\">\n";
  out += "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"8\" "
         "markerHeight=\"8\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#d62728\"/>"
         "</marker></defs>\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  switch (layer) {
    case SvgLayer::Segmentation:
      out += "<g id=\"points\">\n";
      for (std::size_t i = 0; i < a.cloud.size(); ++i) {
        const auto& p = a.cloud.points[i];
        out += "<circle cx=\"" + view.x(p.x) + "\" cy=\"" + view.y(p.y) + "\" r=\"1.2\" fill=\"" +
               color(a.labels[i]) + "\"/>\n";
      }
      out += "</g>\n";
      break;
    case SvgLayer::Boundaries:
      polygons(out, view, a.boundaries, 0.25);
      out += "<g id=\"centers\">\n";
      for (const auto& b : a.boundaries) {
        out += "<circle class=\"center\" cx=\"" + view.x(b.center.x) + "\" cy=\"" + view.y(b.center.y) +
               "\" r=\"4\" fill=\"" + color(b.cluster_id) + "\"/>\n";
      }
      out += "</g>\n";
      break;
    case SvgLayer::Graph:
      polygons(out, view, a.boundaries, 0.1);
      graph_layer(out, view, *a.graph, true);
      break;
    case SvgLayer::Route: {
      polygons(out, view, a.boundaries, 0.1);
      graph_layer(out, view, *a.graph, true);
      out += "<g id=\"route\">\n";
      const auto& walk = a.route->route.walk;
      const auto& edges = a.route->route.traversed_edges;
      for (std::size_t i = 0; i < edges.size() && i + 1 < walk.size(); ++i) {
        const auto& p = a.graph->vertex(walk[i]).position;
        const auto& q = a.graph->vertex(walk[i + 1]).position;
        out += "<line class=\"route-step\" data-step=\"" + std::to_string(i) + "\" data-edge=\"" +
               std::to_string(edges[i]) + "\" x1=\"" + view.x(p.x) + "\" y1=\"" + view.y(p.y) +
               "\" x2=\"" + view.x(q.x) + "\" y2=\"" + view.y(q.y) +
               "\" stroke=\"#d62728\" stroke-width=\"2.5\" stroke-opacity=\"0.8\" "
               "marker-end=\"url(#arrow)\"/>\n";
      }
      out += "</g>\n";
      break;
    }
    case SvgLayer::Path:
      polygons(out, view, a.boundaries, 0.1);
      out += "<g id=\"paths\">\n";
      for (const auto& path : *a.paths) {
        out += "<polyline class=\"path\" data-edge=\"" + std::to_string(path.edge_id) + "\" points=\"";
        bool first = true;
        for (const auto& c : path.configs) {
          if (!first) out += ' ';
          first = false;
          out += view.x(c.x) + "," + view.y(c.y);
        }
        out += "\" fill=\"none\" stroke=\"#9467bd\" stroke-width=\"1.5\"/>\n";
      }
      out += "</g>\n";
      if (a.graph) graph_layer(out, view, *a.graph, false);
      break;
  }
  out += "</svg>\n";
  return out;
}

void write_svg_layers(const RunArtifacts& artifacts, const std::filesystem::path& dir) {
  for (auto layer : {SvgLayer::Segmentation, SvgLayer::Boundaries, SvgLayer::Graph, SvgLayer::Route,
                     SvgLayer::Path}) {
    std::string svg;
    try {
      svg = render_svg(artifacts, layer);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MissingLayer) throw;
      continue;
    }
    std::ofstream out(dir / (std::string(to_string(layer)) + ".svg"), std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write into " + dir.string());
    out << svg;
  }
}

}  // namespace bridgenav
