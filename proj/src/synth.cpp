#include "bridgenav/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bridgenav/rng.hpp"

namespace bridgenav::synth {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct Junction {
  Point2 center;
  std::vector<double> angles;  // directions of attached bars, radians
};

struct BarDef {
  Point2 junction;
  double angle;
  double length;
  double width;
};

// Snapped so that corners shared by neighbouring regions compare equal.
double snap(double v) { return std::round(v * 1e12) / 1e12; }
Point2 snap(const Point2& p) { return {snap(p.x), snap(p.y)}; }

Point2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Rectangle starting on the junction square's side facing `angle`.
std::vector<Point2> bar_rectangle(const BarDef& bar, double junction_width) {
  const Point2 d = unit(bar.angle);
  const Point2 n{-d.y, d.x};
  const Point2 near = bar.junction + d * (0.5 * junction_width);
  const Point2 far = near + d * bar.length;
  const double h = 0.5 * bar.width;
  return {snap(near - n * h), snap(far - n * h), snap(far + n * h), snap(near + n * h)};
}

bool strictly_inside_rect(const Point2& p, const BarDef& bar, double junction_width) {
  const Point2 d = unit(bar.angle);
  const Point2 n{-d.y, d.x};
  const Point2 rel = p - bar.junction;
  const double along = dot(rel, d);
  const double lateral = dot(rel, n);
  const double tol = 1e-9;
  return along > 0.5 * junction_width + tol && along < 0.5 * junction_width + bar.length - tol &&
         std::abs(lateral) < 0.5 * bar.width - tol;
}

std::vector<double> expand(const std::vector<double>& values, std::size_t count,
                           const char* what) {
  if (values.size() == 1) return std::vector<double>(count, values.front());
  if (values.size() != count) {
    throw Error(ErrorCode::InvalidSpec,
                std::string(what) + " must have 1 or " + std::to_string(count) + " entries");
  }
  return values;
}

void validate(const StructureSpec& spec) {
  if (!(spec.bar_width > 0.0)) throw Error(ErrorCode::InvalidSpec, "bar_width must be positive");
  if (!(spec.density > 0.0)) throw Error(ErrorCode::InvalidSpec, "density must be positive");
  if (!(spec.noise_sigma >= 0.0)) {
    throw Error(ErrorCode::InvalidSpec, "noise_sigma must be non-negative");
  }
  if (!(spec.dropout_slope >= 0.0)) {
    throw Error(ErrorCode::InvalidSpec, "dropout_slope must be non-negative");
  }
  if (spec.bar_lengths.empty()) throw Error(ErrorCode::InvalidSpec, "bar_lengths is empty");
  for (double l : spec.bar_lengths) {
    if (!(l > 0.0)) throw Error(ErrorCode::InvalidSpec, "bar lengths must be positive");
  }
  for (double w : spec.bar_widths) {
    if (!(w > 0.0) || w > spec.bar_width) {
      throw Error(ErrorCode::InvalidSpec, "bar width overrides must be in (0, bar_width]");
    }
  }
}

}  // namespace

std::string_view to_string(Shape shape) {
  switch (shape) {
    case Shape::Cross: return "Cross";
    case Shape::T: return "T";
    case Shape::K: return "K";
    case Shape::L: return "L";
    case Shape::I: return "I";
  }
  return "?";
}

std::optional<Shape> parse_shape(std::string_view name) {
  for (Shape s : {Shape::Cross, Shape::T, Shape::K, Shape::L, Shape::I}) {
    if (name == to_string(s)) return s;
  }
  if (name == "cross") return Shape::Cross;
  if (name == "t") return Shape::T;
  if (name == "k") return Shape::K;
  if (name == "l") return Shape::L;
  if (name == "i") return Shape::I;
  return std::nullopt;
}

std::size_t bar_count(Shape shape) {
  switch (shape) {
    case Shape::Cross: return 4;
    case Shape::T: return 3;
    case Shape::K: return 3;
    case Shape::L: return 2;
    case Shape::I: return 3;
  }
  return 0;
}

std::vector<Region> layout(const StructureSpec& spec) {
  validate(spec);
  const std::size_t nb = bar_count(spec.shape);
  const auto lengths = expand(spec.bar_lengths, nb, "bar_lengths");
  const auto widths =
      spec.bar_widths.empty() ? std::vector<double>(nb, spec.bar_width)
                              : expand(spec.bar_widths, nb, "bar_widths");
  const double w = spec.bar_width;

  std::vector<Junction> junctions;
  std::vector<BarDef> bars;
  auto single = [&](std::initializer_list<double> degrees) {
    junctions.push_back({{0.0, 0.0}, {}});
    std::size_t i = 0;
    for (double deg : degrees) {
      junctions.back().angles.push_back(deg * kDeg);
      bars.push_back({{0.0, 0.0}, deg * kDeg, lengths[i], widths[i]});
      ++i;
    }
  };
  switch (spec.shape) {
    case Shape::Cross: single({0.0, 90.0, 180.0, 270.0}); break;
    case Shape::T: single({0.0, 180.0, 270.0}); break;
    case Shape::L: single({0.0, 90.0}); break;
    case Shape::K: single({180.0, 45.0, -45.0}); break;
    case Shape::I: {
      // bar, junction, bar, junction, bar stacked along +y.
      const Point2 a{0.0, 0.0};
      const Point2 b{0.0, w + lengths[1]};
      junctions.push_back({a, {270.0 * kDeg, 90.0 * kDeg}});
      junctions.push_back({b, {270.0 * kDeg, 90.0 * kDeg}});
      bars.push_back({a, 270.0 * kDeg, lengths[0], widths[0]});
      bars.push_back({a, 90.0 * kDeg, lengths[1], widths[1]});
      bars.push_back({b, 90.0 * kDeg, lengths[2], widths[2]});
      break;
    }
  }

  std::vector<Region> regions;
  int next_id = 0;
  for (const auto& bar : bars) {
    regions.push_back({next_id++, RegionRole::Bar, Polygon2(bar_rectangle(bar, w))});
  }
  for (const auto& j : junctions) {
    // Junction = hull of the attached bars' near edges (full width) plus the
    // w x w square corners not swallowed by a bar.
    std::vector<Point2> pts;
    for (double angle : j.angles) {
      const Point2 d = unit(angle);
      const Point2 n{-d.y, d.x};
      const Point2 near = j.center + d * (0.5 * w);
      pts.push_back(snap(near - n * (0.5 * w)));
      pts.push_back(snap(near + n * (0.5 * w)));
    }
    for (double sx : {-0.5, 0.5}) {
      for (double sy : {-0.5, 0.5}) {
        const Point2 corner = snap(j.center + Point2{sx * w, sy * w});
        bool swallowed = false;
        for (double angle : j.angles) {
          if (strictly_inside_rect(corner, {j.center, angle, 1e9, w}, w)) swallowed = true;
        }
        if (!swallowed) pts.push_back(corner);
      }
    }
    regions.push_back({next_id++, RegionRole::Cross, Polygon2(convex_hull(pts))});
  }
  return regions;
}

LabeledCloud generate(const StructureSpec& spec) {
  LabeledCloud out;
  out.true_regions = layout(spec);
  Rng rng(mix_seed(spec.seed, 0));
  for (const auto& region : out.true_regions) {
    const auto count = static_cast<std::size_t>(std::llround(spec.density * region.polygon.area()));
    const BoundingBox box = bounding_box(region.polygon.vertices());
    std::size_t made = 0;
    while (made < count) {
      const Point2 p{rng.uniform(box.min.x, box.max.x), rng.uniform(box.min.y, box.max.y)};
      if (!point_in_polygon_raycast(p, region.polygon)) continue;
      out.origins.push_back(p);
      out.true_label.push_back(region.id);
      ++made;
    }
  }
  out.cloud.points.reserve(out.origins.size());
  for (const auto& o : out.origins) {
    Point2 p = o;
    if (spec.noise_sigma > 0.0) {
      p.x += spec.noise_sigma * rng.normal();
      p.y += spec.noise_sigma * rng.normal();
    }
    out.cloud.points.push_back(p);
  }
  if (spec.dropout_slope > 0.0) {
    return degrade(out, {1.0, 0.0}, spec.dropout_slope, mix_seed(spec.seed, 1));
  }
  return out;
}

LabeledCloud degrade(const LabeledCloud& cloud, Point2 axis, double slope, std::uint64_t seed) {
  if (!(slope >= 0.0)) throw Error(ErrorCode::InvalidArgument, "slope must be non-negative");
  if (slope == 0.0 || cloud.cloud.empty()) return cloud;
  const double n = axis.norm();
  if (!(n > 0.0)) throw Error(ErrorCode::InvalidArgument, "axis must be non-zero");
  axis = axis / n;
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& p : cloud.cloud.points) lo = std::min(lo, dot(p, axis));

  LabeledCloud out;
  out.true_regions = cloud.true_regions;
  Rng rng(seed);
  const bool has_intensity = cloud.cloud.intensity.size() == cloud.cloud.size();
  for (std::size_t i = 0; i < cloud.cloud.size(); ++i) {
    const double d = dot(cloud.cloud.points[i], axis) - lo;
    const double drop = std::min(0.9, slope * d);
    if (rng.uniform() < drop) continue;
    out.cloud.points.push_back(cloud.cloud.points[i]);
    if (has_intensity) out.cloud.intensity.push_back(cloud.cloud.intensity[i]);
    out.true_label.push_back(cloud.true_label[i]);
    out.origins.push_back(cloud.origins[i]);
  }
  return out;
}

}  // namespace bridgenav::synth
