#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bridgenav/geometry.hpp"
#include "bridgenav/point_cloud.hpp"

namespace bridgenav::synth {

enum class Shape { Cross, T, K, L, I };

std::string_view to_string(Shape shape);
std::optional<Shape> parse_shape(std::string_view name);
/// Bars in the layout of `shape` (Cross 4, T 3, K 3, L 2, I 3).
std::size_t bar_count(Shape shape);

enum class RegionRole { Bar, Cross };

struct StructureSpec {
  Shape shape = Shape::Cross;
  double bar_width = 0.3;
  // One entry applies to every bar; otherwise one entry per bar.
  std::vector<double> bar_lengths{1.0};
  // Optional per-bar width override (bars only; junctions keep bar_width).
  std::vector<double> bar_widths;
  double density = 2000.0;  // points per m^2
  double noise_sigma = 0.002;
  double dropout_slope = 0.0;  // drop probability per meter along +x
  std::uint64_t seed = 0;
};

struct Region {
  int id = 0;
  RegionRole role = RegionRole::Bar;
  Polygon2 polygon;
};

struct LabeledCloud {
  PointCloud2D cloud;
  std::vector<int> true_label;  // region id per point
  std::vector<Point2> origins;  // noiseless sample positions
  std::vector<Region> true_regions;
};

/// Region layout only (no sampling). Bars come first, junctions last.
std::vector<Region> layout(const StructureSpec& spec);

LabeledCloud generate(const StructureSpec& spec);

/// Drops points with probability min(0.9, slope * d), where d is the distance
/// along `axis` from the point nearest the sensor.
LabeledCloud degrade(const LabeledCloud& cloud, Point2 axis, double slope, std::uint64_t seed);

}  // namespace bridgenav::synth
