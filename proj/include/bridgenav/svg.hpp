#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "bridgenav/pipeline.hpp"

namespace bridgenav {

enum class SvgLayer { Segmentation, Boundaries, Graph, Route, Path };

std::string_view to_string(SvgLayer layer);
std::optional<SvgLayer> parse_svg_layer(std::string_view name);

/// SVG 1.1 document of one layer. Each traversed route edge is one
/// `<line class="route-step">` carrying an arrow marker. Throws MissingLayer
/// when the artifacts lack the data for `layer`.
std::string render_svg(const RunArtifacts& artifacts, SvgLayer layer);

/// Writes `<layer>.svg` into `dir` for every layer the artifacts support.
void write_svg_layers(const RunArtifacts& artifacts, const std::filesystem::path& dir);

}  // namespace bridgenav
