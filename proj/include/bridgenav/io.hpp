#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "bridgenav/pipeline.hpp"
#include "bridgenav/synth.hpp"

namespace bridgenav::io {

using Json = nlohmann::ordered_json;

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/// Header `x,y` or `x,y,intensity`; blank lines are skipped. Errors carry the
/// 1-based line number.
PointCloud2D read_cloud_csv(std::istream& in);
/// ASCII PLY; x and y of each vertex are used, other properties ignored
/// except `intensity`.
PointCloud2D read_cloud_ply(std::istream& in);
/// Dispatches on the extension (.csv or .ply).
PointCloud2D read_cloud(const std::filesystem::path& file);
void write_cloud_csv(std::ostream& out, const PointCloud2D& cloud);

Json to_json(const PipelineConfig& config);
/// Keys absent from `j` keep their defaults; unknown keys are rejected.
PipelineConfig config_from_json(const Json& j);
PipelineConfig load_config(const std::filesystem::path& file);

Json clusters_to_json(const std::vector<int>& labels);
std::vector<int> clusters_from_json(const Json& j);

Json boundaries_to_json(const std::vector<Boundary>& boundaries);
std::vector<Boundary> boundaries_from_json(const Json& j);

Json graph_to_json(const StructureGraph& g);
StructureGraph graph_from_json(const Json& j);

/// Includes vertex positions along the walk.
Json route_to_json(const RouteArtifact& route, const StructureGraph& g);
RouteArtifact route_from_json(const Json& j);

Json paths_to_json(const std::vector<PlannedPath>& paths);
std::vector<PlannedPath> paths_from_json(const Json& j);

Json diagnostics_to_json(const Diagnostics& d);
Diagnostics diagnostics_from_json(const Json& j);

/// Ground-truth sidecar for a synthetic cloud.
Json truth_to_json(const synth::StructureSpec& spec, const synth::LabeledCloud& cloud);

Json read_json(const std::filesystem::path& file);
void write_json(const std::filesystem::path& file, const Json& j);

/// cloud.csv plus one JSON file per present artifact.
void write_artifacts(const RunArtifacts& artifacts, const std::filesystem::path& dir);
RunArtifacts load_artifacts(const std::filesystem::path& dir);

}  // namespace bridgenav::io
