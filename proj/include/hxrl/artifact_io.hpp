#pragma once

// Single-file JSON artifact holding a trained hierarchy. Counts are stored as
// integers; probabilities are checked against them on load.

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "hxrl/config_io.hpp"
#include "hxrl/hierarchy.hpp"

namespace hxrl {

inline constexpr int kArtifactFormatVersion = 1;

struct ArtifactFile {
  ExperimentConfig experiment;
  HierarchyArtifact hierarchy;
};

ArtifactFile make_artifact_file(const ExperimentConfig& experiment, HierarchyArtifact hierarchy);

nlohmann::json artifact_to_json(const ArtifactFile& artifact);
// Throws ConfigError on schema problems and CorruptedState when stored
// probabilities disagree with the counts.
ArtifactFile artifact_from_json(const nlohmann::json& doc);

std::string serialize_artifact(const ArtifactFile& artifact);
ArtifactFile deserialize_artifact(std::string_view text);

void save_artifact(const ArtifactFile& artifact, const std::filesystem::path& path);
ArtifactFile load_artifact(const std::filesystem::path& path);

}  // namespace hxrl
