#pragma once

// Experiment configuration: JSON load/store with validation. Errors carry the
// line of the offending value and its JSON pointer.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hxrl/explain.hpp"
#include "hxrl/gridworld.hpp"
#include "hxrl/hierarchy.hpp"
#include "hxrl/qfunction.hpp"

namespace hxrl {

struct ExperimentConfig {
  GridConfig grid = default_layout();
  std::vector<TaskSpec> tasks = default_tasks();
  Hyperparams hyperparams = Hyperparams::defaults_for(BackendKind::Tabular);
  TrainOptions options;
  Templates templates;
  // Keyed by scope: "task1", "task2", ..., "global".
  std::map<std::string, std::string> goal_phrases{
      {"task1", "escaping the black holes"},
      {"task2", "collecting the shield"},
      {"task3", "reaching the wormhole and returning home"},
      {"global", "returning home"},
  };

  // Falls back to a generic phrase when the scope has none configured.
  std::string goal_phrase(std::string_view scope) const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// The shipped default experiment: layout, three tasks, tabular backend.
ExperimentConfig default_experiment();

nlohmann::json grid_to_json(const GridConfig& grid);
nlohmann::json config_to_json(const ExperimentConfig& config);

// Throws ConfigError ("<source>:<line>: <pointer>: <message>").
GridConfig parse_grid_config(std::string_view text, std::string_view source = "<grid>");
ExperimentConfig parse_experiment_config(std::string_view text,
                                         std::string_view source = "<config>");
// Throws IoError if the file cannot be read, ConfigError if it is invalid.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// Builds from an already-parsed document (no line information).
ExperimentConfig experiment_config_from_json(const nlohmann::json& doc);

}  // namespace hxrl
