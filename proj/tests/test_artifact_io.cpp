#include <gtest/gtest.h>

#include "hxrl/artifact_io.hpp"
#include "hxrl/errors.hpp"

namespace hxrl {
namespace {

ExperimentConfig small_experiment(BackendKind backend) {
  ExperimentConfig cfg = default_experiment();
  for (auto& t : cfg.tasks) t.episodes = 200;
  cfg.options.backend = backend;
  cfg.options.hidden_size = 16;
  cfg.hyperparams = Hyperparams::defaults_for(backend);
  cfg.hyperparams.seed = 17;
  return cfg;
}

ArtifactFile train_small(BackendKind backend) {
  const ExperimentConfig cfg = small_experiment(backend);
  return make_artifact_file(cfg, train_all(cfg.grid, cfg.tasks, cfg.hyperparams, cfg.options));
}

void expect_same(const ArtifactFile& a, const ArtifactFile& b) {
  EXPECT_EQ(a.experiment, b.experiment);
  EXPECT_EQ(a.hierarchy.seed, b.hierarchy.seed);
  EXPECT_EQ(a.hierarchy.global_p, b.hierarchy.global_p);
  ASSERT_EQ(a.hierarchy.tasks.size(), b.hierarchy.tasks.size());
  for (std::size_t i = 0; i < a.hierarchy.tasks.size(); ++i) {
    const auto& x = a.hierarchy.tasks[i];
    const auto& y = b.hierarchy.tasks[i];
    EXPECT_EQ(x.task, y.task);
    EXPECT_EQ(x.t_total, y.t_total);
    EXPECT_EQ(x.t_success, y.t_success);
    EXPECT_EQ(x.p_success, y.p_success);
    EXPECT_EQ(x.episodes_succeeded, y.episodes_succeeded);
    EXPECT_EQ(x.backend, y.backend);
  }
}

TEST(ArtifactIo, TabularRoundTripIsLossless) {
  const ArtifactFile a = train_small(BackendKind::Tabular);
  const std::string text = serialize_artifact(a);
  const ArtifactFile b = deserialize_artifact(text);
  expect_same(a, b);
  EXPECT_EQ(serialize_artifact(b), text);
}

TEST(ArtifactIo, MlpRoundTripIsLossless) {
  const ArtifactFile a = train_small(BackendKind::Mlp);
  const ArtifactFile b = deserialize_artifact(serialize_artifact(a));
  expect_same(a, b);
}

TEST(ArtifactIo, TamperedProbabilitiesAreDetected) {
  auto doc = artifact_to_json(train_small(BackendKind::Tabular));
  doc["tasks"][0]["p_success"][21][1] = 0.5;
  EXPECT_THROW(artifact_from_json(doc), CorruptedState);

  auto counts = artifact_to_json(train_small(BackendKind::Tabular));
  counts["tasks"][0]["t_success"][21][1] = 1u << 30;
  EXPECT_THROW(artifact_from_json(counts), CorruptedState);

  auto global = artifact_to_json(train_small(BackendKind::Tabular));
  global["global_p"][0][0] = 0.25;
  EXPECT_THROW(artifact_from_json(global), CorruptedState);
}

TEST(ArtifactIo, SchemaProblemsAreConfigErrors) {
  auto doc = artifact_to_json(train_small(BackendKind::Tabular));
  doc["format_version"] = 99;
  EXPECT_THROW(artifact_from_json(doc), ConfigError);
  EXPECT_THROW(deserialize_artifact("{not json"), ConfigError);
  auto missing = artifact_to_json(train_small(BackendKind::Tabular));
  missing["tasks"][0].erase("t_total");
  EXPECT_THROW(artifact_from_json(missing), ConfigError);
}

TEST(ArtifactIo, LoadMissingFileIsIoError) {
  EXPECT_THROW(load_artifact("/nonexistent/artifact.json"), IoError);
}

}  // namespace
}  // namespace hxrl
