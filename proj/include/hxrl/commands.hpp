#pragma once

// Subcommand bodies behind the hxrl executable. Each returns a process exit
// code: 0 success, 2 user or configuration error, 3 I/O error.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace hxrl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

struct TrainArgs {
  std::filesystem::path config_path;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out_dir;
};

struct ExplainArgs {
  std::filesystem::path artifact_path;
  std::string scope;
  int state = 0;
  std::string action;
  std::optional<std::string> versus;
};

struct ExportArgs {
  std::filesystem::path artifact_path;
  std::string matrix;
  std::string format;
  std::filesystem::path out_path;
};

struct RolloutArgs {
  std::filesystem::path artifact_path;
  std::uint64_t seed = 0;
  int max_total_steps = 1000;
};

struct OracleArgs {
  std::filesystem::path config_path;
  int task_id = 1;
  std::string policy = "uniform";
  std::optional<std::filesystem::path> artifact_path;
  std::optional<int> horizon;
  std::optional<std::filesystem::path> out_path;
};

inline constexpr const char* kArtifactFileName = "artifact.json";
inline constexpr const char* kSummaryFileName = "summary.txt";

int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err);
int cmd_explain(const ExplainArgs& args, std::ostream& out, std::ostream& err);
int cmd_export(const ExportArgs& args, std::ostream& out, std::ostream& err);
int cmd_rollout(const RolloutArgs& args, std::ostream& out, std::ostream& err);
int cmd_oracle(const OracleArgs& args, std::ostream& out, std::ostream& err);

}  // namespace hxrl::cli
