#include "hxrl/commands.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "hxrl/artifact_io.hpp"
#include "hxrl/config_io.hpp"
#include "hxrl/errors.hpp"
#include "hxrl/explain.hpp"
#include "hxrl/export.hpp"
#include "hxrl/hierarchy.hpp"
#include "hxrl/oracle.hpp"

namespace hxrl::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CorruptedState& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

// "global" -> nullopt, "taskN" -> index of the task with id N.
std::optional<std::size_t> parse_scope(const std::string& scope, const HierarchyArtifact& h) {
  if (scope == "global") return std::nullopt;
  int id = 0;
  const char* first = scope.data() + 4;
  const char* last = scope.data() + scope.size();
  if (scope.rfind("task", 0) == 0 && scope.size() > 4) {
    const auto [ptr, ec] = std::from_chars(first, last, id);
    if (ec == std::errc() && ptr == last)
      for (std::size_t i = 0; i < h.tasks.size(); ++i)
        if (h.tasks[i].task.id == id) return i;
  }
  std::string known = "global";
  for (const auto& t : h.tasks) known += ", task" + std::to_string(t.task.id);
  throw UsageError("unknown scope \"" + scope + "\" (expected one of: " + known + ")");
}

const SuccessMatrix& select_matrix(const HierarchyArtifact& h, std::optional<std::size_t> task) {
  return task ? h.tasks[*task].p_success : h.global_p;
}

Action require_action(const std::string& name) {
  if (auto a = parse_action(name)) return *a;
  throw UsageError("unknown action \"" + name + "\" (expected up, down, left or right)");
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << bytes;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string summarize(const HierarchyArtifact& h) {
  std::ostringstream os;
  os << "seed " << h.seed << ", backend " << backend_name(h.options.backend) << ", alpha " << h.hyperparams.alpha
     << ", gamma " << h.hyperparams.gamma << ", epsilon " << h.hyperparams.epsilon << '\n';
  for (const TaskArtifact& t : h.tasks) {
    const double rate = static_cast<double>(t.episodes_succeeded) / t.task.episodes;
    os << "task " << t.task.id << " (" << t.task.start_state << " -> " << t.task.goal_state << ", max_steps "
       << t.task.max_steps << "): " << t.episodes_succeeded << "/" << t.task.episodes << " episodes succeeded ("
       << fixed6(100.0 * rate) << "%)\n";

    int zero_total = 0, zero_reachable = 0, zero_visited = 0, zero_unreachable = 0;
    std::vector<std::string> problems;
    for (const ForcedPair& f : forced_pairs(t.task, h.config)) {
      const auto visits = t.t_total.at(f.state, f.action);
      const double p = t.p_success.at(f.state, f.action);
      const std::string pair = "state " + std::to_string(f.state) + " " + std::string(action_name(f.action));
      if (f.expected == 1.0) {
        os << "  forced-one " << pair << ": P_s = " << fixed6(p) << " (T_t = " << visits << ")"
           << (visits == 0 ? (f.reachable ? " unvisited" : " unreachable") : "") << '\n';
      } else {
        ++zero_total;
        if (!f.reachable) ++zero_unreachable;
        else ++zero_reachable;
        if (visits > 0) ++zero_visited;
        else if (f.reachable) problems.push_back("  unvisited forced-zero pair: " + pair);
      }
      if (visits > 0 && p != f.expected)
        problems.push_back("  VIOLATION " + pair + ": P_s = " + fixed6(p) + ", expected " + fixed6(f.expected));
    }
    os << "  forced-zero pairs: " << zero_total << " total, " << zero_visited << " visited, " << zero_reachable
       << " reachable within the step cap, " << zero_unreachable << " unreachable\n";
    for (const auto& line : problems) os << line << '\n';
  }
  double max_global = 0.0;
  for (double v : h.global_p.flat()) max_global = std::max(max_global, v);
  os << "global matrix: mean of " << h.tasks.size() << " task matrices, max entry " << fixed6(max_global) << '\n';
  return os.str();
}

}  // namespace

int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ExperimentConfig cfg = load_experiment_config(args.config_path);
    if (args.seed) cfg.hyperparams.seed = *args.seed;
    for (const auto& w : check_task_chain(cfg.tasks)) err << "warning: " << w << '\n';

    HierarchyArtifact trained = train_all(cfg.grid, cfg.tasks, cfg.hyperparams, cfg.options);
    const std::string summary = summarize(trained);
    const ArtifactFile file = make_artifact_file(cfg, std::move(trained));

    std::filesystem::create_directories(args.out_dir);
    save_artifact(file, args.out_dir / kArtifactFileName);
    write_file(args.out_dir / kSummaryFileName, summary);
    out << summary << "wrote " << (args.out_dir / kArtifactFileName).string() << '\n';
    return kExitOk;
  });
}

int cmd_explain(const ExplainArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ArtifactFile file = load_artifact(args.artifact_path);
    const HierarchyArtifact& h = file.hierarchy;
    const auto scope = parse_scope(args.scope, h);
    if (!h.config.contains(args.state))
      throw UsageError("state " + std::to_string(args.state) + " is outside the grid (0.." +
                       std::to_string(h.config.num_states() - 1) + ")");
    const Action taken = require_action(args.action);
    const SuccessMatrix& p = select_matrix(h, scope);
    const std::string phrase = file.experiment.goal_phrase(args.scope);
    try {
      const Explanation e =
          args.versus ? explain_contrastive(p, h.config, args.state, taken, require_action(*args.versus), phrase,
                                            file.experiment.templates)
                      : explain_factual(p, h.config, args.state, taken, phrase, file.experiment.templates);
      out << e.rendered << '\n';
    } catch (const DomainError& e) {
      std::string valid;
      for (Action a : valid_actions(args.state, h.config).to_vector())
        valid += (valid.empty() ? "" : ", ") + std::string(action_name(a));
      throw UsageError(std::string(e.what()) + " (valid here: " + valid + ")");
    }
    return kExitOk;
  });
}

int cmd_export(const ExportArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.format != "csv" && args.format != "ppm" && args.format != "svg")
      throw UsageError("unknown format \"" + args.format + "\" (expected csv, ppm or svg)");
    const ArtifactFile file = load_artifact(args.artifact_path);
    const HierarchyArtifact& h = file.hierarchy;
    const auto scope = parse_scope(args.matrix, h);
    const SuccessMatrix& p = select_matrix(h, scope);

    // The global matrix reports visits summed over all tasks.
    CountMatrix visits(h.config.num_states());
    for (std::size_t i = 0; i < h.tasks.size(); ++i) {
      if (scope && *scope != i) continue;
      auto dst = visits.flat();
      auto src = h.tasks[i].t_total.flat();
      for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
    }

    std::ostringstream bytes;
    if (args.format == "csv") write_csv(bytes, p, &visits);
    else if (args.format == "ppm") write_pgm(bytes, p);
    else write_svg(bytes, p, "Probability of success (" + args.matrix + ")");
    write_file(args.out_path, bytes.str());
    out << "wrote " << args.out_path.string() << '\n';
    return kExitOk;
  });
}

int cmd_rollout(const RolloutArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.max_total_steps < 0) throw UsageError("max steps must be non-negative");
    const ArtifactFile file = load_artifact(args.artifact_path);
    const Rollout r = rollout_chain(file.hierarchy, args.seed, args.max_total_steps);
    for (const RolloutStep& s : r.steps)
      out << "task=" << s.task_id << " state=" << s.state << " action=" << action_name(s.action)
          << " reward=" << s.reward << '\n';
    out << "terminal=" << terminal_name(r.terminal) << " final_state=" << r.final_state
        << " total_reward=" << r.total_reward << '\n';
    return kExitOk;
  });
}

int cmd_oracle(const OracleArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load_experiment_config(args.config_path);
    const auto task_it = std::find_if(cfg.tasks.begin(), cfg.tasks.end(),
                                      [&](const TaskSpec& t) { return t.id == args.task_id; });
    if (task_it == cfg.tasks.end()) throw UsageError("no task with id " + std::to_string(args.task_id));
    const TaskSpec& task = *task_it;

    FixedPolicy policy;
    if (args.policy == "uniform") {
      policy = uniform_policy(cfg.grid);
    } else if (args.policy == "greedy" || args.policy == "greedy-from-artifact") {
      if (!args.artifact_path) throw UsageError("--policy greedy needs --artifact");
      const ArtifactFile file = load_artifact(*args.artifact_path);
      if (file.hierarchy.config != cfg.grid) throw UsageError("artifact was trained on a different grid");
      const auto trained = std::find_if(file.hierarchy.tasks.begin(), file.hierarchy.tasks.end(),
                                        [&](const TaskArtifact& t) { return t.task.id == task.id; });
      if (trained == file.hierarchy.tasks.end()) throw UsageError("artifact has no task " + std::to_string(task.id));
      policy = greedy_policy(trained->backend, cfg.grid);
    } else {
      throw UsageError("unknown policy \"" + args.policy + "\" (expected uniform or greedy)");
    }

    const int horizon = args.horizon.value_or(task.max_steps);
    if (horizon < 0) throw UsageError("horizon must be non-negative");
    std::ostringstream bytes;
    write_csv(bytes, success_prob_exact(policy, task, cfg.grid, horizon));
    if (args.out_path) write_file(*args.out_path, bytes.str());
    else out << bytes.str();
    return kExitOk;
  });
}

}  // namespace hxrl::cli
