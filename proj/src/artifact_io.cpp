#include "hxrl/artifact_io.hpp"

#include <fstream>
#include <sstream>

#include "hxrl/errors.hpp"

namespace hxrl {

using nlohmann::json;

namespace {

template <class T>
json matrix_to_json(const StateActionMatrix<T>& m) {
  json rows = json::array();
  for (StateId s = 0; s < m.num_states(); ++s) {
    const auto r = m.row(s);
    rows.push_back(json::array({r[0], r[1], r[2], r[3]}));
  }
  return rows;
}

template <class T>
StateActionMatrix<T> matrix_from_json(const json& j, int num_states, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != num_states)
    throw ConfigError(what + ": expected " + std::to_string(num_states) + " rows");
  StateActionMatrix<T> m(num_states);
  for (StateId s = 0; s < num_states; ++s) {
    const json& row = j[s];
    if (!row.is_array() || row.size() != kNumActions) throw ConfigError(what + ": rows must have 4 entries");
    for (int a = 0; a < kNumActions; ++a) {
      if constexpr (std::is_integral_v<T>) {
        if (!row[a].is_number_unsigned() && !(row[a].is_number_integer() && row[a].get<std::int64_t>() >= 0))
          throw ConfigError(what + ": counts must be non-negative integers");
      } else if (!row[a].is_number()) {
        throw ConfigError(what + ": entries must be numbers");
      }
      m.at(s, a) = row[a].get<T>();
    }
  }
  return m;
}

json array_to_json(const std::vector<double>& data, std::initializer_list<int> shape) {
  return json{{"shape", json(std::vector<int>(shape))}, {"data", data}};
}

std::vector<double> array_from_json(const json& j, std::initializer_list<int> shape, const std::string& what) {
  if (!j.is_object() || j.at("shape") != json(std::vector<int>(shape)))
    throw ConfigError(what + ": unexpected array shape");
  auto data = j.at("data").get<std::vector<double>>();
  std::size_t expected = 1;
  for (int d : shape) expected *= static_cast<std::size_t>(d);
  if (data.size() != expected) throw ConfigError(what + ": data length does not match shape");
  return data;
}

json backend_to_json(const QFunction& q) {
  if (const auto* table = std::get_if<QTable>(&q))
    return json{{"kind", "tabular"}, {"shape", {table->num_states(), kNumActions}}, {"values", matrix_to_json(table->matrix())}};
  const auto& p = std::get<MlpParams>(q);
  return json{{"kind", "mlp"},
              {"num_states", p.num_states},
              {"hidden", p.hidden},
              {"W1", array_to_json(p.w1, {p.hidden, p.num_states})},
              {"b1", array_to_json(p.b1, {p.hidden})},
              {"W2", array_to_json(p.w2, {kNumActions, p.hidden})},
              {"b2", array_to_json(p.b2, {kNumActions})}};
}

QFunction backend_from_json(const json& j, int num_states, const std::string& what) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "tabular") {
    QTable table(num_states);
    table.matrix() = matrix_from_json<double>(j.at("values"), num_states, what + "/values");
    return table;
  }
  if (kind == "mlp") {
    MlpParams p;
    p.num_states = j.at("num_states").get<int>();
    p.hidden = j.at("hidden").get<int>();
    if (p.num_states != num_states || p.hidden <= 0) throw ConfigError(what + ": MLP dimensions do not match grid");
    p.w1 = array_from_json(j.at("W1"), {p.hidden, p.num_states}, what + "/W1");
    p.b1 = array_from_json(j.at("b1"), {p.hidden}, what + "/b1");
    p.w2 = array_from_json(j.at("W2"), {kNumActions, p.hidden}, what + "/W2");
    p.b2 = array_from_json(j.at("b2"), {kNumActions}, what + "/b2");
    if (!p.all_finite()) throw ConfigError(what + ": non-finite MLP parameter");
    return p;
  }
  throw ConfigError(what + ": unknown backend kind \"" + kind + "\"");
}

}  // namespace

ArtifactFile make_artifact_file(const ExperimentConfig& experiment, HierarchyArtifact hierarchy) {
  ArtifactFile file{experiment, std::move(hierarchy)};
  file.experiment.hyperparams = file.hierarchy.hyperparams;
  return file;
}

json artifact_to_json(const ArtifactFile& artifact) {
  const HierarchyArtifact& h = artifact.hierarchy;
  json tasks = json::array();
  for (const TaskArtifact& t : h.tasks) {
    tasks.push_back({{"id", t.task.id},
                     {"episodes_succeeded", t.episodes_succeeded},
                     {"t_total", matrix_to_json(t.t_total)},
                     {"t_success", matrix_to_json(t.t_success)},
                     {"p_success", matrix_to_json(t.p_success)},
                     {"backend", backend_to_json(t.backend)}});
  }
  return json{{"format_version", kArtifactFormatVersion},
              {"experiment", config_to_json(artifact.experiment)},
              {"seed", h.seed},
              {"tasks", tasks},
              {"global_p", matrix_to_json(h.global_p)}};
}

ArtifactFile artifact_from_json(const json& doc) {
  try {
    if (!doc.is_object()) throw ConfigError("artifact: expected a JSON object");
    if (doc.at("format_version").get<int>() != kArtifactFormatVersion)
      throw ConfigError("artifact: unsupported format_version");
    ArtifactFile file;
    file.experiment = experiment_config_from_json(doc.at("experiment"));
    HierarchyArtifact& h = file.hierarchy;
    h.config = file.experiment.grid;
    h.hyperparams = file.experiment.hyperparams;
    h.options = file.experiment.options;
    h.seed = doc.at("seed").get<std::uint64_t>();
    if (h.seed != h.hyperparams.seed) throw ConfigError("artifact: seed disagrees with experiment hyperparams");

    const int n = h.config.num_states();
    const json& tasks = doc.at("tasks");
    if (!tasks.is_array() || tasks.size() != file.experiment.tasks.size())
      throw ConfigError("artifact: task list does not match the experiment");
    std::vector<SuccessMatrix> matrices;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      const json& tj = tasks[i];
      const std::string what = "artifact: /tasks/" + std::to_string(i);
      TaskArtifact t;
      t.task = file.experiment.tasks[i];
      if (tj.at("id").get<int>() != t.task.id) throw ConfigError(what + ": task id mismatch");
      t.episodes_succeeded = tj.at("episodes_succeeded").get<std::uint64_t>();
      if (t.episodes_succeeded > static_cast<std::uint64_t>(t.task.episodes))
        throw CorruptedState(what + ": more successes than episodes");
      t.t_total = matrix_from_json<std::uint64_t>(tj.at("t_total"), n, what + "/t_total");
      t.t_success = matrix_from_json<std::uint64_t>(tj.at("t_success"), n, what + "/t_success");
      t.p_success = success_probabilities(t.t_success, t.t_total);
      if (matrix_from_json<double>(tj.at("p_success"), n, what + "/p_success") != t.p_success)
        throw CorruptedState(what + ": stored probabilities disagree with the counts");
      t.backend = backend_from_json(tj.at("backend"), n, what + "/backend");
      if (backend_kind(t.backend) != h.options.backend) throw ConfigError(what + ": backend kind mismatch");
      matrices.push_back(t.p_success);
      h.tasks.push_back(std::move(t));
    }
    h.global_p = global_success(matrices);
    if (matrix_from_json<double>(doc.at("global_p"), n, "artifact: /global_p") != h.global_p)
      throw CorruptedState("artifact: stored global matrix is not the mean of the task matrices");
    return file;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("artifact: ") + e.what());
  }
}

std::string serialize_artifact(const ArtifactFile& artifact) { return artifact_to_json(artifact).dump(1) + "\n"; }

ArtifactFile deserialize_artifact(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("artifact: invalid JSON: ") + e.what());
  }
  return artifact_from_json(doc);
}

void save_artifact(const ArtifactFile& artifact, const std::filesystem::path& path) {
  const std::string text = serialize_artifact(artifact);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

ArtifactFile load_artifact(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_artifact(buf.str());
}

}  // namespace hxrl
