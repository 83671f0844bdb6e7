#include "hxrl/config_io.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <limits>
#include <set>
#include <sstream>

#include "hxrl/errors.hpp"

namespace hxrl {

using nlohmann::json;

namespace {

// JSON pointer -> 1-based line of the value, built from a SAX pass whose input
// iterator records how far the lexer has read.
class LineMap {
 public:
  explicit LineMap(std::string_view text) : text_(text) {
    for (std::size_t i = 0; i < text.size(); ++i)
      if (text[i] == '\n') newlines_.push_back(i);
  }

  int line_at(std::size_t offset) const {
    return 1 + static_cast<int>(std::lower_bound(newlines_.begin(), newlines_.end(), offset) -
                                newlines_.begin());
  }

  // Last character of the token ending before `consumed`; numbers drag one
  // lookahead character along.
  int line_of_token_ending(std::size_t consumed) const {
    std::size_t i = std::min(consumed, text_.size());
    while (i > 0) {
      const char c = text_[i - 1];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == ',' || c == '}' || c == ']')
        --i;
      else
        break;
    }
    return line_at(i == 0 ? 0 : i - 1);
  }

  void set(std::string pointer, int line) { lines_.emplace(std::move(pointer), line); }

  std::optional<int> find(const std::string& pointer) const {
    // Fall back to the nearest ancestor that has a location.
    std::string p = pointer;
    while (true) {
      if (auto it = lines_.find(p); it != lines_.end()) return it->second;
      if (p.empty()) return std::nullopt;
      p.erase(p.rfind('/'));
    }
  }

 private:
  std::string_view text_;
  std::vector<std::size_t> newlines_;
  std::map<std::string, int> lines_;
};

class CountingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  CountingIterator(const char* base, const char* p, std::size_t* mark) : base_(base), p_(p), mark_(mark) {}
  reference operator*() const { return *p_; }
  CountingIterator& operator++() {
    ++p_;
    *mark_ = std::max(*mark_, static_cast<std::size_t>(p_ - base_));
    return *this;
  }
  CountingIterator operator++(int) {
    auto copy = *this;
    ++*this;
    return copy;
  }
  bool operator==(const CountingIterator& o) const { return p_ == o.p_; }

 private:
  const char* base_;
  const char* p_;
  std::size_t* mark_;
};

std::string escape_pointer_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

class LocatorSax : public nlohmann::json_sax<json> {
 public:
  LocatorSax(LineMap& lines, const std::size_t& consumed) : lines_(lines), consumed_(consumed) {}

  bool null() override { return value(); }
  bool boolean(bool) override { return value(); }
  bool number_integer(number_integer_t) override { return value(); }
  bool number_unsigned(number_unsigned_t) override { return value(); }
  bool number_float(number_float_t, const string_t&) override { return value(); }
  bool string(string_t&) override { return value(); }
  bool binary(binary_t&) override { return value(); }
  bool start_object(std::size_t) override { return open(false); }
  bool start_array(std::size_t) override { return open(true); }
  bool key(string_t& k) override {
    frames_.back().key = escape_pointer_token(k);
    return true;
  }
  bool end_object() override { return close(); }
  bool end_array() override { return close(); }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override {
    return false;
  }

 private:
  struct Frame {
    bool array = false;
    std::string key;
    std::size_t index = 0;
  };

  std::string child_pointer() const {
    std::string p;
    for (const auto& f : frames_) p += "/" + (f.array ? std::to_string(f.index) : f.key);
    return p;
  }
  void advance() {
    if (!frames_.empty() && frames_.back().array) ++frames_.back().index;
  }
  bool value() {
    lines_.set(child_pointer(), lines_.line_of_token_ending(consumed_));
    advance();
    return true;
  }
  bool open(bool array) {
    lines_.set(child_pointer(), lines_.line_of_token_ending(consumed_));
    frames_.push_back({array, {}, 0});
    return true;
  }
  bool close() {
    frames_.pop_back();
    advance();
    return true;
  }

  LineMap& lines_;
  const std::size_t& consumed_;
  std::vector<Frame> frames_;
};

// Validation context: formats "<source>:<line>: <pointer>: <message>".
struct Ctx {
  std::string source;
  const LineMap* lines = nullptr;

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
    std::ostringstream os;
    os << source;
    if (lines)
      if (auto line = lines->find(pointer)) os << ':' << *line;
    os << ": " << (pointer.empty() ? "/" : pointer) << ": " << message;
    throw ConfigError(os.str());
  }
};

void require_object(const Ctx& ctx, const json& j, const std::string& ptr) {
  if (!j.is_object()) ctx.fail(ptr, "expected an object");
}

void reject_unknown_keys(const Ctx& ctx, const json& j, const std::string& ptr,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      ctx.fail(ptr + "/" + escape_pointer_token(key), "unknown field");
  }
}

std::int64_t get_int(const Ctx& ctx, const json& j, const std::string& ptr, std::int64_t min_value,
                     std::int64_t max_value = std::numeric_limits<int>::max()) {
  if (!j.is_number_integer()) ctx.fail(ptr, "expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < min_value || v > max_value)
    ctx.fail(ptr, "must be in [" + std::to_string(min_value) + ", " + std::to_string(max_value) + "]");
  return v;
}

double get_real(const Ctx& ctx, const json& j, const std::string& ptr) {
  if (!j.is_number()) ctx.fail(ptr, "expected a number");
  return j.get<double>();
}

std::string get_string(const Ctx& ctx, const json& j, const std::string& ptr) {
  if (!j.is_string()) ctx.fail(ptr, "expected a string");
  return j.get<std::string>();
}

template <class F>
void optional_field(const json& obj, const char* key, const std::string& ptr, F&& f) {
  if (auto it = obj.find(key); it != obj.end()) f(*it, ptr + "/" + key);
}

const json& required_field(const Ctx& ctx, const json& obj, const char* key, const std::string& ptr) {
  auto it = obj.find(key);
  if (it == obj.end()) ctx.fail(ptr, std::string("missing required field \"") + key + "\"");
  return *it;
}

GridConfig grid_from(const Ctx& ctx, const json& j, const std::string& ptr) {
  require_object(ctx, j, ptr);
  reject_unknown_keys(ctx, j, ptr,
                      {"width", "height", "failure_states", "waypoint_state", "final_goal_state", "start_state",
                       "reward_failure", "reward_subgoal", "reward_final", "reward_step"});
  GridConfig g;
  g.width = static_cast<int>(get_int(ctx, required_field(ctx, j, "width", ptr), ptr + "/width", 1, 1 << 15));
  g.height = static_cast<int>(get_int(ctx, required_field(ctx, j, "height", ptr), ptr + "/height", 1, 1 << 15));
  const std::int64_t last = static_cast<std::int64_t>(g.width) * g.height - 1;
  if (last >= std::numeric_limits<int>::max()) ctx.fail(ptr, "grid is too large");
  auto state = [&](const json& v, const std::string& p) { return static_cast<StateId>(get_int(ctx, v, p, 0, last)); };

  g.failure_states.clear();
  optional_field(j, "failure_states", ptr, [&](const json& v, const std::string& p) {
    if (!v.is_array()) ctx.fail(p, "expected an array of state ids");
    for (std::size_t i = 0; i < v.size(); ++i) g.failure_states.push_back(state(v[i], p + "/" + std::to_string(i)));
  });
  g.waypoint_state.reset();
  optional_field(j, "waypoint_state", ptr, [&](const json& v, const std::string& p) {
    if (!v.is_null()) g.waypoint_state = state(v, p);
  });
  g.final_goal_state = state(required_field(ctx, j, "final_goal_state", ptr), ptr + "/final_goal_state");
  g.start_state = state(required_field(ctx, j, "start_state", ptr), ptr + "/start_state");
  optional_field(j, "reward_failure", ptr, [&](const json& v, const std::string& p) { g.reward_failure = get_real(ctx, v, p); });
  optional_field(j, "reward_subgoal", ptr, [&](const json& v, const std::string& p) { g.reward_subgoal = get_real(ctx, v, p); });
  optional_field(j, "reward_final", ptr, [&](const json& v, const std::string& p) { g.reward_final = get_real(ctx, v, p); });
  optional_field(j, "reward_step", ptr, [&](const json& v, const std::string& p) { g.reward_step = get_real(ctx, v, p); });

  try {
    g.validate();
  } catch (const DomainError& e) {
    ctx.fail(ptr, e.what());
  }
  return g;
}

TaskSpec task_from(const Ctx& ctx, const json& j, const std::string& ptr, int default_id, const GridConfig& grid) {
  require_object(ctx, j, ptr);
  reject_unknown_keys(ctx, j, ptr, {"id", "start_state", "goal_state", "max_steps", "episodes"});
  const std::int64_t last = grid.num_states() - 1;
  TaskSpec t;
  t.id = default_id;
  optional_field(j, "id", ptr, [&](const json& v, const std::string& p) { t.id = static_cast<int>(get_int(ctx, v, p, 1)); });
  t.start_state = static_cast<StateId>(get_int(ctx, required_field(ctx, j, "start_state", ptr), ptr + "/start_state", 0, last));
  t.goal_state = static_cast<StateId>(get_int(ctx, required_field(ctx, j, "goal_state", ptr), ptr + "/goal_state", 0, last));
  t.max_steps = static_cast<int>(get_int(ctx, required_field(ctx, j, "max_steps", ptr), ptr + "/max_steps", 1));
  t.episodes = static_cast<int>(get_int(ctx, required_field(ctx, j, "episodes", ptr), ptr + "/episodes", 1));
  try {
    validate_task(t, grid);
  } catch (const DomainError& e) {
    ctx.fail(ptr, e.what());
  }
  return t;
}

ExperimentConfig experiment_from(const Ctx& ctx, const json& doc) {
  require_object(ctx, doc, "");
  reject_unknown_keys(ctx, doc, "",
                      {"grid", "tasks", "hyperparams", "backend", "mlp_hidden_size", "templates", "goal_phrases"});
  ExperimentConfig cfg;
  cfg.grid = grid_from(ctx, required_field(ctx, doc, "grid", ""), "/grid");

  const json& tasks = required_field(ctx, doc, "tasks", "");
  if (!tasks.is_array() || tasks.empty()) ctx.fail("/tasks", "expected a non-empty array of tasks");
  cfg.tasks.clear();
  std::set<int> ids;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string p = "/tasks/" + std::to_string(i);
    cfg.tasks.push_back(task_from(ctx, tasks[i], p, static_cast<int>(i) + 1, cfg.grid));
    if (!ids.insert(cfg.tasks.back().id).second) ctx.fail(p, "duplicate task id");
  }

  optional_field(doc, "backend", "", [&](const json& v, const std::string& p) {
    const auto kind = parse_backend(get_string(ctx, v, p));
    if (!kind) ctx.fail(p, "backend must be \"tabular\" or \"mlp\"");
    cfg.options.backend = *kind;
  });
  optional_field(doc, "mlp_hidden_size", "", [&](const json& v, const std::string& p) {
    cfg.options.hidden_size = static_cast<int>(get_int(ctx, v, p, 1, 1 << 16));
  });

  cfg.hyperparams = Hyperparams::defaults_for(cfg.options.backend);
  optional_field(doc, "hyperparams", "", [&](const json& h, const std::string& ptr) {
    require_object(ctx, h, ptr);
    reject_unknown_keys(ctx, h, ptr, {"alpha", "gamma", "epsilon", "seed"});
    auto& hp = cfg.hyperparams;
    optional_field(h, "alpha", ptr, [&](const json& v, const std::string& p) {
      hp.alpha = get_real(ctx, v, p);
      if (!(hp.alpha > 0.0)) ctx.fail(p, "must be positive");
    });
    optional_field(h, "gamma", ptr, [&](const json& v, const std::string& p) {
      hp.gamma = get_real(ctx, v, p);
      if (!(hp.gamma >= 0.0 && hp.gamma <= 1.0)) ctx.fail(p, "must be in [0, 1]");
    });
    optional_field(h, "epsilon", ptr, [&](const json& v, const std::string& p) {
      hp.epsilon = get_real(ctx, v, p);
      if (!(hp.epsilon >= 0.0 && hp.epsilon <= 1.0)) ctx.fail(p, "must be in [0, 1]");
    });
    optional_field(h, "seed", ptr, [&](const json& v, const std::string& p) {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        ctx.fail(p, "expected a non-negative integer");
      hp.seed = v.get<std::uint64_t>();
    });
  });

  optional_field(doc, "templates", "", [&](const json& t, const std::string& ptr) {
    require_object(ctx, t, ptr);
    reject_unknown_keys(ctx, t, ptr, {"factual", "contrastive"});
    optional_field(t, "factual", ptr, [&](const json& v, const std::string& p) { cfg.templates.factual = get_string(ctx, v, p); });
    optional_field(t, "contrastive", ptr, [&](const json& v, const std::string& p) { cfg.templates.contrastive = get_string(ctx, v, p); });
  });

  optional_field(doc, "goal_phrases", "", [&](const json& g, const std::string& ptr) {
    require_object(ctx, g, ptr);
    for (const auto& [scope, v] : g.items())
      cfg.goal_phrases[scope] = get_string(ctx, v, ptr + "/" + escape_pointer_token(scope));
  });
  return cfg;
}

}  // namespace

std::string ExperimentConfig::goal_phrase(std::string_view scope) const {
  if (auto it = goal_phrases.find(std::string(scope)); it != goal_phrases.end()) return it->second;
  return "completing the task";
}

ExperimentConfig default_experiment() { return ExperimentConfig{}; }

json grid_to_json(const GridConfig& g) {
  return json{{"width", g.width},
              {"height", g.height},
              {"failure_states", g.failure_states},
              {"waypoint_state", g.waypoint_state ? json(*g.waypoint_state) : json(nullptr)},
              {"final_goal_state", g.final_goal_state},
              {"start_state", g.start_state},
              {"reward_failure", g.reward_failure},
              {"reward_subgoal", g.reward_subgoal},
              {"reward_final", g.reward_final},
              {"reward_step", g.reward_step}};
}

json config_to_json(const ExperimentConfig& c) {
  json tasks = json::array();
  for (const auto& t : c.tasks)
    tasks.push_back({{"id", t.id},
                     {"start_state", t.start_state},
                     {"goal_state", t.goal_state},
                     {"max_steps", t.max_steps},
                     {"episodes", t.episodes}});
  return json{{"grid", grid_to_json(c.grid)},
              {"tasks", tasks},
              {"hyperparams",
               {{"alpha", c.hyperparams.alpha},
                {"gamma", c.hyperparams.gamma},
                {"epsilon", c.hyperparams.epsilon},
                {"seed", c.hyperparams.seed}}},
              {"backend", backend_name(c.options.backend)},
              {"mlp_hidden_size", c.options.hidden_size},
              {"templates", {{"factual", c.templates.factual}, {"contrastive", c.templates.contrastive}}},
              {"goal_phrases", c.goal_phrases}};
}

namespace {

json parse_located(std::string_view text, const Ctx& ctx, LineMap& lines) {
  std::size_t consumed = 0;
  LocatorSax sax(lines, consumed);
  const char* base = text.data();
  json::sax_parse(CountingIterator(base, base, &consumed), CountingIterator(base, base + text.size(), &consumed), &sax);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << ctx.source << ':' << lines.line_at(e.byte == 0 ? 0 : e.byte - 1) << ": invalid JSON: " << e.what();
    throw ConfigError(os.str());
  }
}

}  // namespace

GridConfig parse_grid_config(std::string_view text, std::string_view source) {
  LineMap lines(text);
  Ctx ctx{std::string(source), &lines};
  const json doc = parse_located(text, ctx, lines);
  return grid_from(ctx, doc, "");
}

ExperimentConfig parse_experiment_config(std::string_view text, std::string_view source) {
  LineMap lines(text);
  Ctx ctx{std::string(source), &lines};
  const json doc = parse_located(text, ctx, lines);
  return experiment_from(ctx, doc);
}

ExperimentConfig experiment_config_from_json(const json& doc) {
  return experiment_from(Ctx{"<experiment>", nullptr}, doc);
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str(), path.string());
}

}  // namespace hxrl
