#include "hxrl/explain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hxrl/errors.hpp"

namespace hxrl {

int whole_percent(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probability outside [0, 1]");
  return static_cast<int>(std::floor(100.0 * p + 0.5));
}

std::string_view action_phrase(Action a) {
  switch (a) {
    case Action::Up: return "up";
    case Action::Down: return "down";
    case Action::Left: return "to the left";
    case Action::Right: return "to the right";
  }
  return "?";
}

std::string render_template(std::string_view tpl, const std::map<std::string, std::string>& vars) {
  std::string out;
  out.reserve(tpl.size() + 64);
  std::size_t i = 0;
  while (i < tpl.size()) {
    const std::size_t open = tpl.find('{', i);
    if (open == std::string_view::npos) {
      out.append(tpl.substr(i));
      break;
    }
    out.append(tpl.substr(i, open - i));
    const std::size_t close = tpl.find('}', open);
    if (close == std::string_view::npos) throw DomainError("unterminated placeholder in template");
    const std::string name(tpl.substr(open + 1, close - open - 1));
    const auto it = vars.find(name);
    if (it == vars.end()) throw DomainError("unknown placeholder {" + name + "} in template");
    out.append(it->second);
    i = close + 1;
  }
  return out;
}

namespace {

void require_valid(const GridConfig& config, StateId state, Action a) {
  if (!valid_actions(state, config).contains(a))
    throw DomainError("action " + std::string(action_name(a)) + " is not available at state " +
                      std::to_string(state));
}

}  // namespace

Explanation explain_factual(const SuccessMatrix& p, const GridConfig& config, StateId state,
                            Action action, std::string_view goal_phrase, const Templates& templates) {
  require_valid(config, state, action);
  Explanation e;
  e.kind = ExplanationKind::Factual;
  e.p_taken = p.at(state, action);
  e.goal_phrase = goal_phrase;
  const std::string pct = std::to_string(whole_percent(e.p_taken));
  const std::string phrase(action_phrase(action));
  e.rendered = render_template(templates.factual, {{"action", phrase},
                                                   {"taken", phrase},
                                                   {"p", pct},
                                                   {"p_taken", pct},
                                                   {"goal_phrase", e.goal_phrase}});
  return e;
}

Explanation explain_contrastive(const SuccessMatrix& p, const GridConfig& config, StateId state,
                                Action taken, Action contrast, std::string_view goal_phrase,
                                const Templates& templates) {
  require_valid(config, state, taken);
  require_valid(config, state, contrast);
  if (taken == contrast) throw DomainError("contrast action must differ from the action taken");
  Explanation e;
  e.kind = ExplanationKind::Contrastive;
  e.p_taken = p.at(state, taken);
  e.p_contrast = p.at(state, contrast);
  e.goal_phrase = goal_phrase;
  const std::string taken_pct = std::to_string(whole_percent(e.p_taken));
  const std::string taken_phrase(action_phrase(taken));
  e.rendered = render_template(templates.contrastive,
                               {{"action", taken_phrase},
                                {"taken", taken_phrase},
                                {"p", taken_pct},
                                {"p_taken", taken_pct},
                                {"contrast", std::string(action_phrase(contrast))},
                                {"p_contrast", std::to_string(whole_percent(*e.p_contrast))},
                                {"goal_phrase", e.goal_phrase}});
  return e;
}

std::vector<std::pair<Action, double>> best_action_report(const SuccessMatrix& p,
                                                          const GridConfig& config, StateId state) {
  std::vector<std::pair<Action, double>> report;
  for (Action a : valid_actions(state, config).to_vector()) report.emplace_back(a, p.at(state, a));
  std::stable_sort(report.begin(), report.end(),
                   [](const auto& l, const auto& r) { return l.second > r.second; });
  return report;
}

}  // namespace hxrl
