#pragma once

// Template-driven goal explanations rendered from a success matrix.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hxrl/gridworld.hpp"
#include "hxrl/memory.hpp"

namespace hxrl {

// Placeholders: {action} / {taken}, {p} / {p_taken}, {contrast}, {p_contrast},
// {goal_phrase}. Percentages are substituted without the % sign.
struct Templates {
  std::string factual = "I moved {action} because in doing so, I have a {p}% probability of {goal_phrase}.";
  std::string contrastive =
      "I did not move {contrast} since carrying out this action, I would only have a {p_contrast}% "
      "probability of {goal_phrase}, while moving {taken} I have a {p_taken}% probability.";

  friend bool operator==(const Templates&, const Templates&) = default;
};

enum class ExplanationKind { Factual, Contrastive };

struct Explanation {
  ExplanationKind kind = ExplanationKind::Factual;
  double p_taken = 0.0;
  std::optional<double> p_contrast;
  std::string goal_phrase;
  std::string rendered;
};

// Round-half-up integer percentage of p in [0, 1].
int whole_percent(double p);

// "up", "down", "to the left", "to the right".
std::string_view action_phrase(Action a);

// Replaces {name} placeholders; an unknown placeholder is a DomainError.
std::string render_template(std::string_view tpl, const std::map<std::string, std::string>& vars);

Explanation explain_factual(const SuccessMatrix& p, const GridConfig& config, StateId state,
                            Action action, std::string_view goal_phrase,
                            const Templates& templates = {});

Explanation explain_contrastive(const SuccessMatrix& p, const GridConfig& config, StateId state,
                                Action taken, Action contrast, std::string_view goal_phrase,
                                const Templates& templates = {});

// Valid actions at `state`, by descending probability then action index.
std::vector<std::pair<Action, double>> best_action_report(const SuccessMatrix& p,
                                                          const GridConfig& config, StateId state);

}  // namespace hxrl
