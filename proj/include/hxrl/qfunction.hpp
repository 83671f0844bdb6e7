#pragma once

// Action-value estimation and one-step Q-learning updates. Two backends:
// a dense table, and a one-hidden-layer perceptron over one-hot states.

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "hxrl/gridworld.hpp"
#include "hxrl/matrix.hpp"
#include "hxrl/rng.hpp"

namespace hxrl {

enum class BackendKind { Tabular, Mlp };

std::string_view backend_name(BackendKind kind);
std::optional<BackendKind> parse_backend(std::string_view name);

struct Hyperparams {
  double alpha = 0.1;
  double gamma = 0.9;
  double epsilon = 0.7;
  std::uint64_t seed = 0;

  // gamma 0.9, epsilon 0.7; alpha 1e-5 for the MLP, 0.1 for the table.
  static Hyperparams defaults_for(BackendKind kind);
  void validate() const;

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

using QValues = std::array<double, kNumActions>;

class QTable {
 public:
  QTable() = default;
  explicit QTable(int num_states) : values_(num_states, 0.0) {}

  int num_states() const { return values_.num_states(); }
  double& at(StateId s, Action a) { return values_.at(s, a); }
  double at(StateId s, Action a) const { return values_.at(s, a); }
  const StateActionMatrix<double>& matrix() const { return values_; }
  StateActionMatrix<double>& matrix() { return values_; }

  friend bool operator==(const QTable&, const QTable&) = default;

 private:
  StateActionMatrix<double> values_;
};

inline constexpr int kDefaultHiddenSize = 256;

// num_states -> hidden (ReLU) -> 4 (linear). w1 is hidden x num_states and
// w2 is 4 x hidden, both row-major.
struct MlpParams {
  int num_states = 0;
  int hidden = 0;
  std::vector<double> w1;
  std::vector<double> b1;
  std::vector<double> w2;
  std::vector<double> b2;

  static MlpParams zeros(int num_states, int hidden = kDefaultHiddenSize);
  // Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] for weights and biases.
  static MlpParams random(int num_states, int hidden, Rng& rng);

  double& w1_at(int h, StateId s) { return w1[static_cast<std::size_t>(h) * num_states + s]; }
  double w1_at(int h, StateId s) const { return w1[static_cast<std::size_t>(h) * num_states + s]; }
  double& w2_at(int out, int h) { return w2[static_cast<std::size_t>(out) * hidden + h]; }
  double w2_at(int out, int h) const { return w2[static_cast<std::size_t>(out) * hidden + h]; }

  bool shapes_consistent() const;
  bool all_finite() const;
  std::size_t parameter_count() const { return w1.size() + b1.size() + w2.size() + b2.size(); }
  // Flat view order: w1, b1, w2, b2.
  double& parameter(std::size_t i);
  double parameter(std::size_t i) const;

  friend bool operator==(const MlpParams&, const MlpParams&) = default;
};

using MlpGradients = MlpParams;

using QFunction = std::variant<QTable, MlpParams>;

QFunction make_backend(BackendKind kind, int num_states, int hidden, Rng& rng);
BackendKind backend_kind(const QFunction& q);

QValues q_values(const QTable& table, StateId s);
// Forward pass on the one-hot encoding of s. Throws NumericError when a
// non-finite parameter reaches the output.
QValues q_values(const MlpParams& params, StateId s);
QValues q_values(const QFunction& q, StateId s);

// Exact gradient of 0.5 * (target - output[action])^2 w.r.t. every parameter.
MlpGradients mlp_gradients(const MlpParams& params, StateId s, Action action, double target);

// Lowest-index argmax over the valid subset. Throws ContractViolation if empty.
Action greedy_action(const QValues& q, ActionSet valid);
// With probability epsilon uniform over valid, otherwise greedy_action.
Action select_action(const QValues& q, ActionSet valid, double epsilon, Rng& rng);

struct Transition {
  StateId state = 0;
  Action action = Action::Up;
  double reward = 0.0;
  StateId next_state = 0;
  bool terminal = false;
};

// target = r if terminal, else r + gamma * max_{a' in valid_next} Q(s', a').
double td_target(const QFunction& q, const Transition& t, ActionSet valid_next, double gamma);

void td_update(QTable& table, const Transition& t, ActionSet valid_next, const Hyperparams& hp);
// One SGD step of size alpha on 0.5 * (target - Q(s, a))^2.
void td_update(MlpParams& params, const Transition& t, ActionSet valid_next, const Hyperparams& hp);
void td_update(QFunction& q, const Transition& t, ActionSet valid_next, const Hyperparams& hp);

}  // namespace hxrl
