#include "hxrl/qfunction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hxrl/errors.hpp"

namespace hxrl {

std::string_view backend_name(BackendKind kind) {
  return kind == BackendKind::Tabular ? "tabular" : "mlp";
}

std::optional<BackendKind> parse_backend(std::string_view name) {
  if (name == "tabular") return BackendKind::Tabular;
  if (name == "mlp") return BackendKind::Mlp;
  return std::nullopt;
}

Hyperparams Hyperparams::defaults_for(BackendKind kind) {
  Hyperparams hp;
  hp.alpha = kind == BackendKind::Mlp ? 1e-5 : 0.1;
  return hp;
}

void Hyperparams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be a positive real");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in [0, 1]");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("epsilon must lie in [0, 1]");
}

MlpParams MlpParams::zeros(int num_states, int hidden) {
  if (num_states <= 0 || hidden <= 0) throw DomainError("MLP dimensions must be positive");
  MlpParams p;
  p.num_states = num_states;
  p.hidden = hidden;
  p.w1.assign(static_cast<std::size_t>(hidden) * num_states, 0.0);
  p.b1.assign(hidden, 0.0);
  p.w2.assign(static_cast<std::size_t>(kNumActions) * hidden, 0.0);
  p.b2.assign(kNumActions, 0.0);
  return p;
}

MlpParams MlpParams::random(int num_states, int hidden, Rng& rng) {
  MlpParams p = zeros(num_states, hidden);
  const double r1 = 1.0 / std::sqrt(static_cast<double>(num_states));
  const double r2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (double& w : p.w1) w = rng.uniform(-r1, r1);
  for (double& b : p.b1) b = rng.uniform(-r1, r1);
  for (double& w : p.w2) w = rng.uniform(-r2, r2);
  for (double& b : p.b2) b = rng.uniform(-r2, r2);
  return p;
}

bool MlpParams::shapes_consistent() const {
  return num_states > 0 && hidden > 0 && w1.size() == static_cast<std::size_t>(hidden) * num_states &&
         b1.size() == static_cast<std::size_t>(hidden) &&
         w2.size() == static_cast<std::size_t>(kNumActions) * hidden && b2.size() == kNumActions;
}

bool MlpParams::all_finite() const {
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  return finite(w1) && finite(b1) && finite(w2) && finite(b2);
}

double& MlpParams::parameter(std::size_t i) {
  if (i < w1.size()) return w1[i];
  i -= w1.size();
  if (i < b1.size()) return b1[i];
  i -= b1.size();
  if (i < w2.size()) return w2[i];
  i -= w2.size();
  if (i < b2.size()) return b2[i];
  throw DomainError("parameter index out of range");
}

double MlpParams::parameter(std::size_t i) const { return const_cast<MlpParams&>(*this).parameter(i); }

QFunction make_backend(BackendKind kind, int num_states, int hidden, Rng& rng) {
  if (kind == BackendKind::Tabular) return QTable(num_states);
  return MlpParams::random(num_states, hidden, rng);
}

BackendKind backend_kind(const QFunction& q) {
  return std::holds_alternative<QTable>(q) ? BackendKind::Tabular : BackendKind::Mlp;
}

QValues q_values(const QTable& table, StateId s) {
  const auto row = table.matrix().row(s);
  return {row[0], row[1], row[2], row[3]};
}

namespace {

void check_state(const MlpParams& p, StateId s) {
  if (s < 0 || s >= p.num_states) throw DomainError("state id out of range for MLP input");
}

// Hidden activations for the one-hot input: column s of w1 plus b1, ReLU.
void hidden_layer(const MlpParams& p, StateId s, std::vector<double>& pre, std::vector<double>& act) {
  pre.resize(p.hidden);
  act.resize(p.hidden);
  for (int j = 0; j < p.hidden; ++j) {
    pre[j] = p.w1_at(j, s) + p.b1[j];
    act[j] = pre[j] > 0.0 || std::isnan(pre[j]) ? pre[j] : 0.0;  // NaN must reach the output check
  }
}

double output_unit(const MlpParams& p, const std::vector<double>& act, int out) {
  double sum = p.b2[out];
  const double* w = p.w2.data() + static_cast<std::size_t>(out) * p.hidden;
  for (int j = 0; j < p.hidden; ++j) sum += w[j] * act[j];
  return sum;
}

thread_local std::vector<double> tl_pre;
thread_local std::vector<double> tl_act;

}  // namespace

QValues q_values(const MlpParams& params, StateId s) {
  check_state(params, s);
  hidden_layer(params, s, tl_pre, tl_act);
  QValues q{};
  for (int k = 0; k < kNumActions; ++k) {
    q[k] = output_unit(params, tl_act, k);
    if (!std::isfinite(q[k])) throw NumericError("non-finite MLP output at state " + std::to_string(s));
  }
  return q;
}

QValues q_values(const QFunction& q, StateId s) {
  return std::visit([s](const auto& backend) { return q_values(backend, s); }, q);
}

MlpGradients mlp_gradients(const MlpParams& params, StateId s, Action action, double target) {
  check_state(params, s);
  std::vector<double> pre, act;
  hidden_layer(params, s, pre, act);
  const int a = index(action);
  const double residual = output_unit(params, act, a) - target;

  MlpGradients g = MlpParams::zeros(params.num_states, params.hidden);
  g.b2[a] = residual;
  for (int j = 0; j < params.hidden; ++j) {
    g.w2_at(a, j) = residual * act[j];
    const double d_pre = pre[j] > 0.0 ? residual * params.w2_at(a, j) : 0.0;
    g.b1[j] = d_pre;
    g.w1_at(j, s) = d_pre;
  }
  return g;
}

Action greedy_action(const QValues& q, ActionSet valid) {
  if (valid.empty()) throw ContractViolation("no valid action to choose from");
  std::optional<Action> best;
  for (Action a : kAllActions) {
    if (!valid.contains(a)) continue;
    if (!best || q[index(a)] > q[index(*best)]) best = a;
  }
  return *best;
}

Action select_action(const QValues& q, ActionSet valid, double epsilon, Rng& rng) {
  if (valid.empty()) throw ContractViolation("no valid action to choose from");
  if (epsilon > 0.0 && rng.uniform01() < epsilon) return valid.nth(rng.uniform_index(valid.size()));
  return greedy_action(q, valid);
}

double td_target(const QFunction& q, const Transition& t, ActionSet valid_next, double gamma) {
  double target = t.reward;
  if (!t.terminal) {
    if (valid_next.empty()) throw ContractViolation("non-terminal transition without next actions");
    const QValues next = q_values(q, t.next_state);
    double best = -std::numeric_limits<double>::infinity();
    for (Action a : kAllActions)
      if (valid_next.contains(a)) best = std::max(best, next[index(a)]);
    target += gamma * best;
  }
  if (!std::isfinite(target)) throw NumericError("non-finite TD target");
  return target;
}

void td_update(QTable& table, const Transition& t, ActionSet valid_next, const Hyperparams& hp) {
  double target = t.reward;
  if (!t.terminal) {
    if (valid_next.empty()) throw ContractViolation("non-terminal transition without next actions");
    const auto next = table.matrix().row(t.next_state);
    double best = -std::numeric_limits<double>::infinity();
    for (Action a : kAllActions)
      if (valid_next.contains(a)) best = std::max(best, next[index(a)]);
    target += hp.gamma * best;
  }
  if (!std::isfinite(target)) throw NumericError("non-finite TD target");
  double& q = table.at(t.state, t.action);
  q += hp.alpha * (target - q);
}

void td_update(MlpParams& params, const Transition& t, ActionSet valid_next, const Hyperparams& hp) {
  double target = t.reward;
  if (!t.terminal) {
    if (valid_next.empty()) throw ContractViolation("non-terminal transition without next actions");
    const QValues next = q_values(params, t.next_state);
    double best = -std::numeric_limits<double>::infinity();
    for (Action a : kAllActions)
      if (valid_next.contains(a)) best = std::max(best, next[index(a)]);
    target += hp.gamma * best;
  }
  if (!std::isfinite(target)) throw NumericError("non-finite TD target");

  // Fused backward pass and SGD step; only column s of w1, b1, row a of w2 and
  // b2[a] have nonzero gradient.
  check_state(params, t.state);
  hidden_layer(params, t.state, tl_pre, tl_act);
  const int a = index(t.action);
  const double residual = output_unit(params, tl_act, a) - target;
  const double step = hp.alpha * residual;
  for (int j = 0; j < params.hidden; ++j) {
    double& w_out = params.w2_at(a, j);
    const double d_pre = tl_pre[j] > 0.0 ? w_out : 0.0;
    w_out -= step * tl_act[j];
    params.w1_at(j, t.state) -= step * d_pre;
    params.b1[j] -= step * d_pre;
  }
  params.b2[a] -= step;
}

void td_update(QFunction& q, const Transition& t, ActionSet valid_next, const Hyperparams& hp) {
  std::visit([&](auto& backend) { td_update(backend, t, valid_next, hp); }, q);
}

}  // namespace hxrl
