#include <gtest/gtest.h>

#include <cmath>

#include "hxrl/errors.hpp"
#include "hxrl/hierarchy.hpp"
#include "hxrl/oracle.hpp"
#include "hxrl/qfunction.hpp"

namespace hxrl {
namespace {

const ActionSet kAll{Action::Up, Action::Down, Action::Left, Action::Right};

double loss(const MlpParams& p, StateId s, Action a, double target) {
  const double r = q_values(p, s)[index(a)] - target;
  return 0.5 * r * r;
}

TEST(QFunction, BackendDefaults) {
  const Hyperparams mlp = Hyperparams::defaults_for(BackendKind::Mlp);
  const Hyperparams tab = Hyperparams::defaults_for(BackendKind::Tabular);
  EXPECT_DOUBLE_EQ(mlp.gamma, 0.9);
  EXPECT_DOUBLE_EQ(mlp.epsilon, 0.7);
  EXPECT_DOUBLE_EQ(mlp.alpha, 1e-5);
  EXPECT_DOUBLE_EQ(tab.alpha, 0.1);
}

TEST(QFunction, FreshBackendsReturnZeroOrBias) {
  const QTable table(100);
  EXPECT_EQ(q_values(table, 42), (QValues{0, 0, 0, 0}));

  MlpParams zero = MlpParams::zeros(100);
  EXPECT_EQ(zero.hidden, 256);
  EXPECT_EQ(q_values(zero, 42), (QValues{0, 0, 0, 0}));

  Rng rng(1);
  MlpParams p = MlpParams::random(100, 256, rng);
  std::fill(p.w2.begin(), p.w2.end(), 0.0);
  p.b2 = {1, 2, 3, 4};
  for (StateId s : {0, 17, 99}) EXPECT_EQ(q_values(p, s), (QValues{1, 2, 3, 4}));
}

TEST(QFunction, NonFiniteParametersRaise) {
  MlpParams p = MlpParams::zeros(4, 3);
  p.w1_at(1, 2) = std::nan("");
  p.w2_at(0, 1) = 1.0;
  EXPECT_NO_THROW(q_values(p, 0));
  EXPECT_THROW(q_values(p, 2), NumericError);
}

TEST(QFunction, RandomInitWithinFanInBounds) {
  Rng rng(3);
  const MlpParams p = MlpParams::random(100, 256, rng);
  ASSERT_TRUE(p.shapes_consistent());
  for (double w : p.w1) EXPECT_LE(std::abs(w), 0.1);
  for (double w : p.w2) EXPECT_LE(std::abs(w), 1.0 / 16.0);
}

TEST(SelectAction, GreedyAndTieBreak) {
  Rng rng(0);
  EXPECT_EQ(select_action({0, 5, 0, 0}, kAll, 0.0, rng), Action::Down);
  EXPECT_EQ(select_action({1, 1, 1, 1}, kAll, 0.0, rng), Action::Up);
  // The argmax is restricted to the valid subset.
  EXPECT_EQ(select_action({9, 1, 1, 3}, ActionSet{Action::Down, Action::Left}, 0.0, rng), Action::Down);
  EXPECT_THROW(select_action({0, 0, 0, 0}, ActionSet{}, 0.0, rng), ContractViolation);
}

TEST(SelectAction, UniformExplorationFrequency) {
  Rng rng(2024);
  const ActionSet valid{Action::Down, Action::Right};
  int down = 0;
  constexpr int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const Action a = select_action({100, 0, 50, 0}, valid, 1.0, rng);
    ASSERT_TRUE(valid.contains(a));
    down += a == Action::Down;
  }
  EXPECT_NEAR(static_cast<double>(down) / draws, 0.5, 0.01);
}

TEST(SelectAction, GreedyIsDeterministicProperty) {
  Rng gen(5);
  for (int i = 0; i < 500; ++i) {
    QValues q;
    for (double& v : q) v = std::floor(gen.uniform(-3, 3));
    ActionSet valid;
    for (Action a : kAllActions)
      if (gen.uniform01() < 0.6) valid.insert(a);
    if (valid.empty()) valid.insert(Action::Left);
    Rng r1(i), r2(i + 1000);
    EXPECT_EQ(select_action(q, valid, 0.0, r1), select_action(q, valid, 0.0, r2));
  }
}

TEST(TdUpdate, TabularExamples) {
  Hyperparams hp;
  hp.alpha = 0.1;
  hp.gamma = 0.9;
  QTable q(100);
  td_update(q, {21, Action::Down, 200.0, 31, true}, {}, hp);
  EXPECT_DOUBLE_EQ(q.at(21, Action::Down), 20.0);

  hp.alpha = 1.0;
  QTable q2(100);
  q2.at(11, Action::Up) = 10.0;
  td_update(q2, {1, Action::Down, 0.0, 11, false}, kAll, hp);
  EXPECT_DOUBLE_EQ(q2.at(1, Action::Down), 9.0);
}

TEST(TdUpdate, BootstrapOnlyOverValidNextActions) {
  Hyperparams hp;
  hp.alpha = 1.0;
  QTable q(4);
  q.at(0, Action::Up) = 1000.0;  // masked at state 0 of a 2x2 grid
  q.at(0, Action::Right) = 10.0;
  td_update(q, {1, Action::Left, 0.0, 0, false}, ActionSet{Action::Down, Action::Right}, hp);
  EXPECT_DOUBLE_EQ(q.at(1, Action::Left), 9.0);
}

TEST(TdUpdate, NonFiniteTargetRaises) {
  Hyperparams hp;
  QTable q(4);
  EXPECT_THROW(td_update(q, {0, Action::Down, std::nan(""), 2, true}, {}, hp), NumericError);
  QFunction m = MlpParams::zeros(4, 2);
  EXPECT_THROW(td_update(m, {0, Action::Down, INFINITY, 2, true}, {}, hp), NumericError);
}

TEST(MlpGradients, ZeroResidualGivesZeroGradient) {
  Rng rng(11);
  const MlpParams p = MlpParams::random(10, 16, rng);
  const double target = q_values(p, 3)[index(Action::Left)];
  const MlpGradients g = mlp_gradients(p, 3, Action::Left, target);
  for (std::size_t i = 0; i < g.parameter_count(); ++i) EXPECT_EQ(g.parameter(i), 0.0);
}

// Two states, one hidden unit. With w1 = (0.5, -0.3), b1 = 0.2, state 0:
// pre = 0.7, h = 0.7. With w2[down] = 2, b2[down] = 0.1: out = 1.5.
// Target 1 gives residual 0.5, so
//   db2[down] = 0.5, dw2[down] = 0.5 * 0.7 = 0.35,
//   dpre = 0.5 * 2 = 1, dw1[0][0] = 1, dw1[0][1] = 0, db1 = 1.
TEST(MlpGradients, HandComputedSingleHiddenUnit) {
  MlpParams p = MlpParams::zeros(2, 1);
  p.w1 = {0.5, -0.3};
  p.b1 = {0.2};
  p.w2 = {0.7, 2.0, -1.0, 0.4};
  p.b2 = {0.0, 0.1, 0.0, 0.0};
  EXPECT_NEAR(q_values(p, 0)[1], 1.5, 1e-12);
  const MlpGradients g = mlp_gradients(p, 0, Action::Down, 1.0);
  EXPECT_NEAR(g.b2[1], 0.5, 1e-12);
  EXPECT_NEAR(g.w2_at(1, 0), 0.35, 1e-12);
  EXPECT_NEAR(g.w1_at(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(g.b1[0], 1.0, 1e-12);
  EXPECT_EQ(g.w1_at(0, 1), 0.0);
  for (int out : {0, 2, 3}) {
    EXPECT_EQ(g.w2_at(out, 0), 0.0);
    EXPECT_EQ(g.b2[out], 0.0);
  }
  // Dead unit: state 1 has pre = -0.1, so only the output bias moves.
  const MlpGradients dead = mlp_gradients(p, 1, Action::Down, 1.0);
  EXPECT_NEAR(dead.b2[1], 0.1 - 1.0, 1e-12);
  EXPECT_EQ(dead.b1[0], 0.0);
  EXPECT_EQ(dead.w1_at(0, 1), 0.0);
}

TEST(MlpGradients, MatchesCentralFiniteDifferences) {
  Rng rng(99);
  MlpParams p = MlpParams::random(100, 256, rng);
  for (double& b : p.b2) b = rng.uniform(-1, 1);
  const StateId s = 37;
  const Action a = Action::Right;
  const double target = 3.0;
  const MlpGradients g = mlp_gradients(p, s, a, target);

  constexpr double h = 1e-5;
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    // Half the draws land on parameters that affect this output.
    std::size_t i;
    if (trial % 2 == 0) {
      const int unit = rng.uniform_index(p.hidden);
      const std::size_t choices[] = {static_cast<std::size_t>(unit) * p.num_states + s,
                                     p.w1.size() + unit,
                                     p.w1.size() + p.b1.size() + static_cast<std::size_t>(index(a)) * p.hidden + unit,
                                     p.w1.size() + p.b1.size() + p.w2.size() + index(a)};
      i = choices[rng.uniform_index(4)];
    } else {
      i = static_cast<std::size_t>(rng.next() % p.parameter_count());
    }
    const double saved = p.parameter(i);
    p.parameter(i) = saved + h;
    const double up = loss(p, s, a, target);
    p.parameter(i) = saved - h;
    const double down = loss(p, s, a, target);
    p.parameter(i) = saved;
    const double numeric = (up - down) / (2 * h);
    const double analytic = g.parameter(i);
    const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-8});
    EXPECT_LT(std::abs(numeric - analytic) / scale, 1e-4) << "parameter " << i;
    ++checked;
  }
  EXPECT_EQ(checked, 100);
}

TEST(MlpForward, OneHotSelectsASingleColumn) {
  Rng rng(8);
  MlpParams p = MlpParams::random(20, 32, rng);
  const QValues before = q_values(p, 4);
  for (int h = 0; h < p.hidden; ++h) p.w1_at(h, 9) += 10.0;
  EXPECT_EQ(q_values(p, 4), before);
  EXPECT_NE(q_values(p, 9), before);
}

TEST(TdUpdate, MlpStepIsOneSgdStepOnHalfSquaredError) {
  Rng rng(21);
  MlpParams p = MlpParams::random(10, 8, rng);
  Hyperparams hp;
  hp.alpha = 0.05;
  hp.gamma = 0.9;
  const ActionSet valid{Action::Up, Action::Left};
  const Transition t{2, Action::Down, 1.5, 5, false};
  const double target = td_target(QFunction(p), t, valid, hp.gamma);
  const MlpGradients g = mlp_gradients(p, t.state, t.action, target);
  MlpParams expected = p;
  for (std::size_t i = 0; i < expected.parameter_count(); ++i) expected.parameter(i) -= hp.alpha * g.parameter(i);
  td_update(p, t, valid, hp);
  for (std::size_t i = 0; i < p.parameter_count(); ++i) EXPECT_NEAR(p.parameter(i), expected.parameter(i), 1e-15);
}

TEST(TabularProperty, QStaysWithinRewardBounds) {
  const GridConfig g = default_layout();
  for (const TaskSpec& base : default_tasks()) {
    TaskSpec task = base;
    task.episodes = 3000;
    for (std::uint64_t seed : {1u, 2u}) {
      Hyperparams hp;
      hp.seed = seed;
      const TaskArtifact a = train_task(task, g, hp);
      for (double v : std::get<QTable>(a.backend).matrix().flat()) {
        EXPECT_GE(v, -1000.0);
        EXPECT_LE(v, 5000.0);
      }
    }
  }
}

// Synchronous sweeps of alpha = 1 backups reach the Bellman fixed point.
TEST(TabularProperty, AlphaOneSweepsMatchValueIteration) {
  GridConfig g;
  g.width = 3;
  g.height = 3;
  g.failure_states = {4};
  g.start_state = 0;
  g.final_goal_state = 8;
  const TaskSpec task{1, 0, 8, 20, 1};
  Hyperparams hp;
  hp.alpha = 1.0;
  hp.gamma = 0.9;
  QTable q(g.num_states());
  for (int sweep = 0; sweep < 50; ++sweep)
    for (StateId s = 0; s < g.num_states(); ++s) {
      if (is_terminal(s, task, g)) continue;
      for (Action a : valid_actions(s, g).to_vector()) {
        const StepOutcome o = step(s, a, task, g);
        const bool terminal = o.terminal != Terminal::None;
        td_update(q, {s, a, o.reward, o.next_state, terminal}, terminal ? ActionSet{} : valid_actions(o.next_state, g), hp);
      }
    }
  const ValueIterationResult vi = value_iteration(g, task, 0.9, 1e-12);
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (is_terminal(s, task, g)) continue;
    for (Action a : valid_actions(s, g).to_vector()) EXPECT_NEAR(q.at(s, a), vi.q.at(s, a), 1e-9);
  }
}

}  // namespace
}  // namespace hxrl
