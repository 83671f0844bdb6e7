#include <gtest/gtest.h>

#include <cstdlib>

#include "hxrl/errors.hpp"
#include "hxrl/gridworld.hpp"
#include "hxrl/hierarchy.hpp"
#include "hxrl/rng.hpp"

namespace hxrl {
namespace {

const TaskSpec kTask1{1, 0, 31, 10, 10000};
const TaskSpec kTask3{3, 93, 7, 100, 20000};

TEST(GridWorld, DefaultLayoutGeometry) {
  const GridConfig g = default_layout();
  EXPECT_EQ(g.width, 10);
  EXPECT_EQ(g.height, 10);
  EXPECT_EQ(g.failure_states, (std::vector<StateId>{3, 13, 20, 22}));
  EXPECT_EQ(g.start_state, 0);
  EXPECT_EQ(g.waypoint_state, 93);
  EXPECT_EQ(g.final_goal_state, 7);
  EXPECT_NO_THROW(g.validate());
  // Row-major numbering: 9 is top-right, 99 bottom-right.
  EXPECT_EQ(g.row(9), 0);
  EXPECT_EQ(g.col(9), 9);
  EXPECT_EQ(g.row(99), 9);
  EXPECT_EQ(g.col(99), 9);
}

TEST(GridWorld, ValidActionsMaskTheBoundary) {
  const GridConfig g = default_layout();
  EXPECT_EQ(valid_actions(0, g), (ActionSet{Action::Down, Action::Right}));
  EXPECT_EQ(valid_actions(55, g), (ActionSet{Action::Up, Action::Down, Action::Left, Action::Right}));
  EXPECT_EQ(valid_actions(9, g), (ActionSet{Action::Down, Action::Left}));
  EXPECT_EQ(valid_actions(99, g), (ActionSet{Action::Up, Action::Left}));
  EXPECT_THROW(valid_actions(100, g), DomainError);
  EXPECT_THROW(valid_actions(-1, g), DomainError);
}

TEST(GridWorld, StepExamples) {
  const GridConfig g = default_layout();
  EXPECT_EQ(step(21, Action::Down, kTask1, g), (StepOutcome{31, 200.0, Terminal::Goal}));
  EXPECT_EQ(step(2, Action::Right, kTask1, g), (StepOutcome{3, -100.0, Terminal::Failure}));
  EXPECT_EQ(step(17, Action::Up, kTask3, g), (StepOutcome{7, 500.0, Terminal::Goal}));
  EXPECT_EQ(step(1, Action::Down, kTask1, g), (StepOutcome{11, 0.0, Terminal::None}));
}

TEST(GridWorld, WormholeWithoutShieldIsFatal) {
  const GridConfig g = default_layout();
  const TaskSpec task2{2, 31, 93, 100, 1};
  EXPECT_EQ(step(17, Action::Up, task2, g), (StepOutcome{7, -100.0, Terminal::Failure}));
  EXPECT_EQ(step(6, Action::Right, kTask1, g).terminal, Terminal::Failure);
  // Subgoal reward for a non-final goal.
  EXPECT_EQ(step(92, Action::Right, task2, g), (StepOutcome{93, 200.0, Terminal::Goal}));
}

TEST(GridWorld, MaskedStepIsAContractViolation) {
  const GridConfig g = default_layout();
  EXPECT_THROW(step(0, Action::Up, kTask1, g), ContractViolation);
  EXPECT_THROW(step(9, Action::Right, kTask1, g), ContractViolation);
}

TEST(GridWorld, ConfigValidation) {
  GridConfig g = default_layout();
  g.start_state = 3;
  EXPECT_THROW(g.validate(), DomainError);
  g = default_layout();
  g.waypoint_state = 7;
  EXPECT_THROW(g.validate(), DomainError);
  g = default_layout();
  g.failure_states.push_back(100);
  EXPECT_THROW(g.validate(), DomainError);
  g = default_layout();
  g.width = 0;
  EXPECT_THROW(g.validate(), DomainError);
}

TEST(GridWorld, ActionSetIteratesInIndexOrder) {
  const ActionSet s{Action::Right, Action::Up};
  EXPECT_EQ(s.size(), 2);
  EXPECT_EQ(s.nth(0), Action::Up);
  EXPECT_EQ(s.nth(1), Action::Right);
  EXPECT_THROW(s.nth(2), ContractViolation);
  EXPECT_EQ(parse_action("left"), Action::Left);
  EXPECT_EQ(parse_action("sideways"), std::nullopt);
}

// Random masked walks over random layouts: every step is a unit Manhattan
// move inside the grid, pure, and reversible when nothing happens.
TEST(GridWorldProperty, RandomWalkInvariants) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    GridConfig g;
    g.width = 2 + rng.uniform_index(9);
    g.height = 2 + rng.uniform_index(9);
    g.start_state = 0;
    g.final_goal_state = g.num_states() - 1;
    g.waypoint_state.reset();
    const int failures = rng.uniform_index(4);
    for (int k = 0; k < failures; ++k) {
      const StateId f = 1 + rng.uniform_index(g.num_states() - 2);
      if (!g.is_failure(f)) g.failure_states.push_back(f);
    }
    ASSERT_NO_THROW(g.validate());
    const TaskSpec task{1, g.start_state, g.final_goal_state, 200, 1};

    StateId s = g.start_state;
    for (int t = 0; t < 200 && !is_terminal(s, task, g); ++t) {
      const ActionSet valid = valid_actions(s, g);
      ASSERT_FALSE(valid.empty());
      const Action a = valid.nth(rng.uniform_index(valid.size()));
      const StepOutcome out = step(s, a, task, g);
      ASSERT_EQ(out, step(s, a, task, g));
      ASSERT_TRUE(g.contains(out.next_state));
      ASSERT_EQ(std::abs(g.row(out.next_state) - g.row(s)) + std::abs(g.col(out.next_state) - g.col(s)), 1);
      if (out.terminal == Terminal::None) {
        const StepOutcome back = step(out.next_state, opposite(a), task, g);
        ASSERT_EQ(back.next_state, s);
      }
      s = out.next_state;
    }
  }
}

}  // namespace
}  // namespace hxrl
