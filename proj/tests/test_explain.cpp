#include <gtest/gtest.h>

#include "hxrl/errors.hpp"
#include "hxrl/explain.hpp"
#include "hxrl/rng.hpp"

namespace hxrl {
namespace {

const GridConfig kGrid = default_layout();

TEST(Explain, WholePercentRoundsHalfUp) {
  EXPECT_EQ(whole_percent(0.0), 0);
  EXPECT_EQ(whole_percent(1.0), 100);
  EXPECT_EQ(whole_percent(0.375), 38);
  EXPECT_EQ(whole_percent(0.25), 25);
  EXPECT_EQ(whole_percent(0.004), 0);
  EXPECT_EQ(whole_percent(0.005), 1);
  EXPECT_THROW(whole_percent(1.5), DomainError);
}

TEST(Explain, FactualSentence) {
  SuccessMatrix p(100);
  p.at(83, Action::Down) = 1.0;
  const Explanation e = explain_factual(p, kGrid, 83, Action::Down, "collecting the shield");
  EXPECT_EQ(e.kind, ExplanationKind::Factual);
  EXPECT_EQ(e.p_taken, 1.0);
  EXPECT_FALSE(e.p_contrast);
  EXPECT_EQ(e.rendered, "I moved down because in doing so, I have a 100% probability of collecting the shield.");

  EXPECT_NE(explain_factual(p, kGrid, 83, Action::Up, "x").rendered.find(" 0% probability"), std::string::npos);
  p.at(51, Action::Left) = 0.375;
  EXPECT_NE(explain_factual(p, kGrid, 51, Action::Left, "x").rendered.find("38%"), std::string::npos);
}

TEST(Explain, ContrastiveSentence) {
  SuccessMatrix p(100);
  p.at(11, Action::Left) = 0.25;
  p.at(11, Action::Down) = 0.60;
  const Explanation e = explain_contrastive(p, kGrid, 11, Action::Down, Action::Left, "escaping the black holes");
  EXPECT_EQ(e.kind, ExplanationKind::Contrastive);
  EXPECT_EQ(e.rendered,
            "I did not move to the left since carrying out this action, I would only have a 25% probability of "
            "escaping the black holes, while moving down I have a 60% probability.");
  EXPECT_EQ(*e.p_contrast, 0.25);
}

TEST(Explain, ContrastiveTaskThreeStructure) {
  SuccessMatrix p(100);
  p.at(16, Action::Up) = 0.8;
  p.at(16, Action::Left) = 0.3;
  const Explanation e =
      explain_contrastive(p, kGrid, 16, Action::Up, Action::Left, "reaching the wormhole and returning home");
  EXPECT_EQ(e.rendered,
            "I did not move to the left since carrying out this action, I would only have a 30% probability of "
            "reaching the wormhole and returning home, while moving up I have a 80% probability.");
}

TEST(Explain, DegenerateContrastStillRendersBoth) {
  SuccessMatrix p(100);
  p.at(55, Action::Up) = p.at(55, Action::Right) = 0.5;
  const std::string s = explain_contrastive(p, kGrid, 55, Action::Up, Action::Right, "g").rendered;
  EXPECT_EQ(s,
            "I did not move to the right since carrying out this action, I would only have a 50% probability of g, "
            "while moving up I have a 50% probability.");
}

TEST(Explain, InvalidQueries) {
  const SuccessMatrix p(100);
  EXPECT_THROW(explain_factual(p, kGrid, 0, Action::Up, "g"), DomainError);
  EXPECT_THROW(explain_contrastive(p, kGrid, 55, Action::Up, Action::Up, "g"), DomainError);
  EXPECT_THROW(explain_contrastive(p, kGrid, 0, Action::Down, Action::Left, "g"), DomainError);
}

TEST(Explain, CustomTemplates) {
  SuccessMatrix p(100);
  p.at(55, Action::Right) = 0.123;
  Templates t;
  t.factual = "{action}:{p}:{goal_phrase}";
  EXPECT_EQ(explain_factual(p, kGrid, 55, Action::Right, "home", t).rendered, "to the right:12:home");
  t.factual = "{nope}";
  EXPECT_THROW(explain_factual(p, kGrid, 55, Action::Right, "home", t), DomainError);
  t.factual = "{action";
  EXPECT_THROW(explain_factual(p, kGrid, 55, Action::Right, "home", t), DomainError);
}

TEST(Explain, BestActionReport) {
  SuccessMatrix p(100);
  p.at(55, Action::Up) = 0.1;
  p.at(55, Action::Down) = 0.9;
  p.at(55, Action::Right) = 0.3;
  const auto r = best_action_report(p, kGrid, 55);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_EQ(r[0].first, Action::Down);
  EXPECT_EQ(r[1].first, Action::Right);
  EXPECT_EQ(r[2].first, Action::Up);
  EXPECT_EQ(r[3].first, Action::Left);

  const auto zeros = best_action_report(SuccessMatrix(100), kGrid, 55);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(zeros[i].first, action_from_index(i));

  // Masked actions never appear.
  const auto corner = best_action_report(p, kGrid, 0);
  ASSERT_EQ(corner.size(), 2u);
  EXPECT_EQ(corner[0].first, Action::Down);
}

// Random matrices: argmax consistency, embedded percentages, determinism and
// contrastive symmetry.
TEST(ExplainProperty, RenderingInvariants) {
  Rng rng(13);
  const Templates t;
  for (int trial = 0; trial < 300; ++trial) {
    SuccessMatrix p(100);
    for (double& v : p.flat()) v = std::floor(rng.uniform01() * 20) / 20;
    const StateId s = rng.uniform_index(100);
    const auto valid = valid_actions(s, kGrid).to_vector();

    const auto report = best_action_report(p, kGrid, s);
    Action best = valid.front();
    for (Action a : valid)
      if (p.at(s, a) > p.at(s, best)) best = a;
    ASSERT_EQ(report.front().first, best);

    const Action taken = valid[rng.uniform_index(static_cast<int>(valid.size()))];
    Action contrast = valid[rng.uniform_index(static_cast<int>(valid.size()))];
    if (contrast == taken) continue;
    const auto e1 = explain_contrastive(p, kGrid, s, taken, contrast, "g", t);
    const auto e2 = explain_contrastive(p, kGrid, s, taken, contrast, "g", t);
    ASSERT_EQ(e1.rendered, e2.rendered);
    const auto swapped = explain_contrastive(p, kGrid, s, contrast, taken, "g", t);
    const std::string pt = std::to_string(whole_percent(p.at(s, taken)));
    const std::string pc = std::to_string(whole_percent(p.at(s, contrast)));
    const std::string nt(action_phrase(taken)), nc(action_phrase(contrast));
    ASSERT_EQ(e1.rendered, render_template(t.contrastive, {{"contrast", nc}, {"p_contrast", pc}, {"goal_phrase", "g"},
                                                            {"taken", nt}, {"p_taken", pt}, {"action", nt}, {"p", pt}}));
    ASSERT_EQ(swapped.rendered, render_template(t.contrastive, {{"contrast", nt}, {"p_contrast", pt}, {"goal_phrase", "g"},
                                                                 {"taken", nc}, {"p_taken", pc}, {"action", nc}, {"p", pc}}));
  }
}

}  // namespace
}  // namespace hxrl
