#include <gtest/gtest.h>

#include <cmath>

#include "builder.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "ugm/propagation.hpp"

using namespace ugm;
using ugm::test::Fixture;
using S = SatisfactionLevel;
using C = ContributionStrength;

namespace {

EvaluationResult eval(const Fixture& f, Strategy s = {}) { return evaluate_all(f.build(), s); }

}  // namespace

TEST(Propagation, SingleHelpLink) {
  auto f = Fixture::basic();
  f.goal("a", S::Satisfied).goal("b").link("a", "b", C::Help);
  auto r = eval(f);
  EXPECT_DOUBLE_EQ(r.scores.at("a"), 100);
  EXPECT_DOUBLE_EQ(r.scores.at("b"), 25);
  EXPECT_TRUE(r.cycleWarnings.empty());
}

TEST(Propagation, OpposingLinksCancel) {
  auto f = Fixture::basic();
  f.goal("a", S::Satisfied).goal("b", S::Satisfied).goal("c")
      .link("a", "c", C::Help).link("b", "c", C::Hurts);
  EXPECT_DOUBLE_EQ(eval(f).scores.at("c"), 0);
}

TEST(Propagation, SumIsClamped) {
  auto f = Fixture::basic();
  f.goal("a", S::Satisfied).goal("b", S::Satisfied).goal("c", S::Satisfied).goal("d")
      .link("a", "d", C::Make).link("b", "d", C::Make).link("c", "d", C::Make);
  EXPECT_DOUBLE_EQ(eval(f).scores.at("d"), 100);
  auto g = Fixture::basic();
  g.goal("a", S::Satisfied).goal("b", S::Satisfied).goal("d")
      .link("a", "d", C::Break).link("b", "d", C::Break);
  EXPECT_DOUBLE_EQ(eval(g).scores.at("d"), -100);
}

TEST(Propagation, Chain) {
  auto f = Fixture::basic();
  f.goal("A", S::Satisfied).goal("B").goal("C").link("A", "B", C::Make).link("B", "C", C::Help);
  auto r = eval(f);
  EXPECT_DOUBLE_EQ(r.scores.at("B"), 100);
  EXPECT_DOUBLE_EQ(r.scores.at("C"), 25);
}

TEST(Propagation, HelpOfHelpIsFractional) {
  auto f = Fixture::basic();
  f.goal("a", S::Satisfied).goal("b").goal("c").link("a", "b", C::Help).link("b", "c", C::Help);
  auto r = eval(f);
  EXPECT_DOUBLE_EQ(r.scores.at("c"), 6.25);
  EXPECT_EQ(display_score(r.scores.at("c")), 6);
  EXPECT_EQ(qualitative_label(r.scores.at("c")), S::None);
}

TEST(Propagation, InitialSatisfactionWinsOverContributions) {
  auto f = Fixture::basic();
  f.goal("a", S::Satisfied).goal("b", S::WeaklyDenied).link("a", "b", C::Make);
  EXPECT_DOUBLE_EQ(eval(f).scores.at("b"), -50);
}

TEST(Propagation, StrategyOverridesStoredLevel) {
  auto f = Fixture::basic();
  f.goal("a", S::Satisfied).goal("b").link("a", "b", C::SomeNegative);
  Strategy s;
  s.overrides["a"] = S::WeaklyDenied;
  auto r = eval(f, s);
  EXPECT_DOUBLE_EQ(r.scores.at("a"), -50);
  EXPECT_DOUBLE_EQ(r.scores.at("b"), 25);
}

TEST(Propagation, OverrideToNoneFallsBackToContributions) {
  auto f = Fixture::basic();
  f.goal("a", S::Satisfied).goal("b", S::Denied).link("a", "b", C::Help);
  Strategy s;
  s.overrides["b"] = S::None;
  EXPECT_DOUBLE_EQ(eval(f, s).scores.at("b"), 25);
}

TEST(Propagation, TwoGoalCycleTerminatesWithWarning) {
  auto f = Fixture::basic();
  f.goal("X").goal("Y").link("X", "Y", C::Make).link("Y", "X", C::Make);
  auto r = eval(f);
  EXPECT_DOUBLE_EQ(r.scores.at("X"), 0);
  EXPECT_DOUBLE_EQ(r.scores.at("Y"), 0);
  ASSERT_EQ(r.cycleWarnings.size(), 1u);
  EXPECT_EQ(r.cycleWarnings[0], (std::vector<std::string>{"X", "Y"}));
}

TEST(Propagation, CycleBrokenBySatisfiedMemberHasNoWarning) {
  auto f = Fixture::basic();
  f.goal("X", S::Satisfied).goal("Y").link("X", "Y", C::Help).link("Y", "X", C::Help);
  auto r = eval(f);
  EXPECT_DOUBLE_EQ(r.scores.at("Y"), 25);
  EXPECT_TRUE(r.cycleWarnings.empty());
}

TEST(Propagation, NoPersonasMeansNoScores) {
  auto f = Fixture::basic();
  f.goal("a", S::Satisfied);
  auto r = evaluate_all(f.build(), {}, {});
  EXPECT_TRUE(r.scores.empty());
  EXPECT_TRUE(r.evaluationOrder.empty());
}

TEST(Propagation, PersonaSelection) {
  auto f = Fixture::basic();
  f.persona("Q").characteristic("qc", "Q");
  f.goal("p1", S::Satisfied).goal("q1", std::nullopt, ElementType::Goal, "Q", "qc")
      .link("p1", "q1", C::Help);
  auto r = evaluate_all(f.build(), {}, {"Q"});
  ASSERT_EQ(r.scores.size(), 1u);
  EXPECT_DOUBLE_EQ(r.scores.at("q1"), 25);
  // The contributor was evaluated even though its persona was not selected.
  EXPECT_EQ(r.evaluationOrder, (std::vector<std::string>{"p1", "q1"}));
  EXPECT_THROW(evaluate_all(f.build(), {}, {"Nobody"}), Error);
}

TEST(Propagation, UnknownOverrideGoalIsRejected) {
  auto f = Fixture::basic();
  f.goal("a");
  Strategy s;
  s.overrides["zzz"] = S::Satisfied;
  try {
    eval(f, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownGoal);
  }
}

TEST(Propagation, TaskContributionScores) {
  ContributionLink help{"t", SourceKind::Task, "g", Endpoint::Means, C::Help};
  ContributionLink brk{"t", SourceKind::Task, "g", Endpoint::Means, C::Break};
  EXPECT_DOUBLE_EQ(task_contribution_score({"t", "R1", 100}, help), 2500);
  EXPECT_DOUBLE_EQ(task_contribution_score({"t", "R1", 100}, brk), -10000);
  EXPECT_DOUBLE_EQ(task_contribution_score({"t", "R1", 0}, help), 0);
}

TEST(Propagation, TaskFeedsGoal) {
  auto f = Fixture::basic();
  f.goal("g").task("t", 100).task_link("t", "g", C::Help);
  EXPECT_DOUBLE_EQ(eval(f).scores.at("g"), 25);
}

TEST(Propagation, StructurallyObstructedSystemGoalDeniesLinkedGoal) {
  auto f = Fixture::basic();
  f.goal("a", S::Satisfied).goal("u").link("a", "u", C::Make);
  f.system_goal("sg", {}, {"u"}).obstacle("o", {"sg"});
  EXPECT_DOUBLE_EQ(eval(f).scores.at("u"), -100);
  // Resolving the obstacle lifts the denial.
  f.system_goal("fix").e.obstacles.back().resolvedBy = {"fix"};
  EXPECT_DOUBLE_EQ(eval(f).scores.at("u"), 100);
}

TEST(Propagation, StructuralObstructionThroughRefinement) {
  auto f = Fixture::basic();
  f.goal("u").system_goal("root", {"leaf"}, {"u"}).system_goal("leaf");
  f.obstacle("o", {"leaf"}, {}, {"o2"}).system_goal("r").obstacle("o2", {"leaf"}, {"r"});
  EXPECT_DOUBLE_EQ(eval(f).scores.at("u"), -100);
}

TEST(Propagation, CalculateSingleGoal) {
  auto f = Fixture::basic();
  f.goal("a", S::WeaklySatisfied).goal("b").link("a", "b", C::SomePositive);
  const Model m = f.build();
  Strategy s;
  GoalEvaluator ev(m, s);
  EXPECT_DOUBLE_EQ(ev.calculate_goal_contribution("b"), 25);
  EXPECT_EQ(ev.evaluation_order(), (std::vector<std::string>{"a", "b"}));
  EXPECT_THROW(ev.calculate_goal_contribution("nope"), Error);
}

TEST(Labels, Boundaries) {
  EXPECT_EQ(qualitative_label(100), S::Satisfied);
  EXPECT_EQ(qualitative_label(75), S::Satisfied);
  EXPECT_EQ(qualitative_label(74.99), S::WeaklySatisfied);
  EXPECT_EQ(qualitative_label(25), S::WeaklySatisfied);
  EXPECT_EQ(qualitative_label(24.99), S::None);
  EXPECT_EQ(qualitative_label(0), S::None);
  EXPECT_EQ(qualitative_label(-24.99), S::None);
  EXPECT_EQ(qualitative_label(-25), S::WeaklyDenied);
  EXPECT_EQ(qualitative_label(-74.99), S::WeaklyDenied);
  EXPECT_EQ(qualitative_label(-75), S::Denied);
  EXPECT_EQ(qualitative_label(-100), S::Denied);
  EXPECT_THROW(qualitative_label(100.5), Error);
  EXPECT_THROW(qualitative_label(std::nan("")), Error);
}

TEST(Labels, LevelsMapToThemselves) {
  for (const auto& [level, label] : kSatisfactionLabels) EXPECT_EQ(qualitative_label(score(level)), level);
}

TEST(Labels, DisplayRounding) {
  EXPECT_EQ(display_score(12.5), 13);
  EXPECT_EQ(display_score(-12.5), -13);
  EXPECT_EQ(display_score(-0.4), 0);
}

// ---------------------------------------------------------------------------
// Properties over random graphs.

namespace {

Strategy random_strategy(const Entities& e, std::uint64_t seed) {
  ugm::test::Rng rng(seed);
  Strategy s;
  for (const auto& g : e.userGoals)
    if (std::bernoulli_distribution(0.2)(rng))
      if (auto lvl = ugm::test::random_initial(rng, 0.0)) s.overrides[g.name] = *lvl;
  return s;
}

}  // namespace

TEST(PropagationProperty, ScoresStayInRange) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    auto f = ugm::test::random_contribution_graph(seed, seed % 2 == 0);
    for (const auto& [g, s] : eval(f, random_strategy(f.e, seed)).scores) {
      EXPECT_GE(s, -100) << g;
      EXPECT_LE(s, 100) << g;
    }
  }
}

TEST(PropagationProperty, MatchesTopologicalOracleOnAcyclicGraphs) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    auto f = ugm::test::random_contribution_graph(seed, true);
    const auto s = random_strategy(f.e, seed * 31);
    const auto expected = ugm::test::brute_force_scores(f.e, s);
    const auto r = eval(f, s);
    ASSERT_EQ(r.scores.size(), expected.size());
    for (const auto& [g, v] : expected) EXPECT_NEAR(r.scores.at(g), v, 1e-9) << "seed " << seed << " " << g;
    EXPECT_TRUE(r.cycleWarnings.empty());
  }
}

TEST(PropagationProperty, CycleWarningsExactlyWhenRecursionCycles) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    auto f = ugm::test::random_contribution_graph(seed, false);
    const auto s = random_strategy(f.e, seed);
    const auto r = eval(f, s);
    EXPECT_EQ(!r.cycleWarnings.empty(), ugm::test::has_recursion_cycle(f.e, s)) << "seed " << seed;
    EXPECT_EQ(r.scores.size(), f.e.userGoals.size());
    // Every reported cycle is a closed walk along contribution links.
    for (const auto& cycle : r.cycleWarnings) {
      ASSERT_FALSE(cycle.empty());
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        const auto& from = cycle[(i + 1) % cycle.size()];
        const auto& to = cycle[i];
        const bool linked = std::any_of(f.e.contributionLinks.begin(), f.e.contributionLinks.end(),
                                        [&](const auto& l) {
                                          return l.sourceKind == SourceKind::UserGoal &&
                                                 l.source == from && l.destination == to;
                                        });
        EXPECT_TRUE(linked) << from << " -> " << to;
      }
    }
  }
}

TEST(PropagationProperty, Idempotent) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto f = ugm::test::random_contribution_graph(seed, seed % 3 == 0);
    const Model m = f.build();
    const auto s = random_strategy(f.e, seed);
    const auto a = evaluate_all(m, s);
    const auto b = evaluate_all(m, s);
    EXPECT_EQ(a.scores, b.scores);
    EXPECT_EQ(a.evaluationOrder, b.evaluationOrder);
    EXPECT_EQ(a.cycleWarnings, b.cycleWarnings);
  }
}

TEST(PropagationProperty, NonZeroOverrideDominates) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto f = ugm::test::random_contribution_graph(seed, false);
    ugm::test::Rng rng(seed);
    const auto& target = f.e.userGoals[std::uniform_int_distribution<std::size_t>(
        0, f.e.userGoals.size() - 1)(rng)];
    for (auto lvl : {S::Satisfied, S::WeaklySatisfied, S::WeaklyDenied, S::Denied}) {
      Strategy s;
      s.overrides[target.name] = lvl;
      EXPECT_DOUBLE_EQ(eval(f, s).scores.at(target.name), score(lvl));
    }
  }
}

TEST(PropagationProperty, MonotoneInSourceLevelsWithPositiveLinks) {
  static constexpr S ladder[] = {S::Denied, S::WeaklyDenied, S::WeaklySatisfied, S::Satisfied};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto f = ugm::test::random_contribution_graph(seed, true);
    for (auto& l : f.e.contributionLinks)
      if (score(l.strength) < 0) l.strength = C::Help;
    for (auto& t : f.e.tasks) t.satisfaction = std::abs(t.satisfaction);
    std::vector<std::string> sources;
    for (const auto& g : f.e.userGoals)
      if (std::none_of(f.e.contributionLinks.begin(), f.e.contributionLinks.end(),
                       [&](const auto& l) { return l.destination == g.name; }))
        sources.push_back(g.name);
    const Model m = f.build();
    for (const auto& src : sources) {
      std::optional<EvaluationResult> prev;
      for (auto lvl : ladder) {
        Strategy s;
        s.overrides[src] = lvl;
        auto r = evaluate_all(m, s);
        if (prev) {
          for (const auto& [g, v] : r.scores) EXPECT_GE(v + 1e-12, prev->scores.at(g)) << g;
        }
        prev = std::move(r);
      }
    }
  }
}
