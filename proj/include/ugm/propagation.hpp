#pragma once

// Forward propagation of user-goal satisfaction through contribution links.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ugm/error.hpp"
#include "ugm/levels.hpp"
#include "ugm/model.hpp"

namespace ugm {

/// What-if initial-satisfaction overrides, keyed by user-goal name.
struct Strategy {
  std::map<std::string, SatisfactionLevel> overrides;
  bool operator==(const Strategy&) const = default;
};

/// Throws UnknownGoal if any override names a goal the model lacks.
inline void validate_strategy(const Model& model, const Strategy& strategy) {
  for (const auto& [goal, level] : strategy.overrides)
    if (!model.user_goal_index(goal))
      throw Error(ErrorCode::UnknownGoal, "strategy overrides unknown user goal '" + goal + "'",
                  goal);
}

struct EvaluationResult {
  std::map<std::string, double> scores;
  /// Goals in the order their scores were first determined.
  std::vector<std::string> evaluationOrder;
  /// Each entry is the evaluation stack from a re-entered goal down to the
  /// goal that re-entered it.
  std::vector<std::vector<std::string>> cycleWarnings;
};

inline int contribution_link_score(const ContributionLink& link) { return score(link.strength); }

/// Pre-normalisation contribution of a task: strength x task satisfaction.
/// Divided by 100 together with goal contributions.
inline double task_contribution_score(const Task& task, const ContributionLink& link) {
  return static_cast<double>(contribution_link_score(link)) * task.satisfaction;
}

/// Obstruction judged from obstacle structure alone: a leaf system goal is
/// obstructed when an obstructing obstacle's refinement closure contains an
/// obstacle with no resolving goal; a refined goal when any refinement is.
/// User-goal scores play no part, so this is safe to call from inside
/// propagation.
class StructuralObstruction {
 public:
  explicit StructuralObstruction(const Model& model)
      : model_(model),
        goalMemo_(model.system_goals().size()),
        obstacleMemo_(model.obstacles().size()) {}

  bool goal_obstructed(std::size_t goal) {
    if (auto& m = goalMemo_[goal]) return *m;
    const auto& g = model_.system_goal(goal);
    bool result = false;
    if (g.refinements.empty()) {
      for (auto o : model_.obstructing_obstacles(goal))
        if ((result = obstacle_unresolved(o))) break;
    } else {
      for (const auto& child : g.refinements)
        if ((result = goal_obstructed(*model_.system_goal_index(child)))) break;
    }
    goalMemo_[goal] = result;
    return result;
  }

  /// True when the obstacle or any obstacle refining it has no resolving goal.
  bool obstacle_unresolved(std::size_t obstacle) {
    if (auto& m = obstacleMemo_[obstacle]) return *m;
    const auto& o = model_.obstacle(obstacle);
    bool result = o.resolvedBy.empty();
    for (std::size_t i = 0; !result && i < o.refinements.size(); ++i)
      result = obstacle_unresolved(*model_.obstacle_index(o.refinements[i]));
    obstacleMemo_[obstacle] = result;
    return result;
  }

 private:
  const Model& model_;
  std::vector<std::optional<bool>> goalMemo_;
  std::vector<std::optional<bool>> obstacleMemo_;
};

/// One propagation pass. Holds the memo of evaluated goals, the in-progress
/// set used to break contribution loops, and the collected warnings.
class GoalEvaluator {
 public:
  GoalEvaluator(const Model& model, const Strategy& strategy)
      : model_(model),
        strategy_(strategy),
        structure_(model),
        memo_(model.user_goals().size()),
        inProgress_(model.user_goals().size(), false),
        recorded_(model.user_goals().size(), false) {
    validate_strategy(model, strategy);
  }

  double calculate_goal_contribution(const std::string& goal) {
    auto index = model_.user_goal_index(goal);
    if (!index) throw Error(ErrorCode::UnknownGoal, "unknown user goal '" + goal + "'", goal);
    return calculate(*index);
  }

  double calculate(std::size_t goal) {
    double s = compute(goal);
    if (!recorded_[goal]) {
      recorded_[goal] = true;
      order_.push_back(model_.user_goal(goal).name);
    }
    return s;
  }

  const std::vector<std::string>& evaluation_order() const { return order_; }
  const std::vector<std::vector<std::string>>& cycle_warnings() const { return cycles_; }

 private:
  double initial_satisfaction(std::size_t goal) const {
    const auto& g = model_.user_goal(goal);
    if (auto it = strategy_.overrides.find(g.name); it != strategy_.overrides.end())
      return score(it->second);
    return g.initialSatisfaction ? score(*g.initialSatisfaction) : 0;
  }

  bool linked_system_goal_obstructed(std::size_t goal) {
    for (auto sg : model_.linked_system_goals(goal))
      if (structure_.goal_obstructed(sg)) return true;
    return false;
  }

  double compute(std::size_t goal) {
    double s = initial_satisfaction(goal);
    if (s != 0) return s;
    if (linked_system_goal_obstructed(goal)) return -100;
    if (memo_[goal]) return *memo_[goal];
    if (inProgress_[goal]) {
      record_cycle(goal);
      return 0;
    }

    inProgress_[goal] = true;
    stack_.push_back(goal);
    const auto& links = model_.entities().contributionLinks;
    for (auto li : model_.incoming_links(goal)) {
      const auto& link = links[li];
      if (link.sourceKind == SourceKind::Task) {
        s += task_contribution_score(model_.task(*model_.task_index(link.source)), link);
      } else {
        double contributor = calculate(*model_.user_goal_index(link.source));
        s += contribution_link_score(link) * contributor;
      }
    }
    s /= 100;
    s = std::clamp(s, -100.0, 100.0);
    stack_.pop_back();
    inProgress_[goal] = false;
    memo_[goal] = s;
    return s;
  }

  void record_cycle(std::size_t reentered) {
    auto from = std::find(stack_.begin(), stack_.end(), reentered);
    std::vector<std::string> cycle;
    for (auto it = from; it != stack_.end(); ++it) cycle.push_back(model_.user_goal(*it).name);
    cycles_.push_back(std::move(cycle));
  }

  const Model& model_;
  const Strategy& strategy_;
  StructuralObstruction structure_;
  std::vector<std::optional<double>> memo_;
  std::vector<bool> inProgress_;
  std::vector<bool> recorded_;
  std::vector<std::size_t> stack_;
  std::vector<std::string> order_;
  std::vector<std::vector<std::string>> cycles_;
};

/// Evaluates every user goal of `personas` in name order with one shared memo.
/// `scores` covers exactly those goals.
inline EvaluationResult evaluate_all(const Model& model, const Strategy& strategy,
                                     const std::set<std::string>& personas) {
  std::vector<std::size_t> goals;
  for (const auto& p : personas) {
    auto pi = model.persona_index(p);
    if (!pi) throw Error(ErrorCode::UnknownPersona, "unknown persona '" + p + "'", p);
    auto pg = model.persona_goals(*pi);
    goals.insert(goals.end(), pg.begin(), pg.end());
  }
  // Goal indices follow name order.
  std::sort(goals.begin(), goals.end());

  GoalEvaluator evaluator(model, strategy);
  EvaluationResult result;
  for (auto g : goals) result.scores[model.user_goal(g).name] = evaluator.calculate(g);
  result.evaluationOrder = evaluator.evaluation_order();
  result.cycleWarnings = evaluator.cycle_warnings();
  return result;
}

inline std::set<std::string> all_persona_names(const Model& model) {
  std::set<std::string> out;
  for (const auto& p : model.personas()) out.insert(p.name);
  return out;
}

inline EvaluationResult evaluate_all(const Model& model, const Strategy& strategy) {
  return evaluate_all(model, strategy, all_persona_names(model));
}

/// Maps a score back onto the five-level scale for display.
inline SatisfactionLevel qualitative_label(double s) {
  if (!(s >= -100 && s <= 100))
    throw Error(ErrorCode::OutOfRange, "score " + std::to_string(s) + " outside [-100, 100]");
  if (s >= 75) return SatisfactionLevel::Satisfied;
  if (s >= 25) return SatisfactionLevel::WeaklySatisfied;
  if (s > -25) return SatisfactionLevel::None;
  if (s > -75) return SatisfactionLevel::WeaklyDenied;
  return SatisfactionLevel::Denied;
}

/// Integer score for display and serialisation, rounded half away from zero.
inline long display_score(double s) { return std::lround(s); }

}  // namespace ugm
