#pragma once

// Goal/obstacle obstruction checks and the implied-vulnerability validation
// over role dependencies.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ugm/error.hpp"
#include "ugm/model.hpp"
#include "ugm/propagation.hpp"

namespace ugm {

enum class ObstructionCause { ObstructedDependum, DeniedLinkedUserGoal };

inline std::string_view to_string(ObstructionCause c) {
  return c == ObstructionCause::ObstructedDependum ? "ObstructedDependum" : "DeniedLinkedUserGoal";
}

struct ImplicitVulnerabilityFinding {
  std::string dependency;
  std::string dependum;
  ObstructionCause cause = ObstructionCause::ObstructedDependum;
  /// Entity names from the dependum to the triggering obstacle or user goal.
  std::vector<std::string> trail;
  bool operator==(const ImplicitVulnerabilityFinding&) const = default;
};

struct VulnerabilityReport {
  std::vector<ImplicitVulnerabilityFinding> findings;
  /// Informational notes, e.g. dependencies skipped because their dependum is a task.
  std::vector<std::string> notes;
};

/// Why a goal or obstacle is obstructed, with the path that shows it.
struct ObstructionWitness {
  ObstructionCause cause;
  std::vector<std::string> trail;
};

/// Obstruction analysis against one set of user-goal scores. Goal and
/// obstacle verdicts are memoised, so share one analyzer across a report.
class ObstructionAnalyzer {
 public:
  ObstructionAnalyzer(const Model& model, const EvaluationResult& scores)
      : model_(model),
        scores_(scores),
        goalMemo_(model.system_goals().size()),
        obstacleMemo_(model.obstacles().size()) {}

  std::optional<ObstructionWitness> goal_witness(std::size_t goal) {
    auto& slot = goalMemo_[goal];
    if (!slot) slot = compute_goal(goal);
    return *slot;
  }

  /// Trail from the obstacle to whatever leaves it obstructed, if anything.
  std::optional<std::vector<std::string>> obstacle_witness(std::size_t obstacle) {
    auto& slot = obstacleMemo_[obstacle];
    if (!slot) slot = compute_obstacle(obstacle);
    return *slot;
  }

 private:
  bool denied(const std::string& userGoal) const {
    auto it = scores_.scores.find(userGoal);
    if (it == scores_.scores.end())
      throw Error(ErrorCode::UnknownGoal, "no score for linked user goal '" + userGoal + "'",
                  userGoal);
    return it->second < 0;
  }

  std::optional<ObstructionWitness> compute_goal(std::size_t goal) {
    const auto& g = model_.system_goal(goal);
    // A denied linked user goal settles the question without visiting the tree.
    for (const auto& ug : g.linkedUserGoals)
      if (denied(ug)) return ObstructionWitness{ObstructionCause::DeniedLinkedUserGoal, {g.name, ug}};

    if (g.refinements.empty()) {
      for (auto o : model_.obstructing_obstacles(goal))
        if (auto w = obstacle_witness(o)) {
          std::vector<std::string> trail{g.name};
          trail.insert(trail.end(), w->begin(), w->end());
          return ObstructionWitness{ObstructionCause::ObstructedDependum, std::move(trail)};
        }
      return std::nullopt;
    }
    for (const auto& child : g.refinements)
      if (auto w = goal_witness(*model_.system_goal_index(child))) {
        w->trail.insert(w->trail.begin(), g.name);
        return w;
      }
    return std::nullopt;
  }

  std::optional<std::vector<std::string>> compute_obstacle(std::size_t obstacle) {
    const auto& o = model_.obstacle(obstacle);
    if (o.resolvedBy.empty()) return std::vector<std::string>{o.name};
    for (const auto& resolver : o.resolvedBy)
      for (const auto& ug : model_.system_goal(*model_.system_goal_index(resolver)).linkedUserGoals)
        if (denied(ug)) return std::vector<std::string>{o.name, resolver, ug};
    for (const auto& child : o.refinements)
      if (auto w = obstacle_witness(*model_.obstacle_index(child))) {
        w->insert(w->begin(), o.name);
        return w;
      }
    return std::nullopt;
  }

  const Model& model_;
  const EvaluationResult& scores_;
  std::vector<std::optional<std::optional<ObstructionWitness>>> goalMemo_;
  std::vector<std::optional<std::optional<std::vector<std::string>>>> obstacleMemo_;
};

inline bool is_goal_obstructed(const Model& model, const EvaluationResult& scores,
                               const std::string& goal) {
  auto index = model.system_goal_index(goal);
  if (!index) throw Error(ErrorCode::UnknownGoal, "unknown system goal '" + goal + "'", goal);
  return ObstructionAnalyzer(model, scores).goal_witness(*index).has_value();
}

inline bool is_obstacle_obstructed(const Model& model, const EvaluationResult& scores,
                                   const std::string& obstacle) {
  auto index = model.obstacle_index(obstacle);
  if (!index)
    throw Error(ErrorCode::UnknownObstacle, "unknown obstacle '" + obstacle + "'", obstacle);
  return ObstructionAnalyzer(model, scores).obstacle_witness(*index).has_value();
}

/// Runs the implied-vulnerability check over pre-computed scores. `scores`
/// must cover every user goal linked to a system goal.
inline VulnerabilityReport find_implicit_vulnerabilities(const Model& model,
                                                         const EvaluationResult& scores) {
  VulnerabilityReport report;
  ObstructionAnalyzer analyzer(model, scores);
  for (const auto& d : model.dependencies()) {  // sorted by name
    if (d.dependumKind == DependumKind::Task) {
      report.notes.push_back("dependency '" + d.name + "' skipped: dependum '" + d.dependum +
                             "' is a task");
      continue;
    }
    if (auto w = analyzer.goal_witness(*model.system_goal_index(d.dependum)))
      report.findings.push_back({d.name, d.dependum, w->cause, std::move(w->trail)});
  }
  return report;
}

/// Evaluates all personas under `strategy`, then checks every dependency.
inline VulnerabilityReport find_implicit_vulnerabilities(const Model& model,
                                                         const Strategy& strategy) {
  return find_implicit_vulnerabilities(model, evaluate_all(model, strategy));
}

}  // namespace ugm
