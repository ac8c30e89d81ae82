#pragma once

// User-goal graph in Graphviz dot syntax, with GRL-style shapes and nodes
// filled by satisfaction score.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "ugm/error.hpp"
#include "ugm/levels.hpp"
#include "ugm/model.hpp"
#include "ugm/propagation.hpp"

namespace ugm {

struct Rgb {
  int r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

inline constexpr Rgb kDeniedColor{139, 0, 0};      // dark red, -100
inline constexpr Rgb kNeutralColor{255, 255, 0};   // yellow, 0
inline constexpr Rgb kSatisfiedColor{0, 100, 0};   // dark green, +100

/// Piecewise-linear dark red -> yellow -> dark green over [-100, 100].
inline Rgb score_to_color(double s) {
  if (!(s >= -100 && s <= 100))
    throw Error(ErrorCode::OutOfRange, "score " + std::to_string(s) + " outside [-100, 100]");
  const Rgb& lo = s < 0 ? kDeniedColor : kNeutralColor;
  const Rgb& hi = s < 0 ? kNeutralColor : kSatisfiedColor;
  const double t = s < 0 ? (s + 100) / 100 : s / 100;
  auto mix = [t](int a, int b) { return static_cast<int>(std::lround(a + t * (b - a))); };
  return {mix(lo.r, hi.r), mix(lo.g, hi.g), mix(lo.b, hi.b)};
}

inline std::string to_hex(Rgb c) {
  std::array<char, 8> buf{};
  std::snprintf(buf.data(), buf.size(), "#%02x%02x%02x", c.r, c.g, c.b);
  return buf.data();
}

enum class NodeShape { HardGoal, SoftGoal, Belief, Task };

inline std::string_view to_string(NodeShape s) {
  switch (s) {
    case NodeShape::HardGoal: return "hardGoal";
    case NodeShape::SoftGoal: return "softGoal";
    case NodeShape::Belief: return "belief";
    case NodeShape::Task: return "task";
  }
  return "?";
}

inline NodeShape shape_for(ElementType t) {
  switch (t) {
    case ElementType::Goal: return NodeShape::HardGoal;
    case ElementType::Softgoal: return NodeShape::SoftGoal;
    case ElementType::Belief: return NodeShape::Belief;
  }
  return NodeShape::HardGoal;
}

struct RenderNode {
  std::string id;  // unique dot identifier
  std::string name;
  NodeShape shape = NodeShape::HardGoal;
  double score = 0;
  Rgb color;
  std::string actorBoundary;  // persona; empty for tasks
};

struct RenderEdge {
  std::string from;  // node ids
  std::string to;
  ContributionStrength strength = ContributionStrength::Help;
  Endpoint endpoint = Endpoint::Means;
};

struct GoalGraph {
  std::vector<RenderNode> nodes;
  std::vector<RenderEdge> edges;
  std::string dot;
};

namespace detail {

inline std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    if (c == '\r') continue;
    out += c;
  }
  return out + "\"";
}

inline std::string dot_node_attributes(const RenderNode& n) {
  std::string shape, style;
  switch (n.shape) {
    case NodeShape::HardGoal: shape = "box", style = "rounded,filled"; break;
    case NodeShape::SoftGoal: shape = "octagon", style = "rounded,filled"; break;
    case NodeShape::Belief: shape = "ellipse", style = "filled"; break;
    case NodeShape::Task: shape = "hexagon", style = "filled"; break;
  }
  const auto label = qualitative_label(std::clamp(n.score, -100.0, 100.0));
  return "[label=" + dot_quote(n.name) + ", shape=" + shape + ", style=" + dot_quote(style) +
         ", fillcolor=" + dot_quote(to_hex(n.color)) + ", tooltip=" +
         dot_quote(std::to_string(display_score(n.score)) + " " + std::string(to_string(label))) +
         "]";
}

}  // namespace detail

/// Graph of the user goals of `personas` plus the tasks contributing to
/// them, clustered by persona. Node and edge emission order is sorted.
inline GoalGraph build_user_goal_graph(const Model& model, const std::set<std::string>& personas,
                                       const EvaluationResult& result) {
  GoalGraph graph;
  std::map<std::string, std::vector<RenderNode>> clusters;  // persona -> nodes
  std::set<std::size_t> goalSet;

  for (const auto& p : personas) {
    auto pi = model.persona_index(p);
    if (!pi) throw Error(ErrorCode::UnknownPersona, "unknown persona '" + p + "'", p);
    for (auto gi : model.persona_goals(*pi)) {
      const auto& g = model.user_goal(gi);
      auto it = result.scores.find(g.name);
      if (it == result.scores.end())
        throw Error(ErrorCode::UnknownGoal, "evaluation has no score for '" + g.name + "'", g.name);
      goalSet.insert(gi);
      clusters[p].push_back({"goal:" + g.name, g.name, shape_for(g.elementType), it->second,
                             score_to_color(it->second), p});
    }
  }

  const auto& links = model.entities().contributionLinks;
  std::set<std::size_t> taskSet;
  for (auto gi : goalSet)
    for (auto li : model.incoming_links(gi)) {
      const auto& l = links[li];
      if (l.sourceKind == SourceKind::Task) {
        taskSet.insert(*model.task_index(l.source));
      } else if (!goalSet.contains(*model.user_goal_index(l.source))) {
        continue;
      }
      graph.edges.push_back({(l.sourceKind == SourceKind::Task ? "task:" : "goal:") + l.source,
                             "goal:" + l.destination, l.strength, l.endpoint});
    }
  std::sort(graph.edges.begin(), graph.edges.end(), [](const auto& a, const auto& b) {
    return std::tie(a.from, a.to, a.strength) < std::tie(b.from, b.to, b.strength);
  });

  std::string dot = "digraph user_goals {\n";
  dot += "  graph [rankdir=LR, fontname=\"Helvetica\"];\n";
  dot += "  node [fontname=\"Helvetica\"];\n";
  dot += "  edge [fontname=\"Helvetica\", fontsize=10];\n";
  for (auto& [persona, nodes] : clusters) {
    dot += "  subgraph " + detail::dot_quote("cluster_" + persona) + " {\n";
    dot += "    label=" + detail::dot_quote(persona) + ";\n";
    dot += "    style=dashed;\n";
    for (auto& n : nodes) {
      dot += "    " + detail::dot_quote(n.id) + " " + detail::dot_node_attributes(n) + ";\n";
      graph.nodes.push_back(std::move(n));
    }
    dot += "  }\n";
  }
  for (auto ti : taskSet) {
    const auto& t = model.task(ti);
    const double s = std::clamp(static_cast<double>(t.satisfaction), -100.0, 100.0);
    RenderNode n{"task:" + t.name, t.name, NodeShape::Task, s, score_to_color(s), ""};
    dot += "  " + detail::dot_quote(n.id) + " " + detail::dot_node_attributes(n) + ";\n";
    graph.nodes.push_back(std::move(n));
  }
  for (const auto& e : graph.edges)
    dot += "  " + detail::dot_quote(e.from) + " -> " + detail::dot_quote(e.to) +
           " [label=" + detail::dot_quote(to_string(e.strength)) + "];\n";
  dot += "}\n";
  graph.dot = std::move(dot);
  return graph;
}

}  // namespace ugm
