#pragma once

// Domain entities of the persona / user-goal / system-goal model and the
// indexed, immutable Model built from them.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "ugm/error.hpp"
#include "ugm/levels.hpp"

namespace ugm {

struct Persona {
  std::string name;
  std::string description;
  bool operator==(const Persona&) const = default;
};

struct PersonaCharacteristic {
  std::string name;
  std::string persona;
  std::string description;
  std::vector<std::string> elements;  // ArgumentationElement names
  bool operator==(const PersonaCharacteristic&) const = default;
};

/// A grounds, warrant, or rebuttal backing a characteristic. These are the
/// "document references" of the workbook.
struct ArgumentationElement {
  std::string name;
  ArgumentKind kind = ArgumentKind::Grounds;
  std::string documentReference;
  std::string description;
  bool operator==(const ArgumentationElement&) const = default;
};

struct UserGoal {
  std::string name;
  std::string persona;
  ElementType elementType = ElementType::Goal;
  std::string source;
  ReferenceKind sourceKind = ReferenceKind::Persona;
  std::optional<SatisfactionLevel> initialSatisfaction;
  bool operator==(const UserGoal&) const = default;
};

struct ContributionLink {
  std::string source;
  SourceKind sourceKind = SourceKind::UserGoal;
  std::string destination;
  Endpoint endpoint = Endpoint::Means;
  ContributionStrength strength = ContributionStrength::Help;
  bool operator==(const ContributionLink&) const = default;
};

struct SystemGoal {
  std::string name;
  std::string description;
  std::vector<std::string> refinements;
  std::vector<std::string> linkedUserGoals;
  bool operator==(const SystemGoal&) const = default;
};

struct Obstacle {
  std::string name;
  std::vector<std::string> obstructs;   // SystemGoal names
  std::vector<std::string> refinements; // Obstacle names
  std::vector<std::string> resolvedBy;  // mitigating SystemGoal names
  std::vector<std::string> vulnerabilities;
  bool operator==(const Obstacle&) const = default;
};

struct Vulnerability {
  std::string name;
  std::string description;
  bool operator==(const Vulnerability&) const = default;
};

struct Role {
  std::string name;
  bool operator==(const Role&) const = default;
};

struct Task {
  std::string name;
  std::string performedBy;
  int satisfaction = 100;
  bool operator==(const Task&) const = default;
};

struct Dependency {
  std::string name;
  std::string depender;
  std::string dependee;
  std::string dependum;
  DependumKind dependumKind = DependumKind::SystemGoal;
  bool operator==(const Dependency&) const = default;
};

/// Flat bag of everything a model is made of, in no particular order.
struct Entities {
  std::vector<Persona> personas;
  std::vector<PersonaCharacteristic> characteristics;
  std::vector<ArgumentationElement> references;
  std::vector<UserGoal> userGoals;
  std::vector<ContributionLink> contributionLinks;
  std::vector<SystemGoal> systemGoals;
  std::vector<Obstacle> obstacles;
  std::vector<Role> roles;
  std::vector<Task> tasks;
  std::vector<Dependency> dependencies;
  std::vector<Vulnerability> vulnerabilities;
  bool operator==(const Entities&) const = default;
};

inline auto link_key(const ContributionLink& l) {
  return std::tie(l.source, l.sourceKind, l.destination, l.endpoint, l.strength);
}

/// Display name for a contribution link, used in findings.
inline std::string link_name(const ContributionLink& l) {
  return l.source + " -> " + l.destination;
}

namespace detail {

using NameIndex = std::unordered_map<std::string, std::size_t>;

template <typename T>
NameIndex index_by_name(const std::vector<T>& items, std::string_view kind) {
  NameIndex index;
  index.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& name = items[i].name;
    if (name.empty())
      throw Error(ErrorCode::EmptyName, std::string(kind) + " with empty name",
                  std::string(kind) + " #" + std::to_string(i));
    if (!index.emplace(name, i).second)
      throw Error(ErrorCode::DuplicateName,
                  "two " + std::string(kind) + " entities are named '" + name + "'",
                  std::string(kind) + " '" + name + "'");
  }
  return index;
}

inline std::optional<std::size_t> find(const NameIndex& index, const std::string& name) {
  auto it = index.find(name);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

template <typename T>
void sort_by_name(std::vector<T>& items) {
  std::stable_sort(items.begin(), items.end(),
                   [](const T& a, const T& b) { return a.name < b.name; });
}

}  // namespace detail

/// Indexed, immutable model. Construct through build_model(); share by
/// const reference or shared_ptr<const Model>.
class Model {
 public:
  Model() = default;

  const Entities& entities() const noexcept { return entities_; }

  std::span<const Persona> personas() const noexcept { return entities_.personas; }
  std::span<const UserGoal> user_goals() const noexcept { return entities_.userGoals; }
  std::span<const ContributionLink> links() const noexcept { return entities_.contributionLinks; }
  std::span<const SystemGoal> system_goals() const noexcept { return entities_.systemGoals; }
  std::span<const Obstacle> obstacles() const noexcept { return entities_.obstacles; }
  std::span<const Task> tasks() const noexcept { return entities_.tasks; }
  std::span<const Dependency> dependencies() const noexcept { return entities_.dependencies; }

  std::optional<std::size_t> persona_index(const std::string& n) const { return detail::find(personas_, n); }
  std::optional<std::size_t> characteristic_index(const std::string& n) const { return detail::find(characteristics_, n); }
  std::optional<std::size_t> reference_index(const std::string& n) const { return detail::find(references_, n); }
  std::optional<std::size_t> user_goal_index(const std::string& n) const { return detail::find(userGoals_, n); }
  std::optional<std::size_t> system_goal_index(const std::string& n) const { return detail::find(systemGoals_, n); }
  std::optional<std::size_t> obstacle_index(const std::string& n) const { return detail::find(obstacles_, n); }
  std::optional<std::size_t> task_index(const std::string& n) const { return detail::find(tasks_, n); }
  std::optional<std::size_t> role_index(const std::string& n) const { return detail::find(roles_, n); }
  std::optional<std::size_t> vulnerability_index(const std::string& n) const { return detail::find(vulnerabilities_, n); }

  const UserGoal& user_goal(std::size_t i) const { return entities_.userGoals[i]; }
  const SystemGoal& system_goal(std::size_t i) const { return entities_.systemGoals[i]; }
  const Obstacle& obstacle(std::size_t i) const { return entities_.obstacles[i]; }
  const Task& task(std::size_t i) const { return entities_.tasks[i]; }

  /// Links whose destination is user goal `goal`: task links first, then
  /// goal links, each group in canonical order.
  std::span<const std::size_t> incoming_links(std::size_t goal) const { return incoming_[goal]; }

  /// System goals that list user goal `goal` among their linked user goals.
  std::span<const std::size_t> linked_system_goals(std::size_t goal) const { return linkedSystemGoals_[goal]; }

  /// Obstacles that obstruct system goal `goal`.
  std::span<const std::size_t> obstructing_obstacles(std::size_t goal) const { return obstructors_[goal]; }

  /// User goals attributed to persona `persona`, by name.
  std::span<const std::size_t> persona_goals(std::size_t persona) const { return personaGoals_[persona]; }

  bool operator==(const Model& other) const { return entities_ == other.entities_; }

  friend Model build_model(Entities entities);

 private:
  Entities entities_;
  detail::NameIndex personas_, characteristics_, references_, userGoals_, systemGoals_,
      obstacles_, roles_, tasks_, dependencies_, vulnerabilities_;
  std::vector<std::vector<std::size_t>> incoming_;
  std::vector<std::vector<std::size_t>> linkedSystemGoals_;
  std::vector<std::vector<std::size_t>> obstructors_;
  std::vector<std::vector<std::size_t>> personaGoals_;
};

namespace detail {

inline void require(const NameIndex& index, const std::string& name, std::string_view targetKind,
                    std::string_view ownerKind, const std::string& owner) {
  if (!index.contains(name))
    throw Error(ErrorCode::DanglingReference,
                "unknown " + std::string(targetKind) + " '" + name + "'",
                std::string(ownerKind) + " '" + owner + "'");
}

inline void require_all(const NameIndex& index, const std::vector<std::string>& names,
                        std::string_view targetKind, std::string_view ownerKind,
                        const std::string& owner) {
  for (const auto& n : names) require(index, n, targetKind, ownerKind, owner);
}

/// Throws RefinementCycle if the child relation `children(i)` has a cycle.
template <typename T, typename Children>
void check_acyclic(const std::vector<T>& items, const NameIndex& index, Children children,
                   std::string_view kind) {
  enum class Mark : unsigned char { White, Grey, Black };
  std::vector<Mark> mark(items.size(), Mark::White);
  // Iterative DFS; each frame is (node, next child position).
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t root = 0; root < items.size(); ++root) {
    if (mark[root] != Mark::White) continue;
    stack.emplace_back(root, 0);
    mark[root] = Mark::Grey;
    while (!stack.empty()) {
      auto& [node, pos] = stack.back();
      const auto& kids = children(items[node]);
      if (pos == kids.size()) {
        mark[node] = Mark::Black;
        stack.pop_back();
        continue;
      }
      std::size_t child = index.at(kids[pos++]);
      if (mark[child] == Mark::Grey) {
        std::string path;
        bool inCycle = false;
        for (const auto& [n, p] : stack) {
          inCycle = inCycle || n == child;
          if (inCycle) path += items[n].name + " -> ";
        }
        path += items[child].name;
        throw Error(ErrorCode::RefinementCycle, std::string(kind) + " refinement cycle " + path,
                    std::string(kind) + " '" + items[child].name + "'");
      }
      if (mark[child] == Mark::White) {
        mark[child] = Mark::Grey;
        stack.emplace_back(child, 0);
      }
    }
  }
}

}  // namespace detail

/// Sorts, indexes and resolves `entities`. Throws EmptyName, DuplicateName,
/// DanglingReference or RefinementCycle. The result depends only on the
/// entity set, not on input order.
inline Model build_model(Entities entities) {
  using namespace detail;
  Model m;
  auto& e = entities;

  sort_by_name(e.personas);
  sort_by_name(e.characteristics);
  sort_by_name(e.references);
  sort_by_name(e.userGoals);
  sort_by_name(e.systemGoals);
  sort_by_name(e.obstacles);
  sort_by_name(e.roles);
  sort_by_name(e.tasks);
  sort_by_name(e.dependencies);
  sort_by_name(e.vulnerabilities);
  std::sort(e.contributionLinks.begin(), e.contributionLinks.end(),
            [](const auto& a, const auto& b) { return link_key(a) < link_key(b); });

  m.personas_ = index_by_name(e.personas, "persona");
  m.characteristics_ = index_by_name(e.characteristics, "characteristic");
  m.references_ = index_by_name(e.references, "reference");
  m.userGoals_ = index_by_name(e.userGoals, "userGoal");
  m.systemGoals_ = index_by_name(e.systemGoals, "systemGoal");
  m.obstacles_ = index_by_name(e.obstacles, "obstacle");
  m.roles_ = index_by_name(e.roles, "role");
  m.tasks_ = index_by_name(e.tasks, "task");
  m.dependencies_ = index_by_name(e.dependencies, "dependency");
  m.vulnerabilities_ = index_by_name(e.vulnerabilities, "vulnerability");

  for (const auto& c : e.characteristics) {
    require(m.personas_, c.persona, "persona", "characteristic", c.name);
    require_all(m.references_, c.elements, "reference", "characteristic", c.name);
  }
  for (const auto& g : e.userGoals) {
    require(m.personas_, g.persona, "persona", "userGoal", g.name);
    if (g.sourceKind == ReferenceKind::Persona)
      require(m.characteristics_, g.source, "characteristic", "userGoal", g.name);
    else
      require(m.references_, g.source, "reference", "userGoal", g.name);
  }
  for (const auto& l : e.contributionLinks) {
    const auto owner = link_name(l);
    if (l.sourceKind == SourceKind::Task)
      require(m.tasks_, l.source, "task", "contributionLink", owner);
    else
      require(m.userGoals_, l.source, "userGoal", "contributionLink", owner);
    require(m.userGoals_, l.destination, "userGoal", "contributionLink", owner);
  }
  for (const auto& g : e.systemGoals) {
    require_all(m.systemGoals_, g.refinements, "systemGoal", "systemGoal", g.name);
    require_all(m.userGoals_, g.linkedUserGoals, "userGoal", "systemGoal", g.name);
  }
  for (const auto& o : e.obstacles) {
    require_all(m.systemGoals_, o.obstructs, "systemGoal", "obstacle", o.name);
    require_all(m.obstacles_, o.refinements, "obstacle", "obstacle", o.name);
    require_all(m.systemGoals_, o.resolvedBy, "systemGoal", "obstacle", o.name);
    require_all(m.vulnerabilities_, o.vulnerabilities, "vulnerability", "obstacle", o.name);
  }
  for (const auto& t : e.tasks) require(m.roles_, t.performedBy, "role", "task", t.name);
  for (const auto& d : e.dependencies) {
    require(m.roles_, d.depender, "role", "dependency", d.name);
    require(m.roles_, d.dependee, "role", "dependency", d.name);
    if (d.dependumKind == DependumKind::SystemGoal)
      require(m.systemGoals_, d.dependum, "systemGoal", "dependency", d.name);
    else
      require(m.tasks_, d.dependum, "task", "dependency", d.name);
  }

  check_acyclic(e.systemGoals, m.systemGoals_,
                [](const SystemGoal& g) -> const auto& { return g.refinements; }, "systemGoal");
  check_acyclic(e.obstacles, m.obstacles_,
                [](const Obstacle& o) -> const auto& { return o.refinements; }, "obstacle");

  m.incoming_.assign(e.userGoals.size(), {});
  for (auto kind : {SourceKind::Task, SourceKind::UserGoal})
    for (std::size_t i = 0; i < e.contributionLinks.size(); ++i) {
      const auto& l = e.contributionLinks[i];
      if (l.sourceKind == kind) m.incoming_[m.userGoals_.at(l.destination)].push_back(i);
    }

  m.linkedSystemGoals_.assign(e.userGoals.size(), {});
  for (std::size_t i = 0; i < e.systemGoals.size(); ++i)
    for (const auto& ug : e.systemGoals[i].linkedUserGoals) {
      auto& v = m.linkedSystemGoals_[m.userGoals_.at(ug)];
      if (v.empty() || v.back() != i) v.push_back(i);
    }

  m.obstructors_.assign(e.systemGoals.size(), {});
  for (std::size_t i = 0; i < e.obstacles.size(); ++i)
    for (const auto& g : e.obstacles[i].obstructs) {
      auto& v = m.obstructors_[m.systemGoals_.at(g)];
      if (v.empty() || v.back() != i) v.push_back(i);
    }

  m.personaGoals_.assign(e.personas.size(), {});
  for (std::size_t i = 0; i < e.userGoals.size(); ++i)
    m.personaGoals_[m.personas_.at(e.userGoals[i].persona)].push_back(i);

  m.entities_ = std::move(entities);
  return m;
}

// ---------------------------------------------------------------------------
// Referential-integrity validation.

struct IntegrityFinding {
  std::string rule;
  std::string entity;
  std::string message;
  bool operator==(const IntegrityFinding&) const = default;
};

/// Rule checks that build_model tolerates but a sound model must not have.
/// An empty result means the model is structurally sound.
inline std::vector<IntegrityFinding> validate_referential_integrity(const Model& model) {
  std::vector<IntegrityFinding> out;
  const auto& e = model.entities();

  // Links are sorted, so duplicates of a (kind, source, destination) pair are adjacent.
  const auto& links = e.contributionLinks;
  for (std::size_t i = 0; i < links.size(); ++i) {
    const auto& l = links[i];
    if (l.sourceKind == SourceKind::UserGoal && l.source == l.destination)
      out.push_back({"SelfContribution", link_name(l), "user goal contributes to itself"});
    const bool sameAsPrev = i > 0 && links[i - 1].source == l.source &&
                            links[i - 1].sourceKind == l.sourceKind &&
                            links[i - 1].destination == l.destination;
    const bool sameAsPrevPrev = i > 1 && links[i - 2].source == l.source &&
                                links[i - 2].sourceKind == l.sourceKind &&
                                links[i - 2].destination == l.destination;
    if (sameAsPrev && !sameAsPrevPrev)
      out.push_back({"DuplicateContribution", link_name(l),
                     "more than one contribution link for this source and destination"});
  }

  for (const auto& g : e.userGoals) {
    if (g.sourceKind == ReferenceKind::Persona) {
      const auto& c = e.characteristics[*model.characteristic_index(g.source)];
      if (c.persona != g.persona)
        out.push_back({"SourceOutsidePersona", g.name,
                       "source characteristic '" + g.source + "' belongs to persona '" +
                           c.persona + "'"});
    } else {
      const bool referenced = std::any_of(
          e.characteristics.begin(), e.characteristics.end(), [&](const auto& c) {
            return c.persona == g.persona &&
                   std::find(c.elements.begin(), c.elements.end(), g.source) != c.elements.end();
          });
      if (!referenced)
        out.push_back({"SourceOutsidePersona", g.name,
                       "reference '" + g.source + "' backs no characteristic of persona '" +
                           g.persona + "'"});
    }
  }

  for (const auto& t : e.tasks)
    if (t.satisfaction < -100 || t.satisfaction > 100)
      out.push_back({"TaskSatisfactionOutOfRange", t.name,
                     "satisfaction " + std::to_string(t.satisfaction) + " outside [-100, 100]"});

  for (const auto& d : e.dependencies)
    if (d.depender == d.dependee)
      out.push_back({"SelfDependency", d.name, "depender and dependee are both '" + d.depender + "'"});

  return out;
}

}  // namespace ugm
