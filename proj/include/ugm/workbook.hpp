#pragma once

// Analyst workbook: a user-goal sheet and a contributions sheet as CSV text.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ugm/csv.hpp"
#include "ugm/error.hpp"
#include "ugm/levels.hpp"
#include "ugm/model.hpp"

namespace ugm {

inline const std::vector<std::string> kUserGoalSheetHeader{
    "reference", "description", "persona", "referenceKind", "intention", "elementType",
    "initialSatisfaction"};
inline const std::vector<std::string> kContributionSheetHeader{"source", "destination", "meansEnd",
                                                               "contribution"};

struct Workbook {
  std::string userGoals;      // <model>-usergoals.csv
  std::string contributions;  // <model>-contributions.csv
};

struct WorkbookUserGoalRow {
  std::string reference;
  std::string description;
  std::string persona;
  ReferenceKind referenceKind = ReferenceKind::Persona;
  std::string intention;
  std::string elementType;
  std::string initialSatisfaction;
};

struct WorkbookContributionRow {
  std::string source;
  std::string destination;
  std::string meansEnd;
  std::string contribution;
};

/// Rows of the user-goal sheet for `persona`: one per characteristic and per
/// argumentation element backing those characteristics. A reference that
/// already has user goals yields one pre-filled row per goal.
inline std::vector<WorkbookUserGoalRow> user_goal_rows(const Model& model, const std::string& persona) {
  if (!model.persona_index(persona))
    throw Error(ErrorCode::UnknownPersona, "unknown persona '" + persona + "'", persona);
  const auto& e = model.entities();

  std::vector<WorkbookUserGoalRow> rows;
  auto emit = [&](const std::string& ref, const std::string& description, ReferenceKind kind) {
    bool any = false;
    for (const auto& g : e.userGoals)
      if (g.persona == persona && g.source == ref && g.sourceKind == kind) {
        any = true;
        rows.push_back({ref, description, persona, kind, g.name, std::string(to_string(g.elementType)),
                        g.initialSatisfaction ? std::string(to_string(*g.initialSatisfaction)) : ""});
      }
    if (!any) rows.push_back({ref, description, persona, kind, "", "", ""});
  };

  std::set<std::string> documentRefs;
  for (const auto& c : e.characteristics) {
    if (c.persona != persona) continue;
    emit(c.name, c.description, ReferenceKind::Persona);
    documentRefs.insert(c.elements.begin(), c.elements.end());
  }
  for (const auto& ref : documentRefs)
    emit(ref, e.references[*model.reference_index(ref)].description, ReferenceKind::Document);
  return rows;
}

/// Rows of the contributions sheet: every ordered pair of the persona's user
/// goals, pre-filled where a link already exists.
inline std::vector<WorkbookContributionRow> contribution_rows(const Model& model,
                                                              const std::string& persona) {
  auto pi = model.persona_index(persona);
  if (!pi) throw Error(ErrorCode::UnknownPersona, "unknown persona '" + persona + "'", persona);
  std::vector<WorkbookContributionRow> rows;
  const auto goals = model.persona_goals(*pi);
  const auto& links = model.entities().contributionLinks;
  for (auto s : goals)
    for (auto d : goals) {
      if (s == d) continue;
      const auto& src = model.user_goal(s).name;
      const auto& dst = model.user_goal(d).name;
      bool any = false;
      for (auto li : model.incoming_links(d)) {
        const auto& l = links[li];
        if (l.sourceKind != SourceKind::UserGoal || l.source != src) continue;
        any = true;
        rows.push_back({src, dst, std::string(to_string(l.endpoint)), std::string(to_string(l.strength))});
      }
      if (!any) rows.push_back({src, dst, "", ""});
    }
  return rows;
}

inline Workbook export_workbook(const Model& model, const std::string& persona) {
  Workbook wb;
  csv::append_row(wb.userGoals, kUserGoalSheetHeader);
  for (const auto& r : user_goal_rows(model, persona))
    csv::append_row(wb.userGoals, {r.reference, r.description, r.persona,
                                   std::string(to_string(r.referenceKind)), r.intention,
                                   r.elementType, r.initialSatisfaction});
  csv::append_row(wb.contributions, kContributionSheetHeader);
  for (const auto& r : contribution_rows(model, persona))
    csv::append_row(wb.contributions, {r.source, r.destination, r.meansEnd, r.contribution});
  return wb;
}

/// Applies completed workbook rows to a copy of `model`. Rows whose editable
/// cells are all blank are skipped; partly filled rows are IncompleteRow
/// errors. Existing goals and links with the same key are replaced, so
/// re-importing the same sheets is a no-op.
inline Model import_workbook(const Model& model, std::string_view userGoalSheet,
                             std::string_view contributionSheet) {
  Entities e = model.entities();
  const auto where = [](std::string_view sheet, std::size_t line) {
    return std::string(sheet) + " " + csv::position(line, 1);
  };

  std::map<std::string, std::size_t> goalIndex;
  for (std::size_t i = 0; i < e.userGoals.size(); ++i) goalIndex.emplace(e.userGoals[i].name, i);
  std::set<std::string> definedHere;

  for (const auto& row : csv::parse_table(userGoalSheet, kUserGoalSheetHeader, "usergoals")) {
    if (row.fields.size() == 1) continue;  // blank line
    const auto& f = row.fields;
    const auto at = where("usergoals", row.line);
    const std::string &reference = f[0], &persona = f[2], &intention = f[4], &type = f[5],
                      &satisfaction = f[6];
    if (intention.empty() && type.empty() && satisfaction.empty()) continue;
    if (intention.empty() || type.empty())
      throw Error(ErrorCode::IncompleteRow, "intention and elementType are both required", at);

    const auto kind = parse_or_throw(parse_reference_kind, f[3], "referenceKind", at);
    if (!model.persona_index(persona))
      throw Error(ErrorCode::UnknownReference, "unknown persona '" + persona + "'", at);
    const bool resolves = kind == ReferenceKind::Persona
                              ? model.characteristic_index(reference).has_value()
                              : model.reference_index(reference).has_value();
    if (!resolves)
      throw Error(ErrorCode::UnknownReference, "unknown " + std::string(to_string(kind)) +
                                                   " reference '" + reference + "'", at);

    UserGoal g;
    g.name = intention;
    g.persona = persona;
    g.elementType = parse_or_throw(parse_element_type, type, "elementType", at);
    g.source = reference;
    g.sourceKind = kind;
    if (!satisfaction.empty())
      g.initialSatisfaction = parse_or_throw(parse_satisfaction, satisfaction, "initialSatisfaction", at);

    if (auto it = goalIndex.find(g.name); it != goalIndex.end()) {
      if (definedHere.contains(g.name) && !(e.userGoals[it->second] == g))
        throw Error(ErrorCode::DuplicateName,
                    "user goal '" + g.name + "' is defined twice with different values", at);
      e.userGoals[it->second] = std::move(g);
    } else {
      goalIndex.emplace(g.name, e.userGoals.size());
      e.userGoals.push_back(std::move(g));
    }
    definedHere.insert(intention);
  }

  std::set<std::pair<std::string, std::string>> replaced;
  for (const auto& row :
       csv::parse_table(contributionSheet, kContributionSheetHeader, "contributions")) {
    if (row.fields.size() == 1) continue;
    const auto& f = row.fields;
    const auto at = where("contributions", row.line);
    const std::string &source = f[0], &destination = f[1], &meansEnd = f[2], &strength = f[3];
    if (meansEnd.empty() && strength.empty()) continue;
    if (meansEnd.empty() || strength.empty())
      throw Error(ErrorCode::IncompleteRow, "meansEnd and contribution are both required", at);
    for (const auto* name : {&source, &destination})
      if (!goalIndex.contains(*name))
        throw Error(ErrorCode::UnknownReference, "unknown user goal '" + *name + "'", at);

    ContributionLink link{source, SourceKind::UserGoal, destination,
                          parse_or_throw(parse_endpoint, meansEnd, "meansEnd", at),
                          parse_or_throw(parse_strength, strength, "contribution", at)};
    // The sheet's rows for a pair replace the model's links for it.
    if (replaced.emplace(source, destination).second)
      std::erase_if(e.contributionLinks, [&](const ContributionLink& l) {
        return l.sourceKind == SourceKind::UserGoal && l.source == source &&
               l.destination == destination;
      });
    e.contributionLinks.push_back(std::move(link));
  }

  return build_model(std::move(e));
}

}  // namespace ugm
