#pragma once

// Qualitative scales and small enumerations shared by every module, with
// their canonical text labels.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "ugm/error.hpp"

namespace ugm {

namespace detail {

template <typename Enum, std::size_t N>
using LabelTable = std::array<std::pair<Enum, std::string_view>, N>;

template <typename Enum, std::size_t N>
constexpr std::string_view label_of(const LabelTable<Enum, N>& table, Enum value) {
  for (const auto& [v, label] : table)
    if (v == value) return label;
  return "?";
}

template <typename Enum, std::size_t N>
constexpr std::optional<Enum> lookup(const LabelTable<Enum, N>& table,
                                     std::string_view text) {
  for (const auto& [v, label] : table)
    if (label == text) return v;
  return std::nullopt;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Satisfaction levels. The enumerator value is the quantitative score.

enum class SatisfactionLevel : int {
  Denied = -100,
  WeaklyDenied = -50,
  None = 0,
  WeaklySatisfied = 50,
  Satisfied = 100,
};

inline constexpr detail::LabelTable<SatisfactionLevel, 5> kSatisfactionLabels{{
    {SatisfactionLevel::Satisfied, "Satisfied"},
    {SatisfactionLevel::WeaklySatisfied, "WeaklySatisfied"},
    {SatisfactionLevel::None, "None"},
    {SatisfactionLevel::WeaklyDenied, "WeaklyDenied"},
    {SatisfactionLevel::Denied, "Denied"},
}};

constexpr int score(SatisfactionLevel level) { return static_cast<int>(level); }

constexpr std::string_view to_string(SatisfactionLevel level) {
  return detail::label_of(kSatisfactionLabels, level);
}

constexpr std::optional<SatisfactionLevel> parse_satisfaction(std::string_view text) {
  return detail::lookup(kSatisfactionLabels, text);
}

/// Inverse of score(); only the five scale points map back.
constexpr std::optional<SatisfactionLevel> satisfaction_from_score(int value) {
  for (const auto& [level, label] : kSatisfactionLabels)
    if (score(level) == value) return level;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Contribution strengths (GRL scale).

enum class ContributionStrength : int {
  Break = -100,
  SomeNegative = -50,
  Hurts = -25,
  Help = 25,
  SomePositive = 50,
  Make = 100,
};

inline constexpr detail::LabelTable<ContributionStrength, 6> kStrengthLabels{{
    {ContributionStrength::Make, "Make"},
    {ContributionStrength::SomePositive, "SomePositive"},
    {ContributionStrength::Help, "Help"},
    {ContributionStrength::Hurts, "Hurts"},
    {ContributionStrength::SomeNegative, "SomeNegative"},
    {ContributionStrength::Break, "Break"},
}};

constexpr int score(ContributionStrength strength) { return static_cast<int>(strength); }

constexpr std::string_view to_string(ContributionStrength strength) {
  return detail::label_of(kStrengthLabels, strength);
}

constexpr std::optional<ContributionStrength> parse_strength(std::string_view text) {
  return detail::lookup(kStrengthLabels, text);
}

// ---------------------------------------------------------------------------
// Structural enumerations.

enum class ElementType { Goal, Softgoal, Belief };

inline constexpr detail::LabelTable<ElementType, 3> kElementTypeLabels{{
    {ElementType::Goal, "goal"},
    {ElementType::Softgoal, "softgoal"},
    {ElementType::Belief, "belief"},
}};

constexpr std::string_view to_string(ElementType t) {
  return detail::label_of(kElementTypeLabels, t);
}
constexpr std::optional<ElementType> parse_element_type(std::string_view text) {
  return detail::lookup(kElementTypeLabels, text);
}

enum class ArgumentKind { Grounds, Warrant, Rebuttal };

inline constexpr detail::LabelTable<ArgumentKind, 3> kArgumentKindLabels{{
    {ArgumentKind::Grounds, "grounds"},
    {ArgumentKind::Warrant, "warrant"},
    {ArgumentKind::Rebuttal, "rebuttal"},
}};

constexpr std::string_view to_string(ArgumentKind k) {
  return detail::label_of(kArgumentKindLabels, k);
}
constexpr std::optional<ArgumentKind> parse_argument_kind(std::string_view text) {
  return detail::lookup(kArgumentKindLabels, text);
}

/// Which end of a contribution the characteristic's intention sits at.
enum class Endpoint { Means, End };

inline constexpr detail::LabelTable<Endpoint, 2> kEndpointLabels{{
    {Endpoint::Means, "means"},
    {Endpoint::End, "end"},
}};

constexpr std::string_view to_string(Endpoint e) { return detail::label_of(kEndpointLabels, e); }
constexpr std::optional<Endpoint> parse_endpoint(std::string_view text) {
  return detail::lookup(kEndpointLabels, text);
}

/// What a user goal was elicited from: a persona characteristic or a
/// document (argumentation) reference.
enum class ReferenceKind { Persona, Document };

inline constexpr detail::LabelTable<ReferenceKind, 2> kReferenceKindLabels{{
    {ReferenceKind::Persona, "persona"},
    {ReferenceKind::Document, "document"},
}};

constexpr std::string_view to_string(ReferenceKind k) {
  return detail::label_of(kReferenceKindLabels, k);
}
constexpr std::optional<ReferenceKind> parse_reference_kind(std::string_view text) {
  return detail::lookup(kReferenceKindLabels, text);
}

/// Kind of the node at the source end of a contribution link.
enum class SourceKind { UserGoal, Task };

inline constexpr detail::LabelTable<SourceKind, 2> kSourceKindLabels{{
    {SourceKind::UserGoal, "userGoal"},
    {SourceKind::Task, "task"},
}};

constexpr std::string_view to_string(SourceKind k) { return detail::label_of(kSourceKindLabels, k); }
constexpr std::optional<SourceKind> parse_source_kind(std::string_view text) {
  return detail::lookup(kSourceKindLabels, text);
}

enum class DependumKind { SystemGoal, Task };

inline constexpr detail::LabelTable<DependumKind, 2> kDependumKindLabels{{
    {DependumKind::SystemGoal, "systemGoal"},
    {DependumKind::Task, "task"},
}};

constexpr std::string_view to_string(DependumKind k) {
  return detail::label_of(kDependumKindLabels, k);
}
constexpr std::optional<DependumKind> parse_dependum_kind(std::string_view text) {
  return detail::lookup(kDependumKindLabels, text);
}

/// Parses `text` with `parser` or throws InvalidEnum naming `where`.
template <typename Parser>
auto parse_or_throw(Parser parser, std::string_view text, std::string_view what,
                    std::string where = {}) {
  auto parsed = parser(text);
  if (!parsed)
    throw Error(ErrorCode::InvalidEnum,
                "'" + std::string(text) + "' is not a valid " + std::string(what),
                std::move(where));
  return *parsed;
}

}  // namespace ugm
