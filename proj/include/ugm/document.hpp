#pragma once

// Model document: one JSON object with a section per entity kind. Output is
// canonical (entities in (kind, name) order, fixed field order, 2-space
// indent, trailing LF), so equal models serialise to identical bytes.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ugm/error.hpp"
#include "ugm/levels.hpp"
#include "ugm/model.hpp"

namespace ugm {

inline constexpr std::string_view kDocumentFormat = "user-goal-model";
inline constexpr int kDocumentVersion = 1;

namespace detail {

using OJson = nlohmann::ordered_json;

inline OJson names(const std::vector<std::string>& v) { return OJson(v); }

inline OJson to_json(const Persona& p) {
  return {{"name", p.name}, {"description", p.description}};
}
inline OJson to_json(const PersonaCharacteristic& c) {
  return {{"name", c.name}, {"persona", c.persona}, {"description", c.description},
          {"elements", names(c.elements)}};
}
inline OJson to_json(const ArgumentationElement& a) {
  return {{"name", a.name}, {"kind", to_string(a.kind)},
          {"documentReference", a.documentReference}, {"description", a.description}};
}
inline OJson to_json(const UserGoal& g) {
  OJson j{{"name", g.name}, {"persona", g.persona}, {"elementType", to_string(g.elementType)},
          {"source", g.source}, {"sourceKind", to_string(g.sourceKind)}};
  j["initialSatisfaction"] =
      g.initialSatisfaction ? OJson(to_string(*g.initialSatisfaction)) : OJson(nullptr);
  return j;
}
inline OJson to_json(const ContributionLink& l) {
  return {{"source", l.source}, {"sourceKind", to_string(l.sourceKind)},
          {"destination", l.destination}, {"endpoint", to_string(l.endpoint)},
          {"strength", to_string(l.strength)}};
}
inline OJson to_json(const SystemGoal& g) {
  return {{"name", g.name}, {"description", g.description}, {"refinements", names(g.refinements)},
          {"linkedUserGoals", names(g.linkedUserGoals)}};
}
inline OJson to_json(const Obstacle& o) {
  return {{"name", o.name}, {"obstructs", names(o.obstructs)},
          {"refinements", names(o.refinements)}, {"resolvedBy", names(o.resolvedBy)},
          {"vulnerabilities", names(o.vulnerabilities)}};
}
inline OJson to_json(const Role& r) { return {{"name", r.name}}; }
inline OJson to_json(const Task& t) {
  return {{"name", t.name}, {"performedBy", t.performedBy}, {"satisfaction", t.satisfaction}};
}
inline OJson to_json(const Dependency& d) {
  return {{"name", d.name}, {"depender", d.depender}, {"dependee", d.dependee},
          {"dependum", d.dependum}, {"dependumKind", to_string(d.dependumKind)}};
}
inline OJson to_json(const Vulnerability& v) {
  return {{"name", v.name}, {"description", v.description}};
}

template <typename T>
OJson section(const std::vector<T>& items) {
  OJson arr = OJson::array();
  for (const auto& item : items) arr.push_back(to_json(item));
  return arr;
}

/// Field reader over one JSON object that tracks its JSON-pointer path and
/// rejects unknown or mistyped fields.
class ObjectReader {
 public:
  ObjectReader(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("", "expected an object");
  }

  std::string str(const char* key, bool required = true) {
    seen_.push_back(key);
    auto it = j_.find(key);
    if (it == j_.end()) {
      if (required) fail(key, "missing field");
      return {};
    }
    if (!it->is_string()) fail(key, "expected a string");
    return it->get<std::string>();
  }

  std::optional<std::string> optional_str(const char* key) {
    seen_.push_back(key);
    auto it = j_.find(key);
    if (it == j_.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) fail(key, "expected a string or null");
    return it->get<std::string>();
  }

  std::vector<std::string> names(const char* key) {
    seen_.push_back(key);
    std::vector<std::string> out;
    auto it = j_.find(key);
    if (it == j_.end()) return out;
    if (!it->is_array()) fail(key, "expected an array of names");
    for (std::size_t i = 0; i < it->size(); ++i) {
      if (!(*it)[i].is_string()) fail(std::string(key) + "/" + std::to_string(i), "expected a string");
      out.push_back((*it)[i].get<std::string>());
    }
    return out;
  }

  int integer(const char* key, int fallback) {
    seen_.push_back(key);
    auto it = j_.find(key);
    if (it == j_.end()) return fallback;
    if (!it->is_number_integer()) fail(key, "expected an integer");
    return it->get<int>();
  }

  template <typename Parser>
  auto enumeration(const char* key, Parser parser, std::string_view what) {
    auto text = str(key);
    auto parsed = parser(text);
    if (!parsed)
      throw Error(ErrorCode::InvalidEnum, "'" + text + "' is not a valid " + std::string(what),
                  path_ + "/" + key);
    return *parsed;
  }

  template <typename Parser, typename Enum>
  Enum enumeration(const char* key, Parser parser, std::string_view what, Enum fallback) {
    if (!j_.contains(key)) {
      seen_.push_back(key);
      return fallback;
    }
    return enumeration(key, parser, what);
  }

  void allow(const char* key) { seen_.push_back(key); }
  const std::string& path() const { return path_; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end())
        fail(it.key(), "unknown field");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    throw Error(ErrorCode::ParseError, message, key.empty() ? path_ : path_ + "/" + key);
  }

 private:
  const nlohmann::json& j_;
  std::string path_;
  std::vector<std::string> seen_;
};

template <typename T, typename ReadOne>
std::vector<T> read_section(const nlohmann::json& doc, const char* key, ReadOne readOne) {
  std::vector<T> out;
  auto it = doc.find(key);
  if (it == doc.end()) return out;
  const std::string path = std::string("/") + key;
  if (!it->is_array()) throw Error(ErrorCode::ParseError, "expected an array", path);
  for (std::size_t i = 0; i < it->size(); ++i) {
    ObjectReader r((*it)[i], path + "/" + std::to_string(i));
    out.push_back(readOne(r));
    r.finish();
  }
  return out;
}

inline std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line, column = 1;
    else ++column;
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column) + " (byte " +
         std::to_string(byte) + ")";
}

}  // namespace detail

/// Canonical entity set as a document.
inline std::string save_model(const Model& model) {
  using detail::section;
  const auto& e = model.entities();
  detail::OJson doc;
  doc["format"] = kDocumentFormat;
  doc["version"] = kDocumentVersion;
  doc["personas"] = section(e.personas);
  doc["characteristics"] = section(e.characteristics);
  doc["references"] = section(e.references);
  doc["userGoals"] = section(e.userGoals);
  doc["contributionLinks"] = section(e.contributionLinks);
  doc["systemGoals"] = section(e.systemGoals);
  doc["obstacles"] = section(e.obstacles);
  doc["roles"] = section(e.roles);
  doc["tasks"] = section(e.tasks);
  doc["dependencies"] = section(e.dependencies);
  doc["vulnerabilities"] = section(e.vulnerabilities);
  return doc.dump(2) + "\n";
}

/// Reads the entity set from a document without building a model.
inline Entities parse_entities(std::string_view text) {
  using detail::ObjectReader;
  using detail::read_section;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw Error(ErrorCode::ParseError, "malformed document", detail::line_column(text, ex.byte));
  }

  ObjectReader top(doc, "");
  if (top.str("format") != kDocumentFormat)
    top.fail("format", "expected '" + std::string(kDocumentFormat) + "'");
  if (top.integer("version", kDocumentVersion) != kDocumentVersion)
    top.fail("version", "unsupported version");

  Entities e;
  e.personas = read_section<Persona>(doc, "personas", [](ObjectReader& r) {
    return Persona{r.str("name"), r.str("description", false)};
  });
  e.characteristics = read_section<PersonaCharacteristic>(doc, "characteristics", [](ObjectReader& r) {
    return PersonaCharacteristic{r.str("name"), r.str("persona"), r.str("description", false),
                                 r.names("elements")};
  });
  e.references = read_section<ArgumentationElement>(doc, "references", [](ObjectReader& r) {
    ArgumentationElement a;
    a.name = r.str("name");
    a.kind = r.enumeration("kind", parse_argument_kind, "argument kind");
    a.documentReference = r.str("documentReference", false);
    a.description = r.str("description", false);
    return a;
  });
  e.userGoals = read_section<UserGoal>(doc, "userGoals", [](ObjectReader& r) {
    UserGoal g;
    g.name = r.str("name");
    g.persona = r.str("persona");
    g.elementType = r.enumeration("elementType", parse_element_type, "element type");
    g.source = r.str("source");
    g.sourceKind = r.enumeration("sourceKind", parse_reference_kind, "reference kind",
                                 ReferenceKind::Persona);
    if (auto s = r.optional_str("initialSatisfaction")) {
      g.initialSatisfaction = parse_or_throw(parse_satisfaction, *s, "satisfaction level",
                                             r.path() + "/initialSatisfaction");
    }
    return g;
  });
  e.contributionLinks = read_section<ContributionLink>(doc, "contributionLinks", [](ObjectReader& r) {
    ContributionLink l;
    l.source = r.str("source");
    l.sourceKind = r.enumeration("sourceKind", parse_source_kind, "source kind", SourceKind::UserGoal);
    l.destination = r.str("destination");
    l.endpoint = r.enumeration("endpoint", parse_endpoint, "endpoint", Endpoint::Means);
    l.strength = r.enumeration("strength", parse_strength, "contribution strength");
    return l;
  });
  e.systemGoals = read_section<SystemGoal>(doc, "systemGoals", [](ObjectReader& r) {
    return SystemGoal{r.str("name"), r.str("description", false), r.names("refinements"),
                      r.names("linkedUserGoals")};
  });
  e.obstacles = read_section<Obstacle>(doc, "obstacles", [](ObjectReader& r) {
    return Obstacle{r.str("name"), r.names("obstructs"), r.names("refinements"),
                    r.names("resolvedBy"), r.names("vulnerabilities")};
  });
  e.roles = read_section<Role>(doc, "roles", [](ObjectReader& r) { return Role{r.str("name")}; });
  e.tasks = read_section<Task>(doc, "tasks", [](ObjectReader& r) {
    return Task{r.str("name"), r.str("performedBy"), r.integer("satisfaction", 100)};
  });
  e.dependencies = read_section<Dependency>(doc, "dependencies", [](ObjectReader& r) {
    Dependency d;
    d.name = r.str("name");
    d.depender = r.str("depender");
    d.dependee = r.str("dependee");
    d.dependum = r.str("dependum");
    d.dependumKind = r.enumeration("dependumKind", parse_dependum_kind, "dependum kind",
                                   DependumKind::SystemGoal);
    return d;
  });
  e.vulnerabilities = read_section<Vulnerability>(doc, "vulnerabilities", [](ObjectReader& r) {
    return Vulnerability{r.str("name"), r.str("description", false)};
  });

  for (const char* key : {"personas", "characteristics", "references", "userGoals",
                          "contributionLinks", "systemGoals", "obstacles", "roles", "tasks",
                          "dependencies", "vulnerabilities"})
    top.allow(key);
  top.finish();
  return e;
}

/// Parses and builds. Throws ParseError, or any build_model error.
inline Model load_model(std::string_view text) { return build_model(parse_entities(text)); }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open file", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write file", path);
  out << content;
  if (!out) throw Error(ErrorCode::Io, "write failed", path);
}

inline Model load_model_file(const std::string& path) { return load_model(read_file(path)); }

}  // namespace ugm
