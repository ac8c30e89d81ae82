#pragma once

// Command implementations behind the `ugm` executable. Each command writes
// its report to `out`, diagnostics to `err`, and returns an exit status.

#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "ugm/csv.hpp"
#include "ugm/document.hpp"
#include "ugm/error.hpp"
#include "ugm/model.hpp"
#include "ugm/obstruction.hpp"
#include "ugm/propagation.hpp"
#include "ugm/render.hpp"
#include "ugm/service.hpp"
#include "ugm/workbook.hpp"

namespace ugm::cli {

enum ExitStatus : int {
  kSuccess = 0,
  kFindings = 1,
  kUsageOrIo = 2,
  kInvalidModel = 3,
};

enum class Format { Human, Machine };

struct Options {
  std::string model;
  std::vector<std::string> personas;
  std::string strategy;
  Format format = Format::Human;
  std::string out;
  std::string workbook;  // workbook path prefix for import/export
  int port = 8080;
  std::string host = "127.0.0.1";
};

/// Errors from building a model mean the model itself is invalid; anything
/// else (missing file, syntax, bad enum) is an input error.
inline int exit_status_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::EmptyName:
    case ErrorCode::DuplicateName:
    case ErrorCode::DanglingReference:
    case ErrorCode::RefinementCycle: return kInvalidModel;
    default: return kUsageOrIo;
  }
}

/// Reads `goalName,satisfactionLabel` rows. A leading `goal,satisfaction`
/// header row is optional; blank lines are ignored.
inline Strategy parse_strategy(std::string_view text) {
  Strategy s;
  auto rows = csv::parse(text);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.fields.size() == 1 && r.fields[0].empty()) continue;
    if (i == 0 && r.fields == std::vector<std::string>{"goal", "satisfaction"}) continue;
    const auto at = "strategy " + csv::position(r.line, 1);
    if (r.fields.size() != 2)
      throw Error(ErrorCode::ParseError, "expected 'goalName,satisfactionLabel'", at);
    s.overrides[r.fields[0]] = parse_or_throw(parse_satisfaction, r.fields[1], "satisfaction level", at);
  }
  return s;
}

inline Strategy load_strategy(const Options& o) {
  return o.strategy.empty() ? Strategy{} : parse_strategy(read_file(o.strategy));
}

inline std::set<std::string> selected_personas(const Model& model, const Options& o) {
  if (o.personas.empty()) return all_persona_names(model);
  return {o.personas.begin(), o.personas.end()};
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

/// Referential validation plus the implied-vulnerability check.
inline int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  try {
    const Model model = load_model_file(o.model);
    const auto integrity = validate_referential_integrity(model);
    const auto report = find_implicit_vulnerabilities(model, load_strategy(o));
    const int status = !integrity.empty()         ? kInvalidModel
                       : !report.findings.empty() ? kFindings
                                                  : kSuccess;
    if (o.format == Format::Machine) {
      wire::Json j;
      j["integrityFindings"] = wire::Json::array();
      for (const auto& f : integrity) j["integrityFindings"].push_back(wire::integrity_finding(f));
      j["findings"] = wire::Json::array();
      for (const auto& f : report.findings) j["findings"].push_back(wire::finding(f));
      j["notes"] = report.notes;
      j["exitStatus"] = status;
      out << j.dump(2) << "\n";
    } else {
      for (const auto& f : integrity)
        out << "integrity " << f.rule << " [" << f.entity << "]: " << f.message << "\n";
      for (const auto& f : report.findings)
        out << "implied vulnerability: dependency '" << f.dependency << "' on '" << f.dependum
            << "' (" << to_string(f.cause) << "): " << join(f.trail, " > ") << "\n";
      for (const auto& n : report.notes) out << "note: " << n << "\n";
      if (!integrity.empty()) out << integrity.size() << " integrity findings\n";
      out << report.findings.size() << " findings\n";
    }
    return status;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_status_for(e);
  }
}

/// Score table for the selected personas.
inline int cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
  try {
    const Model model = load_model_file(o.model);
    const auto result = evaluate_all(model, load_strategy(o), selected_personas(model, o));
    if (o.format == Format::Machine) {
      wire::Json rows = wire::Json::array();
      for (const auto& [goal, s] : result.scores)
        rows.push_back({{"goal", goal},
                        {"score", display_score(s)},
                        {"label", to_string(qualitative_label(s))},
                        {"exactScore", s}});
      wire::Json j{{"scores", rows}, {"cycleWarnings", result.cycleWarnings}};
      out << j.dump(2) << "\n";
    } else {
      std::string table;
      csv::append_row(table, {"goal", "score", "label"});
      for (const auto& [goal, s] : result.scores)
        csv::append_row(table, {goal, std::to_string(display_score(s)),
                                std::string(to_string(qualitative_label(s)))});
      out << table;
      for (const auto& c : result.cycleWarnings)
        err << "warning: contribution cycle " << join(c, " <- ") << " <- " << c.front() << "\n";
    }
    return kSuccess;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_status_for(e);
  }
}

/// Default workbook prefix: the model path without its extension.
inline std::string workbook_prefix(const Options& o) {
  if (!o.workbook.empty()) return o.workbook;
  std::filesystem::path p(o.model);
  return (p.parent_path() / p.stem()).string();
}

inline int cmd_export_workbook(const Options& o, std::ostream& out, std::ostream& err) {
  try {
    const Model model = load_model_file(o.model);
    std::string persona;
    if (!o.personas.empty()) persona = o.personas.front();
    else if (model.personas().size() == 1) persona = model.personas().front().name;
    else throw Error(ErrorCode::UnknownPersona, "--persona is required when the model has "
                                                "more or fewer than one persona");
    const auto wb = export_workbook(model, persona);
    const auto prefix = o.out.empty() ? workbook_prefix(o) : o.out;
    write_file(prefix + "-usergoals.csv", wb.userGoals);
    write_file(prefix + "-contributions.csv", wb.contributions);
    out << "wrote " << prefix << "-usergoals.csv and " << prefix << "-contributions.csv\n";
    return kSuccess;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_status_for(e);
  }
}

/// Imports `<prefix>-usergoals.csv` and `<prefix>-contributions.csv`; writes
/// the updated model document to --out, or to stdout.
inline int cmd_import_workbook(const Options& o, std::ostream& out, std::ostream& err) {
  try {
    const Model model = load_model_file(o.model);
    const auto prefix = workbook_prefix(o);
    const Model updated = import_workbook(model, read_file(prefix + "-usergoals.csv"),
                                          read_file(prefix + "-contributions.csv"));
    const auto doc = save_model(updated);
    if (o.out.empty()) out << doc;
    else write_file(o.out, doc);
    return kSuccess;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_status_for(e);
  }
}

inline int cmd_render(const Options& o, std::ostream& out, std::ostream& err) {
  try {
    const Model model = load_model_file(o.model);
    const auto personas = selected_personas(model, o);
    const auto result = evaluate_all(model, load_strategy(o), personas);
    const auto graph = build_user_goal_graph(model, personas, result);
    if (o.out.empty()) out << graph.dot;
    else write_file(o.out, graph.dot);
    return kSuccess;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_status_for(e);
  }
}

/// Serves until the process is stopped. Returns kUsageOrIo if the port is busy.
inline int cmd_serve(const Options& o, std::ostream& out, std::ostream& err) {
  try {
    Session session(load_model_file(o.model), o.model);
    Service service(session);
    if (!service.bind(o.host, o.port)) {
      err << "error: cannot listen on " << o.host << ":" << o.port << "\n";
      return kUsageOrIo;
    }
    out << "serving " << o.model << " on http://" << o.host << ":" << o.port << "\n" << std::flush;
    return service.run() ? kSuccess : kUsageOrIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_status_for(e);
  }
}

}  // namespace ugm::cli
