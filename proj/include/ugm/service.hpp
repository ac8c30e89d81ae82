#pragma once

// What-if session over one model, and the local HTTP interface to it.
//
// Readers take an immutable snapshot of the session state; writers build a
// complete new state under a write lock and swap it in, so a reader never
// sees a half-applied strategy.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "ugm/document.hpp"
#include "ugm/error.hpp"
#include "ugm/model.hpp"
#include "ugm/obstruction.hpp"
#include "ugm/propagation.hpp"
#include "ugm/render.hpp"

namespace ugm {

struct SessionState {
  std::shared_ptr<const Model> model;
  Strategy strategy;
  EvaluationResult lastResult;  // all personas
  VulnerabilityReport findings;
  std::uint64_t revision = 0;
};

inline std::shared_ptr<const SessionState> make_state(std::shared_ptr<const Model> model,
                                                      Strategy strategy, std::uint64_t revision) {
  auto s = std::make_shared<SessionState>();
  s->lastResult = evaluate_all(*model, strategy);
  s->findings = find_implicit_vulnerabilities(*model, s->lastResult);
  s->model = std::move(model);
  s->strategy = std::move(strategy);
  s->revision = revision;
  return s;
}

class Session {
 public:
  explicit Session(Model model, std::string modelPath = {})
      : modelPath_(std::move(modelPath)),
        state_(make_state(std::make_shared<const Model>(std::move(model)), {}, 1)) {}

  std::shared_ptr<const SessionState> snapshot() const {
    std::lock_guard lock(stateMutex_);
    return state_;
  }

  /// Replaces (or, with `merge`, extends) the strategy and re-evaluates.
  /// Throws UnknownGoal without touching the state.
  std::uint64_t put_strategy(const std::map<std::string, SatisfactionLevel>& assignments,
                             bool merge) {
    std::lock_guard writer(writeMutex_);
    auto current = snapshot();
    Strategy next = merge ? current->strategy : Strategy{};
    for (const auto& [goal, level] : assignments) next.overrides[goal] = level;
    validate_strategy(*current->model, next);
    return publish(make_state(current->model, std::move(next), current->revision + 1));
  }

  std::uint64_t clear_strategy() {
    std::lock_guard writer(writeMutex_);
    auto current = snapshot();
    return publish(make_state(current->model, {}, current->revision + 1));
  }

  /// Swaps in a new model. Overrides naming goals the new model lacks are dropped.
  std::uint64_t reload(Model model) {
    std::lock_guard writer(writeMutex_);
    auto current = snapshot();
    Strategy kept;
    for (const auto& [goal, level] : current->strategy.overrides)
      if (model.user_goal_index(goal)) kept.overrides.emplace(goal, level);
    return publish(make_state(std::make_shared<const Model>(std::move(model)), std::move(kept),
                              current->revision + 1));
  }

  /// Re-reads the model from `path`, or from the path the session was opened with.
  std::uint64_t reload_from(const std::string& path = {}) {
    const std::string& from = path.empty() ? modelPath_ : path;
    if (from.empty()) throw Error(ErrorCode::Io, "session has no model path");
    return reload(load_model_file(from));
  }

 private:
  std::uint64_t publish(std::shared_ptr<const SessionState> next) {
    std::lock_guard lock(stateMutex_);
    state_ = std::move(next);
    return state_->revision;
  }

  std::string modelPath_;
  mutable std::mutex stateMutex_;
  std::mutex writeMutex_;
  std::shared_ptr<const SessionState> state_;
};

// ---------------------------------------------------------------------------
// Wire payloads. Field names are documented in docs/api.md.

namespace wire {

using Json = nlohmann::ordered_json;

inline Json finding(const ImplicitVulnerabilityFinding& f) {
  return {{"dependency", f.dependency}, {"dependum", f.dependum},
          {"cause", to_string(f.cause)}, {"trail", f.trail}};
}

inline Json integrity_finding(const IntegrityFinding& f) {
  return {{"rule", f.rule}, {"entity", f.entity}, {"message", f.message}};
}

inline Json strategy(const Strategy& s) {
  Json j = Json::object();
  for (const auto& [goal, level] : s.overrides) j[goal] = to_string(level);
  return j;
}

inline Json summary(const SessionState& st) {
  const auto& e = st.model->entities();
  Json personas = Json::array();
  for (const auto& p : e.personas) personas.push_back(p.name);
  Json integrity = Json::array();
  for (const auto& f : validate_referential_integrity(*st.model))
    integrity.push_back(integrity_finding(f));
  return {{"revision", st.revision},
          {"personas", personas},
          {"counts",
           {{"personas", e.personas.size()},
            {"characteristics", e.characteristics.size()},
            {"references", e.references.size()},
            {"userGoals", e.userGoals.size()},
            {"contributionLinks", e.contributionLinks.size()},
            {"systemGoals", e.systemGoals.size()},
            {"obstacles", e.obstacles.size()},
            {"roles", e.roles.size()},
            {"tasks", e.tasks.size()},
            {"dependencies", e.dependencies.size()},
            {"vulnerabilities", e.vulnerabilities.size()}}},
          {"strategy", strategy(st.strategy)},
          {"cycleWarnings", st.lastResult.cycleWarnings},
          {"integrityFindings", integrity},
          {"findingCount", st.findings.findings.size()}};
}

/// Graph payload for `personas` (all personas when empty).
inline Json goal_model(const SessionState& st, std::set<std::string> personas) {
  if (personas.empty()) personas = all_persona_names(*st.model);
  auto graph = build_user_goal_graph(*st.model, personas, st.lastResult);
  Json nodes = Json::array();
  for (const auto& n : graph.nodes) {
    Json override_ = nullptr;
    if (n.shape != NodeShape::Task)
      if (auto it = st.strategy.overrides.find(n.name); it != st.strategy.overrides.end())
        override_ = to_string(it->second);
    nodes.push_back({{"id", n.id},
                     {"name", n.name},
                     {"kind", n.shape == NodeShape::Task ? "task" : "userGoal"},
                     {"shape", to_string(n.shape)},
                     {"persona", n.actorBoundary},
                     {"score", n.score},
                     {"displayScore", display_score(n.score)},
                     {"label", to_string(qualitative_label(n.score))},
                     {"color", to_hex(n.color)},
                     {"rgb", {n.color.r, n.color.g, n.color.b}},
                     {"override", override_}});
  }
  Json edges = Json::array();
  for (const auto& e : graph.edges)
    edges.push_back({{"from", e.from},
                     {"to", e.to},
                     {"strength", to_string(e.strength)},
                     {"strengthScore", score(e.strength)},
                     {"endpoint", to_string(e.endpoint)}});
  return {{"revision", st.revision}, {"personas", personas}, {"nodes", nodes},
          {"edges", edges},          {"dot", graph.dot}};
}

inline Json findings(const SessionState& st) {
  Json list = Json::array();
  for (const auto& f : st.findings.findings) list.push_back(finding(f));
  return {{"revision", st.revision}, {"findings", list}, {"notes", st.findings.notes}};
}

inline Json error(const Error& e) {
  return {{"error", to_string(e.code())}, {"message", e.what()}, {"where", e.where()}};
}

/// Parses a PUT /strategy body: {"assignments": [{"goal": g, "level": l}], "merge": bool}.
inline std::pair<std::map<std::string, SatisfactionLevel>, bool> strategy_request(
    const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& ex) {
    throw Error(ErrorCode::ParseError, "malformed JSON body", "byte " + std::to_string(ex.byte));
  }
  if (!j.is_object() || !j.contains("assignments") || !j["assignments"].is_array())
    throw Error(ErrorCode::ParseError, "body must be an object with an 'assignments' array",
                "/assignments");
  bool merge = false;
  if (j.contains("merge")) {
    if (!j["merge"].is_boolean()) throw Error(ErrorCode::ParseError, "expected a boolean", "/merge");
    merge = j["merge"].get<bool>();
  }
  std::map<std::string, SatisfactionLevel> out;
  const auto& arr = j["assignments"];
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto path = "/assignments/" + std::to_string(i);
    const auto& a = arr[i];
    if (!a.is_object() || !a.contains("goal") || !a["goal"].is_string() || !a.contains("level") ||
        !a["level"].is_string())
      throw Error(ErrorCode::ParseError, "assignment needs string fields 'goal' and 'level'", path);
    out[a["goal"].get<std::string>()] =
        parse_or_throw(parse_satisfaction, a["level"].get<std::string>(), "satisfaction level",
                       path + "/level");
  }
  return {std::move(out), merge};
}

}  // namespace wire

inline int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownGoal:
    case ErrorCode::UnknownPersona: return 404;
    case ErrorCode::ParseError:
    case ErrorCode::InvalidEnum: return 400;
    case ErrorCode::Io: return 500;
    default: return 422;
  }
}

/// HTTP front end over a Session. Bind, then run() blocks until stop().
class Service {
 public:
  explicit Service(Session& session) : session_(session) {
    // httplib's default sets SO_REUSEPORT, which lets a second server share a
    // port that is already taken. Keep only SO_REUSEADDR so a busy port fails.
    server_.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    routes();
  }

  /// False when the address is unavailable (e.g. port busy).
  bool bind(const std::string& host, int port) { return server_.bind_to_port(host, port); }
  int bind_any(const std::string& host) { return server_.bind_to_any_port(host); }
  bool run() { return server_.listen_after_bind(); }
  void stop() { server_.stop(); }
  void wait_until_ready() const { server_.wait_until_ready(); }

 private:
  static void send(httplib::Response& res, const wire::Json& body, std::uint64_t revision,
                   int status = 200) {
    res.status = status;
    res.set_header("ETag", "\"" + std::to_string(revision) + "\"");
    res.set_header("X-Model-Revision", std::to_string(revision));
    res.set_content(body.dump(), "application/json");
  }

  static void fail(httplib::Response& res, const Error& e, std::uint64_t revision) {
    send(res, wire::error(e), revision, http_status(e.code()));
  }

  /// Answers 304 when the client already holds this revision.
  static bool not_modified(const httplib::Request& req, httplib::Response& res,
                           std::uint64_t revision) {
    const auto etag = "\"" + std::to_string(revision) + "\"";
    if (req.get_header_value("If-None-Match") != etag) return false;
    res.status = 304;
    res.set_header("ETag", etag);
    res.set_header("X-Model-Revision", std::to_string(revision));
    return true;
  }

  void routes() {
    server_.Get("/model/summary", [this](const httplib::Request& req, httplib::Response& res) {
      auto st = session_.snapshot();
      if (not_modified(req, res, st->revision)) return;
      send(res, wire::summary(*st), st->revision);
    });

    server_.Get(R"(/personas/([^/]+)/goal-model)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  auto st = session_.snapshot();
                  std::set<std::string> personas;
                  if (const std::string name = req.matches[1]; name != "*") personas.insert(name);
                  try {
                    auto body = wire::goal_model(*st, personas);
                    if (not_modified(req, res, st->revision)) return;
                    send(res, body, st->revision);
                  } catch (const Error& e) {
                    fail(res, e, st->revision);
                  }
                });

    server_.Put("/strategy", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        auto [assignments, merge] = wire::strategy_request(req.body);
        auto revision = session_.put_strategy(assignments, merge);
        send(res, {{"revision", revision}}, revision);
      } catch (const Error& e) {
        fail(res, e, session_.snapshot()->revision);
      }
    });

    server_.Delete("/strategy", [this](const httplib::Request&, httplib::Response& res) {
      auto revision = session_.clear_strategy();
      send(res, {{"revision", revision}}, revision);
    });

    server_.Get("/findings", [this](const httplib::Request& req, httplib::Response& res) {
      auto st = session_.snapshot();
      if (not_modified(req, res, st->revision)) return;
      send(res, wire::findings(*st), st->revision);
    });

    server_.Post("/model/reload", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        std::string path;
        if (!req.body.empty()) {
          auto j = nlohmann::json::parse(req.body, nullptr, false);
          if (j.is_discarded() || !j.is_object())
            throw Error(ErrorCode::ParseError, "body must be a JSON object");
          if (j.contains("path")) {
            if (!j["path"].is_string()) throw Error(ErrorCode::ParseError, "expected a string", "/path");
            path = j["path"].get<std::string>();
          }
        }
        auto revision = session_.reload_from(path);
        send(res, {{"revision", revision}}, revision);
      } catch (const Error& e) {
        fail(res, e, session_.snapshot()->revision);
      }
    });
  }

  Session& session_;
  httplib::Server server_;
};

}  // namespace ugm
