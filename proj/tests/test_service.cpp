#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <thread>

#include "builder.hpp"
#include "generators.hpp"
#include "httplib.h"
#include "json.hpp"
#include "ugm/document.hpp"
#include "ugm/service.hpp"

using namespace ugm;
using Json = nlohmann::json;
using S = SatisfactionLevel;

namespace {

const std::string kBelief = "Thieves steal anything";
const std::string kGoal = "InfoSec communications perceived";

Model ict_model() { return ugm::test::ict_awareness_fixture().build(); }

}  // namespace

TEST(Session, StartsAtRevisionOne) {
  Session s(ict_model());
  auto st = s.snapshot();
  EXPECT_EQ(st->revision, 1u);
  EXPECT_TRUE(st->strategy.overrides.empty());
  EXPECT_TRUE(st->findings.findings.empty());
}

TEST(Session, StrategyReplaceMergeAndClear) {
  Session s(ict_model());
  EXPECT_EQ(s.put_strategy({{kBelief, S::Satisfied}}, false), 2u);
  auto st = s.snapshot();
  EXPECT_DOUBLE_EQ(st->lastResult.scores.at(kGoal), -50);
  ASSERT_EQ(st->findings.findings.size(), 1u);

  s.put_strategy({{kGoal, S::Satisfied}}, true);
  EXPECT_EQ(s.snapshot()->strategy.overrides.size(), 2u);
  s.put_strategy({{kGoal, S::Satisfied}}, false);
  EXPECT_EQ(s.snapshot()->strategy.overrides.size(), 1u);

  EXPECT_EQ(s.clear_strategy(), 5u);
  EXPECT_TRUE(s.snapshot()->findings.findings.empty());
}

TEST(Session, RejectedStrategyLeavesStateAlone) {
  Session s(ict_model());
  auto before = s.snapshot();
  EXPECT_THROW(s.put_strategy({{"no such goal", S::Satisfied}}, false), Error);
  EXPECT_EQ(s.snapshot(), before);
}

TEST(Session, SnapshotsAreStable) {
  Session s(ict_model());
  auto old = s.snapshot();
  s.put_strategy({{kBelief, S::Satisfied}}, false);
  EXPECT_TRUE(old->findings.findings.empty());
  EXPECT_EQ(old->revision, 1u);
}

TEST(Session, ReloadDropsStaleOverrides) {
  Session s(ict_model());
  s.put_strategy({{kBelief, S::Satisfied}}, false);
  auto f = ugm::test::ict_awareness_fixture();
  f.e.userGoals.erase(std::remove_if(f.e.userGoals.begin(), f.e.userGoals.end(),
                                     [](const auto& g) { return g.name == kBelief; }),
                      f.e.userGoals.end());
  f.e.contributionLinks.clear();
  s.reload(f.build());
  EXPECT_TRUE(s.snapshot()->strategy.overrides.empty());
  EXPECT_EQ(s.snapshot()->revision, 3u);
  EXPECT_THROW(s.reload_from(), Error);  // no path
}

TEST(Session, ConcurrentReadersSeeConsistentStates) {
  Session s(ict_model());
  std::atomic<bool> done{false};
  std::atomic<int> inconsistent{0};
  std::thread reader([&] {
    while (!done) {
      auto st = s.snapshot();
      const bool overridden = st->strategy.overrides.contains(kBelief);
      const bool denied = st->lastResult.scores.at(kGoal) < 0;
      if (overridden != denied || denied != !st->findings.findings.empty()) ++inconsistent;
    }
  });
  for (int i = 0; i < 200; ++i) {
    s.put_strategy({{kBelief, S::Satisfied}}, false);
    s.clear_strategy();
  }
  done = true;
  reader.join();
  EXPECT_EQ(inconsistent.load(), 0);
  EXPECT_EQ(s.snapshot()->revision, 401u);
}

TEST(Wire, StrategyRequestParsing) {
  auto [a, merge] = wire::strategy_request(R"({"assignments":[{"goal":"g","level":"Denied"}],"merge":true})");
  EXPECT_TRUE(merge);
  EXPECT_EQ(a.at("g"), S::Denied);
  auto code = [](const std::string& body) {
    try {
      wire::strategy_request(body);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  EXPECT_EQ(code("{"), ErrorCode::ParseError);
  EXPECT_EQ(code(R"({"assignments":{}})"), ErrorCode::ParseError);
  EXPECT_EQ(code(R"({"assignments":[{"goal":"g"}]})"), ErrorCode::ParseError);
  EXPECT_EQ(code(R"({"assignments":[{"goal":"g","level":"Great"}]})"), ErrorCode::InvalidEnum);
  EXPECT_EQ(code(R"({"assignments":[],"merge":"yes"})"), ErrorCode::ParseError);
}

TEST(Wire, StatusCodes) {
  EXPECT_EQ(http_status(ErrorCode::UnknownGoal), 404);
  EXPECT_EQ(http_status(ErrorCode::UnknownPersona), 404);
  EXPECT_EQ(http_status(ErrorCode::ParseError), 400);
  EXPECT_EQ(http_status(ErrorCode::InvalidEnum), 400);
  EXPECT_EQ(http_status(ErrorCode::Io), 500);
  EXPECT_EQ(http_status(ErrorCode::DanglingReference), 422);
}

// ---------------------------------------------------------------------------
// HTTP

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("ugm-service-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
    path_ = (dir_ / "model.json").string();
    write_file(path_, save_model(ict_model()));
    session_ = std::make_unique<Session>(load_model_file(path_), path_);
    service_ = std::make_unique<Service>(*session_);
    port_ = service_->bind_any("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { service_->run(); });
    service_->wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }

  void TearDown() override {
    service_->stop();
    thread_.join();
    std::filesystem::remove_all(dir_);
  }

  Json get_json(const std::string& path, int expected = 200) {
    auto res = client_->Get(path);
    EXPECT_TRUE(res);
    if (!res) return {};
    EXPECT_EQ(res->status, expected) << res->body;
    return Json::parse(res->body);
  }

  std::filesystem::path dir_;
  std::string path_;
  std::unique_ptr<Session> session_;
  std::unique_ptr<Service> service_;
  std::thread thread_;
  int port_ = 0;
  std::unique_ptr<httplib::Client> client_;
};

TEST_F(ServiceTest, Summary) {
  auto j = get_json("/model/summary");
  EXPECT_EQ(j["revision"], 1);
  EXPECT_EQ(j["personas"], Json::array({"Rick"}));
  EXPECT_EQ(j["counts"]["userGoals"], 2);
  EXPECT_EQ(j["counts"]["dependencies"], 1);
  EXPECT_EQ(j["findingCount"], 0);
  EXPECT_TRUE(j["integrityFindings"].empty());
}

TEST_F(ServiceTest, GoalModel) {
  auto j = get_json("/personas/Rick/goal-model");
  ASSERT_EQ(j["nodes"].size(), 2u);
  ASSERT_EQ(j["edges"].size(), 1u);
  EXPECT_EQ(j["edges"][0]["strength"], "SomeNegative");
  EXPECT_EQ(j["edges"][0]["strengthScore"], -50);
  for (const auto& n : j["nodes"]) {
    EXPECT_EQ(n["color"], "#ffff00");
    EXPECT_EQ(n["label"], "None");
    EXPECT_TRUE(n["override"].is_null());
  }
  EXPECT_NE(j["dot"].get<std::string>().find("digraph"), std::string::npos);
  EXPECT_EQ(get_json("/personas/*/goal-model")["nodes"].size(), 2u);
  auto missing = get_json("/personas/Nobody/goal-model", 404);
  EXPECT_EQ(missing["error"], "UnknownPersona");
}

TEST_F(ServiceTest, StrategyUpdatesScoresAndFindings) {
  auto put = client_->Put("/strategy",
                          R"({"assignments":[{"goal":"Thieves steal anything","level":"Satisfied"}]})",
                          "application/json");
  ASSERT_TRUE(put);
  EXPECT_EQ(put->status, 200);
  EXPECT_EQ(put->get_header_value("X-Model-Revision"), "2");

  auto model = get_json("/personas/Rick/goal-model");
  for (const auto& n : model["nodes"])
    if (n["name"] == kGoal) {
      EXPECT_EQ(n["displayScore"], -50);
      EXPECT_EQ(n["label"], "WeaklyDenied");
      EXPECT_EQ(n["color"], "#c58000");
    } else {
      EXPECT_EQ(n["override"], "Satisfied");
    }

  auto findings = get_json("/findings");
  ASSERT_EQ(findings["findings"].size(), 1u);
  EXPECT_EQ(findings["findings"][0]["cause"], "DeniedLinkedUserGoal");
  EXPECT_EQ(findings["findings"][0]["dependum"], "ICT awareness");

  auto del = client_->Delete("/strategy");
  ASSERT_TRUE(del);
  EXPECT_EQ(del->status, 200);
  EXPECT_TRUE(get_json("/findings")["findings"].empty());
  EXPECT_EQ(get_json("/model/summary")["revision"], 3);
}

TEST_F(ServiceTest, InvalidStrategyKeepsRevision) {
  auto bad = client_->Put("/strategy", R"({"assignments":[{"goal":"Thieves steal anything","level":"Great"}]})",
                          "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  EXPECT_EQ(Json::parse(bad->body)["error"], "InvalidEnum");
  auto unknown = client_->Put("/strategy", R"({"assignments":[{"goal":"nope","level":"Denied"}]})",
                              "application/json");
  ASSERT_TRUE(unknown);
  EXPECT_EQ(unknown->status, 404);
  EXPECT_EQ(get_json("/model/summary")["revision"], 1);
}

TEST_F(ServiceTest, ConditionalGet) {
  auto first = client_->Get("/findings");
  ASSERT_TRUE(first);
  const auto etag = first->get_header_value("ETag");
  EXPECT_EQ(etag, "\"1\"");
  auto again = client_->Get("/findings", {{"If-None-Match", etag}});
  ASSERT_TRUE(again);
  EXPECT_EQ(again->status, 304);
  client_->Delete("/strategy");
  auto changed = client_->Get("/findings", {{"If-None-Match", etag}});
  ASSERT_TRUE(changed);
  EXPECT_EQ(changed->status, 200);
}

TEST_F(ServiceTest, ReloadPicksUpEdits) {
  auto f = ugm::test::ict_awareness_fixture();
  for (auto& g : f.e.userGoals)
    if (g.name == kGoal) g.initialSatisfaction = S::Denied;
  write_file(path_, save_model(f.build()));
  auto res = client_->Post("/model/reload", "", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(get_json("/findings")["findings"].size(), 1u);

  auto missing = client_->Post("/model/reload", R"({"path":"/nonexistent.json"})", "application/json");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 500);
  auto broken = client_->Post("/model/reload", "not json", "application/json");
  ASSERT_TRUE(broken);
  EXPECT_EQ(broken->status, 400);
  EXPECT_EQ(get_json("/model/summary")["revision"], 2);
}
