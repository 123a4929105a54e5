#include <atomic>
#include <chrono>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "lunar/backend.hpp"
#include "lunar/template_ops.hpp"
#include "test_support.hpp"

using namespace lunar;
using lunar::test::make_logs;

namespace {

PromptSpec tiny_prompt(const std::vector<LineId>& members,
                       const LogSet& logs) {
  PromptSpec spec;
  spec.instruction_text = "inst";
  spec.output_constraint_text = "out";
  spec.member_ids = members;
  for (LineId id : members) spec.lcu_logs.push_back(logs.at(id).content);
  return spec;
}

}  // namespace

TEST_CASE("mock answers each member with its oracle template") {
  const LogSet logs = make_logs({"open file a", "open file b"});
  MockBackend mock({{0, "open file <*>"}, {1, "open file <*>"}});
  const RawResponse resp = mock.query(tiny_prompt({0, 1}, logs));
  const auto raw = extract_templates(resp.text);
  REQUIRE(raw.size() == 2);
  CHECK(raw[0] == "open file <*>");
  CHECK(raw[1] == "open file <*>");
  CHECK(mock.query_count() == 1);
}

TEST_CASE("mock is deterministic") {
  const LogSet logs = make_logs({"x 1", "x 2"});
  MockBackend a({{0, "x <*>"}, {1, "x <*>"}});
  MockBackend b({{0, "x <*>"}, {1, "x <*>"}});
  const PromptSpec p = tiny_prompt({1, 0}, logs);
  CHECK(a.query(p).text == b.query(p).text);
}

TEST_CASE("mock refuses unknown lines") {
  const LogSet logs = make_logs({"y 1"});
  MockBackend mock({});
  CHECK_THROWS_AS(mock.query(tiny_prompt({0}, logs)), BackendError);
}

TEST_CASE("corruption is a pure function of the prompt") {
  const LogSet logs = make_logs({"a 1", "a 2", "b 1", "b 2"});
  MockOptions opts;
  opts.corruption_rate = 0.5;
  opts.corruption_seed = 3;
  MockBackend mock(
      {{0, "a <*>"}, {1, "a <*>"}, {2, "b <*>"}, {3, "b <*>"}}, opts);

  const PromptSpec p = tiny_prompt({0, 1}, logs);
  const std::string first = mock.query(p).text;
  // Retrying the identical prompt must reproduce the identical outcome.
  CHECK(mock.query(p).text == first);

  // Across many distinct prompts, a 50% rate must corrupt some and spare
  // some.
  std::size_t corrupted = 0;
  for (LineId id = 0; id < logs.size(); ++id) {
    for (std::uint64_t salt = 0; salt < 8; ++salt) {
      PromptSpec q = tiny_prompt({id}, logs);
      q.instruction_text = "inst" + std::to_string(salt);
      try {
        extract_templates(mock.query(q).text);
      } catch (const ExtractionError&) {
        ++corrupted;
      }
    }
  }
  CHECK(corrupted > 0);
  CHECK(corrupted < 32);
  // The two identical warm-up queries may add their own corruptions.
  const bool counter_consistent = mock.corrupted_count() == corrupted ||
                                  mock.corrupted_count() == corrupted + 2;
  CHECK(counter_consistent);
}

TEST_CASE("zero corruption rate never corrupts") {
  const LogSet logs = make_logs({"c 1"});
  MockBackend mock({{0, "c <*>"}});
  for (int i = 0; i < 50; ++i) {
    PromptSpec p = tiny_prompt({0}, logs);
    p.instruction_text = "variant " + std::to_string(i);
    CHECK_NOTHROW(extract_templates(mock.query(p).text));
  }
  CHECK(mock.corrupted_count() == 0);
}

TEST_CASE("mock latency delays each call") {
  const LogSet logs = make_logs({"d 1"});
  MockOptions opts;
  opts.latency = std::chrono::milliseconds(20);
  MockBackend mock({{0, "d <*>"}}, opts);
  const auto started = std::chrono::steady_clock::now();
  mock.query(tiny_prompt({0}, logs));
  const auto elapsed = std::chrono::steady_clock::now() - started;
  CHECK(elapsed >= std::chrono::milliseconds(18));
}

TEST_CASE("http backend round-trips a chat response") {
  httplib::Server server;
  std::atomic<int> hits{0};
  nlohmann::json seen_body;
  std::string seen_auth;
  server.Post("/v1/chat/completions",
              [&](const httplib::Request& req, httplib::Response& res) {
                ++hits;
                seen_body = nlohmann::json::parse(req.body);
                if (req.has_header("Authorization")) {
                  seen_auth = req.get_header_value("Authorization");
                }
                nlohmann::json message;
                message["role"] = "assistant";
                message["content"] = "LogTemplate[1]: `served {file}`";
                nlohmann::json choice;
                choice["message"] = message;
                nlohmann::json reply;
                reply["choices"] = nlohmann::json::array({choice});
                reply["usage"] = {{"prompt_tokens", 42},
                                  {"completion_tokens", 7}};
                res.set_content(reply.dump(), "application/json");
              });
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread runner([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  BackendConfig cfg;
  cfg.kind = BackendKind::kHttp;
  cfg.endpoint =
      "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
  cfg.model_name = "test-model";
  cfg.api_key = "sk-local-test";
  cfg.max_retries = 0;
  HttpBackend backend(cfg);

  const LogSet logs = make_logs({"served index.html"});
  const RawResponse resp = backend.query(tiny_prompt({0}, logs));

  server.stop();
  runner.join();

  CHECK(hits == 1);
  CHECK(resp.text == "LogTemplate[1]: `served {file}`");
  REQUIRE(resp.usage.has_value());
  CHECK(resp.usage->prompt_tokens == 42);
  CHECK(resp.usage->completion_tokens == 7);
  CHECK(seen_body["model"] == "test-model");
  CHECK(seen_body["temperature"] == 0.0);
  REQUIRE(seen_body["messages"].size() == 1);
  CHECK(seen_body["messages"][0]["role"] == "user");
  CHECK(seen_auth == "Bearer sk-local-test");
}

TEST_CASE("http backend retries 5xx with backoff then succeeds") {
  httplib::Server server;
  std::atomic<int> hits{0};
  std::vector<std::chrono::steady_clock::time_point> stamps;
  server.Post("/v1/chat/completions",
              [&](const httplib::Request&, httplib::Response& res) {
                stamps.push_back(std::chrono::steady_clock::now());
                if (++hits <= 2) {
                  res.status = 503;
                  res.set_content("overloaded", "text/plain");
                  return;
                }
                nlohmann::json choice;
                choice["message"] = {{"content", "LogTemplate[1]: `ok`"}};
                nlohmann::json reply;
                reply["choices"] = nlohmann::json::array({choice});
                res.set_content(reply.dump(), "application/json");
              });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread runner([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  BackendConfig cfg;
  cfg.kind = BackendKind::kHttp;
  cfg.endpoint =
      "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
  cfg.max_retries = 3;
  cfg.backoff_base = std::chrono::milliseconds(30);
  HttpBackend backend(cfg);

  const LogSet logs = make_logs({"ok"});
  const RawResponse resp = backend.query(tiny_prompt({0}, logs));

  server.stop();
  runner.join();

  CHECK(hits == 3);
  CHECK(resp.text == "LogTemplate[1]: `ok`");
  // First retry waits ~30ms, second ~60ms.
  REQUIRE(stamps.size() == 3);
  CHECK(stamps[1] - stamps[0] >= std::chrono::milliseconds(25));
  CHECK(stamps[2] - stamps[1] >= std::chrono::milliseconds(50));
}

TEST_CASE("http backend surfaces exhaustion and hard failures") {
  SUBCASE("unreachable endpoint with no retries") {
    BackendConfig cfg;
    cfg.kind = BackendKind::kHttp;
    cfg.endpoint = "http://127.0.0.1:1/v1/chat/completions";
    cfg.max_retries = 0;
    cfg.timeout = std::chrono::milliseconds(500);
    HttpBackend backend(cfg);
    const LogSet logs = make_logs({"z"});
    CHECK_THROWS_AS(backend.query(tiny_prompt({0}, logs)), BackendError);
  }
  SUBCASE("4xx is not retried") {
    httplib::Server server;
    std::atomic<int> hits{0};
    server.Post("/v1/chat/completions",
                [&](const httplib::Request&, httplib::Response& res) {
                  ++hits;
                  res.status = 401;
                  res.set_content("bad key", "text/plain");
                });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread runner([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    BackendConfig cfg;
    cfg.kind = BackendKind::kHttp;
    cfg.endpoint =
        "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
    cfg.max_retries = 3;
    cfg.backoff_base = std::chrono::milliseconds(1);
    HttpBackend backend(cfg);
    const LogSet logs = make_logs({"z"});
    CHECK_THROWS_AS(backend.query(tiny_prompt({0}, logs)), BackendError);

    server.stop();
    runner.join();
    CHECK(hits == 1);
  }
  SUBCASE("missing scheme is a config error") {
    BackendConfig cfg;
    cfg.kind = BackendKind::kHttp;
    cfg.endpoint = "localhost:8080/api";
    CHECK_THROWS_AS(HttpBackend{cfg}, ConfigError);
  }
  SUBCASE("empty endpoint is a config error") {
    BackendConfig cfg;
    cfg.kind = BackendKind::kHttp;
    CHECK_THROWS_AS(HttpBackend{cfg}, ConfigError);
  }
}
