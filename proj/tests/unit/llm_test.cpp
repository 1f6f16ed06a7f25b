#include "invsynth/errors.hpp"
#include "invsynth/llm.hpp"
#include "invsynth/orchestrator.hpp"
#include "mock_chat_server.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <deque>

namespace {

using namespace invsynth;

class FakeTransport : public Transport {
 public:
  std::deque<std::variant<HttpResponse, std::string>> script;  // a string is a transport error
  std::vector<HttpRequest> seen;

  HttpResponse post(const HttpRequest& r) override {
    seen.push_back(r);
    if (script.empty()) throw TransportError("script exhausted");
    auto next = script.front();
    script.pop_front();
    if (auto* err = std::get_if<std::string>(&next)) throw TransportError(*err);
    return std::get<HttpResponse>(next);
  }
};

HttpResponse ok(const std::string& content) {
  auto r = testing_support::chat_reply(content);
  return {r.status, r.body};
}

ProposalContext initial_context(const Problem& p) {
  ProposalContext ctx;
  ctx.problem_name = p.name;
  ctx.source_text = p.source_text;
  ctx.cfg_json = p.cfg_json;
  ctx.template_texts = {p.tmpl->init_script, p.tmpl->inductive_script, p.tmpl->post_script};
  ctx.tmpl = p.tmpl;
  ctx.program = p.program;
  return ctx;
}

LlmConfig config(std::string base = "http://llm.invalid/v1") {
  LlmConfig c;
  c.base_url = std::move(base);
  c.model = "test-model";
  c.api_key = "sk-test";
  return c;
}

Problem bench122() { return Problem::from_source(testing_support::kBench122, "bench122"); }

TEST(ChatBody, ShapeAndTemperature) {
  auto body = nlohmann::json::parse(chat_request_body(config(), {{"system", "s"}, {"user", "u"}}));
  EXPECT_EQ(body["model"], "test-model");
  EXPECT_EQ(body["temperature"], 0);
  ASSERT_EQ(body["messages"].size(), 2u);
  EXPECT_EQ(body["messages"][1]["role"], "user");
  EXPECT_EQ(body["messages"][1]["content"], "u");
}

TEST(ChatReply, Content) {
  EXPECT_EQ(chat_response_content(testing_support::chat_reply("(>= i 1)").body), "(>= i 1)");
  EXPECT_THROW(chat_response_content("not json"), ProposerError);
  EXPECT_THROW(chat_response_content(R"({"choices": []})"), ProposerError);
  EXPECT_THROW(chat_response_content(R"({"choices": [{"message": {"content": 5}}]})"), ProposerError);
}

TEST(LlmProposer, SendsOneRequestAndExtracts) {
  auto t = std::make_shared<FakeTransport>();
  t->script.push_back(ok("Here:\n```smt2\n(>= i 1)\n```"));
  LlmProposer p(config(), t);
  auto prob = bench122();
  auto prop = p.propose(initial_context(prob));
  EXPECT_EQ(prop.candidate.smt_text, "(>= i 1)");
  EXPECT_TRUE(prop.candidate.formula);
  EXPECT_EQ(prop.proposer_id, "llm");
  ASSERT_EQ(t->seen.size(), 1u);
  EXPECT_EQ(t->seen[0].url, "http://llm.invalid/v1/chat/completions");
  auto body = nlohmann::json::parse(t->seen[0].body);
  EXPECT_EQ(body["temperature"], 0);
  bool auth = false;
  for (const auto& [k, v] : t->seen[0].headers) auth |= k == "Authorization" && v == "Bearer sk-test";
  EXPECT_TRUE(auth);
}

TEST(LlmProposer, RetriesTransientFailures) {
  auto t = std::make_shared<FakeTransport>();
  t->script.push_back(std::string("connection refused"));
  t->script.push_back(HttpResponse{503, "busy"});
  t->script.push_back(ok("(>= i 1)"));
  LlmProposer p(config(), t);
  EXPECT_EQ(p.propose(initial_context(bench122())).candidate.smt_text, "(>= i 1)");
  EXPECT_EQ(t->seen.size(), 3u);
}

TEST(LlmProposer, GivesUpAfterThreeAttempts) {
  auto t = std::make_shared<FakeTransport>();
  for (int i = 0; i < 5; ++i) t->script.push_back(HttpResponse{429, "slow down"});
  LlmProposer p(config(), t);
  EXPECT_THROW(p.propose(initial_context(bench122())), ProposerError);
  EXPECT_EQ(t->seen.size(), 3u);
}

TEST(LlmProposer, ClientErrorIsImmediate) {
  auto t = std::make_shared<FakeTransport>();
  t->script.push_back(HttpResponse{401, "bad key"});
  t->script.push_back(ok("(>= i 1)"));
  LlmProposer p(config(), t);
  EXPECT_THROW(p.propose(initial_context(bench122())), ProposerError);
  EXPECT_EQ(t->seen.size(), 1u);
}

TEST(LlmProposer, MalformedReplyIsProposerError) {
  auto t = std::make_shared<FakeTransport>();
  t->script.push_back(HttpResponse{200, "{\"nothing\": true}"});
  LlmProposer p(config(), t);
  EXPECT_THROW(p.propose(initial_context(bench122())), ProposerError);
}

TEST(LlmProposer, ReplyWithoutTermIsExtractionError) {
  auto t = std::make_shared<FakeTransport>();
  t->script.push_back(ok("I cannot help with that."));
  LlmProposer p(config(), t);
  EXPECT_THROW(p.propose(initial_context(bench122())), ExtractionError);
}

TEST(LlmProposer, NoKeyNoAuthorizationHeader) {
  auto t = std::make_shared<FakeTransport>();
  t->script.push_back(ok("true"));
  auto c = config();
  c.api_key.clear();
  LlmProposer(c, t).propose(initial_context(bench122()));
  for (const auto& [k, v] : t->seen[0].headers) EXPECT_NE(k, "Authorization");
}

TEST(HttpTransport, TalksToLocalServer) {
  testing_support::MockChatServer server([](const nlohmann::json& req, int) {
    if (req.at("temperature") != 0) return testing_support::MockReply{400, "temperature"};
    return testing_support::chat_reply("```smt2\n(<= i (+ size 1))\n```");
  });
  LlmProposer p(config(server.base_url()), make_http_transport());
  auto prop = p.propose(initial_context(bench122()));
  EXPECT_EQ(prop.candidate.smt_text, "(<= i (+ size 1))");
  auto reqs = server.requests();
  ASSERT_EQ(reqs.size(), 1u);
  EXPECT_EQ(reqs[0].path, "/v1/chat/completions");
  EXPECT_EQ(reqs[0].authorization, "Bearer sk-test");
  EXPECT_EQ(reqs[0].remote_addr, "127.0.0.1");
}

TEST(HttpTransport, ServerErrorsAreRetried) {
  testing_support::MockChatServer server([](const nlohmann::json&, int index) {
    if (index < 2) return testing_support::MockReply{500, "oops"};
    return testing_support::chat_reply("true");
  });
  LlmProposer p(config(server.base_url()), make_http_transport());
  EXPECT_EQ(p.propose(initial_context(bench122())).candidate.smt_text, "true");
  EXPECT_EQ(server.requests().size(), 3u);
}

TEST(HttpTransport, UnreachableEndpoint) {
  int port;
  {
    testing_support::MockChatServer server([](const nlohmann::json&, int) { return testing_support::chat_reply("true"); });
    port = server.port();
  }
  auto c = config("http://127.0.0.1:" + std::to_string(port) + "/v1");
  c.request_timeout = std::chrono::milliseconds(500);
  EXPECT_THROW(LlmProposer(c, make_http_transport()).propose(initial_context(bench122())), ProposerError);
}

TEST(HttpTransport, BadUrls) {
  auto t = make_http_transport();
  EXPECT_THROW(t->post({"localhost:80/x", {}, "", std::chrono::milliseconds(100)}), TransportError);
  EXPECT_THROW(t->post({"ftp://localhost/x", {}, "", std::chrono::milliseconds(100)}), TransportError);
}

TEST(LlmConfig, KeyFromEnvironment) {
  ::setenv(kApiKeyEnvVar, "primary", 1);
  ::setenv(kFallbackApiKeyEnvVar, "fallback", 1);
  EXPECT_EQ(LlmConfig::api_key_from_environment(), "primary");
  ::unsetenv(kApiKeyEnvVar);
  EXPECT_EQ(LlmConfig::api_key_from_environment(), "fallback");
  ::unsetenv(kFallbackApiKeyEnvVar);
  EXPECT_EQ(LlmConfig::api_key_from_environment(), "");
}

}  // namespace
