#pragma once

// Local chat-completions endpoint for tests. Replies come from a callback;
// every request body is recorded.

#include <httplib.h>
#include <json.hpp>

#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace testing_support {

struct MockReply {
  int status = 200;
  std::string body;
};

inline MockReply chat_reply(const std::string& content) {
  nlohmann::json j = {{"id", "mock"},
                      {"object", "chat.completion"},
                      {"choices", {{{"index", 0}, {"message", {{"role", "assistant"}, {"content", content}}}}}}};
  return {200, j.dump()};
}

struct RecordedRequest {
  std::string path;
  std::string body;
  std::string authorization;
  std::string remote_addr;
};

class MockChatServer {
 public:
  using Handler = std::function<MockReply(const nlohmann::json& request, int index)>;

  explicit MockChatServer(Handler handler) : handler_(std::move(handler)) {
    server_.Post(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
      int index;
      {
        std::lock_guard lock(mu_);
        index = static_cast<int>(requests_.size());
        requests_.push_back({req.path, req.body, req.get_header_value("Authorization"), req.remote_addr});
      }
      MockReply reply;
      try {
        reply = handler_(nlohmann::json::parse(req.body), index);
      } catch (const std::exception& e) {
        reply = {400, e.what()};
      }
      res.status = reply.status;
      res.set_content(reply.body, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~MockChatServer() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  MockChatServer(const MockChatServer&) = delete;
  MockChatServer& operator=(const MockChatServer&) = delete;

  int port() const { return port_; }
  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

  std::vector<RecordedRequest> requests() const {
    std::lock_guard lock(mu_);
    return requests_;
  }

 private:
  Handler handler_;
  httplib::Server server_;
  int port_ = -1;
  std::thread thread_;
  mutable std::mutex mu_;
  std::vector<RecordedRequest> requests_;
};

}  // namespace testing_support
