#include "invsynth/llm.hpp"

#include "invsynth/errors.hpp"

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <thread>

namespace invsynth {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw TransportError("invalid URL (no scheme): " + url);
  std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw TransportError("unsupported URL scheme: " + scheme);
  auto path_begin = url.find('/', scheme_end + 3);
  if (path_begin == std::string::npos) return {url, "/"};
  return {url.substr(0, path_begin), url.substr(path_begin)};
}

class HttplibTransport : public Transport {
 public:
  HttpResponse post(const HttpRequest& request) override {
    SplitUrl u = split_url(request.url);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (u.origin.rfind("https://", 0) == 0) {
      throw TransportError("https endpoints need a build with OpenSSL: " + request.url);
    }
#endif
    httplib::Client client(u.origin);
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
    auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(request.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    httplib::Headers headers;
    std::string content_type = "application/json";
    for (const auto& [k, v] : request.headers) {
      if (k == "Content-Type") content_type = v;
      else headers.emplace(k, v);
    }
    auto res = client.Post(u.path, headers, request.body, content_type);
    if (!res) throw TransportError("request to " + request.url + " failed: " + httplib::to_string(res.error()));
    return {res->status, res->body};
  }
};

std::string join_url(std::string base, std::string_view suffix) {
  while (!base.empty() && base.back() == '/') base.pop_back();
  return base + std::string(suffix);
}

}  // namespace

std::shared_ptr<Transport> make_http_transport() { return std::make_shared<HttplibTransport>(); }

std::string LlmConfig::api_key_from_environment() {
  for (const char* name : {kApiKeyEnvVar, kFallbackApiKeyEnvVar}) {
    if (const char* v = std::getenv(name); v && *v) return v;
  }
  return {};
}

std::string chat_request_body(const LlmConfig& config, const std::vector<ChatMessage>& messages) {
  nlohmann::ordered_json body;
  body["model"] = config.model;
  body["temperature"] = 0;
  auto& arr = body["messages"] = nlohmann::ordered_json::array();
  for (const auto& m : messages) arr.push_back({{"role", m.role}, {"content", m.content}});
  return body.dump();
}

std::string chat_response_content(std::string_view body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception&) {
    throw ProposerError("endpoint reply is not JSON");
  }
  try {
    const auto& content = doc.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw ProposerError("endpoint reply content is not a string");
    return content.get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw ProposerError("endpoint reply has no choices[0].message.content");
  }
}

LlmProposer::LlmProposer(LlmConfig config, std::shared_ptr<Transport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
  if (!transport_) throw std::invalid_argument("LlmProposer needs a transport");
  if (config_.retries < 0) throw std::invalid_argument("retries must be >= 0");
}

Proposal LlmProposer::propose(const ProposalContext& ctx) {
  auto messages = render_prompt(ctx);
  HttpRequest req;
  req.url = join_url(config_.base_url, "/chat/completions");
  req.body = chat_request_body(config_, messages);
  req.timeout = config_.request_timeout;
  req.headers.emplace_back("Content-Type", "application/json");
  if (!config_.api_key.empty()) req.headers.emplace_back("Authorization", "Bearer " + config_.api_key);

  auto start = std::chrono::steady_clock::now();
  std::string last_error;
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(200 * attempt));
    HttpResponse res;
    try {
      res = transport_->post(req);
    } catch (const TransportError& e) {
      last_error = e.what();
      continue;
    }
    if (res.status == 429 || res.status >= 500) {
      last_error = "endpoint returned HTTP " + std::to_string(res.status);
      continue;
    }
    if (res.status < 200 || res.status >= 300) {
      throw ProposerError("endpoint returned HTTP " + std::to_string(res.status) + ": " + res.body.substr(0, 500));
    }
    Proposal p;
    p.raw_response = chat_response_content(res.body);
    p.proposer_id = id();
    p.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    auto ex = extract_invariant(p.raw_response);
    p.balanced = ex.balanced;
    p.candidate = Invariant::from_text(ex.text, ctx.tmpl ? ctx.tmpl->sorts() : SortMap{});
    return p;
  }
  throw ProposerError("endpoint unreachable after " + std::to_string(config_.retries + 1) + " attempts: " + last_error);
}

}  // namespace invsynth
