#pragma once

#include "invsynth/errors.hpp"
#include "invsynth/proposer.hpp"

#include <chrono>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace invsynth {

struct HttpRequest {
  std::string url;  // absolute, e.g. http://127.0.0.1:8080/v1/chat/completions
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
  std::chrono::milliseconds timeout{120000};
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

class TransportError : public ProposerError {
 public:
  using ProposerError::ProposerError;
};

/// All endpoint traffic goes through this interface.
class Transport {
 public:
  virtual ~Transport() = default;
  /// Throws TransportError when no HTTP response was received.
  virtual HttpResponse post(const HttpRequest& request) = 0;
};

/// cpp-httplib client. https:// needs a build with OpenSSL.
std::shared_ptr<Transport> make_http_transport();

inline constexpr const char* kApiKeyEnvVar = "INVSYNTH_API_KEY";
inline constexpr const char* kFallbackApiKeyEnvVar = "OPENAI_API_KEY";
inline constexpr const char* kDefaultEndpoint = "https://api.openai.com/v1";

struct LlmConfig {
  std::string base_url = kDefaultEndpoint;
  std::string model = "o3-mini";
  std::string api_key;  // empty: no Authorization header
  std::chrono::milliseconds request_timeout{120000};
  int retries = 2;

  /// Reads the key from $INVSYNTH_API_KEY, falling back to $OPENAI_API_KEY.
  static std::string api_key_from_environment();
};

/// Request body for one chat completion: {model, temperature: 0, messages}.
std::string chat_request_body(const LlmConfig& config, const std::vector<ChatMessage>& messages);

/// choices[0].message.content of a chat completion reply. Throws
/// ProposerError on anything else.
std::string chat_response_content(std::string_view body);

class LlmProposer : public Proposer {
 public:
  LlmProposer(LlmConfig config, std::shared_ptr<Transport> transport);

  std::string id() const override { return "llm"; }
  Proposal propose(const ProposalContext& ctx) override;

  const LlmConfig& config() const { return config_; }

 private:
  LlmConfig config_;
  std::shared_ptr<Transport> transport_;
};

}  // namespace invsynth
