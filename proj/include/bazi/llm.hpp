#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bazi/errors.hpp"

#include <json.hpp>

namespace bazi::llm {

struct ChatRequest {
  std::string model_id;
  std::string system_text;
  std::string user_text;
  double temperature = 0.0;
  int max_output_tokens = 1024;
  // Out-of-band metadata for the oracle mocks; never sent over the wire.
  int n_choices = 0;
  std::string gold_letter;

  // Stable digest over every field above.
  std::string request_hash() const;
};

struct ChatResponse {
  std::string text;
  std::map<std::string, std::string> provider_meta;
  bool from_cache = false;
  long latency_ms = 0;
};

struct RetryPolicy {
  int count = 3;                                  // attempts beyond the first
  std::vector<long> backoff_ms = {250, 1000, 4000};
};

struct ProviderConfig {
  enum class Kind { OpenAICompatibleHTTP, MockGold, MockUniform, MockFixed };
  Kind kind = Kind::MockFixed;
  std::string endpoint_url;        // scheme://host[:port][/path]
  std::string credential_env_var;  // credentials only ever come from here
  int max_parallel = 4;
  RetryPolicy retry;
  uint64_t mock_seed = 0;       // MockUniform
  std::string mock_letter = "A";  // MockFixed

  static ProviderConfig mock_gold();
  static ProviderConfig mock_uniform(uint64_t seed);
  static ProviderConfig mock_fixed(std::string letter);
  static ProviderConfig http(std::string endpoint_url, std::string credential_env_var);
};

// The raw send, without retries or caching; mocks and tests implement this.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual ChatResponse send(const ChatRequest& request) = 0;
};

std::unique_ptr<Transport> make_transport(const ProviderConfig& config);

// Bounded-parallelism client with retry/backoff around a transport.
class ChatClient {
 public:
  explicit ChatClient(ProviderConfig config);
  ChatClient(ProviderConfig config, std::unique_ptr<Transport> transport);
  ~ChatClient();

  ChatClient(const ChatClient&) = delete;
  ChatClient& operator=(const ChatClient&) = delete;

  const ProviderConfig& config() const { return config_; }
  ChatResponse complete(const ChatRequest& request);

 private:
  ProviderConfig config_;
  std::unique_ptr<Transport> transport_;
  struct Gate;
  std::unique_ptr<Gate> gate_;
};

ChatResponse complete(const ChatRequest& request, const ProviderConfig& provider);

// File-backed response cache, one file per request hash, checksum-verified.
class ResponseCache {
 public:
  explicit ResponseCache(std::string directory);

  std::optional<ChatResponse> lookup(const ChatRequest& request) const;
  void store(const ChatRequest& request, const ChatResponse& response);

  long hits() const;
  long misses() const;

 private:
  std::string directory_;
};

ChatResponse cached_complete(const ChatRequest& request, ChatClient& client,
                             ResponseCache& cache);

// Parsing ladder for multiple-choice answers; empty optional means the reply
// named no valid letter (a first-class outcome, scored as incorrect).
std::optional<int> extract_choice(const std::string& text, int n_choices);

}  // namespace bazi::llm
