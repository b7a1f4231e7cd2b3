#include "bazi/llm.hpp"

#include <atomic>
#include <cctype>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <httplib.h>

#include "bazi/digest.hpp"

namespace bazi::llm {
namespace {

std::string length_prefixed(std::string_view s) {
  return std::to_string(s.size()) + ":" + std::string(s);
}

bool is_ascii_alnum(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

// --- transports ------------------------------------------------------------

class MockFixedTransport : public Transport {
 public:
  explicit MockFixedTransport(std::string letter) : letter_(std::move(letter)) {}
  ChatResponse send(const ChatRequest&) override {
    ChatResponse r;
    r.text = letter_;
    r.provider_meta["provider"] = "mock-fixed";
    return r;
  }

 private:
  std::string letter_;
};

class MockGoldTransport : public Transport {
 public:
  ChatResponse send(const ChatRequest& request) override {
    if (request.gold_letter.empty()) {
      throw ConfigError("mock-gold request carries no gold letter metadata");
    }
    ChatResponse r;
    r.text = request.gold_letter;
    r.provider_meta["provider"] = "mock-gold";
    return r;
  }
};

// Letter chosen by a seeded hash of the request, so concurrent and repeated
// runs see the same deterministic sequence.
class MockUniformTransport : public Transport {
 public:
  explicit MockUniformTransport(uint64_t seed) : seed_(seed) {}
  ChatResponse send(const ChatRequest& request) override {
    const int n = request.n_choices > 0 ? request.n_choices : 4;
    const uint64_t h =
        fnv1a64(std::to_string(seed_) + ":" + request.request_hash());
    ChatResponse r;
    r.text = std::string(1, static_cast<char>('A' + static_cast<int>(h % static_cast<uint64_t>(n))));
    r.provider_meta["provider"] = "mock-uniform";
    return r;
  }

 private:
  uint64_t seed_;
};

class HttpTransport : public Transport {
 public:
  explicit HttpTransport(const ProviderConfig& config) : config_(config) {
    const std::string& url = config.endpoint_url;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
      throw ConfigError("endpoint url missing scheme: " + url);
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
      base_ = url;
      path_ = "/v1/chat/completions";
    } else {
      base_ = url.substr(0, path_start);
      path_ = url.substr(path_start);
    }
  }

  ChatResponse send(const ChatRequest& request) override {
    nlohmann::json messages = nlohmann::json::array();
    if (!request.system_text.empty()) {
      messages.push_back({{"role", "system"}, {"content", request.system_text}});
    }
    messages.push_back({{"role", "user"}, {"content", request.user_text}});
    const nlohmann::json body = {{"model", request.model_id},
                                 {"messages", messages},
                                 {"temperature", request.temperature},
                                 {"max_tokens", request.max_output_tokens}};

    httplib::Client client(base_);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(120, 0);
    httplib::Headers headers;
    if (!config_.credential_env_var.empty()) {
      const char* credential = std::getenv(config_.credential_env_var.c_str());
      if (credential == nullptr) {
        throw ConfigError("credential environment variable not set: " +
                          config_.credential_env_var);
      }
      headers.emplace("Authorization", std::string("Bearer ") + credential);
    }

    const auto started = std::chrono::steady_clock::now();
    httplib::Result result = client.Post(path_, headers, body.dump(), "application/json");
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();

    if (!result) {
      throw TransportError("connection failure: " + httplib::to_string(result.error()));
    }
    if (result->status == 401 || result->status == 403) {
      throw ConfigError("authentication rejected with status " +
                        std::to_string(result->status));
    }
    if (result->status != 200) {
      throw TransportError("http status " + std::to_string(result->status));
    }

    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(result->body);
    } catch (const nlohmann::json::exception& e) {
      throw TransportError(std::string("malformed response body: ") + e.what());
    }
    if (!parsed.contains("choices") || parsed["choices"].empty()) {
      throw TransportError("response carries no choices");
    }

    ChatResponse r;
    try {
      r.text = parsed["choices"][0].at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw TransportError(std::string("unexpected response schema: ") + e.what());
    }
    r.provider_meta["provider"] = "openai-compatible";
    if (parsed.contains("model") && parsed["model"].is_string()) {
      r.provider_meta["model"] = parsed["model"].get<std::string>();
    }
    r.latency_ms = elapsed;
    return r;
  }

 private:
  ProviderConfig config_;
  std::string base_;
  std::string path_;
};

}  // namespace

std::string ChatRequest::request_hash() const {
  std::string canonical;
  canonical += length_prefixed(model_id);
  canonical += length_prefixed(system_text);
  canonical += length_prefixed(user_text);
  char numeric[64];
  std::snprintf(numeric, sizeof(numeric), "%.17g|%d|%d", temperature, max_output_tokens,
                n_choices);
  canonical += length_prefixed(numeric);
  canonical += length_prefixed(gold_letter);
  return sha256_hex(canonical);
}

ProviderConfig ProviderConfig::mock_gold() {
  ProviderConfig c;
  c.kind = Kind::MockGold;
  return c;
}

ProviderConfig ProviderConfig::mock_uniform(uint64_t seed) {
  ProviderConfig c;
  c.kind = Kind::MockUniform;
  c.mock_seed = seed;
  return c;
}

ProviderConfig ProviderConfig::mock_fixed(std::string letter) {
  ProviderConfig c;
  c.kind = Kind::MockFixed;
  c.mock_letter = std::move(letter);
  return c;
}

ProviderConfig ProviderConfig::http(std::string endpoint_url, std::string credential_env_var) {
  ProviderConfig c;
  c.kind = Kind::OpenAICompatibleHTTP;
  c.endpoint_url = std::move(endpoint_url);
  c.credential_env_var = std::move(credential_env_var);
  return c;
}

std::unique_ptr<Transport> make_transport(const ProviderConfig& config) {
  switch (config.kind) {
    case ProviderConfig::Kind::MockGold:
      return std::make_unique<MockGoldTransport>();
    case ProviderConfig::Kind::MockUniform:
      return std::make_unique<MockUniformTransport>(config.mock_seed);
    case ProviderConfig::Kind::MockFixed:
      return std::make_unique<MockFixedTransport>(config.mock_letter);
    case ProviderConfig::Kind::OpenAICompatibleHTTP:
      return std::make_unique<HttpTransport>(config);
  }
  throw ConfigError("unknown provider kind");
}

// Counting gate bounding in-flight requests to max_parallel.
struct ChatClient::Gate {
  explicit Gate(int slots) : available(slots) {}

  void acquire() {
    std::unique_lock lock(mutex);
    cv.wait(lock, [&] { return available > 0; });
    --available;
  }

  void release() {
    {
      std::lock_guard lock(mutex);
      ++available;
    }
    cv.notify_one();
  }

  std::mutex mutex;
  std::condition_variable cv;
  int available;
};

ChatClient::ChatClient(ProviderConfig config)
    : ChatClient(std::move(config), nullptr) {}

ChatClient::ChatClient(ProviderConfig config, std::unique_ptr<Transport> transport)
    : config_(std::move(config)),
      transport_(transport ? std::move(transport) : make_transport(config_)),
      gate_(std::make_unique<Gate>(config_.max_parallel > 0 ? config_.max_parallel : 1)) {}

ChatClient::~ChatClient() = default;

ChatResponse ChatClient::complete(const ChatRequest& request) {
  gate_->acquire();
  struct Release {
    Gate* gate;
    ~Release() { gate->release(); }
  } release{gate_.get()};

  std::vector<std::string> attempts;
  const int total_attempts = 1 + std::max(0, config_.retry.count);
  for (int attempt = 0; attempt < total_attempts; ++attempt) {
    if (attempt > 0) {
      const auto& schedule = config_.retry.backoff_ms;
      const long delay =
          schedule.empty()
              ? 0
              : schedule[std::min<std::size_t>(attempt - 1, schedule.size() - 1)];
      if (delay > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay));
    }
    try {
      return transport_->send(request);
    } catch (const TransportError& e) {
      attempts.push_back("attempt " + std::to_string(attempt + 1) + ": " + e.what());
    }
  }
  throw TransportError("retries exhausted after " + std::to_string(total_attempts) +
                           " attempts",
                       std::move(attempts));
}

ChatResponse complete(const ChatRequest& request, const ProviderConfig& provider) {
  ChatClient client(provider);
  return client.complete(request);
}

namespace {

// Write serialization is sharded by request hash so distinct keys do not
// contend while one key's writers stay ordered.
std::mutex& cache_shard_mutex(const std::string& key) {
  static std::mutex shards[64];
  return shards[fnv1a64(key) % 64];
}

std::atomic<long> g_cache_hits{0};
std::atomic<long> g_cache_misses{0};

}  // namespace

ResponseCache::ResponseCache(std::string directory) : directory_(std::move(directory)) {
  std::error_code ec;
  std::filesystem::create_directories(directory_, ec);
  if (ec) throw ConfigError("cannot create cache directory " + directory_ + ": " + ec.message());
}

std::optional<ChatResponse> ResponseCache::lookup(const ChatRequest& request) const {
  const std::string key = request.request_hash();
  const std::filesystem::path file = std::filesystem::path(directory_) / (key + ".json");
  std::ifstream in(file);
  if (!in) {
    ++g_cache_misses;
    return std::nullopt;
  }

  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError("cache entry " + file.string() + " unreadable: " + e.what());
  }
  try {
    if (j.at("request_hash").get<std::string>() != key) {
      throw IntegrityError("cache entry " + file.string() + " keyed to a different request");
    }
    const std::string text = j.at("response").at("text").get<std::string>();
    if (j.at("checksum").get<std::string>() != sha256_hex(text)) {
      throw IntegrityError("cache entry " + file.string() + " failed checksum verification");
    }
    ChatResponse r;
    r.text = text;
    if (j["response"].contains("provider_meta")) {
      r.provider_meta =
          j["response"]["provider_meta"].get<std::map<std::string, std::string>>();
    }
    r.from_cache = true;
    r.latency_ms = 0;
    ++g_cache_hits;
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError("cache entry " + file.string() + " malformed: " + e.what());
  }
}

void ResponseCache::store(const ChatRequest& request, const ChatResponse& response) {
  const std::string key = request.request_hash();
  const nlohmann::json j = {
      {"request_hash", key},
      {"request",
       {{"model_id", request.model_id},
        {"system_text", request.system_text},
        {"user_text", request.user_text},
        {"temperature", request.temperature},
        {"max_output_tokens", request.max_output_tokens},
        {"n_choices", request.n_choices}}},
      {"response", {{"text", response.text}, {"provider_meta", response.provider_meta}}},
      {"checksum", sha256_hex(response.text)}};

  std::lock_guard lock(cache_shard_mutex(key));
  const std::filesystem::path file = std::filesystem::path(directory_) / (key + ".json");
  const std::filesystem::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write cache entry " + tmp.string());
    out << j.dump(2);
  }
  std::filesystem::rename(tmp, file);
}

long ResponseCache::hits() const { return g_cache_hits.load(); }
long ResponseCache::misses() const { return g_cache_misses.load(); }

ChatResponse cached_complete(const ChatRequest& request, ChatClient& client,
                             ResponseCache& cache) {
  if (auto hit = cache.lookup(request)) return *hit;
  ChatResponse response = client.complete(request);
  cache.store(request, response);
  return response;
}

std::optional<int> extract_choice(const std::string& text, int n_choices) {
  if (n_choices < 2 || n_choices > 8) {
    throw ValidationError("n_choices must be 2-8, got " + std::to_string(n_choices));
  }
  const char max_letter = static_cast<char>('A' + n_choices - 1);

  auto is_valid_letter = [&](char c) { return c >= 'A' && c <= max_letter; };
  auto standalone_at = [&](std::size_t i) {
    if (!is_valid_letter(text[i])) return false;
    if (i > 0 && is_ascii_alnum(text[i - 1])) return false;
    if (i + 1 < text.size() && is_ascii_alnum(text[i + 1])) return false;
    return true;
  };

  // Rule 1a: a valid letter alone on its own line.
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string::npos) line_end = text.size();
    std::size_t begin = line_start, end = line_end;
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    if (end - begin == 1 && is_valid_letter(text[begin])) {
      return text[begin] - 'A';
    }
    if (line_end == text.size()) break;
    line_start = line_end + 1;
  }

  // Rule 1b: a letter announced by "Answer:" (case-insensitive).
  std::string lower;
  lower.reserve(text.size());
  for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  std::size_t pos = 0;
  while ((pos = lower.find("answer", pos)) != std::string::npos) {
    std::size_t i = pos + 6;
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    if (i < text.size() && text[i] == ':') ++i;
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    if (i < text.size() && standalone_at(i)) return text[i] - 'A';
    pos += 6;
  }

  // Rule 2: first standalone letter followed by '.' or ')'.
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!is_valid_letter(text[i])) continue;
    if (i > 0 && is_ascii_alnum(text[i - 1])) continue;
    if (i + 1 < text.size() && (text[i + 1] == '.' || text[i + 1] == ')')) {
      return text[i] - 'A';
    }
  }

  // Rule 3: last standalone letter anywhere.
  for (std::size_t i = text.size(); i-- > 0;) {
    if (standalone_at(i)) return text[i] - 'A';
  }
  return std::nullopt;
}

}  // namespace bazi::llm
