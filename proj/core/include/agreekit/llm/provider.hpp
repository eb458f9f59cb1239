#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "agreekit/errors.hpp"
#include "agreekit/llm/confidence.hpp"
#include "agreekit/llm/rate_limiter.hpp"

namespace agreekit::llm {

/// Connection settings for one chat-completion provider. The API key itself
/// is never stored: only the name of the environment variable holding it.
struct ProviderConfig {
  std::string provider = "openai";
  std::string model;
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string api_key_env;  // empty: no Authorization header
  double requests_per_minute = 60.0;
  double temperature = 0.0;
  int max_retries = 3;
  int max_tokens = 16;
  bool logprobs = true;
  int retry_base_ms = 500;
  int timeout_seconds = 60;

  static ProviderConfig from_json(const nlohmann::json& j);
  static std::vector<ProviderConfig> load(const std::string& path);
  nlohmann::json to_json() const;
};

struct CompletionResponse {
  std::string text;
  std::optional<std::vector<TokenLogprob>> token_logprobs;
  nlohmann::json meta = nlohmann::json::object();
};

// Worth retrying: rate limiting, 5xx, connection trouble.
class TransientProviderError : public ProviderError {
 public:
  explicit TransientProviderError(const std::string& what,
                                  std::optional<std::chrono::milliseconds> retry_after = std::nullopt)
      : ProviderError(what), retry_after_(retry_after) {}

  std::optional<std::chrono::milliseconds> retry_after() const noexcept { return retry_after_; }

 private:
  std::optional<std::chrono::milliseconds> retry_after_;
};

class Provider {
 public:
  virtual ~Provider() = default;
  virtual CompletionResponse complete(const std::string& prompt) = 0;
};

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds base_delay{500};
  SleepFn sleep = system_sleep_fn();
};

/// Calls the provider, retrying transient failures with exponential backoff
/// (base * 2^attempt, or the server's Retry-After when larger). Rethrows the
/// last error once retries are exhausted; non-transient errors are not
/// retried. `attempts` receives the number of calls made.
CompletionResponse complete_with_retry(Provider& provider, const std::string& prompt, const RetryPolicy& policy,
                                       int* attempts = nullptr);

/// OpenAI-compatible chat-completions client over HTTP(S). Requests are
/// serialised per instance and pass through a RateLimiter built from the
/// config.
std::unique_ptr<Provider> make_http_provider(const ProviderConfig& config, ClockFn clock = system_clock_fn(),
                                             SleepFn sleep = system_sleep_fn());

}  // namespace agreekit::llm
