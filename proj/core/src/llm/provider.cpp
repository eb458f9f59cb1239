#include "agreekit/llm/provider.hpp"

#include <algorithm>
#include <fstream>

namespace agreekit::llm {

ProviderConfig ProviderConfig::from_json(const nlohmann::json& j) {
  ProviderConfig c;
  try {
    c.provider = j.value("provider", c.provider);
    c.model = j.at("model").get<std::string>();
    c.endpoint = j.value("endpoint", c.endpoint);
    c.api_key_env = j.value("api_key_env", c.api_key_env);
    c.requests_per_minute = j.value("requests_per_minute", c.requests_per_minute);
    c.temperature = j.value("temperature", c.temperature);
    c.max_retries = j.value("max_retries", c.max_retries);
    c.max_tokens = j.value("max_tokens", c.max_tokens);
    c.logprobs = j.value("logprobs", c.logprobs);
    c.retry_base_ms = j.value("retry_base_ms", c.retry_base_ms);
    c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("provider config: ") + e.what());
  }
  if (j.contains("api_key")) {
    throw ValidationError("provider config must not contain an API key; use api_key_env");
  }
  if (c.model.empty()) throw ValidationError("provider config: model is required");
  if (!(c.requests_per_minute > 0.0)) throw ValidationError("provider config: requests_per_minute must be > 0");
  if (c.max_retries < 0) throw ValidationError("provider config: max_retries must be >= 0");
  return c;
}

std::vector<ProviderConfig> ProviderConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open provider config '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("provider config: ") + e.what(), 0, 0);
  }
  std::vector<ProviderConfig> out;
  if (j.is_array()) {
    for (const auto& item : j) out.push_back(from_json(item));
  } else if (j.contains("providers")) {
    for (const auto& item : j.at("providers")) out.push_back(from_json(item));
  } else {
    out.push_back(from_json(j));
  }
  return out;
}

nlohmann::json ProviderConfig::to_json() const {
  return {{"provider", provider},
          {"model", model},
          {"endpoint", endpoint},
          {"api_key_env", api_key_env},
          {"requests_per_minute", requests_per_minute},
          {"temperature", temperature},
          {"max_retries", max_retries},
          {"max_tokens", max_tokens},
          {"logprobs", logprobs},
          {"retry_base_ms", retry_base_ms},
          {"timeout_seconds", timeout_seconds}};
}

CompletionResponse complete_with_retry(Provider& provider, const std::string& prompt, const RetryPolicy& policy,
                                       int* attempts) {
  for (int attempt = 0;; ++attempt) {
    if (attempts) *attempts = attempt + 1;
    try {
      return provider.complete(prompt);
    } catch (const TransientProviderError& e) {
      if (attempt >= policy.max_retries) throw;
      auto delay = policy.base_delay * (1LL << std::min(attempt, 20));
      if (e.retry_after() && *e.retry_after() > delay) delay = *e.retry_after();
      policy.sleep(delay);
    }
  }
}

}  // namespace agreekit::llm
