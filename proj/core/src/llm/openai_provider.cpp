#include <cstdlib>
#include <mutex>

#include <httplib.h>

#include "agreekit/llm/provider.hpp"

namespace agreekit::llm {

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ValidationError("endpoint '" + url + "' has no scheme");
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw ValidationError("endpoint scheme must be http or https");
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::optional<std::chrono::milliseconds> retry_after(const httplib::Result& res) {
  if (!res || !res->has_header("Retry-After")) return std::nullopt;
  try {
    return std::chrono::milliseconds(static_cast<long long>(std::stod(res->get_header_value("Retry-After")) * 1000));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

class HttpChatProvider final : public Provider {
 public:
  HttpChatProvider(ProviderConfig config, ClockFn clock, SleepFn sleep)
      : config_(std::move(config)),
        endpoint_(split_endpoint(config_.endpoint)),
        limiter_(config_.requests_per_minute, std::move(clock), std::move(sleep)) {}

  CompletionResponse complete(const std::string& prompt) override {
    std::lock_guard lock(mutex_);
    limiter_.acquire();

    httplib::Headers headers;
    if (!config_.api_key_env.empty()) {
      const char* key = std::getenv(config_.api_key_env.c_str());
      if (!key || !*key) throw ProviderError("environment variable " + config_.api_key_env + " is not set");
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    nlohmann::json body{{"model", config_.model},
                        {"messages", {{{"role", "user"}, {"content", prompt}}}},
                        {"temperature", config_.temperature},
                        {"max_tokens", config_.max_tokens}};
    if (config_.logprobs) body["logprobs"] = true;

    httplib::Client client(endpoint_.origin);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    client.set_read_timeout(config_.timeout_seconds, 0);
    auto res = client.Post(endpoint_.path, headers, body.dump(), "application/json");
    if (!res) throw TransientProviderError("request failed: " + httplib::to_string(res.error()));
    if (res->status == 429 || res->status >= 500) {
      throw TransientProviderError("provider returned HTTP " + std::to_string(res->status), retry_after(res));
    }
    if (res->status != 200) {
      throw ProviderError("provider returned HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
    }
    return parse(res->body);
  }

 private:
  CompletionResponse parse(const std::string& text) const {
    CompletionResponse out;
    try {
      const auto j = nlohmann::json::parse(text);
      const auto& choice = j.at("choices").at(0);
      out.text = choice.at("message").at("content").get<std::string>();
      if (config_.logprobs && choice.contains("logprobs") && !choice.at("logprobs").is_null()) {
        const auto& content = choice.at("logprobs").at("content");
        std::vector<TokenLogprob> tokens;
        for (const auto& t : content) {
          tokens.push_back(TokenLogprob{t.at("token").get<std::string>(), t.at("logprob").get<double>()});
        }
        out.token_logprobs = std::move(tokens);
      }
      out.meta["id"] = j.value("id", std::string());
      out.meta["model"] = j.value("model", config_.model);
      out.meta["finish_reason"] = choice.value("finish_reason", std::string());
      if (j.contains("usage")) out.meta["usage"] = j.at("usage");
    } catch (const nlohmann::json::exception& e) {
      throw ProviderError(std::string("unexpected provider response: ") + e.what());
    }
    return out;
  }

  ProviderConfig config_;
  Endpoint endpoint_;
  RateLimiter limiter_;
  std::mutex mutex_;
};

}  // namespace

std::unique_ptr<Provider> make_http_provider(const ProviderConfig& config, ClockFn clock, SleepFn sleep) {
  return std::make_unique<HttpChatProvider>(config, std::move(clock), std::move(sleep));
}

}  // namespace agreekit::llm
