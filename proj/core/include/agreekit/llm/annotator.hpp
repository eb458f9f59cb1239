#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "agreekit/llm/cassette.hpp"
#include "agreekit/llm/prompt.hpp"
#include "agreekit/llm/provider.hpp"

namespace agreekit::llm {

struct SampleText {
  std::string sample_id;
  std::string text;
};

enum class FailureKind { none, provider, parse };

struct ModelAnswer {
  std::string sample_id;
  std::string raw_text;
  std::optional<std::string> label;
  std::optional<double> confidence;
  FailureKind failure = FailureKind::none;
  std::string failure_reason;
  nlohmann::json provider_meta = nlohmann::json::object();

  bool failed() const noexcept { return failure != FailureKind::none; }
  // provider_meta is diagnostics only and not compared.
  bool operator==(const ModelAnswer& other) const {
    return sample_id == other.sample_id && raw_text == other.raw_text && label == other.label &&
           confidence == other.confidence && failure == other.failure && failure_reason == other.failure_reason;
  }
};

/// Queries one provider for every sample.
///
/// With a cassette in replay mode the provider is never called (it may be
/// null) and a missing exchange raises CassetteMiss. In record mode existing
/// exchanges are reused and new ones appended. An answer that does not parse
/// gets one reprompt; a second miss, or a provider failure after retries,
/// yields a failed answer rather than an exception.
class Annotator {
 public:
  Annotator(PromptTemplate prompt_template, ProviderConfig config, Provider* provider, Cassette* cassette,
            RetryPolicy retry);

  std::vector<ModelAnswer> annotate(std::span<const SampleText> samples);

  std::size_t provider_calls() const noexcept { return provider_calls_; }

 private:
  CompletionResponse exchange(const std::string& prompt);

  PromptTemplate template_;
  ProviderConfig config_;
  Provider* provider_;
  Cassette* cassette_;
  RetryPolicy retry_;
  std::size_t provider_calls_ = 0;
};

// CSV with header sample_id,text.
std::vector<SampleText> load_samples(const std::string& path);

// Parsed answers in the long annotation format (rater_kind = model).
void write_answers_csv(std::span<const ModelAnswer> answers, const std::string& rater_id, std::ostream& out);
// One row per failed answer: sample_id,failure,reason.
void write_failure_manifest(std::span<const ModelAnswer> answers, std::ostream& out);

std::string_view to_string(FailureKind kind);

}  // namespace agreekit::llm
