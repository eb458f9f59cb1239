#include "agreekit/llm/annotator.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "agreekit/csv.hpp"
#include "agreekit/errors.hpp"
#include "agreekit/llm/parse.hpp"
#include "agreekit/scale.hpp"

namespace agreekit::llm {

std::string_view to_string(FailureKind kind) {
  switch (kind) {
    case FailureKind::none: return "none";
    case FailureKind::provider: return "provider";
    case FailureKind::parse: return "parse";
  }
  return "none";
}

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

}  // namespace

Annotator::Annotator(PromptTemplate prompt_template, ProviderConfig config, Provider* provider, Cassette* cassette,
                     RetryPolicy retry)
    : template_(std::move(prompt_template)),
      config_(std::move(config)),
      provider_(provider),
      cassette_(cassette),
      retry_(std::move(retry)) {
  if (!provider_ && (!cassette_ || cassette_->mode() != CassetteMode::replay)) {
    throw ValidationError("annotator needs a provider unless replaying a cassette");
  }
}

CompletionResponse Annotator::exchange(const std::string& prompt) {
  const auto key = cassette_key(config_.provider, config_.model, prompt);
  if (cassette_) {
    if (auto hit = cassette_->find(key)) {
      CompletionResponse replayed;
      replayed.text = hit->response;
      replayed.token_logprobs = hit->token_logprobs;
      replayed.meta = {{"cassette", "hit"}, {"key", key}};
      return replayed;
    }
    if (cassette_->mode() == CassetteMode::replay) {
      throw CassetteMiss("cassette '" + cassette_->path() + "' has no exchange for prompt hash " + key +
                         " (provider " + config_.provider + ", model " + config_.model + ")");
    }
  }

  int attempts = 0;
  auto response = complete_with_retry(*provider_, prompt, retry_, &attempts);
  provider_calls_ += static_cast<std::size_t>(attempts);
  response.meta["attempts"] = attempts;
  if (cassette_) {
    cassette_->append(CassetteRecord{key, config_.provider, config_.model, prompt, response.text,
                                     response.token_logprobs, utc_timestamp()});
  }
  return response;
}

std::vector<ModelAnswer> Annotator::annotate(std::span<const SampleText> samples) {
  std::vector<ModelAnswer> answers;
  answers.reserve(samples.size());
  for (const auto& sample : samples) {
    ModelAnswer answer;
    answer.sample_id = sample.sample_id;
    const std::string prompt = build_prompt(template_, sample.text);
    try {
      auto response = exchange(prompt);
      auto parsed = parse_label(response.text, template_.options);
      if (!parsed) {
        response = exchange(prompt + reprompt_suffix(template_));
        parsed = parse_label(response.text, template_.options);
        answer.provider_meta["reprompted"] = true;
      }
      answer.raw_text = response.text;
      answer.provider_meta.update(response.meta);
      if (parsed) {
        answer.label = parsed->label;
        answer.confidence = extract_confidence(response.token_logprobs, response.text, parsed->begin, parsed->end);
      } else {
        answer.failure = FailureKind::parse;
        answer.failure_reason = "no single option found in the response";
      }
    } catch (const CassetteMiss&) {
      throw;
    } catch (const ProviderError& e) {
      answer.failure = FailureKind::provider;
      answer.failure_reason = e.what();
    }
    answers.push_back(std::move(answer));
  }
  return answers;
}

std::vector<SampleText> load_samples(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open samples file '" + path + "'");
  csv::Reader reader(in);
  csv::Record record;
  if (!reader.next(record) || record.fields.size() != 2 || record.fields[0].text != "sample_id" ||
      record.fields[1].text != "text") {
    throw ParseError("samples file header must be sample_id,text", 1, 1);
  }
  std::vector<SampleText> out;
  while (reader.next(record)) {
    if (record.fields.size() != 2) throw ParseError("expected 2 fields", record.line, 1);
    if (record.fields[0].text.empty()) throw ParseError("empty sample_id", record.line, record.fields[0].column);
    out.push_back(SampleText{record.fields[0].text, record.fields[1].text});
  }
  return out;
}

void write_answers_csv(std::span<const ModelAnswer> answers, const std::string& rater_id, std::ostream& out) {
  csv::write_row(out, {"sample_id", "rater_id", "rater_kind", "label", "confidence"});
  for (const auto& a : answers) {
    if (a.failed() || !a.label) continue;
    csv::write_row(out, {a.sample_id, rater_id, "model", *a.label,
                         a.confidence ? format_number(*a.confidence) : std::string()});
  }
}

void write_failure_manifest(std::span<const ModelAnswer> answers, std::ostream& out) {
  csv::write_row(out, {"sample_id", "failure", "reason"});
  for (const auto& a : answers) {
    if (!a.failed()) continue;
    csv::write_row(out, {a.sample_id, std::string(to_string(a.failure)), a.failure_reason});
  }
}

}  // namespace agreekit::llm
