#include "agreekit/llm/confidence.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace agreekit::llm {

double geometric_mean_probability(std::span<const double> probabilities) {
  if (probabilities.empty()) return 1.0;
  double log_sum = 0.0;
  for (const double p : probabilities) log_sum += std::log(p);
  return std::exp(log_sum / static_cast<double>(probabilities.size()));
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::optional<double> extract_confidence(const std::optional<std::vector<TokenLogprob>>& tokens,
                                         std::string_view raw_text, std::size_t begin, std::size_t end) {
  if (!tokens || tokens->empty() || begin >= end || end > raw_text.size()) return std::nullopt;

  std::string joined;
  for (const auto& t : *tokens) joined += t.token;

  // Tokens normally reproduce the text exactly; if not, locate the label
  // inside the token text instead.
  if (joined != raw_text) {
    const auto pos = lower(joined).find(lower(raw_text.substr(begin, end - begin)));
    if (pos == std::string::npos) return std::nullopt;
    end = pos + (end - begin);
    begin = pos;
  }

  double log_sum = 0.0;
  std::size_t count = 0;
  std::size_t offset = 0;
  for (const auto& t : *tokens) {
    const std::size_t t_begin = offset;
    const std::size_t t_end = offset + t.token.size();
    offset = t_end;
    if (t_end <= begin || t_begin >= end) continue;
    // whitespace-only tokens carry no answer content
    if (std::all_of(t.token.begin(), t.token.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); })) {
      continue;
    }
    log_sum += t.logprob;
    ++count;
  }
  if (count == 0) return std::nullopt;
  return std::clamp(std::exp(log_sum / static_cast<double>(count)), 0.0, 1.0);
}

}  // namespace agreekit::llm
