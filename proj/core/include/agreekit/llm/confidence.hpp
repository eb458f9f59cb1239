#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace agreekit::llm {

struct TokenLogprob {
  std::string token;
  double logprob = 0.0;

  bool operator==(const TokenLogprob&) const = default;
};

// exp(mean(log p)); 1.0 for an empty span.
double geometric_mean_probability(std::span<const double> probabilities);

/// Confidence of a parsed answer: the geometric mean probability of the
/// tokens overlapping the label's byte span [begin, end) of `raw_text`.
/// Absent when the provider returned no token probabilities or the tokens
/// cannot be aligned with the text.
std::optional<double> extract_confidence(const std::optional<std::vector<TokenLogprob>>& tokens,
                                         std::string_view raw_text, std::size_t begin, std::size_t end);

}  // namespace agreekit::llm
