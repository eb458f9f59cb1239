#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace agreekit::llm {

// Lowercase, collapse whitespace runs to one space, and trim surrounding
// whitespace and terminal punctuation.
std::string normalize(std::string_view text);

struct ParsedLabel {
  std::string label;       // the option, verbatim
  std::size_t begin = 0;   // byte span of the match in the raw text
  std::size_t end = 0;
};

/// Maps free text onto exactly one option.
///
/// Options are matched case-insensitively as whole words, longest option
/// first; text claimed by a longer option ("strongly agree") is not
/// available to a shorter one ("agree"). The parse fails when no option or
/// more than one distinct option is found.
std::optional<ParsedLabel> parse_label(std::string_view raw, std::span<const std::string> options);

}  // namespace agreekit::llm
