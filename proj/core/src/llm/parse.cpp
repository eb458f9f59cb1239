#include "agreekit/llm/parse.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <vector>

namespace agreekit::llm {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_word(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_terminal_punct(char c) {
  return c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':' || c == '"' || c == '\'' ||
         c == '`' || c == '*' || c == ')' || c == '(' || c == '[' || c == ']';
}

// Normalised text plus, for every normalised byte, its offset in the input.
struct Normalized {
  std::string text;
  std::vector<std::size_t> offset;
};

Normalized normalize_with_offsets(std::string_view raw) {
  Normalized n;
  bool pending_space = false;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const char c = raw[i];
    if (is_space(c)) {
      pending_space = !n.text.empty();
      continue;
    }
    if (pending_space) {
      n.text.push_back(' ');
      n.offset.push_back(i - 1);
      pending_space = false;
    }
    n.text.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    n.offset.push_back(i);
  }
  // trim terminal punctuation on both ends
  std::size_t begin = 0, end = n.text.size();
  while (end > begin && (is_terminal_punct(n.text[end - 1]) || n.text[end - 1] == ' ')) --end;
  while (begin < end && (is_terminal_punct(n.text[begin]) || n.text[begin] == ' ')) ++begin;
  n.text = n.text.substr(begin, end - begin);
  n.offset = std::vector<std::size_t>(n.offset.begin() + static_cast<std::ptrdiff_t>(begin),
                                      n.offset.begin() + static_cast<std::ptrdiff_t>(end));
  return n;
}

}  // namespace

std::string normalize(std::string_view text) { return normalize_with_offsets(text).text; }

std::optional<ParsedLabel> parse_label(std::string_view raw, std::span<const std::string> options) {
  const auto haystack = normalize_with_offsets(raw);
  const std::string& h = haystack.text;

  std::vector<std::string> needles;
  needles.reserve(options.size());
  for (const auto& option : options) needles.push_back(normalize(option));

  std::vector<std::size_t> order(options.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return needles[a].size() > needles[b].size(); });

  std::vector<bool> claimed(h.size(), false);
  std::optional<std::size_t> matched;
  std::size_t match_begin = 0, match_end = 0;

  for (const auto o : order) {
    const auto& needle = needles[o];
    if (needle.empty()) continue;
    for (std::size_t pos = h.find(needle); pos != std::string::npos; pos = h.find(needle, pos + 1)) {
      const std::size_t end = pos + needle.size();
      const bool left_ok = pos == 0 || !is_word(h[pos - 1]) || !is_word(needle.front());
      const bool right_ok = end == h.size() || !is_word(h[end]) || !is_word(needle.back());
      if (!left_ok || !right_ok) continue;
      if (std::any_of(claimed.begin() + static_cast<std::ptrdiff_t>(pos),
                      claimed.begin() + static_cast<std::ptrdiff_t>(end), [](bool b) { return b; })) {
        continue;
      }
      std::fill(claimed.begin() + static_cast<std::ptrdiff_t>(pos), claimed.begin() + static_cast<std::ptrdiff_t>(end),
                true);
      if (matched && needles[*matched] != needle) return std::nullopt;  // two different options
      if (!matched || pos < match_begin) {
        matched = o;
        match_begin = pos;
        match_end = end;
      }
    }
  }
  if (!matched) return std::nullopt;
  return ParsedLabel{options[*matched], haystack.offset[match_begin], haystack.offset[match_end - 1] + 1};
}

}  // namespace agreekit::llm
