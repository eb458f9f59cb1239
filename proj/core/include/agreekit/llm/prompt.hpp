#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agreekit/scale.hpp"

namespace agreekit::llm {

struct Shot {
  std::string input;
  std::string label;
};

/// Few-shot annotation prompt.
///
/// The prompt is laid out as: guidelines, one Input/Answer block per shot,
/// the artifact under query, the question, then the option list. If the
/// guidelines or question contain `artifact_slot`, the artifact is spliced
/// in there instead of getting its own block.
struct PromptTemplate {
  std::string guidelines;
  std::string question;
  std::vector<std::string> options;
  std::vector<Shot> shots;
  std::string artifact_slot = "{{artifact}}";
};

inline constexpr std::size_t kDefaultShots = 3;

std::string build_prompt(const PromptTemplate& t, std::string_view artifact);

// Suffix appended for the single retry after an unparseable answer.
std::string reprompt_suffix(const PromptTemplate& t);

// Warnings for words models tend to mishandle (not / never / only).
std::vector<std::string> lint_template(const PromptTemplate& t);

// Throws ValidationError unless the options equal the scale's labels.
void check_options_match(const PromptTemplate& t, const LabelScale& scale);

/// Reads a sectioned plain-text template:
///
///     [guidelines]
///     ...
///     [question]
///     ...
///     [options]
///     one option per line
///
/// Shots come from the sidecar JSON (an array of {"input", "label"}); when
/// `shots_path` is not given, `<template stem>.shots.json` is used if it
/// exists.
PromptTemplate load_template(const std::string& path, const std::optional<std::string>& shots_path = std::nullopt);

}  // namespace agreekit::llm
