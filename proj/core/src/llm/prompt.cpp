#include "agreekit/llm/prompt.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "agreekit/errors.hpp"

namespace agreekit::llm {

namespace {

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

std::string splice(std::string text, std::string_view slot, std::string_view artifact, bool& used) {
  if (slot.empty()) return text;
  for (std::size_t pos = 0; (pos = text.find(slot, pos)) != std::string::npos;) {
    text.replace(pos, slot.size(), artifact);
    pos += artifact.size();
    used = true;
  }
  return text;
}

}  // namespace

std::string build_prompt(const PromptTemplate& t, std::string_view artifact) {
  if (trim(artifact).empty()) throw ValidationError("artifact text is empty");
  if (t.options.empty()) throw ValidationError("prompt template has no options");
  for (const auto& shot : t.shots) {
    if (std::find(t.options.begin(), t.options.end(), shot.label) == t.options.end()) {
      throw ValidationError("shot label '" + shot.label + "' is not one of the options");
    }
  }

  bool spliced = false;
  const std::string guidelines = splice(t.guidelines, t.artifact_slot, artifact, spliced);
  const std::string question = splice(t.question, t.artifact_slot, artifact, spliced);

  std::ostringstream out;
  if (!guidelines.empty()) out << trim(guidelines) << "\n\n";
  for (const auto& shot : t.shots) {
    out << "Input:\n" << trim(shot.input) << "\nAnswer: " << shot.label << "\n\n";
  }
  if (!spliced) out << "Input:\n" << trim(artifact) << "\n\n";
  if (!question.empty()) out << trim(question) << "\n";
  out << "Options:\n";
  for (const auto& option : t.options) out << "- " << option << "\n";
  out << "Answer:";
  return out.str();
}

std::string reprompt_suffix(const PromptTemplate& t) {
  std::string out = "\n\nRespond with exactly one of the following options and nothing else: ";
  for (std::size_t i = 0; i < t.options.size(); ++i) {
    if (i) out += " | ";
    out += t.options[i];
  }
  out += "\nAnswer:";
  return out;
}

std::vector<std::string> lint_template(const PromptTemplate& t) {
  static const std::set<std::string> kRisky{"not", "never", "only"};
  std::vector<std::string> warnings;
  auto scan = [&](std::string_view where, std::string_view text) {
    std::string word;
    std::set<std::string> found;
    auto flush = [&] {
      if (kRisky.contains(word)) found.insert(word);
      word.clear();
    };
    for (const char c : text) {
      if (std::isalpha(static_cast<unsigned char>(c))) {
        word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      } else {
        flush();
      }
    }
    flush();
    for (const auto& w : found) {
      warnings.push_back(std::string(where) + " uses '" + w + "'; negations are often misread by models");
    }
  };
  scan("guidelines", t.guidelines);
  scan("question", t.question);
  return warnings;
}

void check_options_match(const PromptTemplate& t, const LabelScale& scale) {
  if (scale.kind() == ScaleKind::interval) {
    for (const auto& option : t.options) {
      if (!scale.encode(option)) throw ValidationError("option '" + option + "' is outside the interval scale");
    }
    return;
  }
  if (t.options != scale.labels()) throw ValidationError("template options must equal the scale labels, in order");
}

PromptTemplate load_template(const std::string& path, const std::optional<std::string>& shots_path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open template '" + path + "'");

  PromptTemplate t;
  std::string section;
  std::string guidelines, question;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped == "[guidelines]" || stripped == "[question]" || stripped == "[options]") {
      section = stripped.substr(1, stripped.size() - 2);
      continue;
    }
    if (section == "guidelines") {
      guidelines += line + "\n";
    } else if (section == "question") {
      question += line + "\n";
    } else if (section == "options") {
      if (!stripped.empty()) t.options.push_back(stripped);
    } else if (!stripped.empty()) {
      throw ParseError("text outside of a [guidelines]/[question]/[options] section", line_no, 1);
    }
  }
  t.guidelines = trim(guidelines);
  t.question = trim(question);
  if (t.options.empty()) throw ValidationError("template '" + path + "' declares no options");

  std::optional<std::string> sidecar = shots_path;
  if (!sidecar) {
    auto candidate = std::filesystem::path(path).replace_extension(".shots.json");
    if (std::filesystem::exists(candidate)) sidecar = candidate.string();
  }
  if (sidecar) {
    std::ifstream shots_in(*sidecar);
    if (!shots_in) throw ValidationError("cannot open shots file '" + *sidecar + "'");
    try {
      const auto j = nlohmann::json::parse(shots_in);
      const auto& list = j.is_object() ? j.at("shots") : j;
      for (const auto& shot : list) {
        t.shots.push_back(Shot{shot.at("input").get<std::string>(), shot.at("label").get<std::string>()});
      }
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("shots file '" + *sidecar + "': " + e.what());
    }
  }
  for (const auto& shot : t.shots) {
    if (std::find(t.options.begin(), t.options.end(), shot.label) == t.options.end()) {
      throw ValidationError("shot label '" + shot.label + "' is not one of the options");
    }
  }
  return t;
}

}  // namespace agreekit::llm
