#include "agreekit/scale.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "agreekit/errors.hpp"

namespace agreekit {

std::string_view to_string(ScaleKind kind) {
  switch (kind) {
    case ScaleKind::nominal: return "nominal";
    case ScaleKind::ordinal: return "ordinal";
    case ScaleKind::interval: return "interval";
  }
  return "nominal";
}

ScaleKind scale_kind_from_string(std::string_view text) {
  if (text == "nominal" || text == "binary") return ScaleKind::nominal;
  if (text == "ordinal") return ScaleKind::ordinal;
  if (text == "interval" || text == "ratio") return ScaleKind::interval;
  throw ValidationError("unknown scale kind '" + std::string(text) + "'");
}

namespace {

void check_labels(const std::vector<std::string>& labels) {
  if (labels.empty()) throw ValidationError("scale must declare at least one label");
  std::set<std::string_view> seen;
  for (const auto& label : labels) {
    if (label.empty()) throw ValidationError("scale labels must be non-empty");
    if (!seen.insert(label).second) throw ValidationError("duplicate scale label '" + label + "'");
  }
}

}  // namespace

LabelScale LabelScale::nominal(std::vector<std::string> labels) {
  check_labels(labels);
  LabelScale s;
  s.kind_ = ScaleKind::nominal;
  s.labels_ = std::move(labels);
  return s;
}

LabelScale LabelScale::ordinal(std::vector<std::string> labels) {
  check_labels(labels);
  LabelScale s;
  s.kind_ = ScaleKind::ordinal;
  s.labels_ = std::move(labels);
  return s;
}

LabelScale LabelScale::interval(double min, double max) {
  if (!std::isfinite(min) || !std::isfinite(max) || !(min < max)) {
    throw ValidationError("interval scale requires finite min < max");
  }
  LabelScale s;
  s.kind_ = ScaleKind::interval;
  s.min_ = min;
  s.max_ = max;
  return s;
}

LabelScale LabelScale::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ValidationError("scale definition needs a \"kind\" field");
  const auto kind = scale_kind_from_string(j.at("kind").get<std::string>());
  if (kind == ScaleKind::interval) {
    if (!j.contains("min") || !j.contains("max")) throw ValidationError("interval scale needs \"min\" and \"max\"");
    return interval(j.at("min").get<double>(), j.at("max").get<double>());
  }
  if (!j.contains("labels") || !j.at("labels").is_array()) {
    throw ValidationError("nominal/ordinal scale needs a \"labels\" array");
  }
  std::vector<std::string> labels;
  for (const auto& label : j.at("labels")) {
    if (label.is_string()) {
      labels.push_back(label.get<std::string>());
    } else if (label.is_number()) {
      labels.push_back(format_number(label.get<double>()));
    } else {
      throw ValidationError("scale labels must be strings or numbers");
    }
  }
  return kind == ScaleKind::ordinal ? ordinal(std::move(labels)) : nominal(std::move(labels));
}

LabelScale LabelScale::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scale file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("scale JSON: ") + e.what(), 0, 0);
  }
  try {
    return from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("scale JSON: ") + e.what());
  }
}

nlohmann::json LabelScale::to_json() const {
  nlohmann::json j;
  j["kind"] = std::string(to_string(kind_));
  if (kind_ == ScaleKind::interval) {
    j["min"] = min_;
    j["max"] = max_;
  } else {
    j["labels"] = labels_;
  }
  return j;
}

std::optional<double> LabelScale::encode(std::string_view label) const {
  if (kind_ == ScaleKind::interval) {
    const auto value = parse_number(label);
    if (!value || *value < min_ || *value > max_) return std::nullopt;
    return value;
  }
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<double>(it - labels_.begin());
}

std::string LabelScale::decode(double value) const {
  if (kind_ == ScaleKind::interval) return format_number(value);
  const auto index = static_cast<std::size_t>(value);
  if (value < 0 || index >= labels_.size() || static_cast<double>(index) != value) {
    throw ValidationError("value " + format_number(value) + " is not a label index of this scale");
  }
  return labels_[index];
}

std::string format_number(double value) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc{}) throw Error("cannot format number");
  return std::string(buffer, end);
}

std::optional<double> parse_number(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace agreekit
