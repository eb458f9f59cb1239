#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace agreekit {

enum class ScaleKind { nominal, ordinal, interval };

std::string_view to_string(ScaleKind kind);
ScaleKind scale_kind_from_string(std::string_view text);

/// Admissible label values for one annotation task.
///
/// Nominal and ordinal scales carry an explicit label list; for ordinal
/// scales list position is rank order. Interval scales carry a numeric
/// range and accept any decimal label inside it. Labels are encoded to
/// doubles for the agreement computations: the list index for
/// nominal/ordinal, the number itself for interval.
class LabelScale {
 public:
  static LabelScale nominal(std::vector<std::string> labels);
  static LabelScale ordinal(std::vector<std::string> labels);
  static LabelScale interval(double min, double max);

  static LabelScale from_json(const nlohmann::json& j);
  static LabelScale load(const std::string& path);
  nlohmann::json to_json() const;

  ScaleKind kind() const noexcept { return kind_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  double min() const noexcept { return min_; }
  double max() const noexcept { return max_; }

  std::optional<double> encode(std::string_view label) const;
  std::string decode(double value) const;

  bool operator==(const LabelScale& other) const = default;

 private:
  LabelScale() = default;

  ScaleKind kind_ = ScaleKind::nominal;
  std::vector<std::string> labels_;
  double min_ = 0.0;
  double max_ = 0.0;
};

// Shortest round-trip decimal text for a double.
std::string format_number(double value);
std::optional<double> parse_number(std::string_view text);

}  // namespace agreekit
