#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "agreekit/scale.hpp"

namespace agreekit {

enum class RaterKind { human, model, random };

std::string_view to_string(RaterKind kind);
std::optional<RaterKind> rater_kind_from_string(std::string_view text);

struct Rater {
  std::string id;
  RaterKind kind = RaterKind::human;
  std::string display_name;

  bool operator==(const Rater&) const = default;
};

struct Annotation {
  std::string sample_id;
  std::string rater_id;
  std::string label;
  double value = 0.0;  // encoded label, see LabelScale::encode
  std::optional<double> confidence;

  bool operator==(const Annotation&) const = default;
};

/// Sparse samples x raters matrix of annotations over one label scale.
///
/// Samples and raters keep insertion order; ids are opaque strings. At most
/// one annotation per (sample, rater) cell.
class AnnotationDataset {
 public:
  explicit AnnotationDataset(LabelScale scale);

  std::size_t add_rater(Rater rater);
  std::size_t add_sample(std::string sample_id);

  // Validates the label against the scale and the confidence range. Unknown
  // sample or rater ids are errors; use add_sample/add_rater first.
  void annotate(std::string_view sample_id, std::string_view rater_id, std::string_view label,
                std::optional<double> confidence = std::nullopt);

  const LabelScale& scale() const noexcept { return scale_; }
  std::span<const Rater> raters() const noexcept { return raters_; }
  std::span<const std::string> samples() const noexcept { return samples_; }
  std::span<const Annotation> annotations() const noexcept { return annotations_; }
  std::size_t annotation_count() const noexcept { return annotations_.size(); }

  // Study-design ratings per sample; 0 until set or inferred.
  int ratings_per_sample() const noexcept { return ratings_per_sample_; }
  void set_ratings_per_sample(int k);
  // Max number of human annotations on any sample (at least 1).
  int infer_ratings_per_sample() const;

  std::optional<std::size_t> rater_index(std::string_view id) const;
  std::optional<std::size_t> sample_index(std::string_view id) const;
  const Rater& rater(std::string_view id) const;

  const Annotation* at(std::size_t sample, std::size_t rater) const;

  std::vector<std::string> rater_ids() const;
  std::vector<std::string> rater_ids(RaterKind kind) const;

  bool operator==(const AnnotationDataset& other) const;

 private:
  LabelScale scale_;
  std::vector<Rater> raters_;
  std::vector<std::string> samples_;
  std::vector<Annotation> annotations_;
  // cells_[sample][rater] -> index into annotations_, -1 when empty
  std::vector<std::vector<std::int32_t>> cells_;
  std::unordered_map<std::string, std::size_t> rater_lookup_;
  std::unordered_map<std::string, std::size_t> sample_lookup_;
  int ratings_per_sample_ = 0;
};

enum class DataFormat { csv_long, json };

std::optional<DataFormat> data_format_from_path(std::string_view path);

struct LoadOptions {
  // Required for csv_long; ignored for json (which embeds its scale).
  std::optional<LabelScale> scale;
  // Non-fatal findings such as confidence given for a human rater.
  std::vector<std::string>* warnings = nullptr;
};

AnnotationDataset load_dataset(const std::string& path, DataFormat format, const LoadOptions& options);

AnnotationDataset read_csv_long(std::istream& in, const LabelScale& scale,
                                std::vector<std::string>* warnings = nullptr);
void write_csv_long(const AnnotationDataset& ds, std::ostream& out);

AnnotationDataset dataset_from_json(const nlohmann::json& j, std::vector<std::string>* warnings = nullptr);
nlohmann::json dataset_to_json(const AnnotationDataset& ds);

void save_dataset(const AnnotationDataset& ds, const std::string& path, DataFormat format);

// Restricts to the given raters (dataset order preserved). All samples are
// kept, including ones left without annotations.
AnnotationDataset subset_by_raters(const AnnotationDataset& ds, std::span<const std::string> rater_ids);
AnnotationDataset subset_by_kind(const AnnotationDataset& ds, RaterKind kind);

// Union of raters, samples and annotations. Scales must be equal; a cell
// annotated in both inputs is an error.
AnnotationDataset merge(const AnnotationDataset& a, const AnnotationDataset& b);

}  // namespace agreekit
