#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "agreekit/alpha.hpp"
#include "agreekit/dataset.hpp"

namespace agreekit {

enum class Zone { human_human, human_model, model_model, with_random };

std::string_view to_string(Zone zone);
Zone zone_of(RaterKind a, RaterKind b);

/// Alpha over the samples both raters annotated. Empty when the raters share
/// no sample or the shared data is degenerate. A rater paired with itself
/// yields alpha = 1 as long as it annotated anything.
std::optional<AlphaResult> pairwise_alpha(const AnnotationDataset& ds, std::string_view r1, std::string_view r2,
                                          std::optional<DistanceMetric> metric = std::nullopt);

class AgreementMatrix {
 public:
  AgreementMatrix(std::vector<Rater> raters, std::vector<std::optional<AlphaResult>> cells);

  std::size_t size() const noexcept { return raters_.size(); }
  const std::vector<Rater>& raters() const noexcept { return raters_; }
  const std::optional<AlphaResult>& at(std::size_t i, std::size_t j) const { return cells_.at(i * size() + j); }
  Zone zone(std::size_t i, std::size_t j) const { return zone_of(raters_.at(i).kind, raters_.at(j).kind); }

 private:
  std::vector<Rater> raters_;
  std::vector<std::optional<AlphaResult>> cells_;
};

AgreementMatrix agreement_matrix(const AnnotationDataset& ds, std::optional<DistanceMetric> metric = std::nullopt);

struct ZoneSummary {
  Zone zone = Zone::human_human;
  double mean_alpha = 0.0;
  double median_alpha = 0.0;
  std::size_t pair_count = 0;
};

// Summaries for human_human, human_model and model_model, in that order,
// over defined off-diagonal cells. Zones without any defined cell are left
// out. When model_subset is given only those model raters take part.
std::vector<ZoneSummary> zone_summaries(const AgreementMatrix& m,
                                        const std::optional<std::set<std::string>>& model_subset = std::nullopt);

std::optional<ZoneSummary> find_zone(const std::vector<ZoneSummary>& summaries, Zone zone);

// Rater x rater grid; undefined cells are empty.
std::string matrix_to_csv(const AgreementMatrix& m);
nlohmann::json matrix_to_json(const AgreementMatrix& m);

}  // namespace agreekit
