#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "agreekit/alpha.hpp"
#include "agreekit/dataset.hpp"
#include "agreekit/stats.hpp"

namespace agreekit {

// ---------------------------------------------------------------------------
// Gate

enum class GateOutcome { replace_one_rating_all_samples, selective_high_confidence_only };

std::string_view to_string(GateOutcome outcome);

struct GateDecision {
  double mm_mean_alpha = 0.0;
  double threshold = 0.5;
  GateOutcome outcome = GateOutcome::selective_high_confidence_only;
  std::size_t model_pairs = 0;  // defined pairs behind the mean
};

constexpr double kDefaultGateThreshold = 0.5;

/// Mean pairwise alpha over the model raters, compared to the threshold with
/// a strict inequality. `model_ids` selects the models; when empty all raters
/// of kind model take part. Needs at least two models and one defined pair.
GateDecision gate(const AnnotationDataset& ds, std::span<const std::string> model_ids,
                  double threshold = kDefaultGateThreshold, std::optional<DistanceMetric> metric = std::nullopt);

// ---------------------------------------------------------------------------
// Model answers

struct ModelLabel {
  std::string label;
  double value = 0.0;
  std::optional<double> confidence;
};

struct ModelAnswers {
  std::string rater_id;
  std::map<std::string, ModelLabel> by_sample;

  bool has_confidence() const;
};

ModelAnswers model_answers_of(const AnnotationDataset& ds, std::string_view rater_id);

// ---------------------------------------------------------------------------
// Replacement sweep

enum class Strategy { by_confidence, random };

std::string_view to_string(Strategy strategy);
Strategy strategy_from_string(std::string_view text);

struct SweepPoint {
  double fraction = 0.0;
  double mean_alpha = 0.0;
  ConfidenceInterval ci;
  Strategy strategy = Strategy::random;
  std::size_t samples_replaced = 0;
  std::size_t trials_used = 0;  // trials with a defined alpha
};

struct SweepCurve {
  Strategy strategy = Strategy::random;
  std::vector<SweepPoint> points;
  ConfidenceInterval baseline;  // human-only alpha with its subsampling interval
  std::size_t trials_per_point = 0;
};

std::vector<double> default_fraction_grid();
std::vector<double> parse_fraction_grid(std::string_view text);

struct SweepOptions {
  std::vector<double> fractions = default_fraction_grid();
  std::size_t trials = 100;
  double level = 0.95;
  std::size_t bootstrap_iterations = 1000;
  double bootstrap_fraction = 0.5;
  RngSeed seed{};
  std::optional<DistanceMetric> metric;
};

/// Sample indices (into human_ds.samples()) with the `count` highest model
/// confidences; ties go to the lexicographically smaller sample id. Returned
/// in selection order.
std::vector<std::size_t> select_by_confidence(const AnnotationDataset& human_ds, const ModelAnswers& model,
                                              std::size_t count);

/// One-rating replacement sweep. For each fraction f, ceil(f * N) samples are
/// selected (top confidence or uniformly at random per trial); in each
/// selected sample one existing human rating, chosen uniformly, is replaced
/// by the model's answer, and alpha is recomputed. Trials draw replacement
/// positions from streams that do not depend on the strategy, so both
/// strategies agree wherever their selected sets agree.
SweepCurve replacement_sweep(const AnnotationDataset& human_ds, const ModelAnswers& model, Strategy strategy,
                             const SweepOptions& options);

/// Largest grid fraction f such that every point up to f has a CI that
/// overlaps the baseline CI.
double max_safe_fraction(const SweepCurve& curve);

bool intervals_overlap(const ConfidenceInterval& a, const ConfidenceInterval& b);

std::string sweep_to_csv(std::span<const SweepCurve> curves);

// ---------------------------------------------------------------------------
// Effort accounting

struct EffortReport {
  int ratings_per_sample = 1;
  double safe_fraction = 0.0;
  double one_rating_saved_pct = 0.0;  // 100 * f
  double overall_saved_pct = 0.0;     // 100 * f / k, exact
  // Tabulated figure: the per-rating share 100/k is first rounded to a whole
  // percent and then scaled by f (33% for k = 3, so f = 0.5 gives 16.5%).
  double tabulated_overall_pct = 0.0;
};

EffortReport effort_report(int ratings_per_sample, double safe_fraction);

// Half-up rounding to `decimals` places, tolerant of binary representation
// error (16.65 rounds to 16.7).
double round_half_up(double value, int decimals);

// ---------------------------------------------------------------------------
// Confidence profile and majority agreement

struct ProfilePoint {
  double fraction = 0.0;  // (rank + 1) / N
  double confidence = 0.0;
  std::string sample_id;
};

// Answers sorted by descending confidence (ties by sample id).
std::vector<ProfilePoint> confidence_profile(const ModelAnswers& model);

// Smallest count that is a strict majority of k ratings.
constexpr std::size_t strict_majority(std::size_t k) { return k / 2 + 1; }

struct MajorityPoint {
  double fraction = 0.0;
  std::size_t samples = 0;  // top-confidence samples considered
  std::size_t agreeing = 0;
  double share = 0.0;       // agreeing / samples
};

/// For each nonzero fraction f, the share of the ceil(f * N) most confident
/// samples where the model's label matches a strict majority of that
/// sample's human ratings. Tied splits count as disagreement.
std::vector<MajorityPoint> majority_agreement_curve(const AnnotationDataset& human_ds, const ModelAnswers& model,
                                                    std::span<const double> fractions);

}  // namespace agreekit
