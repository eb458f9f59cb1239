#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "agreekit/dataset.hpp"

namespace agreekit {

/// Difference function used by Krippendorff's alpha.
///
/// nominal: 0 when equal, 1 otherwise.
/// ordinal: squared distance in cumulative marginal ranks, so it depends on
///   how often each value occurs, not on label spacing. Labels nobody used
///   have zero marginal and do not affect the result.
/// interval: squared numeric difference of the encoded values. Applied to an
///   ordinal scale this is the "interval on rank indices" variant.
enum class DistanceMetric { nominal, ordinal, interval };

DistanceMetric default_metric(ScaleKind kind);
std::string_view to_string(DistanceMetric metric);
DistanceMetric distance_metric_from_string(std::string_view text);

struct AlphaResult {
  double alpha = 1.0;
  double observed_disagreement = 0.0;
  double expected_disagreement = 0.0;
  std::size_t pairable_values = 0;
  std::size_t units_used = 0;
};

enum class AlphaStatus { ok, no_pairable_data, degenerate };

struct AlphaOutcome {
  AlphaStatus status = AlphaStatus::ok;
  AlphaResult result;

  explicit operator bool() const noexcept { return status == AlphaStatus::ok; }
};

// Values one unit (sample) received, already encoded.
using Unit = std::vector<double>;

/// Coincidence-matrix alpha over arbitrary units; units with fewer than two
/// values are ignored. Each unit contributes with weight 1/(m_u - 1).
AlphaOutcome evaluate_alpha(std::span<const Unit> units, DistanceMetric metric);

/// Units of the dataset, one per sample, in sample order.
std::vector<Unit> units_of(const AnnotationDataset& ds);

/// Throws NoPairableData or DegenerateData when alpha is undefined.
AlphaResult compute_alpha(const AnnotationDataset& ds, std::optional<DistanceMetric> metric = std::nullopt);

}  // namespace agreekit
