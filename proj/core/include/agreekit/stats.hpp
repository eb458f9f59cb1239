#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "agreekit/alpha.hpp"
#include "agreekit/dataset.hpp"
#include "agreekit/rng.hpp"

namespace agreekit {

struct SpearmanResult {
  double rho = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

// Ranks starting at 1; tied values share the average of their ranks.
std::vector<double> average_ranks(std::span<const double> values);

/// Spearman rank correlation with a two-sided permutation p-value,
/// p = (1 + #{|rho_perm| >= |rho|}) / (1 + permutations).
/// Throws ValidationError on length mismatch, n < 3, or a constant input.
SpearmanResult spearman(std::span<const double> x, std::span<const double> y, RngSeed seed,
                        std::size_t permutations = 10'000);

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  double point = 0.0;
};

// Linear interpolation between order statistics (type 7); q in [0, 1].
// `sorted` must be ascending and non-empty.
double percentile(std::span<const double> sorted, double q);

// Equal-tailed percentile interval at `level`.
ConfidenceInterval percentile_interval(std::vector<double> values, double level, double point);

// ceil(fraction * n) with a small guard against representation error in
// fraction (0.3 * 10 must give 3, not 4).
std::size_t count_for_fraction(double fraction, std::size_t n);

struct BootstrapOptions {
  double resample_fraction = 0.5;
  std::size_t iterations = 1000;
  double level = 0.95;
  RngSeed seed{};
};

/// Subsampling interval for alpha. Each iteration draws
/// ceil(fraction * |units|) units without replacement from its own derived
/// stream and recomputes alpha; undefined draws are skipped. `point` is alpha
/// on all units. Throws DegenerateData when every draw is undefined.
ConfidenceInterval bootstrap_alpha_ci(std::span<const Unit> units, DistanceMetric metric,
                                      const BootstrapOptions& options);

ConfidenceInterval bootstrap_alpha_ci(const AnnotationDataset& ds, double resample_fraction, std::size_t iterations,
                                      double level, RngSeed seed,
                                      std::optional<DistanceMetric> metric = std::nullopt);

// Per-iteration alphas in iteration order (undefined draws omitted); the
// values behind bootstrap_alpha_ci.
std::vector<double> bootstrap_alpha_draws(std::span<const Unit> units, DistanceMetric metric,
                                          const BootstrapOptions& options);

}  // namespace agreekit
