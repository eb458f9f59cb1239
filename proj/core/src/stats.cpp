#include "agreekit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "agreekit/errors.hpp"
#include "parallel.hpp"

namespace agreekit {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // positions i..j-1 hold ranks i+1..j
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

namespace {

struct Centered {
  std::vector<double> values;
  double sum_squares = 0.0;
};

Centered center(std::vector<double> ranks) {
  const double mean = std::accumulate(ranks.begin(), ranks.end(), 0.0) / static_cast<double>(ranks.size());
  Centered c;
  for (auto& r : ranks) {
    r -= mean;
    c.sum_squares += r * r;
  }
  c.values = std::move(ranks);
  return c;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

SpearmanResult spearman(std::span<const double> x, std::span<const double> y, RngSeed seed,
                        std::size_t permutations) {
  if (x.size() != y.size()) throw ValidationError("spearman: vectors differ in length");
  if (x.size() < 3) throw ValidationError("spearman: need at least three pairs");
  const auto cx = center(average_ranks(x));
  auto cy = center(average_ranks(y));
  if (cx.sum_squares == 0.0 || cy.sum_squares == 0.0) {
    throw ValidationError("spearman: correlation undefined for a constant vector");
  }
  const double scale = std::sqrt(cx.sum_squares * cy.sum_squares);
  SpearmanResult result;
  result.n = x.size();
  result.rho = std::clamp(dot(cx.values, cy.values) / scale, -1.0, 1.0);

  // Shuffling y's ranks leaves the normaliser unchanged, so comparing raw
  // dot products is enough.
  const double observed = std::abs(dot(cx.values, cy.values));
  const double tolerance = 1e-12 * scale;
  Rng rng(Rng::derive(seed, {0x5350454152ULL}));
  std::size_t extreme = 0;
  auto& shuffled = cy.values;
  for (std::size_t p = 0; p < permutations; ++p) {
    for (std::size_t i = shuffled.size() - 1; i > 0; --i) std::swap(shuffled[i], shuffled[rng.uniform_index(i + 1)]);
    if (std::abs(dot(cx.values, shuffled)) >= observed - tolerance) ++extreme;
  }
  result.p_value = static_cast<double>(extreme + 1) / static_cast<double>(permutations + 1);
  return result;
}

double percentile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error("percentile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(q, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

ConfidenceInterval percentile_interval(std::vector<double> values, double level, double point) {
  if (!(level > 0.0 && level < 1.0)) throw ValidationError("confidence level must lie in (0, 1)");
  std::sort(values.begin(), values.end());
  const double tail = (1.0 - level) / 2.0;
  ConfidenceInterval ci;
  ci.level = level;
  ci.point = point;
  ci.lower = percentile(values, tail);
  ci.upper = percentile(values, 1.0 - tail);
  return ci;
}

std::size_t count_for_fraction(double fraction, std::size_t n) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw ValidationError("fraction must lie in [0, 1]");
  const double exact = fraction * static_cast<double>(n);
  const auto count = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  return std::min(count, n);
}

std::vector<double> bootstrap_alpha_draws(std::span<const Unit> units, DistanceMetric metric,
                                          const BootstrapOptions& options) {
  if (!(options.resample_fraction > 0.0 && options.resample_fraction <= 1.0)) {
    throw ValidationError("bootstrap fraction must lie in (0, 1]");
  }
  if (options.iterations < 100) throw ValidationError("bootstrap needs at least 100 iterations");
  const std::size_t draw = std::max<std::size_t>(1, count_for_fraction(options.resample_fraction, units.size()));

  std::vector<AlphaOutcome> outcomes(options.iterations);
  detail::parallel_for(options.iterations, [&](std::size_t it) {
    Rng rng(Rng::derive(options.seed, {0x424F4F54ULL, it}));
    const auto picked = rng.sample_without_replacement(units.size(), draw);
    std::vector<Unit> subset;
    subset.reserve(picked.size());
    for (const auto s : picked) subset.push_back(units[s]);
    outcomes[it] = evaluate_alpha(subset, metric);
  });

  std::vector<double> alphas;
  alphas.reserve(outcomes.size());
  for (const auto& o : outcomes) {
    if (o) alphas.push_back(o.result.alpha);
  }
  return alphas;
}

ConfidenceInterval bootstrap_alpha_ci(std::span<const Unit> units, DistanceMetric metric,
                                      const BootstrapOptions& options) {
  const auto full = evaluate_alpha(units, metric);
  if (full.status == AlphaStatus::no_pairable_data) throw NoPairableData();
  if (full.status == AlphaStatus::degenerate) throw DegenerateData();
  auto alphas = bootstrap_alpha_draws(units, metric, options);
  if (alphas.empty()) throw DegenerateData();
  return percentile_interval(std::move(alphas), options.level, full.result.alpha);
}

ConfidenceInterval bootstrap_alpha_ci(const AnnotationDataset& ds, double resample_fraction, std::size_t iterations,
                                      double level, RngSeed seed, std::optional<DistanceMetric> metric) {
  const auto units = units_of(ds);
  return bootstrap_alpha_ci(units, metric.value_or(default_metric(ds.scale().kind())),
                            BootstrapOptions{resample_fraction, iterations, level, seed});
}

}  // namespace agreekit
