#include "agreekit/alpha.hpp"

#include <algorithm>

#include "agreekit/errors.hpp"

namespace agreekit {

DistanceMetric default_metric(ScaleKind kind) {
  switch (kind) {
    case ScaleKind::nominal: return DistanceMetric::nominal;
    case ScaleKind::ordinal: return DistanceMetric::ordinal;
    case ScaleKind::interval: return DistanceMetric::interval;
  }
  return DistanceMetric::nominal;
}

std::string_view to_string(DistanceMetric metric) {
  switch (metric) {
    case DistanceMetric::nominal: return "nominal";
    case DistanceMetric::ordinal: return "ordinal";
    case DistanceMetric::interval: return "interval";
  }
  return "nominal";
}

DistanceMetric distance_metric_from_string(std::string_view text) {
  if (text == "nominal") return DistanceMetric::nominal;
  if (text == "ordinal") return DistanceMetric::ordinal;
  if (text == "interval") return DistanceMetric::interval;
  throw ValidationError("unknown metric '" + std::string(text) + "' (expected nominal, ordinal or interval)");
}

AlphaOutcome evaluate_alpha(std::span<const Unit> units, DistanceMetric metric) {
  // Distinct pairable values in ascending order; the index is the row of the
  // coincidence matrix.
  std::vector<double> values;
  std::size_t units_used = 0;
  for (const auto& unit : units) {
    if (unit.size() < 2) continue;
    ++units_used;
    values.insert(values.end(), unit.begin(), unit.end());
  }
  AlphaOutcome outcome;
  if (units_used == 0) {
    outcome.status = AlphaStatus::no_pairable_data;
    return outcome;
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  const std::size_t v = values.size();
  auto index_of = [&](double x) {
    return static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), x) - values.begin());
  };

  std::vector<double> coincidence(v * v, 0.0);
  std::vector<double> marginal(v, 0.0);
  std::vector<std::size_t> local_count(v, 0);
  std::vector<std::size_t> touched;
  double n = 0.0;

  for (const auto& unit : units) {
    const std::size_t m = unit.size();
    if (m < 2) continue;
    touched.clear();
    for (const double x : unit) {
      const auto c = index_of(x);
      if (local_count[c]++ == 0) touched.push_back(c);
    }
    const double weight = 1.0 / static_cast<double>(m - 1);
    for (const auto c : touched) {
      const auto nc = static_cast<double>(local_count[c]);
      for (const auto k : touched) {
        const auto nk = static_cast<double>(local_count[k]);
        const double pairs = c == k ? nc * (nc - 1.0) : nc * nk;
        coincidence[c * v + k] += pairs * weight;
      }
      marginal[c] += nc;
    }
    n += static_cast<double>(m);
    for (const auto c : touched) local_count[c] = 0;
  }

  // delta^2 for each ordered value pair
  std::vector<double> delta2(v * v, 0.0);
  for (std::size_t c = 0; c < v; ++c) {
    for (std::size_t k = c + 1; k < v; ++k) {
      double d = 0.0;
      switch (metric) {
        case DistanceMetric::nominal: d = 1.0; break;
        case DistanceMetric::interval: {
          const double diff = values[c] - values[k];
          d = diff * diff;
          break;
        }
        case DistanceMetric::ordinal: {
          double span = 0.0;
          for (std::size_t g = c; g <= k; ++g) span += marginal[g];
          span -= (marginal[c] + marginal[k]) / 2.0;
          d = span * span;
          break;
        }
      }
      delta2[c * v + k] = d;
      delta2[k * v + c] = d;
    }
  }

  double observed = 0.0;
  double expected = 0.0;
  for (std::size_t c = 0; c < v; ++c) {
    for (std::size_t k = 0; k < v; ++k) {
      const double d = delta2[c * v + k];
      if (d == 0.0) continue;
      observed += coincidence[c * v + k] * d;
      expected += marginal[c] * marginal[k] * d;
    }
  }

  outcome.result.pairable_values = static_cast<std::size_t>(n);
  outcome.result.units_used = units_used;
  outcome.result.observed_disagreement = observed / n;
  outcome.result.expected_disagreement = expected / (n * (n - 1.0));
  if (expected == 0.0) {
    outcome.status = AlphaStatus::degenerate;
    return outcome;
  }
  // 1 - D_o/D_e with the normalisers folded together: (n - 1) * observed / expected.
  outcome.result.alpha = 1.0 - (n - 1.0) * observed / expected;
  return outcome;
}

std::vector<Unit> units_of(const AnnotationDataset& ds) {
  std::vector<Unit> units(ds.samples().size());
  for (std::size_t s = 0; s < units.size(); ++s) {
    for (std::size_t r = 0; r < ds.raters().size(); ++r) {
      if (const auto* a = ds.at(s, r)) units[s].push_back(a->value);
    }
  }
  return units;
}

AlphaResult compute_alpha(const AnnotationDataset& ds, std::optional<DistanceMetric> metric) {
  const auto units = units_of(ds);
  const auto outcome = evaluate_alpha(units, metric.value_or(default_metric(ds.scale().kind())));
  switch (outcome.status) {
    case AlphaStatus::no_pairable_data: throw NoPairableData();
    case AlphaStatus::degenerate: throw DegenerateData();
    case AlphaStatus::ok: break;
  }
  return outcome.result;
}

}  // namespace agreekit
