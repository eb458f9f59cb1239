#include "agreekit/delegation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "agreekit/agreement.hpp"
#include "agreekit/csv.hpp"
#include "agreekit/errors.hpp"
#include "parallel.hpp"

namespace agreekit {

std::string_view to_string(GateOutcome outcome) {
  switch (outcome) {
    case GateOutcome::replace_one_rating_all_samples: return "replace_one_rating_all_samples";
    case GateOutcome::selective_high_confidence_only: return "selective_high_confidence_only";
  }
  return "selective_high_confidence_only";
}

GateDecision gate(const AnnotationDataset& ds, std::span<const std::string> model_ids, double threshold,
                  std::optional<DistanceMetric> metric) {
  std::vector<std::string> models(model_ids.begin(), model_ids.end());
  if (models.empty()) models = ds.rater_ids(RaterKind::model);
  for (const auto& id : models) {
    if (ds.rater(id).kind != RaterKind::model) throw ValidationError("rater '" + id + "' is not a model");
  }
  if (models.size() < 2) throw ValidationError("the gate needs at least two model raters");

  // Sorted so the sum is accumulated in the same order however raters are listed.
  std::sort(models.begin(), models.end());
  std::vector<double> alphas;
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (std::size_t j = i + 1; j < models.size(); ++j) {
      if (const auto a = pairwise_alpha(ds, models[i], models[j], metric)) alphas.push_back(a->alpha);
    }
  }
  if (alphas.empty()) throw PreconditionError("every model pair is undefined (no shared or no varying data)");

  GateDecision decision;
  decision.threshold = threshold;
  decision.model_pairs = alphas.size();
  decision.mm_mean_alpha = std::accumulate(alphas.begin(), alphas.end(), 0.0) / static_cast<double>(alphas.size());
  decision.outcome = decision.mm_mean_alpha > threshold ? GateOutcome::replace_one_rating_all_samples
                                                        : GateOutcome::selective_high_confidence_only;
  return decision;
}

bool ModelAnswers::has_confidence() const {
  return !by_sample.empty() &&
         std::all_of(by_sample.begin(), by_sample.end(), [](const auto& kv) { return kv.second.confidence.has_value(); });
}

ModelAnswers model_answers_of(const AnnotationDataset& ds, std::string_view rater_id) {
  const auto& rater = ds.rater(rater_id);
  ModelAnswers out;
  out.rater_id = rater.id;
  for (const auto& a : ds.annotations()) {
    if (a.rater_id == rater.id) out.by_sample.emplace(a.sample_id, ModelLabel{a.label, a.value, a.confidence});
  }
  return out;
}

std::string_view to_string(Strategy strategy) {
  return strategy == Strategy::by_confidence ? "by_confidence" : "random";
}

Strategy strategy_from_string(std::string_view text) {
  if (text == "by_confidence" || text == "confidence") return Strategy::by_confidence;
  if (text == "random") return Strategy::random;
  throw ValidationError("unknown strategy '" + std::string(text) + "' (expected by_confidence or random)");
}

std::vector<double> default_fraction_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  return grid;
}

std::vector<double> parse_fraction_grid(std::string_view text) {
  std::vector<double> grid;
  auto number = [&](std::string_view part) {
    const auto value = parse_number(part);
    if (!value) throw ValidationError("bad fraction '" + std::string(part) + "'");
    return *value;
  };
  if (text.find(':') != std::string_view::npos) {
    // start:stop:step
    std::vector<std::string_view> parts;
    std::size_t begin = 0;
    for (std::size_t pos; (pos = text.find(':', begin)) != std::string_view::npos; begin = pos + 1) {
      parts.push_back(text.substr(begin, pos - begin));
    }
    parts.push_back(text.substr(begin));
    if (parts.size() != 3) throw ValidationError("fraction range must be start:stop:step");
    const double start = number(parts[0]), stop = number(parts[1]), step = number(parts[2]);
    if (!(step > 0.0)) throw ValidationError("fraction step must be positive");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    // Snap to 12 decimals so 0:1:0.1 yields 0.3 rather than 0.30000000000000004.
    for (long i = 0; i <= count; ++i) grid.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
  } else {
    std::size_t begin = 0;
    for (std::size_t pos; (pos = text.find(',', begin)) != std::string_view::npos; begin = pos + 1) {
      grid.push_back(number(text.substr(begin, pos - begin)));
    }
    grid.push_back(number(text.substr(begin)));
  }
  for (const double f : grid) {
    if (!(f >= 0.0 && f <= 1.0 + 1e-12)) throw ValidationError("fractions must lie in [0, 1]");
  }
  for (auto& f : grid) f = std::min(f, 1.0);
  return grid;
}

namespace {

std::vector<double> normalized_grid(std::vector<double> grid) {
  grid.push_back(0.0);
  grid.push_back(1.0);
  for (const double f : grid) {
    if (!(f >= 0.0 && f <= 1.0)) throw ValidationError("fractions must lie in [0, 1]");
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

struct HumanTable {
  std::vector<Unit> units;        // human values per sample
  std::vector<std::string> ids;   // sample ids
};

HumanTable human_table(const AnnotationDataset& ds) {
  HumanTable t;
  t.ids.assign(ds.samples().begin(), ds.samples().end());
  t.units.resize(t.ids.size());
  for (std::size_t s = 0; s < t.ids.size(); ++s) {
    for (std::size_t r = 0; r < ds.raters().size(); ++r) {
      if (ds.raters()[r].kind != RaterKind::human) continue;
      if (const auto* a = ds.at(s, r)) t.units[s].push_back(a->value);
    }
  }
  return t;
}

const ModelLabel& answer_for(const ModelAnswers& model, const std::string& sample_id) {
  const auto it = model.by_sample.find(sample_id);
  if (it == model.by_sample.end()) {
    throw PreconditionError("model '" + model.rater_id + "' has no answer for sample '" + sample_id + "'");
  }
  return it->second;
}

// Samples ordered by descending confidence, ties by ascending id.
std::vector<std::size_t> confidence_order(const std::vector<std::string>& ids, const ModelAnswers& model) {
  std::vector<std::size_t> order(ids.size());
  std::vector<double> confidence(ids.size());
  for (std::size_t s = 0; s < ids.size(); ++s) {
    const auto& answer = answer_for(model, ids[s]);
    if (!answer.confidence) {
      throw PreconditionError("model '" + model.rater_id + "' has no confidence for sample '" + ids[s] + "'");
    }
    confidence[s] = *answer.confidence;
    order[s] = s;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (confidence[a] != confidence[b]) return confidence[a] > confidence[b];
    return ids[a] < ids[b];
  });
  return order;
}

constexpr std::uint64_t kSelectionStream = 0x53454CULL;
constexpr std::uint64_t kPositionStream = 0x504F53ULL;

}  // namespace

std::vector<std::size_t> select_by_confidence(const AnnotationDataset& human_ds, const ModelAnswers& model,
                                              std::size_t count) {
  const std::vector<std::string> ids(human_ds.samples().begin(), human_ds.samples().end());
  auto order = confidence_order(ids, model);
  if (count > order.size()) throw ValidationError("selection larger than the dataset");
  order.resize(count);
  return order;
}

SweepCurve replacement_sweep(const AnnotationDataset& human_ds, const ModelAnswers& model, Strategy strategy,
                             const SweepOptions& options) {
  if (options.trials < 1) throw ValidationError("a sweep needs at least one trial");
  const auto metric = options.metric.value_or(default_metric(human_ds.scale().kind()));
  const auto table = human_table(human_ds);
  const std::size_t n = table.units.size();
  const auto grid = normalized_grid(options.fractions);

  // Model values per sample; every sample must be replaceable.
  std::vector<double> model_value(n);
  for (std::size_t s = 0; s < n; ++s) model_value[s] = answer_for(model, table.ids[s]).value;
  std::vector<std::size_t> ranked;
  if (strategy == Strategy::by_confidence) ranked = confidence_order(table.ids, model);

  const auto base = evaluate_alpha(table.units, metric);
  if (base.status == AlphaStatus::no_pairable_data) throw NoPairableData();
  if (base.status == AlphaStatus::degenerate) throw DegenerateData();

  SweepCurve curve;
  curve.strategy = strategy;
  curve.trials_per_point = options.trials;
  curve.baseline = bootstrap_alpha_ci(
      table.units, metric,
      BootstrapOptions{options.bootstrap_fraction, options.bootstrap_iterations, options.level, options.seed});

  for (std::size_t p = 0; p < grid.size(); ++p) {
    const double fraction = grid[p];
    const std::size_t m = count_for_fraction(fraction, n);
    SweepPoint point;
    point.fraction = fraction;
    point.strategy = strategy;
    point.samples_replaced = m;

    if (m == 0) {
      point.mean_alpha = base.result.alpha;
      point.ci = ConfidenceInterval{base.result.alpha, base.result.alpha, options.level, base.result.alpha};
      point.trials_used = options.trials;
      curve.points.push_back(point);
      continue;
    }

    std::vector<AlphaOutcome> outcomes(options.trials);
    detail::parallel_for(options.trials, [&](std::size_t trial) {
      std::vector<std::size_t> selected;
      if (strategy == Strategy::by_confidence) {
        selected.assign(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(m));
      } else {
        Rng selection(Rng::derive(options.seed, {kSelectionStream, p, trial}));
        selected = selection.sample_without_replacement(n, m);
      }
      std::sort(selected.begin(), selected.end());

      Rng position(Rng::derive(options.seed, {kPositionStream, p, trial}));
      auto units = table.units;
      for (const auto s : selected) {
        auto& unit = units[s];
        if (unit.empty()) continue;
        unit[position.uniform_index(unit.size())] = model_value[s];
      }
      outcomes[trial] = evaluate_alpha(units, metric);
    });

    std::vector<double> alphas;
    for (const auto& o : outcomes) {
      if (o) alphas.push_back(o.result.alpha);
    }
    if (alphas.empty()) throw DegenerateData();
    point.trials_used = alphas.size();
    point.mean_alpha = std::accumulate(alphas.begin(), alphas.end(), 0.0) / static_cast<double>(alphas.size());
    point.ci = percentile_interval(std::move(alphas), options.level, point.mean_alpha);
    curve.points.push_back(point);
  }
  return curve;
}

bool intervals_overlap(const ConfidenceInterval& a, const ConfidenceInterval& b) {
  return a.lower <= b.upper && b.lower <= a.upper;
}

double max_safe_fraction(const SweepCurve& curve) {
  auto points = curve.points;
  std::sort(points.begin(), points.end(), [](const SweepPoint& a, const SweepPoint& b) { return a.fraction < b.fraction; });
  double safe = 0.0;
  for (const auto& point : points) {
    if (!intervals_overlap(point.ci, curve.baseline)) break;
    safe = point.fraction;
  }
  return safe;
}

std::string sweep_to_csv(std::span<const SweepCurve> curves) {
  std::ostringstream out;
  csv::write_row(out, {"fraction", "strategy", "mean_alpha", "ci_lower", "ci_upper"});
  for (const auto& curve : curves) {
    for (const auto& p : curve.points) {
      csv::write_row(out, {format_number(p.fraction), std::string(to_string(p.strategy)), format_number(p.mean_alpha),
                           format_number(p.ci.lower), format_number(p.ci.upper)});
    }
  }
  return out.str();
}

std::vector<ProfilePoint> confidence_profile(const ModelAnswers& model) {
  std::vector<std::string> ids;
  for (const auto& [id, answer] : model.by_sample) ids.push_back(id);
  const auto order = confidence_order(ids, model);
  std::vector<ProfilePoint> profile;
  profile.reserve(order.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const auto& id = ids[order[rank]];
    profile.push_back(ProfilePoint{static_cast<double>(rank + 1) / static_cast<double>(order.size()),
                                   *model.by_sample.at(id).confidence, id});
  }
  return profile;
}

std::vector<MajorityPoint> majority_agreement_curve(const AnnotationDataset& human_ds, const ModelAnswers& model,
                                                    std::span<const double> fractions) {
  const auto table = human_table(human_ds);
  std::vector<std::string> ids;
  std::vector<bool> agrees;
  for (std::size_t s = 0; s < table.ids.size(); ++s) {
    const auto& unit = table.units[s];
    if (unit.empty()) continue;  // nobody rated it; out of scope
    if (unit.size() < 2) {
      throw PreconditionError("sample '" + table.ids[s] + "' has fewer than two human ratings");
    }
    const double answer = answer_for(model, table.ids[s]).value;
    const auto matches = static_cast<std::size_t>(std::count(unit.begin(), unit.end(), answer));
    ids.push_back(table.ids[s]);
    agrees.push_back(matches >= strict_majority(unit.size()));
  }
  if (ids.empty()) throw PreconditionError("no sample carries human ratings");

  const auto order = confidence_order(ids, model);
  std::vector<MajorityPoint> curve;
  for (const double f : fractions) {
    const std::size_t m = count_for_fraction(f, order.size());
    if (m == 0) continue;
    MajorityPoint point;
    point.fraction = f;
    point.samples = m;
    for (std::size_t i = 0; i < m; ++i) point.agreeing += agrees[order[i]] ? 1 : 0;
    point.share = static_cast<double>(point.agreeing) / static_cast<double>(m);
    curve.push_back(point);
  }
  return curve;
}

}  // namespace agreekit
