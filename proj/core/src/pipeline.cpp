#include "agreekit/pipeline.hpp"

#include <algorithm>
#include <set>

#include "agreekit/agreement.hpp"
#include "agreekit/errors.hpp"
#include "agreekit/report.hpp"

namespace agreekit {

namespace {

bool covers_samples_with_confidence(const ModelAnswers& answers, const AnnotationDataset& humans) {
  for (const auto& s : humans.samples()) {
    const auto it = answers.by_sample.find(s);
    if (it == answers.by_sample.end() || !it->second.confidence) return false;
  }
  return true;
}

std::vector<std::string> report_notes(const PipelineOptions& options) {
  return {
      "Alpha uses the coincidence-matrix formulation with unit weight 1/(m_u - 1).",
      "Zone means and medians are taken over rater-pair cells, unweighted by overlap size.",
      "Intervals are percentile intervals (linear interpolation) at level " + format_number(options.sweep.level) +
          "; sweep intervals span per-trial alphas, the baseline spans subsample alphas.",
      "The baseline subsamples " + format_number(options.sweep.bootstrap_fraction) +
          " of the samples without replacement per iteration.",
      "Model confidence is the geometric mean probability of the answer tokens.",
      "A sweep fraction is safe when its interval and every earlier one overlap the baseline interval.",
  };
}

}  // namespace

nlohmann::json run_pipeline(const AnnotationDataset& combined, const PipelineOptions& options,
                            const std::vector<InputFile>& inputs, const std::vector<std::string>& warnings) {
  const auto humans = subset_by_kind(combined, RaterKind::human);
  if (humans.raters().empty()) throw PreconditionError("the dataset has no human raters");
  const int k = options.ratings_per_sample.value_or(combined.ratings_per_sample() > 0
                                                        ? combined.ratings_per_sample()
                                                        : humans.infer_ratings_per_sample());

  std::vector<std::string> models = options.models;
  if (models.empty()) models = combined.rater_ids(RaterKind::model);
  if (models.size() < 2) {
    throw PreconditionError("the gate needs answers from at least two models (found " +
                            std::to_string(models.size()) + ")");
  }
  const auto metric = options.sweep.metric.value_or(default_metric(combined.scale().kind()));

  const auto matrix = agreement_matrix(combined, metric);
  const auto zones = zone_summaries(matrix, std::set<std::string>(models.begin(), models.end()));
  const auto decision = gate(combined, models, options.threshold, metric);
  const bool replace_all = decision.outcome == GateOutcome::replace_one_rating_all_samples;

  std::optional<std::string> sweep_model = options.sweep_model;
  if (!sweep_model) {
    for (const auto& id : models) {
      if (covers_samples_with_confidence(model_answers_of(combined, id), humans)) {
        sweep_model = id;
        break;
      }
    }
  }
  if (!sweep_model) {
    if (!replace_all) {
      throw PreconditionError(
          "model-model agreement is at or below the threshold, so delegation must be selective, but no model "
          "has a confidence for every sample; re-run annotation with a provider that returns token "
          "log-probabilities, or pass --sweep-model with a model that has confidences");
    }
    sweep_model = models.front();
  }
  const auto answers = model_answers_of(combined, *sweep_model);
  if (!replace_all && !covers_samples_with_confidence(answers, humans)) {
    throw PreconditionError("model '" + *sweep_model +
                            "' lacks confidences for some samples; selective delegation ranks samples by confidence");
  }

  const Strategy strategy = replace_all ? Strategy::random : Strategy::by_confidence;
  auto sweep_options = options.sweep;
  sweep_options.metric = metric;
  const auto curve = replacement_sweep(humans, answers, strategy, sweep_options);
  const double safe = max_safe_fraction(curve);
  const double recommended = replace_all ? 1.0 : safe;
  const auto effort = effort_report(k, recommended);

  nlohmann::json report;
  report["tool"] = {{"name", "agreekit"}, {"version", std::string(tool_version())}};
  auto& in = report["inputs"] = nlohmann::json::array();
  for (const auto& f : inputs) in.push_back({{"role", f.role}, {"path", f.path}, {"sha256", f.sha256}});

  report["parameters"] = {{"seed", options.sweep.seed.value},
                          {"threshold", options.threshold},
                          {"fractions", options.sweep.fractions},
                          {"trials", options.sweep.trials},
                          {"bootstrap_iterations", options.sweep.bootstrap_iterations},
                          {"bootstrap_fraction", options.sweep.bootstrap_fraction},
                          {"level", options.sweep.level},
                          {"metric", std::string(to_string(metric))},
                          {"models", models},
                          {"sweep_model", *sweep_model},
                          {"ratings_per_sample", k}};
  report["zone_summaries"] = to_json(zones);
  report["gate"] = to_json(decision);
  report["sweeps"] = nlohmann::json::array({to_json(curve)});
  report["safe_fractions"] = {{std::string(to_string(strategy)), safe}};

  std::string text;
  if (replace_all) {
    text = "Model-model agreement " + format_alpha(decision.mm_mean_alpha) + " exceeds the threshold " +
           format_alpha(decision.threshold) + ": replace one human rating with the answer of '" + *sweep_model +
           "' on 100% of samples. The random-selection sweep stays within the human baseline up to " +
           format_percent(100.0 * safe) + " of samples.";
  } else {
    text = "Model-model agreement " + format_alpha(decision.mm_mean_alpha) + " does not exceed the threshold " +
           format_alpha(decision.threshold) + ": delegate selectively, replacing one human rating with the answer of '" +
           *sweep_model + "' only on the " + format_percent(100.0 * safe) +
           " of samples where it is most confident.";
  }
  report["recommendation"] = {{"action", std::string(to_string(decision.outcome))},
                              {"strategy", std::string(to_string(strategy))},
                              {"model", *sweep_model},
                              {"fraction", recommended},
                              {"text", text}};
  report["effort"] = nlohmann::json::array({to_json(effort)});
  report["notes"] = report_notes(options);
  report["warnings"] = warnings;
  return report;
}

}  // namespace agreekit
