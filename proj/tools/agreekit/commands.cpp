#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "agreekit/agreement.hpp"
#include "agreekit/delegation.hpp"
#include "agreekit/errors.hpp"
#include "agreekit/hash.hpp"
#include "agreekit/llm/annotator.hpp"
#include "agreekit/llm/cassette.hpp"
#include "agreekit/llm/prompt.hpp"
#include "agreekit/llm/provider.hpp"
#include "agreekit/report.hpp"
#include "agreekit/scale.hpp"

namespace agreekit::cli {

namespace {

std::optional<DistanceMetric> metric_of(const GlobalArgs& g) {
  if (g.metric.empty()) return std::nullopt;
  return distance_metric_from_string(g.metric);
}

SweepOptions sweep_options(const GlobalArgs& g) {
  SweepOptions o;
  if (!g.fractions.empty()) o.fractions = parse_fraction_grid(g.fractions);
  o.trials = g.trials;
  o.level = g.level;
  o.bootstrap_iterations = g.bootstrap_iters;
  o.bootstrap_fraction = g.bootstrap_fraction;
  o.seed = RngSeed{g.seed};
  o.metric = metric_of(g);
  return o;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

AnnotationDataset humans_of(const AnnotationDataset& ds) {
  auto humans = subset_by_kind(ds, RaterKind::human);
  if (humans.raters().empty()) throw ValidationError("the dataset has no human raters");
  return humans;
}

}  // namespace

int cmd_agree(const GlobalArgs& g, const DataArgs& d, const AgreeArgs& a) {
  const auto in = load_inputs(d);
  print_warnings(in.warnings);
  const auto& ds = in.dataset;
  if (ds.annotation_count() == 0) throw NoPairableData();
  check_models(ds, a.models);

  const auto matrix = agreement_matrix(ds, metric_of(g));
  bool any_pair = false;
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    for (std::size_t j = i + 1; j < matrix.size(); ++j) any_pair = any_pair || matrix.at(i, j).has_value();
  }
  if (!any_pair) throw NoPairableData();

  std::optional<std::set<std::string>> subset;
  if (!a.models.empty()) subset.emplace(a.models.begin(), a.models.end());
  const auto zones = to_json(zone_summaries(matrix, subset));

  if (!a.out_dir.empty()) {
    std::filesystem::create_directories(a.out_dir);
    const std::filesystem::path dir(a.out_dir);
    write_text((dir / "agreement_matrix.csv").string(), matrix_to_csv(matrix));
    write_text((dir / "agreement_matrix.json").string(), dump(matrix_to_json(matrix)));
    write_text((dir / "zones.json").string(), dump(zones));
    write_text((dir / "zones.md").string(), zone_table_markdown(zones));
  }

  if (g.json) {
    std::cout << dump({{"matrix", matrix_to_json(matrix)}, {"zone_summaries", zones}});
  } else {
    std::cout << zone_table_markdown(zones);
    if (a.out_dir.empty()) std::cout << "\n" << matrix_to_csv(matrix);
  }
  return 0;
}

int cmd_gate(const GlobalArgs& g, const DataArgs& d, const GateArgs& a) {
  const auto in = load_inputs(d);
  print_warnings(in.warnings);
  check_models(in.dataset, a.models);
  const auto decision = gate(in.dataset, a.models, g.threshold, metric_of(g));
  if (g.json) {
    std::cout << dump(to_json(decision));
  } else {
    std::cout << "model-model mean alpha " << format_alpha(decision.mm_mean_alpha) << " over "
              << decision.model_pairs << " pairs, threshold " << format_alpha(decision.threshold) << ": "
              << to_string(decision.outcome) << "\n";
  }
  return 0;
}

int cmd_sweep(const GlobalArgs& g, const DataArgs& d, const SweepArgs& a) {
  const auto in = load_inputs(d);
  print_warnings(in.warnings);
  const auto model_id = pick_model(in.dataset, a.model);
  const auto humans = humans_of(in.dataset);
  const auto answers = model_answers_of(in.dataset, model_id);

  std::vector<Strategy> strategies;
  if (a.strategy == "both") {
    strategies = {Strategy::by_confidence, Strategy::random};
  } else {
    strategies = {strategy_from_string(a.strategy)};
  }
  const auto options = sweep_options(g);
  std::vector<SweepCurve> curves;
  for (const auto s : strategies) {
    if (s == Strategy::by_confidence && !answers.has_confidence()) {
      throw PreconditionError("model '" + model_id +
                              "' has no confidences; the by_confidence strategy needs them (use --strategy random)");
    }
    curves.push_back(replacement_sweep(humans, answers, s, options));
  }

  if (!a.csv_out.empty()) write_text(a.csv_out, sweep_to_csv(curves));
  if (g.json) {
    auto j = nlohmann::json::array();
    for (const auto& c : curves) j.push_back(to_json(c));
    std::cout << dump({{"model", model_id}, {"sweeps", j}});
  } else {
    for (std::size_t i = 0; i < curves.size(); ++i) {
      if (i) std::cout << "\n";
      std::cout << sweep_table_markdown(to_json(curves[i]));
    }
  }
  return 0;
}

int cmd_pipeline(const GlobalArgs& g, const DataArgs& d, const PipelineArgs& a) {
  const auto in = load_inputs(d);
  print_warnings(in.warnings);
  check_models(in.dataset, a.models);

  PipelineOptions options;
  options.threshold = g.threshold;
  options.sweep = sweep_options(g);
  options.models = a.models;
  if (!a.sweep_model.empty()) {
    check_models(in.dataset, {a.sweep_model});
    options.sweep_model = a.sweep_model;
  }
  if (d.k > 0) options.ratings_per_sample = d.k;

  const auto report = run_pipeline(in.dataset, options, in.inputs, in.warnings);
  const auto json_text = dump(report);
  const auto markdown = render_markdown(report);
  if (!a.out.empty()) write_text(a.out, json_text);
  if (!a.markdown.empty()) write_text(a.markdown, markdown);
  if (a.out.empty()) {
    std::cout << json_text;
  } else if (a.markdown.empty() && !g.json) {
    std::cout << markdown;
  }
  return 0;
}

int cmd_effort(const GlobalArgs& g, const EffortArgs& a) {
  if (a.rows.empty()) throw ValidationError("give at least one --row k:fraction");
  auto rows = nlohmann::json::array();
  for (const auto& row : a.rows) {
    const auto colon = row.find(':');
    const auto k = colon == std::string::npos ? std::nullopt : parse_number(std::string_view(row).substr(0, colon));
    const auto f = colon == std::string::npos ? std::nullopt : parse_number(std::string_view(row).substr(colon + 1));
    if (!k || !f || *k != static_cast<int>(*k)) {
      throw ValidationError("bad --row '" + row + "' (expected k:fraction, e.g. 3:0.5)");
    }
    rows.push_back(to_json(effort_report(static_cast<int>(*k), *f)));
  }
  std::cout << (g.json ? dump(rows) : effort_table_markdown(rows));
  return 0;
}

int cmd_annotate(const GlobalArgs&, const DataArgs& d, const AnnotateArgs& a) {
  using namespace agreekit::llm;
  const auto samples = load_samples(a.samples);
  const auto prompt_template =
      load_template(a.template_path, a.shots.empty() ? std::nullopt : std::optional<std::string>(a.shots));
  for (const auto& w : lint_template(prompt_template)) std::cerr << "warning: " << w << "\n";
  if (!d.scale.empty()) check_options_match(prompt_template, LabelScale::load(d.scale));

  auto configs = ProviderConfig::load(a.provider);
  if (!a.provider_model.empty()) {
    std::erase_if(configs, [&](const ProviderConfig& c) { return c.model != a.provider_model; });
    if (configs.empty()) throw ValidationError("no provider config for model '" + a.provider_model + "'");
  }
  if (configs.size() != 1) {
    throw ValidationError("the provider file lists " + std::to_string(configs.size()) +
                          " configurations; pick one with --provider-model");
  }
  const auto& config = configs.front();

  std::optional<Cassette> cassette;
  if (!a.cassette.empty()) cassette.emplace(a.cassette, cassette_mode_from_string(a.cassette_mode));
  std::unique_ptr<Provider> provider;
  if (!cassette || cassette->mode() == CassetteMode::record) provider = make_http_provider(config);

  RetryPolicy retry;
  retry.max_retries = config.max_retries;
  retry.base_delay = std::chrono::milliseconds(config.retry_base_ms);
  Annotator annotator(prompt_template, config, provider.get(), cassette ? &*cassette : nullptr, retry);
  const auto answers = annotator.annotate(samples);

  const std::string rater = a.rater_id.empty() ? config.model : a.rater_id;
  std::ostringstream csv;
  write_answers_csv(answers, rater, csv);
  write_text(a.out, csv.str());

  std::size_t provider_failures = 0, parse_failures = 0;
  for (const auto& ans : answers) {
    if (ans.failure == FailureKind::provider) ++provider_failures;
    if (ans.failure == FailureKind::parse) ++parse_failures;
  }
  const std::string manifest_path = a.failures.empty() ? a.out + ".failures.csv" : a.failures;
  if (provider_failures + parse_failures > 0) {
    std::ostringstream manifest;
    write_failure_manifest(answers, manifest);
    write_text(manifest_path, manifest.str());
  } else if (std::filesystem::exists(manifest_path)) {
    std::filesystem::remove(manifest_path);
  }

  std::cerr << "annotated " << answers.size() - provider_failures - parse_failures << "/" << answers.size()
            << " samples with '" << config.model << "' (" << annotator.provider_calls() << " provider calls)\n";
  if (parse_failures) std::cerr << "warning: " << parse_failures << " answers did not parse; see " << manifest_path << "\n";
  if (provider_failures) {
    std::cerr << "error: " << provider_failures << " samples failed at the provider; see " << manifest_path << "\n";
    return 4;
  }
  return 0;
}

int cmd_profile(const GlobalArgs& g, const DataArgs& d, const ModelArgs& a) {
  const auto in = load_inputs(d);
  print_warnings(in.warnings);
  const auto answers = model_answers_of(in.dataset, pick_model(in.dataset, a.model));
  if (!answers.has_confidence()) throw PreconditionError("model '" + answers.rater_id + "' has no confidences");
  const auto profile = confidence_profile(answers);

  std::ostringstream out;
  if (g.json) {
    auto j = nlohmann::json::array();
    for (const auto& p : profile) {
      j.push_back({{"fraction", p.fraction}, {"confidence", p.confidence}, {"sample_id", p.sample_id}});
    }
    out << dump(j);
  } else {
    out << "fraction,confidence,sample_id\n";
    for (const auto& p : profile) {
      out << format_number(p.fraction) << ',' << format_number(p.confidence) << ',' << p.sample_id << '\n';
    }
  }
  if (a.out.empty()) {
    std::cout << out.str();
  } else {
    write_text(a.out, out.str());
  }
  return 0;
}

int cmd_majority(const GlobalArgs& g, const DataArgs& d, const ModelArgs& a) {
  const auto in = load_inputs(d);
  print_warnings(in.warnings);
  const auto answers = model_answers_of(in.dataset, pick_model(in.dataset, a.model));
  if (!answers.has_confidence()) throw PreconditionError("model '" + answers.rater_id + "' has no confidences");
  const auto fractions = g.fractions.empty() ? default_fraction_grid() : parse_fraction_grid(g.fractions);
  const auto curve = majority_agreement_curve(humans_of(in.dataset), answers, fractions);

  std::ostringstream out;
  if (g.json) {
    auto j = nlohmann::json::array();
    for (const auto& p : curve) {
      j.push_back({{"fraction", p.fraction}, {"samples", p.samples}, {"agreeing", p.agreeing}, {"share", p.share}});
    }
    out << dump(j);
  } else {
    out << "fraction,samples,agreeing,share\n";
    for (const auto& p : curve) {
      out << format_number(p.fraction) << ',' << p.samples << ',' << p.agreeing << ',' << format_number(p.share)
          << '\n';
    }
  }
  if (a.out.empty()) {
    std::cout << out.str();
  } else {
    write_text(a.out, out.str());
  }
  return 0;
}

}  // namespace agreekit::cli
