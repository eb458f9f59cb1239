#include <CLI11.hpp>

#include <iostream>

#include <nlohmann/json.hpp>

#include "agreekit/errors.hpp"
#include "agreekit/report.hpp"
#include "commands.hpp"

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kValidation = 2, kPrecondition = 3, kProvider = 4 };

void add_data_options(CLI::App* cmd, agreekit::cli::DataArgs& d, bool answers = true) {
  cmd->add_option("--data", d.data, "Annotation dataset (long CSV or JSON); repeatable")->check(CLI::ExistingFile);
  if (answers) {
    cmd->add_option("--answers", d.answers, "Model answers in the long CSV format; repeatable")
        ->check(CLI::ExistingFile);
  }
  cmd->add_option("--scale", d.scale, "Label scale JSON (required for CSV input)")->check(CLI::ExistingFile);
  cmd->add_option("--format", d.format, "Force the input format: csv or json");
  cmd->add_option("--k", d.k, "Ratings per sample in the study design (default: inferred)")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace agreekit::cli;

  CLI::App app{"Inter-rater agreement and LLM delegation analysis", "agreekit"};
  app.set_version_flag("--version", std::string(agreekit::tool_version()));
  app.require_subcommand(1);
  app.fallthrough();

  GlobalArgs g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--trials", g.trials, "Trials per sweep point")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--bootstrap-iters", g.bootstrap_iters, "Baseline subsampling iterations")
      ->capture_default_str()
      ->check(CLI::Range(100, 10'000'000));
  app.add_option("--bootstrap-fraction", g.bootstrap_fraction, "Share of samples drawn per baseline iteration")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--threshold", g.threshold, "Gate threshold on mean model-model alpha (strict >)")
      ->capture_default_str();
  app.add_option("--fractions", g.fractions, "Fraction grid, 'start:stop:step' or a comma list (default 0:1:0.1)");
  app.add_option("--level", g.level, "Confidence level")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  app.add_option("--metric", g.metric, "Distance metric: nominal, ordinal or interval (default from the scale)");
  app.add_flag("--json", g.json, "Print JSON instead of tables");

  DataArgs d;

  AgreeArgs agree_args;
  auto* agree = app.add_subcommand("agree", "Pairwise agreement matrix and zone summaries");
  add_data_options(agree, d);
  agree->add_option("--models", agree_args.models, "Restrict the model zones to these raters")->delimiter(',');
  agree->add_option("--out-dir", agree_args.out_dir, "Write matrix CSV/JSON and zone tables here");

  GateArgs gate_args;
  auto* gate = app.add_subcommand("gate", "Model-model agreement gate");
  add_data_options(gate, d);
  gate->add_option("--models", gate_args.models, "Models taking part (default: all)")->delimiter(',');

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "One-rating replacement sweep against the human baseline");
  add_data_options(sweep, d);
  sweep->add_option("--model", sweep_args.model, "Model whose answers replace human ratings");
  sweep->add_option("--strategy", sweep_args.strategy, "by_confidence, random or both")
      ->capture_default_str()
      ->check(CLI::IsMember({"by_confidence", "random", "both"}));
  sweep->add_option("--csv", sweep_args.csv_out, "Write the curves as CSV");

  PipelineArgs pipeline_args;
  auto* pipeline = app.add_subcommand("pipeline", "Gate, sweep, safe fraction and effort as one report");
  add_data_options(pipeline, d);
  pipeline->add_option("--models", pipeline_args.models, "Models for the gate (default: all)")->delimiter(',');
  pipeline->add_option("--sweep-model", pipeline_args.sweep_model, "Model driving the sweep");
  pipeline->add_option("--out", pipeline_args.out, "Report JSON path (default: stdout)");
  pipeline->add_option("--markdown", pipeline_args.markdown, "Markdown summary path");

  EffortArgs effort_args;
  auto* effort = app.add_subcommand("effort", "Effort saved by delegating one rating per sample");
  effort->add_option("--row", effort_args.rows, "k:fraction, e.g. 3:0.5; repeatable")->required();

  AnnotateArgs annotate_args;
  auto* annotate = app.add_subcommand("annotate", "Annotate samples with an LLM");
  annotate->add_option("--samples", annotate_args.samples, "CSV with sample_id,text")
      ->required()
      ->check(CLI::ExistingFile);
  annotate->add_option("--template", annotate_args.template_path, "Prompt template")
      ->required()
      ->check(CLI::ExistingFile);
  annotate->add_option("--shots", annotate_args.shots, "Few-shot examples JSON (default: <template>.shots.json)")
      ->check(CLI::ExistingFile);
  annotate->add_option("--provider", annotate_args.provider, "Provider config JSON")
      ->required()
      ->check(CLI::ExistingFile);
  annotate->add_option("--provider-model", annotate_args.provider_model, "Select one model from the config");
  annotate->add_option("--rater-id", annotate_args.rater_id, "Rater id in the output (default: model name)");
  annotate->add_option("--scale", d.scale, "Check the template options against this scale")
      ->check(CLI::ExistingFile);
  annotate->add_option("--cassette", annotate_args.cassette, "Record/replay file (JSON lines)");
  annotate->add_option("--cassette-mode", annotate_args.cassette_mode, "replay or record")
      ->capture_default_str()
      ->check(CLI::IsMember({"replay", "record"}));
  annotate->add_option("--out", annotate_args.out, "Answers CSV")->required();
  annotate->add_option("--failures", annotate_args.failures, "Failure manifest (default: <out>.failures.csv)");

  ModelArgs profile_args;
  auto* profile = app.add_subcommand("profile", "Model confidence profile, most confident first");
  add_data_options(profile, d);
  profile->add_option("--model", profile_args.model, "Model rater");
  profile->add_option("--out", profile_args.out, "Output path (default: stdout)");

  ModelArgs majority_args;
  auto* majority = app.add_subcommand("majority", "Model vs. human-majority agreement by confidence");
  add_data_options(majority, d);
  majority->add_option("--model", majority_args.model, "Model rater");
  majority->add_option("--out", majority_args.out, "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*agree) return cmd_agree(g, d, agree_args);
    if (*gate) return cmd_gate(g, d, gate_args);
    if (*sweep) return cmd_sweep(g, d, sweep_args);
    if (*pipeline) return cmd_pipeline(g, d, pipeline_args);
    if (*effort) return cmd_effort(g, effort_args);
    if (*annotate) return cmd_annotate(g, d, annotate_args);
    if (*profile) return cmd_profile(g, d, profile_args);
    if (*majority) return cmd_majority(g, d, majority_args);
  } catch (const agreekit::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const agreekit::ProviderError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kProvider;
  } catch (const agreekit::CassetteMiss& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kProvider;
  } catch (const agreekit::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const agreekit::NoPairableData& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const agreekit::DegenerateData& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON input: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
