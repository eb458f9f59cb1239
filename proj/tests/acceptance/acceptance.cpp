// Acceptance checks. Prints one line per criterion:
//   PASS|FAIL|SKIP <n> <title>: <detail>
// Exit status is 1 when anything failed. With --criterion N only that
// criterion runs, and a SKIP exits with 77 so ctest can report it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "agreekit/agreement.hpp"
#include "agreekit/alpha.hpp"
#include "agreekit/dataset.hpp"
#include "agreekit/delegation.hpp"
#include "agreekit/llm/annotator.hpp"
#include "agreekit/llm/cassette.hpp"
#include "agreekit/llm/parse.hpp"
#include "agreekit/llm/prompt.hpp"
#include "agreekit/llm/provider.hpp"
#include "agreekit/rng.hpp"
#include "agreekit/stats.hpp"
#include "alpha_oracle.hpp"
#include "synthetic.hpp"

using namespace agreekit;
namespace fs = std::filesystem;

namespace {

enum class Status { pass, fail, skip };

struct Outcome {
  Status status = Status::pass;
  std::string detail;
};

Outcome pass(std::string d) { return {Status::pass, std::move(d)}; }
Outcome fail(std::string d) { return {Status::fail, std::move(d)}; }

std::string fmt(double v, int digits = 4) {
  std::ostringstream out;
  out.precision(digits);
  out << std::fixed << v;
  return out.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

oracle::Metric to_oracle(DistanceMetric m) {
  switch (m) {
    case DistanceMetric::nominal: return oracle::Metric::nominal;
    case DistanceMetric::ordinal: return oracle::Metric::ordinal;
    case DistanceMetric::interval: return oracle::Metric::interval;
  }
  return oracle::Metric::nominal;
}

// 1 -------------------------------------------------------------------------

Outcome oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(20240901);
  const DistanceMetric metrics[] = {DistanceMetric::nominal, DistanceMetric::ordinal, DistanceMetric::interval};
  std::size_t compared = 0, undefined = 0;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t raters = 2 + rng.uniform_index(4);   // 2..5
    const std::size_t samples = 1 + rng.uniform_index(8);  // 1..8
    const std::size_t labels = 2 + rng.uniform_index(2);   // 2..3
    const double missing = rng.uniform01() * 0.3;
    std::vector<Unit> units(samples);
    for (auto& u : units) {
      for (std::size_t r = 0; r < raters; ++r) {
        if (rng.uniform01() < missing) continue;
        u.push_back(static_cast<double>(rng.uniform_index(labels)));
      }
    }
    const auto metric = metrics[i % 3];
    const auto got = evaluate_alpha(units, metric);
    const auto want = oracle::alpha_by_pairs(units, to_oracle(metric));
    if (!want) {
      if (got) return fail("dataset " + std::to_string(i) + ": oracle undefined, implementation gave a value");
      ++undefined;
      continue;
    }
    if (!got) return fail("dataset " + std::to_string(i) + ": implementation undefined, oracle " + fmt(want->alpha));
    const double diff = std::abs(got.result.alpha - want->alpha);
    worst = std::max(worst, diff);
    if (diff > 1e-12) {
      std::ostringstream out;
      out << "dataset " << i << ": |diff| = " << diff;
      return fail(out.str());
    }
    ++compared;
  }
  const double elapsed = seconds_since(start);
  std::ostringstream out;
  out << compared << " defined + " << undefined << " undefined datasets agree, max |diff| " << worst << ", "
      << fmt(elapsed, 2) << " s";
  if (elapsed >= 10.0) return fail(out.str() + " (over 10 s)");
  return pass(out.str());
}

// 2 -------------------------------------------------------------------------

AnnotationDataset two_raters(const std::vector<std::string>& r1, const std::vector<std::string>& r2,
                             const LabelScale& scale) {
  AnnotationDataset ds(scale);
  ds.add_rater({"r1", RaterKind::human, ""});
  ds.add_rater({"r2", RaterKind::human, ""});
  for (std::size_t s = 0; s < r1.size(); ++s) {
    const auto id = testdata::sample_name(s);
    ds.add_sample(id);
    ds.annotate(id, "r1", r1[s]);
    ds.annotate(id, "r2", r2[s]);
  }
  return ds;
}

Outcome analytic_cases() {
  const auto ab = LabelScale::nominal({"a", "b"});
  const double perfect = compute_alpha(two_raters({"a", "b", "a", "b"}, {"a", "b", "a", "b"}, ab)).alpha;
  if (perfect != 1.0) return fail("perfect agreement gave " + fmt(perfect, 17));
  const double systematic = compute_alpha(two_raters({"a", "b", "a", "b"}, {"b", "a", "b", "a"}, ab)).alpha;
  if (systematic != -0.75) return fail("systematic disagreement gave " + fmt(systematic, 17));

  const auto scale = LabelScale::nominal({"p", "q", "r", "s"});
  Rng rng(77);
  std::vector<std::string> r1, r2;
  for (int s = 0; s < 10000; ++s) {
    r1.push_back(scale.labels()[rng.uniform_index(4)]);
    r2.push_back(scale.labels()[rng.uniform_index(4)]);
  }
  const double random_alpha = compute_alpha(two_raters(r1, r2, scale)).alpha;
  if (std::abs(random_alpha) >= 0.05) return fail("uniform random data gave " + fmt(random_alpha));
  return pass("perfect = 1, [a,b,a,b] vs [b,a,b,a] = -0.75, uniform random (n = 10000) = " + fmt(random_alpha));
}

// 3 -------------------------------------------------------------------------

struct ReplicationTask {
  const char* dir;
  double hh_mean;
};

// Human-human means reported for each task. A task directory holds
// annotations.csv (long format) and scale.json.
constexpr ReplicationTask kReplicationTasks[] = {
    {"code_summarization_accuracy", 0.38}, {"code_summarization_adequacy", 0.40},
    {"code_summarization_conciseness", 0.24}, {"code_summarization_similarity", 0.64},
    {"name_value", 0.52}, {"causality", 0.44}, {"semantic_similarity_goals", 0.83},
    {"semantic_similarity_operations", 0.74}, {"semantic_similarity_effects", 0.71}, {"static_analysis", 0.80},
};

Outcome replication() {
  const char* root = std::getenv("AGREEKIT_REPLICATION_DIR");
  if (!root || !*root || !fs::is_directory(root)) {
    return {Status::skip, "AGREEKIT_REPLICATION_DIR not set or missing; all tasks excluded"};
  }
  std::size_t matched = 0;
  std::vector<std::string> excluded, notes;
  for (const auto& task : kReplicationTasks) {
    const fs::path dir = fs::path(root) / task.dir;
    const auto csv = dir / "annotations.csv";
    const auto scale_path = dir / "scale.json";
    if (!fs::exists(csv) || !fs::exists(scale_path)) {
      excluded.push_back(task.dir);
      continue;
    }
    try {
      const auto ds = load_dataset(csv.string(), DataFormat::csv_long, {LabelScale::load(scale_path.string())});
      const auto humans = subset_by_kind(ds, RaterKind::human);
      const auto hh = find_zone(zone_summaries(agreement_matrix(humans)), Zone::human_human);
      if (!hh) {
        excluded.push_back(std::string(task.dir) + " (no defined human pair)");
        continue;
      }
      const bool ok = std::abs(hh->mean_alpha - task.hh_mean) <= 0.02;
      if (ok) ++matched;
      notes.push_back(std::string(task.dir) + " " + fmt(hh->mean_alpha, 2) + (ok ? "" : " (expected " + fmt(task.hh_mean, 2) + ")"));
    } catch (const std::exception& e) {
      excluded.push_back(std::string(task.dir) + " (" + e.what() + ")");
    }
  }
  std::string detail = std::to_string(matched) + " task(s) within 0.02";
  for (const auto& n : notes) detail += "; " + n;
  if (!excluded.empty()) {
    detail += "; excluded:";
    for (const auto& e : excluded) detail += " " + e;
  }
  if (notes.empty()) return {Status::skip, detail};
  return matched >= 3 ? pass(detail) : fail(detail);
}

// 4 -------------------------------------------------------------------------

Outcome effort_rows() {
  struct Row {
    int k;
    double f;
    double expected;
  };
  const Row rows[] = {{3, 1.0, 33.0}, {11, 1.0, 9.0}, {2, 0.6, 30.0}, {2, 0.5, 25.0}, {3, 0.5, 16.5}};
  std::string detail;
  for (const auto& r : rows) {
    const double got = round_half_up(effort_report(r.k, r.f).tabulated_overall_pct, 1);
    const std::string row = "(" + std::to_string(r.k) + ", " + fmt(r.f, 1) + ") -> " + fmt(got, 1) + "%";
    if (got != r.expected) return fail(row + ", expected " + fmt(r.expected, 1) + "%");
    detail += (detail.empty() ? "" : ", ") + row;
  }
  return pass(detail);
}

// 5 -------------------------------------------------------------------------

Outcome spearman_checks() {
  const std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8};
  const std::vector<double> up{2, 3, 5, 8, 13, 21, 34, 55};
  std::vector<double> down(up.rbegin(), up.rend());
  if (spearman(x, up, RngSeed{1}, 100).rho != 1.0) return fail("monotone increasing vectors did not give rho = 1");
  if (spearman(x, down, RngSeed{1}, 100).rho != -1.0) return fail("monotone decreasing vectors did not give rho = -1");

  // Mean model-model and human-model alpha for the ten annotation tasks.
  const std::vector<double> mm{0.76, 0.74, 0.74, 0.68, 0.66, 0.39, 0.82, 0.77, 0.69, 0.12};
  const std::vector<double> hm{0.48, 0.41, 0.21, 0.44, 0.49, 0.22, 0.77, 0.67, 0.64, 0.15};
  const auto r = spearman(mm, hm, RngSeed{2024}, 20000);
  const std::string detail = "monotone +/-1 exact; task table rho = " + fmt(r.rho) + ", p = " + fmt(r.p_value);
  if (std::abs(r.rho - 0.65) > 0.02 || !(r.p_value < 0.05)) return fail(detail);
  return pass(detail);
}

// 6 -------------------------------------------------------------------------

Outcome sweep_invariants() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::size_t> latent;
  const auto humans = testdata::noisy_humans(testdata::likert4(), {.samples = 400, .humans = 3, .seed = 404}, &latent);
  auto combined = humans;
  testdata::add_model(combined, "m", latent, 0.75, 405);
  const auto model = model_answers_of(combined, "m");

  SweepOptions options;
  options.seed = RngSeed{606};
  const auto curve = replacement_sweep(humans, model, Strategy::by_confidence, options);
  const double base = compute_alpha(humans).alpha;
  if (curve.points.empty() || curve.points.front().fraction != 0.0) return fail("grid does not start at 0");
  if (curve.points.front().mean_alpha != base) return fail("fraction-0 point differs from the human-only alpha");

  std::vector<std::size_t> previous;
  for (const auto& p : curve.points) {
    const auto chosen = select_by_confidence(humans, model, count_for_fraction(p.fraction, humans.samples().size()));
    const std::set<std::size_t> current(chosen.begin(), chosen.end());
    for (const auto s : previous) {
      if (!current.contains(s)) return fail("selection at " + fmt(p.fraction, 2) + " does not contain the previous one");
    }
    previous = chosen;
  }

  const SweepCurve again[] = {replacement_sweep(humans, model, Strategy::by_confidence, options),
                              replacement_sweep(humans, model, Strategy::random, options),
                              replacement_sweep(humans, model, Strategy::random, options)};
  if (sweep_to_csv(std::span(&curve, 1)) != sweep_to_csv(std::span(&again[0], 1)) ||
      sweep_to_csv(std::span(&again[1], 1)) != sweep_to_csv(std::span(&again[2], 1))) {
    return fail("identical seeds produced different curves");
  }

  auto flat = humans;
  testdata::add_model(flat, "m", latent, 0.75, 405, true, 0.7);
  const auto flat_model = model_answers_of(flat, "m");
  const auto by_conf = replacement_sweep(humans, flat_model, Strategy::by_confidence, options);
  const auto random = replacement_sweep(humans, flat_model, Strategy::random, options);
  for (std::size_t i = 0; i < by_conf.points.size(); ++i) {
    if (!intervals_overlap(by_conf.points[i].ci, random.points[i].ci)) {
      return fail("equal-confidence strategies separate at fraction " + fmt(by_conf.points[i].fraction, 2));
    }
  }

  const double elapsed = seconds_since(start);
  std::string detail = "400 samples, " + std::to_string(curve.points.size()) + " fractions x " +
                       std::to_string(options.trials) +
                       " trials: fraction-0 bitwise, nested selections, reproducible, equal-confidence CIs overlap; " +
                       fmt(elapsed, 2) + " s";
  if (elapsed >= 60.0) return fail(detail + " (over 60 s)");
  return pass(detail);
}

// 7 -------------------------------------------------------------------------

// Two models with nominal alpha exactly 0.5 (8 samples, 2 disagreements).
AnnotationDataset half_alpha(bool reversed) {
  const std::vector<std::pair<std::string, std::string>> rows{{"a", "b"}, {"b", "a"}, {"a", "a"}, {"a", "a"},
                                                              {"b", "b"}, {"b", "b"}, {"b", "b"}, {"b", "b"}};
  AnnotationDataset ds(LabelScale::nominal({"a", "b"}));
  const std::vector<std::string> ids = reversed ? std::vector<std::string>{"m2", "m1"}
                                                : std::vector<std::string>{"m1", "m2"};
  for (const auto& id : ids) ds.add_rater({id, RaterKind::model, ""});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t s = reversed ? rows.size() - 1 - i : i;
    const auto id = testdata::sample_name(s);
    ds.add_sample(id);
    ds.annotate(id, "m1", rows[s].first);
    ds.annotate(id, "m2", rows[s].second);
  }
  return ds;
}

Outcome gate_threshold() {
  const double eps = 1e-9;
  const std::vector<std::string> all;
  const auto ds = half_alpha(false);
  const auto below = gate(ds, all, 0.5 - eps);
  const auto at = gate(ds, all, 0.5);
  const auto above = gate(ds, all, 0.5 + eps);
  if (at.mm_mean_alpha != 0.5) return fail("fixture alpha is " + fmt(at.mm_mean_alpha, 17) + ", not 0.5");
  if (below.outcome != GateOutcome::replace_one_rating_all_samples) return fail("threshold 0.5 - eps did not replace");
  if (at.outcome != GateOutcome::selective_high_confidence_only) return fail("threshold 0.5 replaced (not strict)");
  if (above.outcome != GateOutcome::selective_high_confidence_only) return fail("threshold 0.5 + eps replaced");
  const auto shuffled = gate(half_alpha(true), all, 0.5 - eps);
  if (shuffled.outcome != below.outcome || shuffled.mm_mean_alpha != below.mm_mean_alpha) {
    return fail("decision changed under rater and sample reordering");
  }
  return pass("MM alpha 0.5: replace at 0.5 - eps, selective at 0.5 and 0.5 + eps; reordering invariant");
}

// 8 -------------------------------------------------------------------------

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome llm_offline() {
  const fs::path dir = fs::path(AGREEKIT_TEST_DATA_DIR) / "llm";
  const auto prompt = llm::load_template((dir / "triage.prompt").string());
  const auto config = llm::ProviderConfig::load((dir / "provider.json").string()).at(0);
  const auto samples = llm::load_samples((dir / "triage_samples.csv").string());
  llm::Cassette cassette((dir / "triage.cassette.jsonl").string(), llm::CassetteMode::replay);
  if (cassette.size() < 20) return fail("cassette holds only " + std::to_string(cassette.size()) + " records");

  llm::RetryPolicy retry;
  retry.sleep = [](auto) {};
  llm::Annotator first(prompt, config, nullptr, &cassette, retry);
  llm::Annotator second(prompt, config, nullptr, &cassette, retry);
  const auto a = first.annotate(samples);
  const auto b = second.annotate(samples);
  if (a != b) return fail("two replays differ");
  if (first.provider_calls() + second.provider_calls() != 0) return fail("replay called the provider");
  std::ostringstream csv;
  llm::write_answers_csv(a, config.model, csv);
  if (csv.str() != read_file(dir / "triage.expected.csv")) return fail("replayed answers differ from the recorded CSV");

  const std::vector<std::vector<std::string>> option_sets{
      {"Strongly disagree", "Disagree", "Agree", "Strongly agree"},
      {"1", "2", "3", "4", "5"},
      {"yes", "no"},
      {"open", "closed", "unknown"},
  };
  std::size_t parsed = 0;
  for (const auto& options : option_sets) {
    for (const auto& option : options) {
      std::string upper = option;
      std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
      for (const auto& text : {option, upper, "Answer: " + option + ".", "  " + option + "\n", "I'd say " + option + "!"}) {
        const auto got = llm::parse_label(text, options);
        if (!got || got->label != option) return fail("'" + text + "' did not parse to '" + option + "'");
        ++parsed;
      }
    }
    if (llm::parse_label(options[0] + " or " + options[1], options)) return fail("ambiguous answer was accepted");
    if (llm::parse_label("no idea here", options) && options[1] != "no") return fail("unrelated text was accepted");
  }
  return pass(std::to_string(cassette.size()) + " records replay " + std::to_string(a.size()) +
              " samples identically with 0 provider calls; " + std::to_string(parsed) +
              " phrasings over 4 option sets parse to the intended option");
}

struct Criterion {
  int number;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::optional<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--criterion N]\n";
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "alpha oracle equivalence", oracle_equivalence},
      {2, "analytic alpha cases", analytic_cases},
      {3, "published human-human agreement", replication},
      {4, "effort table", effort_rows},
      {5, "spearman", spearman_checks},
      {6, "sweep invariants", sweep_invariants},
      {7, "gate threshold", gate_threshold},
      {8, "offline llm determinism", llm_offline},
  };

  bool failed = false, skipped = false;
  for (const auto& c : criteria) {
    if (only && *only != c.number) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const char* tag = o.status == Status::pass ? "PASS" : o.status == Status::fail ? "FAIL" : "SKIP";
    std::cout << tag << " " << c.number << " " << c.title << ": " << o.detail << std::endl;
    failed |= o.status == Status::fail;
    skipped |= o.status == Status::skip;
  }
  if (failed) return 1;
  if (only && skipped) return 77;
  return 0;
}
