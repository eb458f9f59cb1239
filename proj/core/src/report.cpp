#include "agreekit/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace agreekit {

#ifndef AGREEKIT_VERSION_STRING
#define AGREEKIT_VERSION_STRING "0.0.0"
#endif

std::string_view tool_version() { return AGREEKIT_VERSION_STRING; }

nlohmann::json to_json(const AlphaResult& r) {
  return {{"alpha", r.alpha},
          {"observed_disagreement", r.observed_disagreement},
          {"expected_disagreement", r.expected_disagreement},
          {"pairable_values", r.pairable_values},
          {"units_used", r.units_used}};
}

nlohmann::json to_json(const ZoneSummary& s) {
  return {{"zone", std::string(to_string(s.zone))},
          {"mean_alpha", s.mean_alpha},
          {"median_alpha", s.median_alpha},
          {"pair_count", s.pair_count}};
}

nlohmann::json to_json(const std::vector<ZoneSummary>& summaries) {
  auto j = nlohmann::json::array();
  for (const auto& s : summaries) j.push_back(to_json(s));
  return j;
}

nlohmann::json to_json(const ConfidenceInterval& ci) {
  return {{"lower", ci.lower}, {"upper", ci.upper}, {"level", ci.level}, {"point", ci.point}};
}

nlohmann::json to_json(const GateDecision& g) {
  return {{"mm_mean_alpha", g.mm_mean_alpha},
          {"threshold", g.threshold},
          {"outcome", std::string(to_string(g.outcome))},
          {"model_pairs", g.model_pairs}};
}

nlohmann::json to_json(const SweepCurve& curve) {
  nlohmann::json j{{"strategy", std::string(to_string(curve.strategy))},
                   {"trials_per_point", curve.trials_per_point},
                   {"baseline", to_json(curve.baseline)},
                   {"max_safe_fraction", max_safe_fraction(curve)}};
  auto& points = j["points"] = nlohmann::json::array();
  for (const auto& p : curve.points) {
    points.push_back({{"fraction", p.fraction},
                      {"mean_alpha", p.mean_alpha},
                      {"ci", to_json(p.ci)},
                      {"samples_replaced", p.samples_replaced},
                      {"trials_used", p.trials_used},
                      {"overlaps_baseline", intervals_overlap(p.ci, curve.baseline)}});
  }
  return j;
}

nlohmann::json to_json(const EffortReport& e) {
  return {{"ratings_per_sample", e.ratings_per_sample},
          {"safe_fraction", e.safe_fraction},
          {"one_rating_saved_pct", e.one_rating_saved_pct},
          {"overall_saved_pct", e.overall_saved_pct},
          {"tabulated_overall_pct", e.tabulated_overall_pct}};
}

nlohmann::json to_json(const SpearmanResult& s) { return {{"rho", s.rho}, {"p_value", s.p_value}, {"n", s.n}}; }

std::string format_percent(double pct) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.1f%%", round_half_up(pct, 1));
  return buffer;
}

std::string format_alpha(const nlohmann::json& value) {
  if (!value.is_number()) return "n/a";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", value.get<double>());
  return buffer;
}

namespace {

std::string zone_title(const std::string& zone) {
  if (zone == "human_human") return "Human-Human";
  if (zone == "human_model") return "Human-Model";
  if (zone == "model_model") return "Model-Model";
  return zone;
}

}  // namespace

std::string zone_table_markdown(const nlohmann::json& zone_summaries) {
  std::ostringstream out;
  out << "| Zone | Mean alpha | Median alpha | Pairs |\n|---|---|---|---|\n";
  for (const char* zone : {"human_human", "human_model", "model_model"}) {
    const nlohmann::json* found = nullptr;
    for (const auto& s : zone_summaries) {
      if (s.at("zone") == zone) found = &s;
    }
    out << "| " << zone_title(zone) << " | ";
    if (found) {
      out << format_alpha(found->at("mean_alpha")) << " | " << format_alpha(found->at("median_alpha")) << " | "
          << found->at("pair_count").get<std::size_t>();
    } else {
      out << "n/a | n/a | 0";
    }
    out << " |\n";
  }
  return out.str();
}

std::string effort_table_markdown(const nlohmann::json& effort_rows) {
  std::ostringstream out;
  out << "| Ratings per sample | Safe fraction | % effort saved for one rating | % effort saved overall |"
         " % overall (tabulated) |\n|---|---|---|---|---|\n";
  for (const auto& e : effort_rows) {
    out << "| " << e.at("ratings_per_sample").get<int>() << " | " << format_alpha(e.at("safe_fraction")) << " | "
        << format_percent(e.at("one_rating_saved_pct").get<double>()) << " | "
        << format_percent(e.at("overall_saved_pct").get<double>()) << " | "
        << format_percent(e.at("tabulated_overall_pct").get<double>()) << " |\n";
  }
  return out.str();
}

std::string sweep_table_markdown(const nlohmann::json& sweep) {
  std::ostringstream out;
  const auto& baseline = sweep.at("baseline");
  out << "Strategy `" << sweep.at("strategy").get<std::string>() << "`, "
      << sweep.at("trials_per_point").get<std::size_t>() << " trials per point. Human-only alpha "
      << format_alpha(baseline.at("point")) << ", baseline interval [" << format_alpha(baseline.at("lower")) << ", "
      << format_alpha(baseline.at("upper")) << "].\n\n";
  out << "| Fraction | Mean alpha | CI lower | CI upper | Within baseline |\n|---|---|---|---|---|\n";
  for (const auto& p : sweep.at("points")) {
    out << "| " << format_percent(100.0 * p.at("fraction").get<double>()) << " | " << format_alpha(p.at("mean_alpha"))
        << " | " << format_alpha(p.at("ci").at("lower")) << " | " << format_alpha(p.at("ci").at("upper")) << " | "
        << (p.at("overlaps_baseline").get<bool>() ? "yes" : "no") << " |\n";
  }
  out << "\nMaximum safe fraction: " << format_percent(100.0 * sweep.at("max_safe_fraction").get<double>()) << "\n";
  return out.str();
}

std::string render_markdown(const nlohmann::json& report) {
  std::ostringstream out;
  out << "# Annotation delegation report\n\n";
  out << "Generated by agreekit " << report.at("tool").at("version").get<std::string>() << ".\n\n";

  out << "## Inputs\n\n| Role | Path | SHA-256 |\n|---|---|---|\n";
  for (const auto& input : report.at("inputs")) {
    out << "| " << input.at("role").get<std::string>() << " | `" << input.at("path").get<std::string>() << "` | `"
        << input.at("sha256").get<std::string>() << "` |\n";
  }

  const auto& params = report.at("parameters");
  out << "\n## Parameters\n\n";
  out << "- seed: " << params.at("seed").get<std::uint64_t>() << "\n";
  out << "- gate threshold: " << params.at("threshold").get<double>() << " (strict >)\n";
  out << "- trials per sweep point: " << params.at("trials").get<std::size_t>() << "\n";
  out << "- bootstrap: " << params.at("bootstrap_iterations").get<std::size_t>() << " iterations at fraction "
      << params.at("bootstrap_fraction").get<double>() << "\n";
  out << "- confidence level: " << params.at("level").get<double>() << "\n";
  out << "- metric: " << params.at("metric").get<std::string>() << "\n";

  out << "\n## Inter-rater agreement\n\n" << zone_table_markdown(report.at("zone_summaries"));

  if (report.contains("gate") && !report.at("gate").is_null()) {
    const auto& g = report.at("gate");
    out << "\n## Gate\n\nMean model-model alpha " << format_alpha(g.at("mm_mean_alpha")) << " over "
        << g.at("model_pairs").get<std::size_t>() << " model pairs; threshold " << format_alpha(g.at("threshold"))
        << ". Outcome: `" << g.at("outcome").get<std::string>() << "`.\n";
  }

  if (report.contains("sweeps")) {
    for (const auto& sweep : report.at("sweeps")) out << "\n## Replacement sweep\n\n" << sweep_table_markdown(sweep);
  }

  if (report.contains("recommendation")) {
    out << "\n## Recommendation\n\n" << report.at("recommendation").at("text").get<std::string>() << "\n";
  }

  if (report.contains("effort")) out << "\n## Effort\n\n" << effort_table_markdown(report.at("effort"));

  if (report.contains("notes") && !report.at("notes").empty()) {
    out << "\n## Notes\n\n";
    for (const auto& note : report.at("notes")) out << "- " << note.get<std::string>() << "\n";
  }
  if (report.contains("warnings") && !report.at("warnings").empty()) {
    out << "\n## Warnings\n\n";
    for (const auto& w : report.at("warnings")) out << "- " << w.get<std::string>() << "\n";
  }
  return out.str();
}

}  // namespace agreekit
