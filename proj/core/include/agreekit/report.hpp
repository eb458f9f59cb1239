#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "agreekit/agreement.hpp"
#include "agreekit/delegation.hpp"
#include "agreekit/stats.hpp"

namespace agreekit {

std::string_view tool_version();

nlohmann::json to_json(const AlphaResult& r);
nlohmann::json to_json(const ZoneSummary& s);
nlohmann::json to_json(const std::vector<ZoneSummary>& summaries);
nlohmann::json to_json(const ConfidenceInterval& ci);
nlohmann::json to_json(const GateDecision& g);
nlohmann::json to_json(const SweepCurve& curve);
nlohmann::json to_json(const EffortReport& e);
nlohmann::json to_json(const SpearmanResult& s);

// Markdown rendering of individual tables, from their JSON form.
std::string zone_table_markdown(const nlohmann::json& zone_summaries);
std::string effort_table_markdown(const nlohmann::json& effort_rows);
std::string sweep_table_markdown(const nlohmann::json& sweep);

/// Human-readable summary of a run report. Uses only the JSON, so anything
/// shown here is reproducible from the report file.
std::string render_markdown(const nlohmann::json& report);

// Percentages as printed in reports: half-up to one decimal.
std::string format_percent(double pct);
// Fixed two-decimal alpha, or "n/a".
std::string format_alpha(const nlohmann::json& value);

}  // namespace agreekit
