#include "agreekit/agreement.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "agreekit/csv.hpp"
#include "agreekit/errors.hpp"

namespace agreekit {

std::string_view to_string(Zone zone) {
  switch (zone) {
    case Zone::human_human: return "human_human";
    case Zone::human_model: return "human_model";
    case Zone::model_model: return "model_model";
    case Zone::with_random: return "with_random";
  }
  return "human_human";
}

Zone zone_of(RaterKind a, RaterKind b) {
  if (a == RaterKind::random || b == RaterKind::random) return Zone::with_random;
  if (a == RaterKind::human && b == RaterKind::human) return Zone::human_human;
  if (a == RaterKind::model && b == RaterKind::model) return Zone::model_model;
  return Zone::human_model;
}

std::optional<AlphaResult> pairwise_alpha(const AnnotationDataset& ds, std::string_view r1, std::string_view r2,
                                          std::optional<DistanceMetric> metric) {
  const auto i = ds.rater_index(r1);
  if (!i) throw ValidationError("unknown rater id '" + std::string(r1) + "'");
  const auto j = ds.rater_index(r2);
  if (!j) throw ValidationError("unknown rater id '" + std::string(r2) + "'");

  std::vector<Unit> units;
  for (std::size_t s = 0; s < ds.samples().size(); ++s) {
    const auto* a = ds.at(s, *i);
    const auto* b = ds.at(s, *j);
    if (a && b) units.push_back(Unit{a->value, b->value});
  }
  if (units.empty()) return std::nullopt;

  const auto outcome = evaluate_alpha(units, metric.value_or(default_metric(ds.scale().kind())));
  if (*i == *j) {
    AlphaResult self = outcome.result;
    self.alpha = 1.0;
    return self;
  }
  if (!outcome) return std::nullopt;
  return outcome.result;
}

AgreementMatrix::AgreementMatrix(std::vector<Rater> raters, std::vector<std::optional<AlphaResult>> cells)
    : raters_(std::move(raters)), cells_(std::move(cells)) {
  if (cells_.size() != raters_.size() * raters_.size()) throw Error("agreement matrix shape mismatch");
}

AgreementMatrix agreement_matrix(const AnnotationDataset& ds, std::optional<DistanceMetric> metric) {
  const auto raters = ds.raters();
  const std::size_t n = raters.size();
  if (n < 2) throw ValidationError("agreement matrix needs at least two raters");

  std::vector<std::optional<AlphaResult>> cells(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    AlphaResult diagonal;
    diagonal.alpha = 1.0;
    cells[i * n + i] = diagonal;
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto alpha = pairwise_alpha(ds, raters[i].id, raters[j].id, metric);
      cells[i * n + j] = alpha;
      cells[j * n + i] = alpha;
    }
  }
  return AgreementMatrix(std::vector<Rater>(raters.begin(), raters.end()), std::move(cells));
}

namespace {

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

}  // namespace

std::vector<ZoneSummary> zone_summaries(const AgreementMatrix& m, const std::optional<std::set<std::string>>& model_subset) {
  if (m.size() == 0) throw ValidationError("agreement matrix is empty");
  if (model_subset) {
    for (const auto& id : *model_subset) {
      const auto it = std::find_if(m.raters().begin(), m.raters().end(), [&](const Rater& r) { return r.id == id; });
      if (it == m.raters().end() || it->kind != RaterKind::model) {
        throw ValidationError("'" + id + "' is not a model rater of this matrix");
      }
    }
  }
  auto participates = [&](const Rater& r) {
    return r.kind != RaterKind::model || !model_subset || model_subset->contains(r.id);
  };

  std::vector<double> by_zone[3];
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      const Zone zone = m.zone(i, j);
      if (zone == Zone::with_random) continue;
      if (!participates(m.raters()[i]) || !participates(m.raters()[j])) continue;
      if (const auto& cell = m.at(i, j)) by_zone[static_cast<int>(zone)].push_back(cell->alpha);
    }
  }

  std::vector<ZoneSummary> out;
  for (const Zone zone : {Zone::human_human, Zone::human_model, Zone::model_model}) {
    const auto& values = by_zone[static_cast<int>(zone)];
    if (values.empty()) continue;
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    out.push_back(ZoneSummary{zone, mean, median_of(values), values.size()});
  }
  return out;
}

std::optional<ZoneSummary> find_zone(const std::vector<ZoneSummary>& summaries, Zone zone) {
  for (const auto& s : summaries) {
    if (s.zone == zone) return s;
  }
  return std::nullopt;
}

std::string matrix_to_csv(const AgreementMatrix& m) {
  std::ostringstream out;
  std::vector<std::string> row{"rater"};
  for (const auto& r : m.raters()) row.push_back(r.id);
  csv::write_row(out, row);
  for (std::size_t i = 0; i < m.size(); ++i) {
    row.assign(1, m.raters()[i].id);
    for (std::size_t j = 0; j < m.size(); ++j) {
      const auto& cell = m.at(i, j);
      row.push_back(cell ? format_number(cell->alpha) : std::string());
    }
    csv::write_row(out, row);
  }
  return out.str();
}

nlohmann::json matrix_to_json(const AgreementMatrix& m) {
  nlohmann::json j;
  auto& raters = j["raters"] = nlohmann::json::array();
  for (const auto& r : m.raters()) {
    raters.push_back({{"id", r.id}, {"kind", std::string(to_string(r.kind))}, {"display_name", r.display_name}});
  }
  auto& cells = j["cells"] = nlohmann::json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t k = 0; k < m.size(); ++k) {
      nlohmann::json cell{{"row", m.raters()[i].id},
                          {"column", m.raters()[k].id},
                          {"zone", std::string(to_string(m.zone(i, k)))},
                          {"diagonal", i == k}};
      if (const auto& a = m.at(i, k)) {
        cell["alpha"] = a->alpha;
        cell["observed_disagreement"] = a->observed_disagreement;
        cell["expected_disagreement"] = a->expected_disagreement;
        cell["pairable_values"] = a->pairable_values;
        cell["units_used"] = a->units_used;
      } else {
        cell["alpha"] = nullptr;
      }
      cells.push_back(std::move(cell));
    }
  }
  return j;
}

}  // namespace agreekit
