#include "agreekit/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "agreekit/csv.hpp"
#include "agreekit/errors.hpp"

namespace agreekit {

std::string_view to_string(RaterKind kind) {
  switch (kind) {
    case RaterKind::human: return "human";
    case RaterKind::model: return "model";
    case RaterKind::random: return "random";
  }
  return "human";
}

std::optional<RaterKind> rater_kind_from_string(std::string_view text) {
  if (text == "human") return RaterKind::human;
  if (text == "model") return RaterKind::model;
  if (text == "random") return RaterKind::random;
  return std::nullopt;
}

AnnotationDataset::AnnotationDataset(LabelScale scale) : scale_(std::move(scale)) {}

std::size_t AnnotationDataset::add_rater(Rater rater) {
  if (rater.id.empty()) throw ValidationError("rater id must be non-empty");
  if (rater_lookup_.contains(rater.id)) throw ValidationError("duplicate rater id '" + rater.id + "'");
  if (rater.display_name.empty()) rater.display_name = rater.id;
  const std::size_t index = raters_.size();
  rater_lookup_.emplace(rater.id, index);
  raters_.push_back(std::move(rater));
  for (auto& row : cells_) row.push_back(-1);
  return index;
}

std::size_t AnnotationDataset::add_sample(std::string sample_id) {
  if (sample_id.empty()) throw ValidationError("sample id must be non-empty");
  if (sample_lookup_.contains(sample_id)) throw ValidationError("duplicate sample id '" + sample_id + "'");
  const std::size_t index = samples_.size();
  sample_lookup_.emplace(sample_id, index);
  samples_.push_back(std::move(sample_id));
  cells_.emplace_back(raters_.size(), -1);
  return index;
}

void AnnotationDataset::annotate(std::string_view sample_id, std::string_view rater_id, std::string_view label,
                                 std::optional<double> confidence) {
  const auto s = sample_index(sample_id);
  if (!s) throw ValidationError("annotation references unknown sample '" + std::string(sample_id) + "'");
  const auto r = rater_index(rater_id);
  if (!r) throw ValidationError("annotation references unknown rater '" + std::string(rater_id) + "'");
  const auto value = scale_.encode(label);
  if (!value) {
    throw ValidationError("label '" + std::string(label) + "' (sample " + std::string(sample_id) + ", rater " +
                          std::string(rater_id) + ") is not admissible on the " +
                          std::string(to_string(scale_.kind())) + " scale");
  }
  if (confidence && !(*confidence >= 0.0 && *confidence <= 1.0)) {
    throw ValidationError("confidence for sample " + std::string(sample_id) + ", rater " + std::string(rater_id) +
                          " is outside [0,1]");
  }
  auto& cell = cells_[*s][*r];
  if (cell >= 0) {
    throw ValidationError("duplicate annotation for sample " + std::string(sample_id) + ", rater " +
                          std::string(rater_id));
  }
  cell = static_cast<std::int32_t>(annotations_.size());
  // Interval labels are stored in canonical form so round trips are stable.
  std::string stored = scale_.kind() == ScaleKind::interval ? format_number(*value) : std::string(label);
  annotations_.push_back(
      Annotation{std::string(sample_id), std::string(rater_id), std::move(stored), *value, confidence});
}

void AnnotationDataset::set_ratings_per_sample(int k) {
  if (k < 1) throw ValidationError("ratings_per_sample must be a positive integer");
  ratings_per_sample_ = k;
}

int AnnotationDataset::infer_ratings_per_sample() const {
  int best = 1;
  for (const auto& row : cells_) {
    int count = 0;
    for (std::size_t r = 0; r < row.size(); ++r) {
      if (row[r] >= 0 && raters_[r].kind == RaterKind::human) ++count;
    }
    best = std::max(best, count);
  }
  return best;
}

std::optional<std::size_t> AnnotationDataset::rater_index(std::string_view id) const {
  const auto it = rater_lookup_.find(std::string(id));
  if (it == rater_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> AnnotationDataset::sample_index(std::string_view id) const {
  const auto it = sample_lookup_.find(std::string(id));
  if (it == sample_lookup_.end()) return std::nullopt;
  return it->second;
}

const Rater& AnnotationDataset::rater(std::string_view id) const {
  const auto index = rater_index(id);
  if (!index) throw ValidationError("unknown rater id '" + std::string(id) + "'");
  return raters_[*index];
}

const Annotation* AnnotationDataset::at(std::size_t sample, std::size_t rater) const {
  const auto cell = cells_.at(sample).at(rater);
  return cell < 0 ? nullptr : &annotations_[static_cast<std::size_t>(cell)];
}

std::vector<std::string> AnnotationDataset::rater_ids() const {
  std::vector<std::string> ids;
  ids.reserve(raters_.size());
  for (const auto& r : raters_) ids.push_back(r.id);
  return ids;
}

std::vector<std::string> AnnotationDataset::rater_ids(RaterKind kind) const {
  std::vector<std::string> ids;
  for (const auto& r : raters_) {
    if (r.kind == kind) ids.push_back(r.id);
  }
  return ids;
}

bool AnnotationDataset::operator==(const AnnotationDataset& other) const {
  if (!(scale_ == other.scale_) || ratings_per_sample_ != other.ratings_per_sample_) return false;

  auto rater_key = [](const Rater& r) { return std::tuple(r.id, r.kind, r.display_name); };
  std::set<std::tuple<std::string, RaterKind, std::string>> lhs_raters, rhs_raters;
  for (const auto& r : raters_) lhs_raters.insert(rater_key(r));
  for (const auto& r : other.raters_) rhs_raters.insert(rater_key(r));
  if (lhs_raters != rhs_raters) return false;

  if (std::set<std::string>(samples_.begin(), samples_.end()) !=
      std::set<std::string>(other.samples_.begin(), other.samples_.end())) {
    return false;
  }

  using Key = std::tuple<std::string, std::string, std::string, double, std::optional<double>>;
  auto annotation_keys = [](const std::vector<Annotation>& annotations) {
    std::set<Key> keys;
    for (const auto& a : annotations) keys.emplace(a.sample_id, a.rater_id, a.label, a.value, a.confidence);
    return keys;
  };
  return annotation_keys(annotations_) == annotation_keys(other.annotations_);
}

std::optional<DataFormat> data_format_from_path(std::string_view path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() && path.substr(path.size() - suffix.size()) == suffix;
  };
  if (ends_with(".csv")) return DataFormat::csv_long;
  if (ends_with(".json")) return DataFormat::json;
  return std::nullopt;
}

namespace {

constexpr std::string_view kCsvColumns[] = {"sample_id", "rater_id", "rater_kind", "label", "confidence"};

void warn(std::vector<std::string>* warnings, std::string message) {
  if (warnings) warnings->push_back(std::move(message));
}

}  // namespace

AnnotationDataset read_csv_long(std::istream& in, const LabelScale& scale, std::vector<std::string>* warnings) {
  csv::Reader reader(in);
  csv::Record record;
  if (!reader.next(record)) throw ParseError("empty input: missing header", 1, 1);

  // Confidence column may be omitted entirely.
  const std::size_t columns = record.fields.size();
  if (columns != 4 && columns != 5) {
    throw ParseError("header must be sample_id,rater_id,rater_kind,label[,confidence]", record.line, 1);
  }
  for (std::size_t i = 0; i < columns; ++i) {
    std::string name = record.fields[i].text;
    if (i == 0 && name.starts_with("\xEF\xBB\xBF")) name.erase(0, 3);
    if (name != kCsvColumns[i]) {
      throw ParseError("expected header column '" + std::string(kCsvColumns[i]) + "', found '" + name + "'",
                       record.line, record.fields[i].column);
    }
  }

  AnnotationDataset ds(scale);
  std::set<std::string> warned_humans;
  while (reader.next(record)) {
    if (record.fields.size() != columns) {
      throw ParseError("expected " + std::to_string(columns) + " fields, found " +
                           std::to_string(record.fields.size()),
                       record.line, 1);
    }
    const auto& f = record.fields;
    const std::string& sample_id = f[0].text;
    const std::string& rater_id = f[1].text;
    if (sample_id.empty()) throw ParseError("empty sample_id", record.line, f[0].column);
    if (rater_id.empty()) throw ParseError("empty rater_id", record.line, f[1].column);

    const auto kind = rater_kind_from_string(f[2].text);
    if (!kind) {
      throw ParseError("rater_kind must be human, model or random; found '" + f[2].text + "'", record.line,
                       f[2].column);
    }

    std::optional<double> confidence;
    if (columns == 5 && !f[4].text.empty()) {
      confidence = parse_number(f[4].text);
      if (!confidence || *confidence < 0.0 || *confidence > 1.0) {
        throw ParseError("confidence '" + f[4].text + "' is not a probability in [0,1]", record.line,
                         f[4].column);
      }
    }

    if (const auto existing = ds.rater_index(rater_id)) {
      if (ds.raters()[*existing].kind != *kind) {
        throw ParseError("rater '" + rater_id + "' declared with conflicting kinds", record.line, f[2].column);
      }
    } else {
      ds.add_rater(Rater{rater_id, *kind, rater_id});
    }
    if (!ds.sample_index(sample_id)) ds.add_sample(sample_id);

    if (confidence && *kind == RaterKind::human && warned_humans.insert(rater_id).second) {
      warn(warnings, "line " + std::to_string(record.line) + ": human rater '" + rater_id +
                         "' carries a confidence value");
    }

    try {
      ds.annotate(sample_id, rater_id, f[3].text, confidence);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), record.line, f[3].column);
    }
  }
  ds.set_ratings_per_sample(ds.infer_ratings_per_sample());
  return ds;
}

void write_csv_long(const AnnotationDataset& ds, std::ostream& out) {
  csv::write_row(out, {"sample_id", "rater_id", "rater_kind", "label", "confidence"});
  for (const auto& a : ds.annotations()) {
    const auto& rater = ds.rater(a.rater_id);
    csv::write_row(out, {a.sample_id, a.rater_id, std::string(to_string(rater.kind)), a.label,
                         a.confidence ? format_number(*a.confidence) : std::string()});
  }
}

AnnotationDataset dataset_from_json(const nlohmann::json& j, std::vector<std::string>* warnings) {
  try {
    AnnotationDataset ds(LabelScale::from_json(j.at("scale")));
    for (const auto& r : j.at("raters")) {
      const auto kind_text = r.at("kind").get<std::string>();
      const auto kind = rater_kind_from_string(kind_text);
      if (!kind) throw ValidationError("rater kind must be human, model or random; found '" + kind_text + "'");
      ds.add_rater(Rater{r.at("id").get<std::string>(), *kind, r.value("display_name", std::string())});
    }
    for (const auto& s : j.at("samples")) ds.add_sample(s.get<std::string>());

    std::set<std::string> warned_humans;
    const auto& annotations = j.at("annotations");
    for (std::size_t i = 0; i < annotations.size(); ++i) {
      const auto& a = annotations[i];
      const auto sample_id = a.at("sample_id").get<std::string>();
      const auto rater_id = a.at("rater_id").get<std::string>();
      const auto& raw_label = a.at("label");
      const std::string label = raw_label.is_number() ? format_number(raw_label.get<double>())
                                                      : raw_label.get<std::string>();
      std::optional<double> confidence;
      if (a.contains("confidence") && !a.at("confidence").is_null()) confidence = a.at("confidence").get<double>();
      try {
        ds.annotate(sample_id, rater_id, label, confidence);
      } catch (const ValidationError& e) {
        throw ValidationError("annotations[" + std::to_string(i) + "]: " + e.what());
      }
      if (confidence && ds.rater(rater_id).kind == RaterKind::human && warned_humans.insert(rater_id).second) {
        warn(warnings, "human rater '" + rater_id + "' carries a confidence value");
      }
    }
    if (j.contains("ratings_per_sample") && !j.at("ratings_per_sample").is_null()) {
      ds.set_ratings_per_sample(j.at("ratings_per_sample").get<int>());
    } else {
      ds.set_ratings_per_sample(ds.infer_ratings_per_sample());
    }
    return ds;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("dataset JSON: ") + e.what());
  }
}

nlohmann::json dataset_to_json(const AnnotationDataset& ds) {
  nlohmann::json j;
  j["scale"] = ds.scale().to_json();
  j["ratings_per_sample"] = ds.ratings_per_sample();
  auto& raters = j["raters"] = nlohmann::json::array();
  for (const auto& r : ds.raters()) {
    raters.push_back({{"id", r.id}, {"kind", std::string(to_string(r.kind))}, {"display_name", r.display_name}});
  }
  j["samples"] = std::vector<std::string>(ds.samples().begin(), ds.samples().end());
  auto& annotations = j["annotations"] = nlohmann::json::array();
  const bool numeric = ds.scale().kind() == ScaleKind::interval;
  for (const auto& a : ds.annotations()) {
    nlohmann::json item{{"sample_id", a.sample_id}, {"rater_id", a.rater_id}};
    if (numeric) {
      item["label"] = a.value;
    } else {
      item["label"] = a.label;
    }
    item["confidence"] = a.confidence ? nlohmann::json(*a.confidence) : nlohmann::json(nullptr);
    annotations.push_back(std::move(item));
  }
  return j;
}

AnnotationDataset load_dataset(const std::string& path, DataFormat format, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open dataset file '" + path + "'");
  if (format == DataFormat::csv_long) {
    if (!options.scale) throw ValidationError("CSV datasets require a scale definition");
    return read_csv_long(in, *options.scale, options.warnings);
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("dataset JSON: ") + e.what(), 0, 0);
  }
  return dataset_from_json(j, options.warnings);
}

void save_dataset(const AnnotationDataset& ds, const std::string& path, DataFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  if (format == DataFormat::csv_long) {
    write_csv_long(ds, out);
  } else {
    out << dataset_to_json(ds).dump(2) << '\n';
  }
}

AnnotationDataset subset_by_raters(const AnnotationDataset& ds, std::span<const std::string> rater_ids) {
  std::set<std::string> wanted;
  for (const auto& id : rater_ids) {
    if (!ds.rater_index(id)) throw ValidationError("unknown rater id '" + id + "'");
    wanted.insert(id);
  }
  AnnotationDataset out(ds.scale());
  for (const auto& r : ds.raters()) {
    if (wanted.contains(r.id)) out.add_rater(r);
  }
  for (const auto& s : ds.samples()) out.add_sample(s);
  for (const auto& a : ds.annotations()) {
    if (wanted.contains(a.rater_id)) out.annotate(a.sample_id, a.rater_id, a.label, a.confidence);
  }
  if (ds.ratings_per_sample() > 0) out.set_ratings_per_sample(ds.ratings_per_sample());
  return out;
}

AnnotationDataset subset_by_kind(const AnnotationDataset& ds, RaterKind kind) {
  const auto ids = ds.rater_ids(kind);
  return subset_by_raters(ds, ids);
}

AnnotationDataset merge(const AnnotationDataset& a, const AnnotationDataset& b) {
  if (!(a.scale() == b.scale())) throw ValidationError("cannot merge datasets with different scales");
  AnnotationDataset out(a.scale());
  for (const auto& r : a.raters()) out.add_rater(r);
  for (const auto& r : b.raters()) {
    if (const auto existing = out.rater_index(r.id)) {
      if (out.raters()[*existing].kind != r.kind) {
        throw ValidationError("rater '" + r.id + "' has conflicting kinds across inputs");
      }
    } else {
      out.add_rater(r);
    }
  }
  for (const auto& s : a.samples()) out.add_sample(s);
  for (const auto& s : b.samples()) {
    if (!out.sample_index(s)) out.add_sample(s);
  }
  for (const auto& x : a.annotations()) out.annotate(x.sample_id, x.rater_id, x.label, x.confidence);
  for (const auto& x : b.annotations()) out.annotate(x.sample_id, x.rater_id, x.label, x.confidence);
  const int k = a.ratings_per_sample() > 0 ? a.ratings_per_sample() : out.infer_ratings_per_sample();
  out.set_ratings_per_sample(k);
  return out;
}

}  // namespace agreekit
