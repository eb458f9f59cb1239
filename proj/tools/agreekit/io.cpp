#include "io.hpp"

#include <fstream>
#include <optional>

#include "agreekit/errors.hpp"
#include "agreekit/hash.hpp"

namespace agreekit::cli {

namespace {

DataFormat format_for(const std::string& path, const std::string& forced) {
  if (forced == "csv") return DataFormat::csv_long;
  if (forced == "json") return DataFormat::json;
  if (!forced.empty()) throw ValidationError("unknown --format '" + forced + "' (expected csv or json)");
  if (const auto f = data_format_from_path(path)) return *f;
  throw ValidationError("cannot tell the format of '" + path + "'; pass --format csv or --format json");
}

}  // namespace

LoadedData load_inputs(const DataArgs& args) {
  if (args.data.empty() && args.answers.empty()) throw ValidationError("no dataset given (--data)");

  std::vector<InputFile> inputs;
  std::optional<LabelScale> scale;
  if (!args.scale.empty()) {
    scale = LabelScale::load(args.scale);
    inputs.push_back({"scale", args.scale, sha256_file(args.scale)});
  }

  std::vector<std::string> warnings;
  std::optional<AnnotationDataset> combined;
  auto add = [&](const std::string& path, const std::string& role) {
    const auto format = format_for(path, args.format);
    if (format == DataFormat::csv_long && !scale) {
      throw ValidationError("'" + path + "' is CSV; a label scale is required (--scale)");
    }
    auto ds = load_dataset(path, format, LoadOptions{scale, &warnings});
    inputs.push_back({role, path, sha256_file(path)});
    combined = combined ? merge(*combined, ds) : std::move(ds);
  };
  for (const auto& p : args.data) add(p, "dataset");
  for (const auto& p : args.answers) add(p, "answers");

  if (args.k > 0) {
    combined->set_ratings_per_sample(args.k);
  } else if (combined->ratings_per_sample() == 0) {
    const auto humans = combined->rater_ids(RaterKind::human);
    if (!humans.empty()) combined->set_ratings_per_sample(combined->infer_ratings_per_sample());
  }
  return {std::move(*combined), std::move(inputs), std::move(warnings)};
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
  if (!out) throw Error("failed writing '" + path + "'");
}

std::string pick_model(const AnnotationDataset& ds, const std::string& requested) {
  const auto models = ds.rater_ids(RaterKind::model);
  if (!requested.empty()) {
    check_models(ds, {requested});
    return requested;
  }
  if (models.size() == 1) return models.front();
  std::string list;
  for (const auto& m : models) list += (list.empty() ? "" : ", ") + m;
  if (models.empty()) throw ValidationError("the dataset has no model raters");
  throw ValidationError("several model raters present (" + list + "); choose one with --model");
}

void check_models(const AnnotationDataset& ds, const std::vector<std::string>& ids) {
  for (const auto& id : ids) {
    const auto idx = ds.rater_index(id);
    if (!idx) throw ValidationError("unknown rater '" + id + "'");
    if (ds.raters()[*idx].kind != RaterKind::model) throw ValidationError("rater '" + id + "' is not a model");
  }
}

}  // namespace agreekit::cli
