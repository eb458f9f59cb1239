#pragma once

#include <optional>
#include <string>
#include <vector>

#include "agreekit/dataset.hpp"
#include "agreekit/pipeline.hpp"

namespace agreekit::cli {

struct DataArgs {
  std::vector<std::string> data;     // datasets (humans, possibly models too)
  std::vector<std::string> answers;  // model answer files in the long format
  std::string scale;
  std::string format;  // "", "csv" or "json"
  int k = 0;           // ratings per sample override; 0 infers
};

struct LoadedData {
  AnnotationDataset dataset;
  std::vector<InputFile> inputs;
  std::vector<std::string> warnings;
};

LoadedData load_inputs(const DataArgs& args);

void write_text(const std::string& path, const std::string& content);

// The model rater a command works on: `requested` when given, otherwise the
// only model in the dataset.
std::string pick_model(const AnnotationDataset& ds, const std::string& requested);

// Checks that every id names a model rater.
void check_models(const AnnotationDataset& ds, const std::vector<std::string>& ids);

}  // namespace agreekit::cli
