#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "agreekit/dataset.hpp"
#include "agreekit/delegation.hpp"

namespace agreekit {

struct InputFile {
  std::string role;  // "dataset", "scale", "answers", ...
  std::string path;
  std::string sha256;
};

struct PipelineOptions {
  double threshold = kDefaultGateThreshold;
  SweepOptions sweep;
  // Models for the gate and the zone table; empty means every model rater.
  std::vector<std::string> models;
  // Model whose answers drive the sweep; default is the first gate model
  // with confidences for every sample.
  std::optional<std::string> sweep_model;
  // Ratings per sample for effort accounting; default from the dataset.
  std::optional<int> ratings_per_sample;
};

/// Gate -> replacement sweep -> safe fraction -> effort, as one report.
///
/// `combined` holds the human ratings plus every model's answers. When the
/// gate passes, one rating may be replaced on every sample and the sweep
/// runs with the random strategy as a check; otherwise the by_confidence
/// sweep decides the fraction. Throws PreconditionError when the selective
/// path is taken and no model carries confidences.
nlohmann::json run_pipeline(const AnnotationDataset& combined, const PipelineOptions& options,
                            const std::vector<InputFile>& inputs, const std::vector<std::string>& warnings);

}  // namespace agreekit
