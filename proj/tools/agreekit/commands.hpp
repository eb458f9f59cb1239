#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "io.hpp"

namespace agreekit::cli {

struct GlobalArgs {
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  std::size_t bootstrap_iters = 1000;
  double bootstrap_fraction = 0.5;
  double threshold = 0.5;
  std::string fractions;  // grid spec; empty = 0..1 step 0.1
  double level = 0.95;
  std::string metric;     // empty = scale default
  bool json = false;
};

struct AgreeArgs {
  std::vector<std::string> models;
  std::string out_dir;
};

struct GateArgs {
  std::vector<std::string> models;
};

struct SweepArgs {
  std::string model;
  std::string strategy = "both";
  std::string csv_out;
};

struct PipelineArgs {
  std::vector<std::string> models;
  std::string sweep_model;
  std::string out;
  std::string markdown;
};

struct EffortArgs {
  std::vector<std::string> rows;  // "k:fraction"
};

struct AnnotateArgs {
  std::string samples;
  std::string template_path;
  std::string shots;
  std::string provider;
  std::string provider_model;  // pick one config from a multi-provider file
  std::string rater_id;
  std::string cassette;
  std::string cassette_mode = "replay";
  std::string out;
  std::string failures;
};

struct ModelArgs {
  std::string model;
  std::string out;
};

int cmd_agree(const GlobalArgs& g, const DataArgs& d, const AgreeArgs& a);
int cmd_gate(const GlobalArgs& g, const DataArgs& d, const GateArgs& a);
int cmd_sweep(const GlobalArgs& g, const DataArgs& d, const SweepArgs& a);
int cmd_pipeline(const GlobalArgs& g, const DataArgs& d, const PipelineArgs& a);
int cmd_effort(const GlobalArgs& g, const EffortArgs& a);
int cmd_annotate(const GlobalArgs& g, const DataArgs& d, const AnnotateArgs& a);
int cmd_profile(const GlobalArgs& g, const DataArgs& d, const ModelArgs& a);
int cmd_majority(const GlobalArgs& g, const DataArgs& d, const ModelArgs& a);

}  // namespace agreekit::cli
