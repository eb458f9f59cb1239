#include "agreekit/pipeline.hpp"

#include <gtest/gtest.h>

#include "agreekit/errors.hpp"
#include "synthetic.hpp"

using namespace agreekit;

namespace {

struct Fixture {
  AnnotationDataset ds;
  std::vector<std::size_t> latent;
};

Fixture humans(std::uint64_t seed, std::size_t samples = 120) {
  std::vector<std::size_t> latent;
  auto ds = testdata::noisy_humans(testdata::likert4(),
                                   {.samples = samples, .humans = 3, .human_noise = 0.2, .seed = seed}, &latent);
  return {std::move(ds), std::move(latent)};
}

PipelineOptions fast() {
  PipelineOptions o;
  o.sweep.trials = 20;
  o.sweep.bootstrap_iterations = 200;
  o.sweep.seed = RngSeed{3};
  return o;
}

}  // namespace

TEST(Pipeline, AgreeingModelsReplaceOneRatingEverywhere) {
  auto f = humans(80);
  for (int m = 0; m < 3; ++m) testdata::add_model(f.ds, "m" + std::to_string(m), f.latent, 0.95, 10 + m);
  const auto r = run_pipeline(f.ds, fast(), {}, {});
  EXPECT_GT(r["gate"]["mm_mean_alpha"].get<double>(), 0.5);
  EXPECT_EQ(r["recommendation"]["action"], "replace_one_rating_all_samples");
  EXPECT_EQ(r["recommendation"]["strategy"], "random");
  EXPECT_EQ(r["recommendation"]["fraction"], 1.0);
  EXPECT_EQ(r["effort"][0]["ratings_per_sample"], 3);
  EXPECT_NEAR(r["effort"][0]["tabulated_overall_pct"].get<double>(), 33.0, 1e-12);
  EXPECT_EQ(r["zone_summaries"].size(), 3u);
  EXPECT_EQ(r["parameters"]["sweep_model"], "m0");
}

TEST(Pipeline, DisagreeingModelsDelegateSelectively) {
  auto f = humans(81);
  for (int m = 0; m < 3; ++m) testdata::add_model(f.ds, "m" + std::to_string(m), f.latent, 0.4, 20 + m);
  const auto r = run_pipeline(f.ds, fast(), {}, {});
  EXPECT_LE(r["gate"]["mm_mean_alpha"].get<double>(), 0.5);
  EXPECT_EQ(r["recommendation"]["action"], "selective_high_confidence_only");
  EXPECT_EQ(r["recommendation"]["strategy"], "by_confidence");
  const double safe = r["safe_fractions"]["by_confidence"];
  EXPECT_EQ(r["recommendation"]["fraction"], safe);
  EXPECT_EQ(r["effort"][0]["safe_fraction"], safe);
}

TEST(Pipeline, SelectivePathNeedsConfidences) {
  auto f = humans(82);
  for (int m = 0; m < 2; ++m) testdata::add_model(f.ds, "m" + std::to_string(m), f.latent, 0.3, 30 + m, false);
  try {
    run_pipeline(f.ds, fast(), {}, {});
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("log-probabilities"), std::string::npos);
  }
}

TEST(Pipeline, GatePassWithoutConfidencesStillRuns) {
  auto f = humans(83);
  for (int m = 0; m < 2; ++m) testdata::add_model(f.ds, "m" + std::to_string(m), f.latent, 0.97, 40 + m, false);
  const auto r = run_pipeline(f.ds, fast(), {}, {});
  EXPECT_EQ(r["recommendation"]["fraction"], 1.0);
}

TEST(Pipeline, Preconditions) {
  auto f = humans(84);
  testdata::add_model(f.ds, "only", f.latent, 0.9, 1);
  EXPECT_THROW(run_pipeline(f.ds, fast(), {}, {}), PreconditionError);
  const auto models_only = subset_by_kind(f.ds, RaterKind::model);
  EXPECT_THROW(run_pipeline(models_only, fast(), {}, {}), PreconditionError);
}

TEST(Pipeline, DeterministicAndParametersRecorded) {
  auto f = humans(85);
  for (int m = 0; m < 3; ++m) testdata::add_model(f.ds, "m" + std::to_string(m), f.latent, 0.5, 50 + m);
  auto o = fast();
  o.models = {"m2", "m1"};
  o.ratings_per_sample = 5;
  const std::vector<InputFile> inputs{{"dataset", "x.csv", std::string(64, 'a')}};
  const auto a = run_pipeline(f.ds, o, inputs, {"w"});
  const auto b = run_pipeline(f.ds, o, inputs, {"w"});
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_EQ(a["parameters"]["models"], nlohmann::json({"m2", "m1"}));
  EXPECT_EQ(a["parameters"]["ratings_per_sample"], 5);
  EXPECT_EQ(a["parameters"]["seed"], 3);
  EXPECT_EQ(a["parameters"]["trials"], 20);
  EXPECT_EQ(a["inputs"][0]["path"], "x.csv");
  EXPECT_EQ(a["warnings"], nlohmann::json({"w"}));
  EXPECT_EQ(a["tool"]["name"], "agreekit");
  for (const auto& z : a["zone_summaries"]) {
    if (z["zone"] == "model_model") EXPECT_EQ(z["pair_count"], 1);
  }
}
