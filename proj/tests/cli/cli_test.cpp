// Runs the agreekit executable end to end.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kCli = AGREEKIT_CLI_PATH;
const fs::path kDemo = fs::path(AGREEKIT_TEST_DATA_DIR).parent_path().parent_path() / "data" / "demo";
const fs::path kLlm = fs::path(AGREEKIT_TEST_DATA_DIR) / "llm";
const std::string kFast = " --trials 20 --bootstrap-iters 200";

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("agreekit-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunResult run(const std::string& args) {
    const auto out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    const std::string cmd = "'" + kCli + "' " + args + " > '" + out.string() + "' 2> '" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
  }

  fs::path write(const std::string& name, const std::string& content) {
    const auto p = dir_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

  std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

  std::string summary_args() {
    return " --data " + q(kDemo / "summary" / "humans.csv") + " --answers " + q(kDemo / "summary" / "models.csv") +
           " --scale " + q(kDemo / "likert4.scale.json");
  }
  std::string triage_args() {
    return " --data " + q(kDemo / "triage" / "humans.csv") + " --answers " + q(kDemo / "triage" / "models.csv") +
           " --scale " + q(kDemo / "triage.scale.json");
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, AgreeOnToyFilePrintsOneHumanHumanCell) {
  const auto scale = write("s.json", R"({"kind":"nominal","labels":["agree","disagree"]})");
  const auto data = write("d.csv",
                          "sample_id,rater_id,rater_kind,label,confidence\n"
                          "s1,h1,human,agree,\ns1,h2,human,disagree,\n"
                          "s2,h1,human,agree,\ns2,h2,human,agree,\n"
                          "s3,h1,human,disagree,\ns3,h2,human,disagree,\n");
  const auto r = run("agree --data " + q(data) + " --scale " + q(scale));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("| Human-Human | "), std::string::npos);
  EXPECT_NE(r.out.find("| 1 |"), std::string::npos);
  EXPECT_NE(r.out.find("| Human-Model | n/a | n/a | 0 |"), std::string::npos);
  EXPECT_NE(r.out.find("rater,h1,h2"), std::string::npos);
}

TEST_F(Cli, AgreeOnEmptyDatasetExitsTwo) {
  const auto scale = write("s.json", R"({"kind":"nominal","labels":["agree","disagree"]})");
  const auto data = write("d.csv", "sample_id,rater_id,rater_kind,label,confidence\n");
  const auto r = run("agree --data " + q(data) + " --scale " + q(scale));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("no pairable data"), std::string::npos) << r.err;
}

TEST_F(Cli, ValidationErrorNamesTheCell) {
  const auto scale = write("s.json", R"({"kind":"nominal","labels":["agree","disagree"]})");
  const auto data = write("d.csv", "sample_id,rater_id,rater_kind,label\ns1,h1,human,agree\ns1,h2,human,maybe\n");
  const auto r = run("agree --data " + q(data) + " --scale " + q(scale));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("maybe"), std::string::npos) << r.err;
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("agree --no-such-flag").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, AgreeWritesMatrixFilesAndRestrictsModels) {
  const auto out = dir_ / "agree";
  const auto r = run("agree" + summary_args() + " --models gpt-4,claude --out-dir " + q(out));
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"agreement_matrix.csv", "agreement_matrix.json", "zones.json", "zones.md"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  const auto zones = nlohmann::json::parse(slurp(out / "zones.json"));
  for (const auto& z : zones) {
    if (z["zone"] == "model_model") EXPECT_EQ(z["pair_count"], 1);
    if (z["zone"] == "human_model") EXPECT_EQ(z["pair_count"], 6);
  }
  EXPECT_EQ(run("agree" + summary_args() + " --models annotator1").code, 2);
}

TEST_F(Cli, GateBothWays) {
  auto r = run("gate --json" + summary_args());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["outcome"], "replace_one_rating_all_samples");
  r = run("gate --json" + triage_args());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["outcome"], "selective_high_confidence_only");
}

TEST_F(Cli, PipelineRecommendsFullReplacementWhenModelsAgree) {
  const auto report_path = dir_ / "report.json", md = dir_ / "report.md";
  const auto r = run("pipeline" + kFast + summary_args() + " --out " + q(report_path) + " --markdown " + q(md));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = nlohmann::json::parse(slurp(report_path));
  EXPECT_EQ(report["recommendation"]["action"], "replace_one_rating_all_samples");
  EXPECT_EQ(report["recommendation"]["fraction"], 1.0);
  EXPECT_EQ(report["inputs"].size(), 3u);
  EXPECT_EQ(report["inputs"][0]["sha256"].get<std::string>().size(), 64u);
  const auto markdown = slurp(md);
  EXPECT_NE(markdown.find("## Inter-rater agreement"), std::string::npos);
  EXPECT_NE(markdown.find("100.0%"), std::string::npos);
}

TEST_F(Cli, PipelineDelegatesSelectivelyWhenModelsDisagree) {
  const auto r = run("pipeline" + kFast + triage_args());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = nlohmann::json::parse(r.out);
  EXPECT_EQ(report["recommendation"]["action"], "selective_high_confidence_only");
  EXPECT_EQ(report["recommendation"]["strategy"], "by_confidence");
  const double f = report["recommendation"]["fraction"];
  EXPECT_GT(f, 0.0);
  EXPECT_LT(f, 1.0);
}

TEST_F(Cli, PipelineWithoutConfidencesExitsThree) {
  std::ifstream in(kDemo / "triage" / "models.csv");
  std::ostringstream stripped;
  std::string line;
  std::getline(in, line);
  stripped << line << "\n";
  while (std::getline(in, line)) stripped << line.substr(0, line.rfind(',')) << ",\n";
  const auto models = write("models.csv", stripped.str());
  const auto r = run("pipeline" + kFast + " --data " + q(kDemo / "triage" / "humans.csv") + " --answers " +
                     q(models) + " --scale " + q(kDemo / "triage.scale.json"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("log-probabilities"), std::string::npos) << r.err;
}

TEST_F(Cli, PipelineIsByteIdenticalForTheSameSeed) {
  const auto a = run("pipeline --seed 7" + kFast + triage_args());
  const auto b = run("pipeline --seed 7" + kFast + triage_args());
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto c = run("pipeline --seed 8" + kFast + triage_args());
  EXPECT_NE(a.out, c.out);
}

TEST_F(Cli, EffortTable) {
  const auto r = run("effort --row 3:1.0 --row 11:1.0 --row 2:0.6 --row 2:0.5 --row 3:0.5");
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* pct : {"| 33.0% |", "| 9.0% |", "| 30.0% |", "| 25.0% |", "| 16.5% |"}) {
    EXPECT_NE(r.out.find(pct), std::string::npos) << pct << "\n" << r.out;
  }
  EXPECT_EQ(run("effort --row 3").code, 2);
}

TEST_F(Cli, SweepProfileMajority) {
  const auto csv = dir_ / "sweep.csv";
  auto r = run("sweep --model gpt-4 --strategy both" + kFast + triage_args() + " --csv " + q(csv));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("Strategy `by_confidence`"), std::string::npos);
  EXPECT_NE(r.out.find("Strategy `random`"), std::string::npos);
  EXPECT_TRUE(fs::exists(csv));
  EXPECT_EQ(run("sweep" + kFast + triage_args()).code, 2);  // several models, none chosen

  r = run("profile --model claude" + triage_args());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 201);

  r = run("majority --model claude --fractions 0.1,0.5,1" + triage_args());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("fraction,samples,agreeing,share\n", 0), 0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4);
}

TEST_F(Cli, AnnotateReplaysShippedCassette) {
  const auto out = dir_ / "answers.csv";
  const auto r = run("annotate --samples " + q(kLlm / "triage_samples.csv") + " --template " +
                     q(kLlm / "triage.prompt") + " --provider " + q(kLlm / "provider.json") + " --scale " +
                     q(kDemo / "triage.scale.json") + " --cassette " + q(kLlm / "triage.cassette.jsonl") +
                     " --cassette-mode replay --out " + q(out));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("(0 provider calls)"), std::string::npos) << r.err;
  EXPECT_EQ(slurp(out), slurp(kLlm / "triage.expected.csv"));
}

TEST_F(Cli, AnnotateReplayMissExitsFour) {
  const auto samples = write("samples.csv", "sample_id,text\nnew-1,\"Something never recorded\"\n");
  const auto r = run("annotate --samples " + q(samples) + " --template " + q(kLlm / "triage.prompt") +
                     " --provider " + q(kLlm / "provider.json") + " --cassette " +
                     q(kLlm / "triage.cassette.jsonl") + " --out " + q(dir_ / "a.csv"));
  EXPECT_EQ(r.code, 4);
}
