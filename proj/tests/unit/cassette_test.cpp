#include "agreekit/llm/cassette.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include "agreekit/errors.hpp"
#include "agreekit/hash.hpp"

using namespace agreekit;
using namespace agreekit::llm;
namespace fs = std::filesystem;

namespace {

class CassetteTest : public ::testing::Test {
 protected:
  void SetUp() override {
    path_ = fs::temp_directory_path() / ("agreekit-cassette-test-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) + ".jsonl");
    fs::remove(path_);
  }
  void TearDown() override { fs::remove(path_); }
  fs::path path_;
};

CassetteRecord record(const std::string& prompt, const std::string& response) {
  return {cassette_key("openai", "gpt-x", prompt), "openai", "gpt-x", prompt, response,
          std::vector<TokenLogprob>{{response, -0.1}}, "2026-01-01T00:00:00Z"};
}

}  // namespace

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(CassetteKey, LengthPrefixingPreventsCollisions) {
  EXPECT_NE(cassette_key("ab", "c", "d"), cassette_key("a", "bc", "d"));
  EXPECT_EQ(cassette_key("p", "m", "x"), cassette_key("p", "m", "x"));
  EXPECT_NE(cassette_key("p", "m", "x"), cassette_key("p", "m2", "x"));
  EXPECT_EQ(cassette_key("p", "m", "x").size(), 64u);
}

TEST_F(CassetteTest, RecordThenReplay) {
  {
    Cassette c(path_.string(), CassetteMode::record);
    EXPECT_EQ(c.size(), 0u);
    c.append(record("q1", "open"));
    c.append(record("q2", "closed"));
    auto no_logprobs = record("q3", "unknown");
    no_logprobs.token_logprobs.reset();
    c.append(no_logprobs);
  }
  Cassette replay(path_.string(), CassetteMode::replay);
  EXPECT_EQ(replay.size(), 3u);
  const auto hit = replay.find(cassette_key("openai", "gpt-x", "q2"));
  ASSERT_TRUE(hit);
  EXPECT_EQ(hit->response, "closed");
  EXPECT_EQ(hit->token_logprobs, (std::vector<TokenLogprob>{{"closed", -0.1}}));
  EXPECT_FALSE(replay.find(cassette_key("openai", "gpt-x", "q3"))->token_logprobs);
  EXPECT_FALSE(replay.find(cassette_key("openai", "gpt-x", "q4")));
  EXPECT_THROW(replay.append(record("q4", "open")), Error);
}

TEST_F(CassetteTest, ReplayNeedsAnExistingFile) {
  EXPECT_THROW(Cassette(path_.string(), CassetteMode::replay), ValidationError);
  EXPECT_THROW(cassette_mode_from_string("live"), ValidationError);
}

TEST_F(CassetteTest, TamperedRecordsAreRejected) {
  {
    Cassette c(path_.string(), CassetteMode::record);
    c.append(record("q1", "open"));
  }
  std::string text;
  {
    std::ifstream in(path_);
    std::getline(in, text);
  }
  const auto pos = text.find("\"q1\"");
  text.replace(pos, 4, "\"q9\"");
  std::ofstream(path_) << text << "\n";
  EXPECT_THROW(Cassette(path_.string(), CassetteMode::replay), ParseError);
  std::ofstream(path_) << "{not json\n";
  EXPECT_THROW(Cassette(path_.string(), CassetteMode::replay), ParseError);
}

TEST_F(CassetteTest, ConcurrentLookupsAndAppends) {
  Cassette c(path_.string(), CassetteMode::record);
  for (int i = 0; i < 20; ++i) c.append(record("seed" + std::to_string(i), "open"));
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 50; ++i) {
        EXPECT_TRUE(c.find(cassette_key("openai", "gpt-x", "seed" + std::to_string(i % 20))));
        if (i % 10 == 0) c.append(record("t" + std::to_string(t) + "-" + std::to_string(i), "closed"));
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(c.size(), 40u);
  EXPECT_EQ(Cassette(path_.string(), CassetteMode::replay).size(), 40u);
}
