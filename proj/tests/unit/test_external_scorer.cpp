#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "echonet/error.hpp"
#include "echonet/fusion.hpp"
#include "echonet/scorer.hpp"
#include "echonet/synthetic.hpp"

namespace echonet {
namespace {

ExternalScorer fake(const std::string& mode, std::chrono::milliseconds timeout = std::chrono::seconds(20),
                    const std::string& log = "") {
  ExternalScorerConfig cfg;
  cfg.argv = {FAKE_SCORER_PATH, "--mode", mode};
  if (!log.empty()) cfg.argv.insert(cfg.argv.end(), {"--log", log});
  cfg.timeout = timeout;
  return ExternalScorer(cfg);
}

const std::vector<LabeledPost> kTraining = {
    {"1", "the (((bankers))) again", 1}, {"2", "nice weather", 0}, {"3", "(((media))) lies", 1}, {"4", "go team", 0}};
const std::vector<std::string> kTexts = {"weather today", "those (((bankers)))", "team news", "(((media)))"};

TEST(ExternalScorer, UntrainedScoresHalf) {
  auto s = fake("normal");
  EXPECT_EQ(s.transport(), "external_process");
  EXPECT_EQ(s.score(kTexts), (std::vector<double>(4, 0.5)));
  EXPECT_TRUE(s.score({}).empty());
}

TEST(ExternalScorer, TrainedScoresAligned) {
  auto s = fake("normal");
  s.train(kTraining);
  EXPECT_EQ(s.score(kTexts), (std::vector<double>{0.1, 0.9, 0.1, 0.9}));
}

TEST(ExternalScorer, ReorderedResponsesReassembled) {
  auto normal = fake("normal");
  auto reversed = fake("reverse");
  normal.train(kTraining);
  reversed.train(kTraining);
  EXPECT_EQ(reversed.score(kTexts), normal.score(kTexts));
}

TEST(ExternalScorer, TrainingLinesSentEverySession) {
  const auto log = (std::filesystem::temp_directory_path() / "echonet_fake_scorer.log").string();
  std::filesystem::remove(log);
  auto s = fake("normal", std::chrono::seconds(20), log);
  s.train(kTraining);
  s.score(kTexts);
  s.score(std::span(kTexts).first(1));
  std::ifstream in(log);
  std::string l1, l2;
  std::getline(in, l1);
  std::getline(in, l2);
  EXPECT_EQ(l1, "4 4");
  EXPECT_EQ(l2, "4 1");
}

TEST(ExternalScorer, SingleClassTraining) {
  auto s = fake("normal");
  const std::vector<LabeledPost> one = {{"1", "x", 1}};
  EXPECT_THROW(s.train(one), TrainingError);
}

class Misbehaving : public ::testing::TestWithParam<std::string> {};

TEST_P(Misbehaving, RaisesScorerError) {
  auto s = fake(GetParam(), std::chrono::seconds(5));
  s.train(kTraining);
  try {
    s.score(kTexts);
    FAIL() << "no error for mode " << GetParam();
  } catch (const ScorerError& e) {
    EXPECT_FALSE(std::string(e.what()).empty());
  }
}

INSTANTIATE_TEST_SUITE_P(Modes, Misbehaving,
                         ::testing::Values("bad_json", "out_of_range", "missing_id", "error_line", "duplicate",
                                           "no_eof", "no_handshake", "exit_early", "bad_handshake_only"));

TEST(ExternalScorer, ProtocolViolationNamesLine) {
  auto s = fake("bad_json");
  try {
    s.score(kTexts);
    FAIL();
  } catch (const ScorerError& e) {
    EXPECT_NE(std::string(e.what()).find("{not json"), std::string::npos);
    EXPECT_EQ(e.code(), "scorer_error");
  }
}

TEST(ExternalScorer, Timeout) {
  auto s = fake("sleep", std::chrono::milliseconds(300));
  const auto start = std::chrono::steady_clock::now();
  try {
    s.score(kTexts);
    FAIL();
  } catch (const ScorerTimeout& e) {
    EXPECT_EQ(e.code(), "scorer_timeout");
  }
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(10));
}

TEST(ExternalScorer, MissingProgram) {
  ExternalScorerConfig cfg;
  cfg.argv = {"/nonexistent/scorer"};
  ExternalScorer s(cfg);
  EXPECT_THROW(s.score(kTexts), ScorerError);
  EXPECT_THROW(ExternalScorer(ExternalScorerConfig{}).score(kTexts), ConfigError);
}

TEST(ExternalScorer, DrivesCrossValidation) {
  PlantedCorpusConfig pc;
  pc.users = 60;
  pc.tweets_per_user = 4;
  const Corpus corpus = generate_planted_corpus(pc);
  EvaluateOptions opts;
  opts.folds = 3;
  opts.scorer_factory = [] {
    ExternalScorerConfig cfg;
    cfg.argv = {FAKE_SCORER_PATH};
    return std::make_unique<ExternalScorer>(cfg);
  };
  const std::vector<StreamConfig> configs = {parse_stream_config("U")};
  const auto reports = evaluate(corpus, corpus.labels(), configs, opts);
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].folds.size(), 3u);
  for (const auto& f : reports[0].folds) EXPECT_EQ(f.leaked_tweets, 0u);
  EXPECT_GE(reports[0].auc, 0.0);
  EXPECT_LE(reports[0].auc, 1.0);
}

}  // namespace
}  // namespace echonet
