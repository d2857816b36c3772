#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Outcome {
  int exit_code = -1;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("echonet_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& content) const { std::ofstream(path(name)) << content; }

  static std::string read(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  json report(const std::string& out, const std::string& cmd) const { return json::parse(read(path(out) + "/" + cmd + ".json")); }

  Outcome run(const std::string& args, const std::string& env = "") const {
    const std::string err = path("stderr.txt");
    const std::string cmd = env + " " + ECHONET_CLI_PATH + " " + args + " >/dev/null 2>" + err;
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read(err)};
  }

  // a -> b -> c -> a, three mentions per arc.
  void write_cycle() const {
    std::string lines;
    int id = 0;
    for (auto [src, dst] : {std::pair{"a", "b"}, {"b", "c"}, {"c", "a"}})
      for (int k = 0; k < 3; ++k)
        lines += json{{"id", std::to_string(id++)}, {"author", src}, {"text", "hi @" + std::string(dst)},
                      {"ts", "2017-01-01T00:00:00Z"}, {"mentions", {dst}}}.dump() + "\n";
    write("tweets.jsonl", lines);
  }

  fs::path dir_;
};

TEST_F(Cli, TriangleStats) {
  write_cycle();
  const auto r = run("stats --tweets " + path("tweets.jsonl") + " --out " + path("out"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto rep = report("out", "stats");
  EXPECT_EQ(rep["rows"][0]["graph"], "Full");
  EXPECT_EQ(rep["rows"][0]["n_nodes"], 3);
  EXPECT_EQ(rep["rows"][0]["n_edges"], 3);
  EXPECT_EQ(rep["rows"][0]["n_triangles"], 1);
  EXPECT_EQ(rep["rows"][0]["n_strong_cc"], 1);
  EXPECT_TRUE(fs::exists(path("out") + "/stats.manifest.json"));
}

TEST_F(Cli, ConfigPrecedence) {
  write_cycle();
  write("cfg.json", json{{"delta", 5}, {"tweets", path("tweets.jsonl")}}.dump());
  auto delta = [&](const std::string& extra, const std::string& env) {
    const auto r = run("network --config " + path("cfg.json") + " --out " + path("out") + extra, env);
    EXPECT_EQ(r.exit_code, 0) << r.err;
    return json::parse(read(path("out") + "/network.manifest.json"))["config"]["delta"].get<long long>();
  };
  EXPECT_EQ(delta("", ""), 5);
  EXPECT_EQ(delta("", "ECHONET_DELTA=4"), 4);
  EXPECT_EQ(delta(" --delta 3", "ECHONET_DELTA=4"), 3);
}

TEST_F(Cli, ManifestRecordsHashes) {
  write_cycle();
  ASSERT_EQ(run("network --tweets " + path("tweets.jsonl") + " --out " + path("out") + " --seed 7").exit_code, 0);
  const auto m = json::parse(read(path("out") + "/network.manifest.json"));
  EXPECT_EQ(m["command"], "network");
  EXPECT_EQ(m["seed"], 7);
  EXPECT_EQ(m["inputs"]["tweets"]["sha256"].get<std::string>().size(), 64u);
  ASSERT_EQ(m["outputs"].size(), 1u);
  EXPECT_EQ(m["outputs"][0]["file"], "network.json");
  EXPECT_EQ(report("out", "network")["config_hash"], m["config_hash"]);
}

TEST_F(Cli, ReportsAreByteIdentical) {
  write_cycle();
  const std::string args = "centrality --tweets " + path("tweets.jsonl") + " --out " + path("out");
  ASSERT_EQ(run(args).exit_code, 0);
  const auto first = read(path("out") + "/centrality.json");
  const auto first_manifest = read(path("out") + "/centrality.manifest.json");
  ASSERT_EQ(run(args).exit_code, 0);
  EXPECT_EQ(read(path("out") + "/centrality.json"), first);
  EXPECT_EQ(read(path("out") + "/centrality.manifest.json"), first_manifest);
}

TEST_F(Cli, ExitCodesAndJsonErrors) {
  auto missing = run("stats --tweets " + path("nope.jsonl") + " --out " + path("out"));
  EXPECT_EQ(missing.exit_code, 2);
  EXPECT_EQ(json::parse(missing.err)["error"], "config_error");

  write_cycle();
  auto bad_flag = run("stats --tweets " + path("tweets.jsonl") + " --delta 0 --out " + path("out"));
  EXPECT_EQ(bad_flag.exit_code, 2);

  auto bad_env = run("stats --tweets " + path("tweets.jsonl") + " --out " + path("out"), "ECHONET_DELTA=abc");
  EXPECT_EQ(bad_env.exit_code, 2);
  EXPECT_TRUE(json::parse(bad_env.err).contains("message"));

  auto no_command = run("");
  EXPECT_EQ(no_command.exit_code, 2);

  write("labels.csv", "user_id,label\na,HM\nb,XX\n");
  auto no_data = run("stats --tweets " + path("tweets.jsonl") + " --labels " + path("labels.csv") + " --out " + path("out"));
  EXPECT_EQ(no_data.exit_code, 1) << no_data.err;
  EXPECT_EQ(json::parse(no_data.err)["error"], "parse_error");
}

TEST_F(Cli, SynthThenAblateAndLeaders) {
  ASSERT_EQ(run("synth --synth-users 80 --out " + path("data")).exit_code, 0);
  const std::string in = " --tweets " + path("data") + "/tweets.jsonl --users " + path("data") +
                         "/users.jsonl --labels " + path("data") + "/labels.csv";
  const auto ab = run("ablate" + in + " --folds 3 --out " + path("out"));
  ASSERT_EQ(ab.exit_code, 0) << ab.err;
  const auto rep = report("out", "ablate");
  ASSERT_EQ(rep["rows"].size(), 6u);
  EXPECT_EQ(rep["rows"][0]["model"], "U");
  EXPECT_EQ(rep["rows"][5]["model"], "U+UF+N");
  EXPECT_EQ(rep["leaked_tweets"], 0);

  const auto ld = run("leaders" + in + " --k 5 --limit 3 --out " + path("out"));
  ASSERT_EQ(ld.exit_code, 0) << ld.err;
  const auto leaders = report("out", "leaders");
  EXPECT_LE(leaders["rows"].size(), 3u);
  EXPECT_EQ(leaders["k"], 5);
  if (!leaders["rows"].empty()) EXPECT_EQ(leaders["rows"][0]["rank"], 1);
}

}  // namespace
