/*
 * Copyright 2026 The walkjoin Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "oracles.hpp"
#include "walkjoin/cli.hpp"
#include "walkjoin/encoder.hpp"
#include "walkjoin/store.hpp"

namespace walkjoin {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("walkjoin_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
  }

  std::string slurp(const std::string& name) const {
    std::ifstream in(path(name), std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "walkjoin");
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }

  json out_json() const { return json::parse(out_.str()); }

  /// Synthetic graph, store and common-neighbor query files in the test dir.
  void make_task() {
    ASSERT_EQ(run({"gen-synthetic", "--kind", "sbm", "--blocks", "2", "--nodes-per-block", "80",
                   "--p-in", "0.1", "--p-out", "0.002", "--per-class", "90", "--seed", "3",
                   "--out-graph", path("g.txt"), "--out-queries", path("q.txt")}),
              0)
        << err_.str();
    ASSERT_EQ(run({"preprocess", "--input", path("g.txt"), "--out", path("s.bin"), "--M", "8",
                   "--m", "2", "--seed", "1", "--threads", "1"}),
              0)
        << err_.str();
    std::istringstream all(slurp("q.txt"));
    std::string line, train, valid;
    for (int i = 0; std::getline(all, line); ++i) (i < 120 ? train : valid) += line + "\n";
    write("train.txt", train);
    write("valid.txt", valid);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(Cli, PreprocessPathGraphStats) {
  write("p.txt", "0 1\n");
  ASSERT_EQ(run({"preprocess", "--input", path("p.txt"), "--out", path("p.bin"), "--M", "2", "--m", "2"}), 0)
      << err_.str();
  json stats = json::parse(slurp("p.bin.stats.json"));
  EXPECT_EQ(stats["n"], 2);
  EXPECT_EQ(stats["walk_slots"], 12);
  EXPECT_EQ(stats["table"], 3);
  EXPECT_TRUE(stats.contains("preprocess_seconds"));
  EXPECT_TRUE(stats.contains("threads"));
  json sidecar = json::parse(slurp("p.bin.run.json"));
  EXPECT_EQ(sidecar["command"], "preprocess");
  EXPECT_EQ(sidecar["config"]["M"], 2);
  EXPECT_EQ(sidecar["config"]["seed"], 0);
}

TEST_F(Cli, PreprocessIsDeterministicAcrossRunsAndThreads) {
  ASSERT_EQ(run({"gen-synthetic", "--out-graph", path("g.txt"), "--seed", "4"}), 0) << err_.str();
  ASSERT_EQ(run({"preprocess", "--input", path("g.txt"), "--out", path("a.bin"), "--M", "6", "--seed", "9",
                 "--threads", "1"}),
            0);
  ASSERT_EQ(run({"preprocess", "--input", path("g.txt"), "--out", path("b.bin"), "--M", "6", "--seed", "9",
                 "--threads", "1"}),
            0);
  ASSERT_EQ(run({"preprocess", "--input", path("g.txt"), "--out", path("c.bin"), "--M", "6", "--seed", "9",
                 "--threads", "4"}),
            0);
  EXPECT_EQ(slurp("a.bin"), slurp("b.bin"));
  EXPECT_EQ(slurp("a.bin"), slurp("c.bin"));
}

TEST_F(Cli, PreprocessHyperedgesAndSplit) {
  write("h.txt", "0 1 2\n1 2 3\n3 4 5\n5 6 7\n7 8 9\n9 0 4\n2 5 8\n1 6 9\n");
  ASSERT_EQ(run({"preprocess", "--hyperedges", path("h.txt"), "--out", path("h.bin"), "--M", "3", "--m", "2",
                 "--split-dir", path("split"), "--train-frac", "0.6", "--query-frac", "0.5", "--k-neg", "2"}),
            0)
      << err_.str();
  json stats = out_json();
  EXPECT_EQ(stats["n"], 10);
  for (const char* f : {"split/train.txt", "split/valid.txt", "split/test.txt"}) EXPECT_TRUE(fs::exists(path(f)));
  EXPECT_GT(stats["valid_queries"].get<int>(), 0);
}

TEST_F(Cli, TrainEvalInferRoundTrip) {
  make_task();
  ASSERT_EQ(run({"train", "--store", path("s.bin"), "--train", path("train.txt"), "--valid", path("valid.txt"),
                 "--metric", "auc", "--epochs", "4", "--hidden", "16", "--lr", "0.01", "--seed", "2",
                 "--threads", "1", "--out", path("m.bin")}),
            0)
      << err_.str();
  EXPECT_NE(out_.str().find("epoch 1 loss"), std::string::npos);
  json hist = json::parse(slurp("m.bin.history.json"));
  ASSERT_EQ(hist["epochs"].size(), 4u);
  const double first = hist["epochs"][0]["train_loss"];
  const double at_best = hist["epochs"][hist["best_epoch"].get<int>() - 1]["train_loss"];
  EXPECT_LT(at_best, first);

  ASSERT_EQ(run({"eval", "--store", path("s.bin"), "--model", path("m.bin"), "--queries", path("valid.txt"),
                 "--metric", "auc", "--out", path("e1.json")}),
            0)
      << err_.str();
  ASSERT_EQ(run({"eval", "--store", path("s.bin"), "--model", path("m.bin"), "--queries", path("valid.txt"),
                 "--metric", "auc", "--out", path("e2.json")}),
            0);
  EXPECT_EQ(slurp("e1.json"), slurp("e2.json"));
  json report = json::parse(slurp("e1.json"));
  EXPECT_EQ(report["metric"], "auc");
  EXPECT_EQ(report["value"], hist["epochs"][hist["best_epoch"].get<int>() - 1]["valid_metric"]);

  ASSERT_EQ(run({"infer", "--store", path("s.bin"), "--model", path("m.bin"), "--queries", path("valid.txt"),
                 "--labeled", "--out", path("scores.txt")}),
            0)
      << err_.str();
  std::istringstream scores(slurp("scores.txt"));
  std::string line;
  std::size_t n = 0;
  while (std::getline(scores, line)) ++n;
  EXPECT_EQ(n, 60u);
}

TEST_F(Cli, TrainIsSeededAndPatienceZeroRunsOnce) {
  make_task();
  std::vector<std::string> base{"train", "--store", path("s.bin"), "--train", path("train.txt"), "--valid",
                                path("valid.txt"), "--metric", "auc", "--epochs", "3", "--hidden", "8",
                                "--threads", "1", "--quiet"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out", path("a.bin")});
  b.insert(b.end(), {"--out", path("b.bin")});
  ASSERT_EQ(run(a), 0) << err_.str();
  ASSERT_EQ(run(b), 0);
  EXPECT_EQ(slurp("a.bin"), slurp("b.bin"));
  auto c = base;
  c.insert(c.end(), {"--patience", "0", "--out", path("c.bin")});
  ASSERT_EQ(run(c), 0);
  EXPECT_EQ(json::parse(slurp("c.bin.history.json"))["epochs"].size(), 1u);
}

TEST_F(Cli, EvalZeroModelGivesTiedRank) {
  make_task();
  // one positive with k = 4 negatives per group; a zero model ties all of them
  write("ranked.txt", "1 0 1\n0 0 5\n0 0 6\n0 0 7\n0 0 8\n1 2 3\n0 2 9\n0 2 10\n0 2 11\n0 2 12\n");
  ModelConfig c;
  c.arity = 2;
  c.num_walks = 8;
  c.steps = 2;
  c.hidden = 4;
  Checkpoint ck{ModelParams::zeros(c), {}};
  ck.optimizer = AdamState::for_params(ck.params, 1e-3);
  save_checkpoint(ck, path("zero.bin"));
  ASSERT_EQ(run({"eval", "--store", path("s.bin"), "--model", path("zero.bin"), "--queries", path("ranked.txt"),
                 "--metric", "mrr"}),
            0)
      << err_.str();
  json r = out_json();
  EXPECT_DOUBLE_EQ(r["value"].get<double>(), 1.0 / ((4 + 2) / 2.0));
  EXPECT_EQ(r["n_queries"], 2);
  EXPECT_EQ(r["k_negatives"], 4);
}

TEST_F(Cli, EvalMatchesHandComputedMrr) {
  make_task();
  write("ranked.txt", "1 0 1\n0 0 5\n0 0 6\n1 2 3\n0 2 9\n0 2 10\n1 4 20\n0 4 30\n0 4 31\n");
  ASSERT_EQ(run({"train", "--store", path("s.bin"), "--train", path("train.txt"), "--epochs", "2", "--hidden",
                 "8", "--threads", "1", "--quiet", "--out", path("m.bin")}),
            0)
      << err_.str();
  ASSERT_EQ(run({"infer", "--store", path("s.bin"), "--model", path("m.bin"), "--queries", path("ranked.txt"),
                 "--labeled"}),
            0)
      << err_.str();
  std::istringstream lines(out_.str());
  std::vector<double> s;
  for (std::string line; std::getline(lines, line);) s.push_back(std::stod(line.substr(line.rfind(' ') + 1)));
  ASSERT_EQ(s.size(), 9u);
  std::vector<RankedQueryResult> hand{{s[0], {s[1], s[2]}}, {s[3], {s[4], s[5]}}, {s[6], {s[7], s[8]}}};
  ASSERT_EQ(run({"eval", "--store", path("s.bin"), "--model", path("m.bin"), "--queries", path("ranked.txt")}), 0);
  EXPECT_NEAR(out_json()["value"].get<double>(), oracle::brute_mrr(hand), 1e-15);
}

TEST_F(Cli, StoreMismatchIsAnError) {
  make_task();
  ASSERT_EQ(run({"train", "--store", path("s.bin"), "--train", path("train.txt"), "--epochs", "1", "--quiet",
                 "--threads", "1", "--out", path("m.bin")}),
            0);
  ASSERT_EQ(run({"preprocess", "--input", path("g.txt"), "--out", path("other.bin"), "--M", "5", "--m", "2"}), 0);
  EXPECT_EQ(run({"eval", "--store", path("other.bin"), "--model", path("m.bin"), "--queries", path("valid.txt"),
                 "--metric", "auc"}),
            1);
  json e = json::parse(err_.str());
  EXPECT_EQ(e["error"], "invalid_argument");
  EXPECT_NE(e["message"].get<std::string>().find("M=8"), std::string::npos);
}

TEST_F(Cli, BenchSingleThreadSpeedupIsOne) {
  ASSERT_EQ(run({"bench", "--nodes", "2000", "--blocks", "4", "--queries", "500", "--repeats", "1", "--threads",
                 "1", "--out", path("bench.json")}),
            0)
      << err_.str();
  json b = json::parse(slurp("bench.json"));
  ASSERT_EQ(b["points"].size(), 1u);
  EXPECT_EQ(b["points"][0]["sample_speedup"], 1.0);
  EXPECT_EQ(b["points"][0]["join_speedup"], 1.0);
  EXPECT_GT(b["points"][0]["walks_per_second"].get<double>(), 0.0);
  json sidecar = json::parse(slurp("bench.json.run.json"));
  EXPECT_EQ(sidecar["config"]["threads"], json::array({1}));
}

TEST_F(Cli, StoreInfo) {
  write("p.txt", "0 1\n");
  ASSERT_EQ(run({"preprocess", "--input", path("p.txt"), "--out", path("p.bin"), "--M", "2", "--m", "2"}), 0);
  ASSERT_EQ(run({"store-info", "--store", path("p.bin")}), 0) << err_.str();
  json info = out_json();
  EXPECT_EQ(info["n"], 2);
  EXPECT_EQ(info["M"], 2);
  EXPECT_EQ(info["m"], 2);
  EXPECT_EQ(info["table"], 3);
  EXPECT_EQ(info["file_bytes"], fs::file_size(path("p.bin")));
  EXPECT_TRUE(fs::exists(path("p.bin.info.json")));
}

TEST_F(Cli, ConfigFileMergesAndFlagsWin) {
  write("p.txt", "0 1\n1 2\n");
  write("cfg.json", R"({"M": 3, "m": 1, "seed": 5})");
  ASSERT_EQ(run({"preprocess", "--config", path("cfg.json"), "--input", path("p.txt"), "--out", path("p.bin"),
                 "--m", "2"}),
            0)
      << err_.str();
  json sidecar = json::parse(slurp("p.bin.run.json"));
  EXPECT_EQ(sidecar["config"]["M"], 3);
  EXPECT_EQ(sidecar["config"]["m"], 2);
  EXPECT_EQ(sidecar["config"]["seed"], 5);
  EXPECT_EQ(out_json()["walk_slots"], 3 * 3 * 3);
  write("bad.json", "{not json");
  EXPECT_EQ(run({"preprocess", "--config", path("bad.json"), "--input", path("p.txt"), "--out", path("x.bin")}), 2);
}

TEST_F(Cli, ErrorsAreJsonOnStderr) {
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(json::parse(err_.str())["error"], "usage");
  EXPECT_EQ(run({"preprocess", "--out", path("x.bin")}), 1);
  EXPECT_EQ(json::parse(err_.str())["error"], "invalid_argument");
  write("bad.txt", "0 1\n1 q\n");
  EXPECT_EQ(run({"preprocess", "--input", path("bad.txt"), "--out", path("x.bin")}), 1);
  json e = json::parse(err_.str());
  EXPECT_EQ(e["error"], "parse");
  EXPECT_NE(e["message"].get<std::string>().find("line 2"), std::string::npos);
  write("junk.bin", "SURX1234");
  EXPECT_EQ(run({"store-info", "--store", path("junk.bin")}), 1);
  EXPECT_EQ(json::parse(err_.str())["error"], "format");
  EXPECT_EQ(run({"preprocess", "--input", path("nope.txt"), "--out", path("x.bin")}), 1);
  EXPECT_EQ(run({"preprocess", "--input", path("bad.txt"), "--out", path("x.bin"), "--M", "0"}), 2);
  EXPECT_EQ(run({"train", "--store", "a", "--train", "b", "--out", "c", "--metric", "f1"}), 1);
  EXPECT_EQ(run({"--help"}), 0);
  EXPECT_NE(out_.str().find("preprocess"), std::string::npos);
}

}  // namespace
}  // namespace walkjoin
