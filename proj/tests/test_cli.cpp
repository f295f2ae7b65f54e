// Copyright 2026 The vann Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vann/vann.hpp"

namespace vann {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + VANN_CLI_PATH + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string csv_of(const std::vector<SearchResult>& rs) {
  std::string out = "query,rank,id,distance\n";
  for (std::size_t q = 0; q < rs.size(); ++q)
    for (std::size_t i = 0; i < rs[q].ids.size(); ++i) {
      char d[32];
      std::snprintf(d, sizeof d, "%.9g", rs[q].distances[i]);
      out += std::to_string(q) + "," + std::to_string(i) + "," + std::to_string(rs[q].ids[i]) + "," + d + "\n";
    }
  return out;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("vann_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

const char* kData = "synthetic:n=3000,d=16,clusters=8,seed=5";
const char* kQueries = "synthetic:n=40,d=16,clusters=8,seed=5,stream=1";

TEST_F(Cli, AutoNlistFor32000Points) {
  const CliRun r = run("build --algo ivfflat --nlist auto --kmeans-iters 1 --data synthetic:n=32000,d=2 --out " +
                    path("i.vann"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("nlist: 715\n"), std::string::npos) << r.out;
}

TEST_F(Cli, AnnoyTreeCount) {
  const CliRun r = run("build --algo annoy --n-trees 64 --data synthetic:n=500,d=4 --out " + path("a.vann"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("n_trees: 64\n"), std::string::npos);
  const AnyIndex idx = load_index(path("a.vann"));
  EXPECT_EQ(std::get<AnnoyIndex>(idx).roots().size(), 64u);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("build --algo hnsw --M 16 --data synthetic:n=300,d=4 --out " + path("h.vann")).code, 0);
  EXPECT_EQ(run("build --algo hnsw --M 0 --data synthetic:n=300,d=4 --out " + path("h0.vann")).code, 2);
  EXPECT_FALSE(fs::exists(path("h0.vann")));
  EXPECT_EQ(run("build --algo kdtree --data synthetic:n=300,d=4 --out " + path("x.vann")).code, 2);
  EXPECT_EQ(run("build --algo flat").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("search --index " + path("missing.vann") + " --queries synthetic:n=2,d=4").code, 3);
  EXPECT_EQ(run("exact --data libsvm:path=" + path("none.svm") + ",dim=3 --queries synthetic:n=2,d=3").code, 3);
  {
    std::ofstream(path("bad.svm")) << "1 1:0.5\n1 2:oops\n";
  }
  EXPECT_EQ(run("exact --data libsvm:path=" + path("bad.svm") + ",dim=3 --queries synthetic:n=2,d=3").code, 3);
  {
    std::ofstream(path("p.json")) << R"({"profiles": [{"algorithm": "flat", "dim": 8, "calls_per_query": 10}]})";
    std::ofstream(path("k2.json")) << R"({"k": [2, 3]})";
    std::ofstream(path("v.json")) << R"({"vlen": [100]})";
  }
  EXPECT_EQ(run("sweep --spec " + path("k2.json") + " --profiles " + path("p.json")).code, 4);
  EXPECT_EQ(run("sweep --spec " + path("v.json") + " --profiles " + path("p.json")).code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, SearchMatchesLibrary) {
  ASSERT_EQ(run(std::string("build --algo ivfflat --seed 3 --data ") + kData + " --out " + path("i.vann")).code, 0);
  const CliRun r = run("search --index " + path("i.vann") + " --queries " + kQueries +
                    " --k 10 --nprobe 8 --truth exact --out " + path("res.csv"));
  ASSERT_EQ(r.code, 0);

  const Dataset data = synthetic_gaussian(3000, 16, 8, 5).data;
  const Dataset queries = synthetic_gaussian(40, 16, 8, 5, 1).data;
  BuildParams bp;
  bp.seed = 3;
  bp.nlist = default_nlist(data.size());
  const AnyIndex idx = build_index(Algorithm::ivfflat, data, bp);
  SearchParams sp;
  sp.nprobe = 8;
  const auto got = search_batch(idx, queries, 10, sp);
  for (const SearchResult& g : got) EXPECT_EQ(g.ids.size(), 10u);
  EXPECT_EQ(slurp(path("res.csv")), csv_of(got));
  char expect[64];
  std::snprintf(expect, sizeof expect, "recall@10: %.17g\n", mean_recall(got, exact_knn_batch(data, queries, 10)));
  EXPECT_EQ(r.out, expect);
}

TEST_F(Cli, SelfQueryComesFirst) {
  const std::string spec = "synthetic:n=400,d=6,clusters=4,seed=8";
  ASSERT_EQ(run("build --algo hnsw --data " + spec + " --out " + path("h.vann")).code, 0);
  const CliRun r = run("search --index " + path("h.vann") + " --queries " + spec + " --k 1");
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  std::size_t q = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(line, std::to_string(q) + ",0," + std::to_string(q) + ",0");
    ++q;
  }
  EXPECT_EQ(q, 400u);
}

TEST_F(Cli, ExactMatchesLibrary) {
  const CliRun r = run(std::string("exact --k 7 --data ") + kData + " --queries " + kQueries);
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, csv_of(exact_knn_batch(synthetic_gaussian(3000, 16, 8, 5).data,
                                          synthetic_gaussian(40, 16, 8, 5, 1).data, 7)));
}

TEST_F(Cli, ProfilesAreDeterministicAndOrdered) {
  ASSERT_EQ(run(std::string("build --algo flat --data ") + kData + " --out " + path("f.vann")).code, 0);
  ASSERT_EQ(run(std::string("build --algo ivfflat --data ") + kData + " --out " + path("i.vann")).code, 0);
  const std::string args = "profile --index " + path("f.vann") + " --index " + path("i.vann") +
                           " --queries " + kQueries + " --out ";
  ASSERT_EQ(run(args + path("p1.json")).code, 0);
  ASSERT_EQ(run(args + path("p2.json")).code, 0);
  EXPECT_EQ(slurp(path("p1.json")), slurp(path("p2.json")));
  const auto profiles = load_profiles(path("p1.json"));
  ASSERT_EQ(profiles.size(), 2u);
  EXPECT_EQ(profiles[0].calls_per_query, 3000.0);
  EXPECT_LT(profiles[1].calls_per_query, profiles[0].calls_per_query);
}

TEST_F(Cli, SweepReportsAreStable) {
  {
    std::ofstream(path("p.json")) << R"({"profiles": [
      {"algorithm": "flat", "dim": 128, "calls_per_query": 10000},
      {"algorithm": "hnsw", "dim": 128, "calls_per_query": 640}]})";
    std::ofstream(path("one.json")) << R"({"vlen": [1024], "k": [8], "n": [4], "m": [32]})";
  }
  const std::string base = "sweep --profiles " + path("p.json");
  const CliRun a = run(base + " --threads 2 --out " + path("a.csv") + " --json " + path("a.json"));
  const CliRun b = run(base + " --out " + path("b.csv") + " --summary-csv " + path("t.csv"));
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_EQ(a.out, b.out);
  const SweepResult lib = sweep(default_sweep_spec(), load_profiles(path("p.json")));
  EXPECT_EQ(slurp(path("a.csv")), render_csv(sweep_report(lib)));
  EXPECT_EQ(slurp(path("a.json")), render_summary_structured(winner_summary(lib)));
  EXPECT_EQ(slurp(path("t.csv")), render_csv(summary_report(winner_summary(lib))));
  EXPECT_EQ(a.out, render_summary_text(winner_summary(lib)));

  const CliRun one = run(base + " --spec " + path("one.json"));
  ASSERT_EQ(one.code, 0);
  const SweepResult single = sweep(load_sweep_spec(path("one.json")), load_profiles(path("p.json")));
  EXPECT_EQ(single.best_average.config, (VectorUnitConfig{1024, 8, 4, 32}));
  EXPECT_EQ(one.out, render_summary_text(winner_summary(single)));
}

TEST_F(Cli, BenchRowsAndSeedFallback) {
  const CliRun r = run("bench --reps 1 --algo flat,nsw --data synthetic:n=300,d=4 --data synthetic:n=200,d=4 "
                    "--queries synthetic:n=10,d=4,stream=1");
  ASSERT_EQ(r.code, 0);
  std::size_t lines = 0;
  for (char c : r.out) lines += c == '\n';
  EXPECT_EQ(lines, 1u + 4u);

  const CliRun a = run("build --algo nsw --data synthetic:n=300,d=4 --out " + path("a.vann"), "VANN_SEED=17");
  const CliRun b = run("build --algo nsw --seed 17 --data synthetic:n=300,d=4,seed=17 --out " + path("b.vann"));
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  EXPECT_NE(a.out.find("seed: 17\n"), std::string::npos);
  EXPECT_EQ(slurp(path("a.vann")), slurp(path("b.vann")));
  const CliRun c = run("build --algo nsw --data synthetic:n=300,d=4 --out " + path("c.vann"), "VANN_SEED=18");
  EXPECT_NE(slurp(path("a.vann")), slurp(path("c.vann")));
}

}  // namespace
}  // namespace vann
