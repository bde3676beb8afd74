// Copyright 2026 The hotspin Authors
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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hotspin/errors.hpp"
#include "hotspin/runner.hpp"

namespace hotspin {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("hotspin_test_" + name);
  fs::remove_all(d);
  return d;
}

RunConfig config(const json& j, const fs::path& out) {
  RunConfig c = RunConfig::from_json(j);
  c.out_dir = out.string();
  return c;
}

TEST(Config, RequiresSeed) {
  const RunConfig c = RunConfig::from_json({{"kind", "t1"}});
  EXPECT_THROW(c.validate(), ValidationError);
  EXPECT_EQ(run_experiment(c).exit_code, kExitValidation);
}

TEST(Config, RejectsUnknownKeys) {
  EXPECT_THROW(RunConfig::from_json({{"kind", "t1"}, {"seeds", 1}}), ValidationError);
  EXPECT_THROW(RunConfig::from_json({{"kind", "t1"}, {"shots", -3}}), ValidationError);
}

TEST(Execute, ErrorCodesAreDistinct) {
  EXPECT_EQ(run_experiment(RunConfig::from_json({{"kind", "nope"}, {"seed", 1}})).exit_code,
            kExitUnknownKind);
  EXPECT_EQ(run_experiment(RunConfig::from_json({{"kind", "t1"}, {"seed", 1}, {"profile", "3K"}}))
                .exit_code,
            kExitProfile);
  const RunResult r = run_experiment(RunConfig::from_json(
      {{"kind", "init"}, {"seed", 1}, {"params", {{"max_iterations", 0}}}}));
  EXPECT_EQ(r.exit_code, kExitValidation);
  EXPECT_EQ(r.report["schema"], kErrorSchema);
  EXPECT_EQ(r.report["error"]["type"], "validation");
}

TEST(Execute, Rb1qIsByteReproducible) {
  const json j = {{"kind", "rb-1q"}, {"seed", 7}, {"params", {{"sequences", 5}}}};
  const fs::path a = fresh_dir("rb_a"), b = fresh_dir("rb_b");
  ASSERT_EQ(execute(config(j, a)), kExitOk);
  ASSERT_EQ(execute(config(j, b)), kExitOk);
  EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
  EXPECT_EQ(slurp(a / "raw/rb.csv"), slurp(b / "raw/rb.csv"));
  EXPECT_FALSE(fs::exists(a / ".lock"));
}

TEST(Execute, ThreadCountDoesNotChangeReport) {
  const json j = {{"kind", "init"}, {"seed", 3}, {"params", {{"runs", 40}}}};
  RunConfig one = config(j, fresh_dir("th1")), four = config(j, fresh_dir("th4"));
  one.threads = 1;
  four.threads = 4;
  ASSERT_EQ(execute(one), kExitOk);
  ASSERT_EQ(execute(four), kExitOk);
  EXPECT_EQ(slurp(fs::path(one.out_dir) / "report.json"),
            slurp(fs::path(four.out_dir) / "report.json"));
}

TEST(Execute, LockBlocksSecondRun) {
  const fs::path d = fresh_dir("lock");
  fs::create_directories(d);
  std::ofstream(d / ".lock") << "";
  EXPECT_EQ(execute(config({{"kind", "t1"}, {"seed", 1}}, d)), kExitLock);
  fs::remove(d / ".lock");
}

TEST(Execute, FbtConsumesRb2qRun) {
  const fs::path rb = fresh_dir("rb2q");
  ASSERT_EQ(execute(config({{"kind", "rb-2q"},
                            {"seed", 5},
                            {"shots", 50},
                            {"params", {{"lengths", {1, 2, 3, 4}}, {"sequences", 20}}}},
                           rb)),
            kExitOk);
  const fs::path fb = fresh_dir("fbt");
  ASSERT_EQ(execute(config({{"kind", "fbt"}, {"seed", 1}, {"params", {{"source", rb.string()}}}}, fb)),
            kExitOk);
  const json rep = json::parse(slurp(fb / "report.json"));
  bool dcz = false;
  for (const auto& g : rep["payload"]["gates"]) {
    EXPECT_TRUE(g.contains("f_avg"));
    dcz = dcz || g["gate"] == "DCZ";
  }
  EXPECT_TRUE(dcz);
}

TEST(Execute, InitEmitsPerRunLines) {
  const fs::path d = fresh_dir("init");
  ASSERT_EQ(execute(config({{"kind", "init"}, {"seed", 2}, {"params", {{"runs", 25}}}}, d)), kExitOk);
  std::ifstream in(d / "raw/init_runs.jsonl");
  int lines = 0;
  for (std::string s; std::getline(in, s); ++lines) {
    const json j = json::parse(s);
    EXPECT_TRUE(j.contains("n_iteration") && j.contains("elapsed_s") && j.contains("fidelity"));
  }
  EXPECT_EQ(lines, 25);
}

TEST(Execute, HmmFitFromCsv) {
  const fs::path d = fresh_dir("hmm");
  fs::create_directories(d);
  std::ofstream(d / "chains.csv") << "0,0,0\n0,0,1\n1,1,1\n0,0,0\n0,1,0\n";
  RunConfig c = RunConfig::from_json(
      {{"kind", "hmm-fit"}, {"seed", 1}, {"params", {{"data", "chains.csv"}, {"restarts", 2}}}},
      d.string());
  c.out_dir = (d / "out").string();
  EXPECT_EQ(execute(c), kExitOk);
  const json rep = json::parse(slurp(d / "out/report.json"));
  EXPECT_TRUE(rep["payload"].contains("P_init,even"));
}

TEST(Execute, ProfileFromInlineObject) {
  json prof = profile_to_json(bundled_profile("1K-0.79T"));
  prof["temperature"] = 0.5;
  const RunResult r = run_experiment(RunConfig::from_json(
      {{"kind", "readout-cal"}, {"seed", 1}, {"shots", 2000}, {"profile", prof}}));
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_DOUBLE_EQ(r.report["profile"]["temperature"].get<double>(), 0.5);
}

TEST(Table1, SmallRunHasRowsAndBands) {
  Table1Options o;
  o.profiles = {"1K-0.79T"};
  o.readout_shots = 2000;
  o.init_runs = 100;
  o.coherence_shots = 60;
  o.rb_sequences = 4;
  o.rb_shots = 20;
  o.fbt_sequences = 20;
  o.hmm_chains = 100;
  o.hmm_reads = 10;
  const json t = reproduce_table1(o, 1);
  ASSERT_EQ(t["rows"].size(), 1u);
  const json& row = t["rows"][0];
  EXPECT_EQ(row["profile"], "1K-0.79T");
  bool has_dcz = false;
  for (const auto& m : row["metrics"])
    if (m["metric"] == "dcz_f_avg") {
      has_dcz = true;
      EXPECT_EQ(m["band"][0].get<double>(), 0.980);
    }
  EXPECT_TRUE(has_dcz);
}

TEST(Table1, UnknownProfileMarksFailure) {
  Table1Options o;
  o.profiles = {"nope"};
  const json t = reproduce_table1(o, 1);
  EXPECT_FALSE(t["rows"][0]["failures"].empty());
}

}  // namespace
}  // namespace hotspin
