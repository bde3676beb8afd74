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

#include "hotspin/errors.hpp"
#include "hotspin/init_protocol.hpp"

namespace hotspin {
namespace {

TEST(Init, ValidatesConfig) {
  InitConfig c;
  c.max_iterations = 0;
  EXPECT_THROW(c.validate(), ValidationError);
  InitConfig t;
  t.target = "xx";
  EXPECT_THROW(t.validate(), ValidationError);
  EXPECT_THROW(parse_init_depth("partial"), ValidationError);
}

TEST(Init, IdealReadoutAndGatesReachTarget) {
  const DeviceProfile p = bundled_profile("1K-0.79T");
  InitConfig c;
  c.ideal_readout = true;
  c.ideal_gates = true;
  Stream rng(1);
  for (int i = 0; i < 20; ++i) {
    Stream s = rng.child(i);
    const InitResult r = run_algorithmic_init(c, p, s);
    EXPECT_TRUE(r.success);
    EXPECT_NEAR(r.fidelity, 1.0, 1e-6);
    EXPECT_GE(r.n_iteration, 1);
  }
}

TEST(Init, OtherTargets) {
  const DeviceProfile p = bundled_profile("1K-0.79T");
  for (const char* t : {"du", "ud", "uu"}) {
    InitConfig c;
    c.target = t;
    c.ideal_readout = true;
    c.ideal_gates = true;
    Stream rng(2);
    EXPECT_NEAR(run_algorithmic_init(c, p, rng).fidelity, 1.0, 1e-6) << t;
  }
}

TEST(Init, Deterministic) {
  const DeviceProfile p = bundled_profile("1K-0.79T");
  Stream a(9), b(9);
  const InitCost x = estimate_cost(InitConfig{}, p, 100, a);
  const InitCost y = estimate_cost(InitConfig{}, p, 100, b);
  EXPECT_EQ(x.mean_fidelity, y.mean_fidelity);
  EXPECT_EQ(x.histogram, y.histogram);
}

TEST(Init, DepthOrdering) {
  const DeviceProfile p = bundled_profile("1K-0.79T");
  double f[3];
  int k = 0;
  for (InitDepth d : {InitDepth::kRampOnly, InitDepth::kParityFiltered, InitDepth::kFull}) {
    InitConfig c;
    c.depth = d;
    Stream rng(4);
    f[k++] = estimate_cost(c, p, 400, rng).mean_fidelity;
  }
  EXPECT_LT(f[0], f[1]);
  EXPECT_LT(f[1], f[2]);
}

TEST(Init, CostNeedsEnoughRuns) {
  Stream rng(1);
  EXPECT_THROW(estimate_cost(InitConfig{}, bundled_profile("1K-0.79T"), 10, rng), ValidationError);
}

TEST(Init, ElapsedCountsEveryIteration) {
  const DeviceProfile p = bundled_profile("1K-0.79T");
  Stream rng(5);
  const InitCost c = estimate_cost(InitConfig{}, p, 200, rng);
  for (const auto& r : c.runs) {
    EXPECT_GT(r.elapsed, 0.0);
    EXPECT_LE(r.n_iteration, 100);
  }
  long total = 0;
  for (auto [n, cnt] : c.histogram) total += cnt;
  EXPECT_EQ(total, 200);
}

}  // namespace
}  // namespace hotspin
