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

#include <cmath>
#include <functional>

#include "hotspin/errors.hpp"
#include "hotspin/hmm.hpp"

namespace hotspin {
namespace {

HmmModel anchor_model() { return HmmModel::parity(0.9934, 0.9934, 0.9615, 0.01, 0.02); }

// Brute-force likelihood over every hidden path.
double path_sum(const HmmModel& m, const std::vector<int>& obs) {
  const int s = m.n_states(), n = static_cast<int>(obs.size());
  double total = 0.0;
  std::vector<int> path(n, 0);
  while (true) {
    double p = m.pi[path[0]] * m.theta(path[0], obs[0]);
    for (int t = 1; t < n; ++t) p *= m.a(path[t - 1], path[t]) * m.theta(path[t], obs[t]);
    total += p;
    int k = n - 1;
    while (k >= 0 && ++path[k] == s) path[k--] = 0;
    if (k < 0) return total;
  }
}

TEST(Hmm, ParityModelLayout) {
  const HmmModel m = anchor_model();
  EXPECT_DOUBLE_EQ(m.pi[0], 0.9934);
  EXPECT_DOUBLE_EQ(m.theta(0, 0), 0.9934);
  EXPECT_DOUBLE_EQ(m.theta(1, 1), 0.9615);
  EXPECT_DOUBLE_EQ(m.a(0, 1), 0.01);
  EXPECT_DOUBLE_EQ(m.a(1, 0), 0.02);
  EXPECT_NO_THROW(m.validate());
}

TEST(Hmm, ValidateRejectsNonStochastic) {
  HmmModel m = anchor_model();
  m.a(0, 0) = 0.5;
  EXPECT_THROW(m.validate(), ValidationError);
}

TEST(Hmm, LikelihoodMatchesPathSum) {
  const HmmModel m = anchor_model();
  for (int n = 1; n <= 6; ++n) {
    std::vector<int> obs(n);
    for (int t = 0; t < n; ++t) obs[t] = (t * 7 + n) % 3 == 0;
    EXPECT_NEAR(chain_log_likelihood(m, obs), std::log(path_sum(m, obs)), 1e-12);
  }
}

TEST(Hmm, ImpossibleDataFlagged) {
  HmmModel m = HmmModel::parity(1.0, 1.0, 1.0, 0.0, 0.0);
  ChainData d;
  d.chains = {{0, 1}};
  bool impossible = false;
  const double ll = log_likelihood(m, d, &impossible);
  EXPECT_TRUE(impossible);
  EXPECT_TRUE(std::isinf(ll));
}

TEST(Hmm, ViterbiRecoversNoiselessPath) {
  const HmmModel m = HmmModel::parity(0.5, 0.999, 0.999, 0.1, 0.1);
  const std::vector<int> obs{0, 0, 1, 1, 1, 0};
  EXPECT_EQ(viterbi_path(m, obs), (std::vector<int>{0, 0, 1, 1, 1, 0}));
}

TEST(Hmm, CsvRoundTrip) {
  Stream rng(1);
  const ChainData d = simulate_chains(anchor_model(), 10, 5, rng);
  const ChainData back = ChainData::from_csv(d.to_csv());
  EXPECT_EQ(back.chains, d.chains);
  EXPECT_THROW(ChainData::from_csv("0,1\n0\n"), ValidationError);
  EXPECT_THROW(ChainData::from_csv("0,2\n"), ValidationError);
}

TEST(Hmm, JsonRoundTrip) {
  const HmmModel m = anchor_model();
  const HmmModel back = HmmModel::from_json(m.to_json());
  EXPECT_LT((back.a - m.a).norm(), 1e-15);
  EXPECT_LT((back.theta - m.theta).norm(), 1e-15);
}

TEST(BaumWelch, LikelihoodNeverDecreases) {
  Stream rng(2);
  const ChainData d = simulate_chains(anchor_model(), 300, 10, rng);
  double prev = -INFINITY;
  HmmModel cur = HmmModel::default_init();
  for (int it = 1; it <= 5; ++it) {
    const SpamEstimate e = baum_welch_fit(d, cur, 1);
    EXPECT_GE(e.log_likelihood, prev - 1e-9);
    prev = e.log_likelihood;
    cur = e.model;
  }
}

TEST(BaumWelch, RecoversWithinBounds) {
  Stream gen(3), fit(4);
  const ChainData d = simulate_chains(anchor_model(), 1000, 20, gen);
  const SpamEstimate e = fit_spam(d, fit, 3);
  ASSERT_TRUE(e.bounds_valid);
  EXPECT_NEAR(e.p_init_even, 0.9934, 3 * e.sd_init_even);
  EXPECT_NEAR(e.p_read_even, 0.9934, 3 * e.sd_read_even);
  EXPECT_NEAR(e.p_read_odd, 0.9615, 3 * e.sd_read_odd);
  // Label convention: state 0 reads blockaded more often than not.
  EXPECT_GE(e.model.theta(0, 0), 0.5);
  const auto j = e.to_json();
  EXPECT_TRUE(j.contains("P_read,odd"));
  EXPECT_TRUE(j["P_init,even"].contains("sd"));
}

// Cramér-Rao direction: empirical spread is not far below the reported bound.
TEST(BaumWelch, BoundIsNotOptimistic) {
  const HmmModel truth = anchor_model();
  std::vector<double> est, sd;
  for (int r = 0; r < 40; ++r) {
    Stream gen(100 + r), fit(200 + r);
    const ChainData d = simulate_chains(truth, 400, 20, gen);
    const SpamEstimate e = fit_spam(d, fit, 1);
    est.push_back(e.p_read_odd);
    sd.push_back(e.sd_read_odd);
  }
  double mean = 0, var = 0, msd = 0;
  for (double x : est) mean += x / est.size();
  for (double x : est) var += (x - mean) * (x - mean) / (est.size() - 1);
  for (double s : sd) msd += s / sd.size();
  EXPECT_GE(std::sqrt(var), 0.6 * msd);
}

TEST(BaumWelch, DegenerateDataWarns) {
  ChainData d;
  d.chains.assign(50, std::vector<int>(10, 0));
  Stream rng(5);
  const SpamEstimate e = fit_spam(d, rng, 1);
  EXPECT_FALSE(e.warnings.empty());
}

TEST(Reconstruct, CorrectsReadoutBias) {
  Stream gen(6);
  const HmmModel truth = anchor_model();
  const ChainData d = simulate_chains(truth, 2000, 20, gen);
  const Reconstruction r = reconstruct_initial(truth, d);
  EXPECT_NEAR(r.corrected_p_blockade, 0.9934, 0.005);
  EXPECT_EQ(r.posterior_even.size(), 2000u);
}

}  // namespace
}  // namespace hotspin
