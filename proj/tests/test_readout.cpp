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

#include "hotspin/errors.hpp"
#include "hotspin/readout.hpp"

namespace hotspin {
namespace {

TEST(Basis, Labels) {
  EXPECT_EQ(basis_index("dd"), 0);
  EXPECT_EQ(basis_index("uu"), 3);
  EXPECT_EQ(basis_label(1), "du");
  EXPECT_EQ(ideal_parity("ud"), Parity::kUnblockaded);
  EXPECT_EQ(ideal_parity("uu"), Parity::kBlockaded);
}

TEST(Readout, IdealSampleFollowsBornRule) {
  Stream rng(1);
  // Equal mix of dd and du: half the shots blockaded.
  Mat4c m = Mat4c::Zero();
  m(0, 0) = 0.5;
  m(1, 1) = 0.5;
  const DensityMatrix rho = DensityMatrix::from_matrix(m);
  int blockaded = 0;
  for (int i = 0; i < 20000; ++i) blockaded += sample_readout_ideal(rho, rng).shot.outcome;
  EXPECT_NEAR(blockaded / 20000.0, 0.5, 0.015);
}

TEST(Readout, PostStateCollapsesParity) {
  Stream rng(2);
  const ReadoutModel m = ReadoutModel::from_profile(bundled_profile("1K-0.79T"));
  Mat4c mix = Mat4c::Constant(0.25);
  const DensityMatrix plus = DensityMatrix::from_matrix(mix);
  for (int i = 0; i < 50; ++i) {
    const ReadoutSample s = sample_readout(plus, m, rng);
    EXPECT_TRUE(s.post.invariant_violation(1e-9).empty());
    const double even = s.post.population(0) + s.post.population(3);
    if (!s.relaxed) EXPECT_NEAR(even, s.even ? 1.0 : 0.0, 1e-9);
  }
}

// Monte Carlo against the analytic fidelities of the same model.
TEST(Readout, AnalyticMatchesSampling) {
  const ReadoutModel m = ReadoutModel::from_profile(bundled_profile("1K-0.79T"));
  Stream rng(3);
  const ReadoutFidelity f = estimate_readout_fidelity(m, 100000, rng);
  EXPECT_NEAR(f.f_even, prob_blockaded_given_even(m), 4 * f.se_even + 1e-4);
  EXPECT_NEAR(f.f_odd, prob_unblockaded_given_odd(m), 4 * f.se_odd + 1e-4);
  EXPECT_NEAR(f.f_charge, 0.997, 0.002);
}

TEST(Readout, ColdProfileReadsBetter) {
  const ReadoutModel hot = ReadoutModel::from_profile(bundled_profile("1K-0.79T"));
  const ReadoutModel cold = ReadoutModel::from_profile(bundled_profile("0.1K-0.79T"));
  EXPECT_GT(prob_blockaded_given_even(cold), prob_blockaded_given_even(hot));
}

TEST(Readout, ThresholdFitSeparatesGaussians) {
  Stream rng(4);
  std::vector<double> a, b;
  for (int i = 0; i < 5000; ++i) {
    a.push_back(rng.normal(1.0, 0.1));
    b.push_back(rng.normal(0.0, 0.1));
  }
  EXPECT_NEAR(fit_threshold(a, b), 0.5, 0.03);
}

TEST(Readout, HistogramCountsAll) {
  std::vector<double> v{0.05, 0.15, 0.15, 0.95, 2.0};
  const auto h = histogram(v, 10, 0.0, 1.0);
  long total = 0;
  for (const auto& b : h) total += b.count;
  EXPECT_EQ(total, 4);  // out of range values are dropped
  EXPECT_EQ(h[1].count, 2);
  EXPECT_NE(histogram_csv(h).find("center"), std::string::npos);
}

TEST(Readout, ValidateRejectsBadModel) {
  ReadoutModel m;
  m.noise_sigma = -1.0;
  EXPECT_THROW(m.validate(), ValidationError);
}

}  // namespace
}  // namespace hotspin
