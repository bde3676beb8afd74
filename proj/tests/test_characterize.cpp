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

#include "hotspin/characterize.hpp"
#include "hotspin/errors.hpp"

namespace hotspin {
namespace {

std::vector<double> grid(double hi, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = hi * i / (n - 1);
  return t;
}

class Coherence : public ::testing::TestWithParam<std::tuple<CoherenceKind, double>> {};

// Fitted times land near the measured values at 1 K. T1 is compared with the
// parity-decay value, which sits below the single-spin time.
TEST_P(Coherence, FitNearProfile) {
  const auto [kind, tol] = GetParam();
  const DeviceProfile p = bundled_profile("1K-0.79T");
  const double scale = kind == CoherenceKind::kT1       ? p.t1_now()
                       : kind == CoherenceKind::kRamsey ? p.t2_star_now()
                                                        : p.t2_hahn_now();
  const double want = kind == CoherenceKind::kT1 ? 9.29e-3 : scale;
  ExperimentOptions o;
  o.shots = 2000;
  Stream rng(11);
  const CoherenceResult r = run_coherence_experiment(kind, p, grid(3 * scale, 16), o, rng);
  ASSERT_TRUE(r.fit_ok) << r.fit_error;
  EXPECT_NEAR(r.t_char / want, 1.0, tol) << to_string(kind);
}

INSTANTIATE_TEST_SUITE_P(Kinds, Coherence,
                         ::testing::Values(std::tuple{CoherenceKind::kT1, 0.15},
                                           std::tuple{CoherenceKind::kRamsey, 0.15},
                                           std::tuple{CoherenceKind::kHahn, 0.15}));

TEST(Coherence, RejectsTimesOutOfRange) {
  const DeviceProfile p = bundled_profile("1K-0.79T");
  Stream rng(1);
  EXPECT_THROW(run_coherence_experiment(CoherenceKind::kRamsey, p, {0, 1.0}, {}, rng),
               ValidationError);
  EXPECT_THROW(parse_coherence_kind("echo"), ValidationError);
}

TEST(Coherence, CsvHasHeader) {
  const DeviceProfile p = bundled_profile("1K-0.79T");
  ExperimentOptions o;
  o.shots = 20;
  Stream rng(1);
  const auto r = run_coherence_experiment(CoherenceKind::kRamsey, p, grid(6e-6, 8), o, rng);
  EXPECT_EQ(r.csv().substr(0, 2), "x,");
}

TEST(DczScan, SynchronisedPointHasHighQuality) {
  const DeviceProfile p = bundled_profile("1K-0.79T");
  ExperimentOptions o;
  o.shots = 200;
  Stream rng(3);
  std::vector<double> times;
  for (int k = 0; k <= 50; ++k) times.push_back(0.1e-6 * k);
  const DczScan s = dcz_scan(p, {}, times, o, rng);
  ASSERT_EQ(s.points.size(), 1u);
  ASSERT_TRUE(s.points[0].fit_ok);
  // Conditional phase pi J t: the parity signal oscillates at J / 2.
  EXPECT_NEAR(s.points[0].fit.frequency, 0.5 * s.points[0].j, 0.05 * s.points[0].j);
  EXPECT_GT(s.points[0].fit.q(), 20.0);
  EXPECT_THROW(dcz_scan(p, {}, {0, 1e-7}, o, rng), ValidationError);
}

TEST(Rabi, ResonantFrequency) {
  const DeviceProfile p = bundled_profile("1K-0.79T");
  ExperimentOptions o;
  o.shots = 200;
  o.noisy = false;
  Stream rng(4);
  const RabiChevron c = rabi_chevron(p, {0.0, 2e6}, grid(2e-6, 41), o, rng);
  EXPECT_NEAR(dominant_frequency(c.times, c.p_blockade[0]), p.f_rabi, 0.1 * p.f_rabi);
  const double off = std::hypot(p.f_rabi, 2e6);
  EXPECT_NEAR(dominant_frequency(c.times, c.p_blockade[1]), off, 0.1 * off);
}

TEST(Psd, WhiteIsFlat) {
  const double s0 = 2e4;
  std::vector<double> t;
  for (int k = 0; k < 8; ++k) t.push_back(0.5e-6 * std::pow(30.0, k / 7.0));
  Stream rng(5);
  const PsdEstimate e =
      psd_from_cpmg(synthesize_cpmg_decays([&](double) { return s0; }, {1, 4, 16}, t, 300, rng));
  ASSERT_FALSE(e.points.empty());
  for (const auto& pt : e.points) EXPECT_NEAR(pt.density / s0, 1.0, 0.25);
  EXPECT_NEAR(e.log_slope().slope, 0.0, 0.15);
}

TEST(Psd, NoDecayGivesZeroDensity) {
  std::vector<CpmgDecay> d(2);
  for (int i = 0; i < 2; ++i) {
    d[i].n_pulses = i + 1;
    d[i].times = {1e-6, 2e-6, 3e-6, 4e-6, 5e-6};
    d[i].coherence.assign(5, 1.0);
  }
  for (const auto& pt : psd_from_cpmg(d).points) EXPECT_EQ(pt.density, 0.0);
}

TEST(Psd, NeedsTwoPulseNumbers) {
  CpmgDecay d;
  EXPECT_THROW(psd_from_cpmg({d}), ValidationError);
}

TEST(Crosstalk, RabiCondition) {
  EXPECT_DOUBLE_EQ(crosstalk_rabi_frequency(14.6e6, 4), 14.6e6 / std::sqrt(15.0));
  EXPECT_THROW(crosstalk_rabi_frequency(14.6e6, 3), ValidationError);
  DeviceProfile p = bundled_profile("1K-0.79T");
  p.f_rabi = crosstalk_rabi_frequency(p.delta_ez, 8);
  EXPECT_LT(spectator_population_error(p), 1e-6);
  // Off the condition the spectator is left partly flipped.
  p.f_rabi *= 1.3;
  EXPECT_GT(spectator_population_error(p), 1e-4);
}

TEST(Crosstalk, StarkShiftPerturbative) {
  const double dez = 14.6e6, fr = 0.02 * dez, t = 1.0 / (4 * fr);
  const double sim = std::abs(simulated_spectator_phase(fr, dez, t));
  EXPECT_NEAR(sim / (2 * M_PI * ac_stark_shift(fr, dez) * t), 1.0, 0.02);
}

}  // namespace
}  // namespace hotspin
