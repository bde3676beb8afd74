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

#include "hotspin/device.hpp"
#include "hotspin/errors.hpp"

namespace hotspin {
namespace {

double process_overlap(const Mat16& a, const Mat16& b) { return (a.transpose() * b).trace() / 16.0; }

TEST(Profile, BundledAnchors) {
  const DeviceProfile hot = bundled_profile("1K-0.79T");
  EXPECT_NEAR(hot.t1_now(), 14.3e-3, 1e-9);  // single spin; the parity fit gives less
  EXPECT_NEAR(hot.t2_star_now(), 2.32e-6, 1e-12);
  EXPECT_NEAR(hot.t2_hahn_now(), 33.26e-6, 1e-11);
  const DeviceProfile cold = bundled_profile("0.1K-0.79T");
  EXPECT_NEAR(cold.t2_hahn_now(), 76.86e-6, 1e-11);
  EXPECT_NEAR(cold.t1_now(), 331.29e-3, 1e-8);
  EXPECT_THROW(bundled_profile("2K"), ProfileError);
}

TEST(Profile, JsonRoundTrip) {
  const DeviceProfile p = bundled_profile("1K-0.79T");
  const DeviceProfile q = profile_from_json(profile_to_json(p));
  EXPECT_EQ(profile_to_json(q), profile_to_json(p));
}

TEST(Profile, RejectsBadValues) {
  auto j = profile_to_json(bundled_profile("1K-0.79T"));
  j["temperature"] = -1.0;
  EXPECT_THROW(profile_from_json(j), ProfileError);
}

TEST(Profile, CoherenceShortensWithTemperature) {
  const DeviceProfile p = bundled_profile("1K-0.79T");
  const DeviceProfile warm = with_temperature(p, 1.5);
  EXPECT_LT(warm.t1_now(), p.t1_now());
  EXPECT_LT(warm.t2_hahn_now(), p.t2_hahn_now());
}

TEST(Exchange, VoltageInverse) {
  const DeviceProfile p = bundled_profile("1K-0.79T");
  for (double j : {1e5, 1e6, 3.77e6, 1e7})
    EXPECT_NEAR(exchange_from_voltage(voltage_for_exchange(j, p), p), j, j * 1e-12);
}

TEST(Exchange, SynchronisedValue) {
  const DeviceProfile p = bundled_profile("1K-0.79T");
  // Eight spectator cycles during the CZ: J = dEz / sqrt(N^2 - 1) at N = 4.
  EXPECT_NEAR(synchronised_exchange(p), p.delta_ez / std::sqrt(15.0), 1.0);
}

TEST(ThermalState, ValidAndMostlyGround) {
  const DensityMatrix rho = thermal_state(bundled_profile("1K-0.79T"), 0.0);
  EXPECT_TRUE(rho.invariant_violation(1e-10).empty());
  EXPECT_GT(rho.population(0), 0.5);
  EXPECT_GT(rho.population(3), 0.0);
}

class GateCompile : public ::testing::TestWithParam<const char*> {};

TEST_P(GateCompile, NoiselessMatchesTarget) {
  const DeviceProfile p = bundled_profile("1K-0.79T");
  const GateSpec g = compile_gate(GetParam(), p);
  EXPECT_TRUE(is_unitary(g.target, 1e-12));
  EXPECT_GT(process_overlap(simulated_gate_ptm(g, p), ptm_of_unitary(g.target)), 1.0 - 1e-6);
}

INSTANTIATE_TEST_SUITE_P(AllGates, GateCompile,
                         ::testing::Values("X1(pi/2)", "X1(-pi/2)", "X1(pi)", "X2(pi/2)",
                                           "X2(pi)", "Z1(pi/2)", "Z2(-pi/2)", "I", "CZ", "DCZ",
                                           "zCNOT", "CNOT"));

TEST(GateCompile, Durations) {
  const DeviceProfile p = bundled_profile("1K-0.79T");
  EXPECT_NEAR(compile_gate("CZ", p).duration, 132.6e-9, 0.1e-9);
  EXPECT_NEAR(compile_gate("DCZ", p).duration, 404.3e-9, 0.1e-9);
  EXPECT_TRUE(compile_gate("Z1(pi)", p).is_virtual());
  EXPECT_NEAR(compile_gate("X1(pi/2)", p).duration, 1.0 / (4.0 * p.f_rabi), 1e-12);
}

TEST(GateCompile, UnknownGate) {
  EXPECT_THROW(compile_gate("Y1(pi)", bundled_profile("1K-0.79T")), UnknownGateError);
  EXPECT_THROW(gate_target_unitary("SWAP"), UnknownGateError);
}

TEST(GateTarget, DczIsCzUpToLocalFlips) {
  // DCZ = (X (x) X) CZ-like phase; its square is the identity up to phase.
  const Mat4c d = gate_target_unitary("DCZ");
  const Mat4c sq = d * d;
  EXPECT_NEAR(std::abs((sq * sq.adjoint()).trace()), 4.0, 1e-12);
}

TEST(PulseEngine, NoisyGateStaysPhysical) {
  const DeviceProfile p = bundled_profile("1K-0.79T");
  Stream rng(3);
  PulseEngine e(p, true, NoiseConfig{}, draw_noise(p, NoiseConfig{}, rng));
  e.reset(DensityMatrix());
  e.apply(compile_gate("X1(pi/2)", p));
  e.apply(compile_gate("DCZ", p));
  const DensityMatrix rho = e.physical_state();
  EXPECT_TRUE(rho.invariant_violation(1e-9).empty());
  EXPECT_LT(rho.purity(), 1.0);
}

}  // namespace
}  // namespace hotspin
