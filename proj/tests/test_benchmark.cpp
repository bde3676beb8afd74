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

#include "hotspin/benchmark.hpp"
#include "hotspin/errors.hpp"

namespace hotspin {
namespace {

TEST(RbSequence, ComposesToIdentity) {
  for (int nq : {1, 2}) {
    const CliffordGroup& g = nq == 1 ? CliffordGroup::one_qubit() : CliffordGroup::two_qubit();
    Stream rng(nq);
    for (int m : {1, 5, 20}) {
      const RbSequence s = generate_rb_sequence(g, m, std::nullopt, rng);
      EXPECT_EQ(static_cast<int>(s.steps.size()), m + 1);
      EXPECT_LT((sequence_ptm(s.flat()) - Mat16::Identity()).norm(), 1e-9);
    }
  }
}

TEST(RbSequence, InterleavedComposesToIdentity) {
  Stream rng(4);
  const RbSequence s = generate_rb_sequence(CliffordGroup::two_qubit(), 6, "DCZ", rng);
  EXPECT_EQ(s.n_interleaved, 6);
  EXPECT_LT((sequence_ptm(s.flat()) - Mat16::Identity()).norm(), 1e-9);
  const RbSequence t = generate_rb_sequence(CliffordGroup::one_qubit(), 6, "X2(pi/2)", rng, 2);
  EXPECT_LT((sequence_ptm(t.flat()) - Mat16::Identity()).norm(), 1e-9);
  EXPECT_EQ(t.flip_gate(), "X2(pi)");
}

TEST(RbSequence, NonCliffordInterleaveRejected) {
  Stream rng(5);
  EXPECT_THROW(generate_rb_sequence(CliffordGroup::two_qubit(), 3, "X1(pi/3)", rng), Error);
}

TEST(IdealExecutor, PerfectContrast) {
  IdealExecutor ex;
  Stream rng(1);
  const RbSequence s = generate_rb_sequence(CliffordGroup::two_qubit(), 4, std::nullopt, rng);
  EXPECT_NEAR(ex.p_blockade(s, false, rng), 1.0, 1e-12);
  EXPECT_NEAR(ex.p_blockade(s, true, rng), 0.0, 1e-12);
}

// Depolarizing noise per Clifford step: difference signal is exactly p^(m+1).
TEST(ChannelExecutor, DepolarizingOracle) {
  ChannelExecutor ex;
  const double p = 0.98;
  ex.step_channel = depolarizing_ptm_2q(p);
  Stream rng(2);
  for (int m : {1, 3, 10}) {
    const RbSequence s = generate_rb_sequence(CliffordGroup::two_qubit(), m, std::nullopt, rng);
    const double diff = ex.p_blockade(s, false, rng) - ex.p_blockade(s, true, rng);
    EXPECT_NEAR(diff, std::pow(p, m + 1), 1e-12);
  }
}

TEST(RunRb, RecoversDepolarizing2Q) {
  ChannelExecutor ex;
  ex.step_channel = depolarizing_ptm_2q(0.96);
  RbOptions o;
  o.n_qubits = 2;
  o.lengths = {1, 4, 8, 16, 24, 32, 48};
  o.sequences = 20;
  o.shots = 50;
  Stream rng(3);
  const RbRun r = run_rb(ex, o, rng);
  ASSERT_TRUE(r.fit_ok) << r.fit_error;
  EXPECT_NEAR(r.fidelity, 1 - 0.75 * 0.04, 3e-3);
}

TEST(RunRb, Deterministic) {
  RbOptions o;
  o.lengths = {1, 10, 30, 60};
  const DeviceProfile p = bundled_profile("1K-0.79T");
  Stream a(7), b(7);
  const RbRun x = run_rb(p, o, a), y = run_rb(p, o, b);
  EXPECT_EQ(x.to_json().dump(), y.to_json().dump());
}

TEST(RunRb, Validation) {
  IdealExecutor ex;
  RbOptions o;
  o.lengths = {1, 2, 3};
  Stream rng(1);
  EXPECT_THROW(run_rb(ex, o, rng), ValidationError);
}

TEST(Irb, PerfectInterleavedGate) {
  ChannelExecutor ex;
  ex.step_channel = depolarizing_ptm_2q(0.97);
  RbOptions o;
  o.n_qubits = 2;
  o.lengths = {1, 4, 8, 16, 24, 32};
  o.sequences = 10;
  o.shots = 100;
  Stream rng(5);
  const IrbResult r = run_irb(ex, o, "DCZ", rng);
  // Interleaved sequences carry one noisy step per gate as well, so the ratio
  // reflects the extra steps only through sampling noise.
  EXPECT_GT(r.gate_fidelity, 0.9);
  EXPECT_GT(r.ratio, 0.9);
}

TEST(Formats, RecordsRoundTrip) {
  RbOptions o;
  o.n_qubits = 2;
  o.lengths = {1, 2, 3, 4};
  o.sequences = 3;
  o.shots = 20;
  o.keep_records = true;
  IdealExecutor ex;
  Stream rng(6);
  const RbRun r = run_rb(ex, o, rng);
  const auto back = records_from_files(sequences_to_json(r.records), outcomes_jsonl(r.records));
  ASSERT_EQ(back.size(), r.records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].gates, r.records[i].gates);
    EXPECT_EQ(back[i].blockaded_minus, r.records[i].blockaded_minus);
    EXPECT_EQ(back[i].flip_gate, r.records[i].flip_gate);
  }
}

TEST(Formats, MismatchedIdsRejected) {
  const nlohmann::json seq = nlohmann::json::parse(
      R"j([{"id": 0, "length": 1, "gates": ["I"], "flip_gate": "X1(pi)"}])j");
  EXPECT_THROW(records_from_files(seq, R"({"id": 5, "shots": 1, "blockaded_plus_zz": 1, "blockaded_minus_zz": 0})"),
               ValidationError);
}

TEST(RbFidelity, Conversions) {
  EXPECT_DOUBLE_EQ(rb_fidelity(0.0, 1), 1.0);
  EXPECT_NEAR(rb_fidelity(-std::log(0.997), 1), 0.9985, 1e-5);
}

}  // namespace
}  // namespace hotspin
