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

#include "hotspin/clifford.hpp"
#include "hotspin/errors.hpp"

namespace hotspin {
namespace {

Eigen::MatrixXd restrict_1q(const Mat16& m) {
  Eigen::MatrixXd r(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = m(4 * i, 4 * j);
  return r;
}

TEST(Clifford1Q, DecompositionsReproducePtm) {
  const CliffordGroup& g = CliffordGroup::one_qubit();
  ASSERT_EQ(g.size(), 24);
  for (int i = 0; i < g.size(); ++i) {
    Mat16 m = Mat16::Identity();
    for (const auto& gate : g.at(i).gates) m = ideal_gate_ptm(gate) * m;
    EXPECT_LT((restrict_1q(m) - g.at(i).ptm).norm(), 1e-10) << i;
  }
  EXPECT_NEAR(g.avg_physical_1q(), 1.0, 1e-12);
}

TEST(Clifford2Q, SampledDecompositionsReproducePtm) {
  const CliffordGroup& g = CliffordGroup::two_qubit();
  ASSERT_EQ(g.size(), 11520);
  Stream rng(1);
  for (int k = 0; k < 300; ++k) {
    const int i = g.sample(rng);
    Mat16 m = Mat16::Identity();
    for (const auto& gate : g.at(i).gates) m = ideal_gate_ptm(gate) * m;
    EXPECT_LT((m - g.at(i).ptm).norm(), 1e-10) << i;
  }
}

TEST(Clifford2Q, DczClassCounts) {
  // 576 local, 5184 CNOT-like, 5184 iSWAP-like, 576 SWAP-like.
  const CliffordGroup& g = CliffordGroup::two_qubit();
  std::array<int, 4> counts{};
  for (int i = 0; i < g.size(); ++i) counts.at(g.at(i).n_two_qubit)++;
  EXPECT_EQ(counts, (std::array<int, 4>{576, 5184, 5184, 576}));
  EXPECT_NEAR(g.avg_two_qubit(), 1.5, 1e-12);
}

TEST(Clifford, GroupAxioms) {
  for (const CliffordGroup* g : {&CliffordGroup::one_qubit(), &CliffordGroup::two_qubit()}) {
    const int e = g->identity();
    Stream rng(2);
    for (int k = 0; k < 500; ++k) {
      const int a = g->sample(rng), b = g->sample(rng), c = g->sample(rng);
      EXPECT_EQ(g->compose(a, e), a);
      EXPECT_EQ(g->compose(a, g->inverse(a)), e);
      EXPECT_EQ(g->compose(g->compose(a, b), c), g->compose(a, g->compose(b, c)));
    }
  }
}

TEST(Clifford, FindRejectsNonMembers) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
  m(1, 1) = 0.5;
  EXPECT_EQ(CliffordGroup::one_qubit().find(m), -1);
}

TEST(Clifford, SamplingIsUniform) {
  const CliffordGroup& g = CliffordGroup::one_qubit();
  Stream rng(3);
  std::vector<int> hist(24);
  for (int k = 0; k < 48000; ++k) hist[g.sample(rng)]++;
  for (int h : hist) EXPECT_NEAR(h, 2000, 200);
}

TEST(RenameQubit, MovesRotations) {
  EXPECT_EQ(rename_qubit("X1(pi/2)", 2), "X2(pi/2)");
  EXPECT_EQ(rename_qubit("Z1(-pi/2)", 2), "Z2(-pi/2)");
  EXPECT_EQ(rename_qubit("X1(pi)", 1), "X1(pi)");
  EXPECT_EQ(rename_qubit("I", 2), "I");
}

TEST(IdealGate, UnknownName) { EXPECT_THROW(ideal_gate_ptm("H1"), UnknownGateError); }

}  // namespace
}  // namespace hotspin
