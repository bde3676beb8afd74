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
#include "hotspin/tomography.hpp"

namespace hotspin {
namespace {

int idx(const char* label) { return PauliLabel::parse(label).index(); }

// Hamiltonian generator from the commutator definition, built on density matrices.
Mat16 commutator_generator(int k) {
  Mat16 g;
  for (int j = 0; j < 16; ++j) {
    const Mat4c out = cplx(0, -1) * (pauli(k) * pauli(j) - pauli(j) * pauli(k));
    for (int i = 0; i < 16; ++i) g(i, j) = (pauli(i) * out).trace().real() / 4.0;
  }
  return g;
}

TEST(Generators, HamiltonianMatchesCommutator) {
  for (int k = 1; k < 16; ++k)
    EXPECT_LT((hamiltonian_generator(k) - commutator_generator(k)).norm(), 1e-14) << k;
}

TEST(Generators, StochasticIsDiagonalPauliFlip) {
  const Mat16 s = stochastic_generator(idx("XI"));
  for (int j = 0; j < 16; ++j) {
    const bool anticommutes = (j / 4 == 2 || j / 4 == 3);
    EXPECT_NEAR(s(j, j), anticommutes ? -2.0 : 0.0, 1e-14);
  }
}

TEST(Generators, RoundTrip) {
  Stream rng(1);
  for (int k = 0; k < 20; ++k) {
    std::array<double, 15> h{}, s{};
    for (int i = 0; i < 15; ++i) h[i] = rng.normal(0, 0.02), s[i] = 0.01 * rng.uniform();
    const ErrorDecomposition d = decompose_generator(generator_from_coefficients(h, s));
    for (int i = 0; i < 15; ++i) {
      EXPECT_NEAR(d.h[i], h[i], 1e-12);
      EXPECT_NEAR(d.s[i], s[i], 1e-12);
    }
    EXPECT_LT(d.residual_norm, 1e-12);
  }
}

TEST(Taxonomy, CoherentZZ) {
  const Mat16 lambda = matrix_exp(0.05 * hamiltonian_generator(idx("ZZ")));
  const ErrorDecomposition d = decompose_generator(error_generator(lambda));
  EXPECT_NEAR(d.h_of("ZZ"), 0.05, 1e-9);
  for (double s : d.s) EXPECT_LT(std::abs(s), 1e-10);
  EXPECT_NEAR(infidelity_from_coefficients(d).ent_infidelity, 0.0025, 1e-4);
}

TEST(Taxonomy, AvgFromEnt) {
  EXPECT_DOUBLE_EQ(avg_from_ent(0.995), 0.996);
  EXPECT_DOUBLE_EQ(avg_from_ent(1.0), 1.0);
  EXPECT_DOUBLE_EQ(ent_fidelity_of_ptm(Mat16::Identity()), 1.0);
}

// Small stochastic error: coefficient infidelity tracks the exact one.
TEST(Taxonomy, CoefficientFidelityFirstOrder) {
  std::array<double, 15> h{}, s{};
  s[idx("ZI") - 1] = 0.002;
  s[idx("IX") - 1] = 0.001;
  const Mat16 lam = matrix_exp(generator_from_coefficients(h, s));
  const double exact = 1.0 - ent_fidelity_of_ptm(lam);
  const double approx = infidelity_from_coefficients(decompose_generator(error_generator(lam))).ent_infidelity;
  EXPECT_NEAR(approx, exact, 1e-4);
}

TEST(Choi, RoundTrip) {
  Stream rng(2);
  Mat16 m = Mat16::Identity();
  for (int i = 1; i < 16; ++i)
    for (int j = 1; j < 16; ++j) m(i, j) += 0.01 * rng.normal();
  EXPECT_LT((ptm_of_choi(choi_of_ptm(m)) - m).norm(), 1e-12);
}

TEST(Cptp, LeavesValidChannelsAlone) {
  const Mat16 u = ideal_gate_ptm("DCZ");
  EXPECT_LT((cptp_project(u) - u).norm(), 1e-12);
  const Mat16 dep = depolarizing_ptm_2q(0.9);
  EXPECT_LT((cptp_project(dep) - dep).norm(), 1e-12);
}

TEST(Cptp, ProjectsOntoCptpSet) {
  Mat16 m = Mat16::Identity();
  m(3, 3) = 1.05;  // unphysical amplification
  m(5, 6) = 0.04;
  const Mat16 p = cptp_project(m);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix<cplx, 16, 16>> es(choi_of_ptm(p));
  EXPECT_GT(es.eigenvalues().minCoeff(), -1e-8);
  EXPECT_NEAR(p(0, 0), 1.0, 1e-9);
  for (int j = 1; j < 16; ++j) EXPECT_NEAR(p(0, j), 0.0, 1e-9);
  // Projection is idempotent.
  EXPECT_LT((cptp_project(p) - p).norm(), 1e-7);
}

TEST(Fbt, UpdateShrinksCovariance) {
  const NoiseResidual prior = NoiseResidual::prior({"DCZ", "X1(pi/2)"}, 0.03);
  const NoiseResidual post = fbt_update(prior, {"X1(pi/2)", "DCZ", "X1(pi/2)"}, 0.6, 100);
  EXPECT_LT(post.cov.trace(), prior.cov.trace());
  EXPECT_THROW(fbt_update(prior, {"CNOT"}, 0.5, 10), UnknownGateError);
}

// Single-gate linear model: the posterior mean moves the predicted
// probability toward the observation, as a scalar Kalman step does.
TEST(Fbt, MovesPredictionTowardData) {
  const NoiseResidual prior = NoiseResidual::prior({"X1(pi)"}, 0.03);
  const std::vector<std::string> seq{"X1(pi)", "X1(pi)"};
  const NoiseResidual post = fbt_update(prior, seq, 0.9, 1000);
  Vec16 r = Vec16::Zero();
  for (int k : {0, 3, 12, 15}) r[k] = 1.0;
  const Mat16 g = ideal_gate_ptm("X1(pi)");
  const Vec16 out = post.lambda(0) * g * post.lambda(0) * g * r;
  const double p_after = 0.5 * (1 + out[15]);
  EXPECT_LT(p_after, 1.0);
  EXPECT_GT(p_after, 0.9 - 0.05);
}

TEST(Fbt, RecoversInjectedChannel) {
  std::array<double, 15> h{}, s{};
  s[idx("ZI") - 1] = 0.004;
  s[idx("IZ") - 1] = 0.003;
  h[idx("ZZ") - 1] = 0.02;
  const Mat16 err = matrix_exp(generator_from_coefficients(h, s));
  ChannelExecutor ex;
  ex.gate_channels["DCZ"] = err;
  RbOptions o;
  o.n_qubits = 2;
  o.lengths = {1, 2, 3, 4, 6};
  o.sequences = 200;
  o.shots = 200;
  o.keep_records = true;
  Stream rng(9);
  const RbRun run = run_rb(ex, o, rng);
  const FbtReport rep = fbt_report(run_fbt(observations_from_records(run.records)));
  const double truth = avg_from_ent(ent_fidelity_of_ptm(err));
  EXPECT_NEAR(rep.gate("DCZ").f_avg, truth, 3e-3);
  EXPECT_NEAR(rep.gate("X1(pi/2)").f_avg, 1.0, 5e-3);
  EXPECT_EQ(rep.gauge, "none");
  const auto j = rep.to_json();
  EXPECT_TRUE(j["gates"][0].contains("f_avg"));
  EXPECT_TRUE(j["gates"][0].contains("top_stochastic"));
}

TEST(Fbt, VirtualGatesAreSkipped) {
  EXPECT_TRUE(is_virtual_gate("Z1(pi/2)"));
  EXPECT_FALSE(is_virtual_gate("DCZ"));
  const std::vector<FbtObservation> obs{{{"Z1(pi/2)", "X1(pi)", "X1(pi)"}, 0.9, 10}};
  EXPECT_EQ(gate_set_of(obs), std::vector<std::string>{"X1(pi)"});
}

}  // namespace
}  // namespace hotspin
