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


#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hotspin/benchmark.hpp"
#include "hotspin/qcore.hpp"
#include "json.hpp"

namespace hotspin {

// Elementary generators in the PTM picture: H_P[rho] = -i[P, rho] and
// S_P[rho] = P rho P - rho, for the 15 non-identity labels.
Mat16 hamiltonian_generator(int pauli_index);
Mat16 stochastic_generator(int pauli_index);

struct ErrorDecomposition {
  std::array<double, 15> h{};  // index k-1 for Pauli label k
  std::array<double, 15> s{};
  double residual_norm = 0.0;  // part of the generator outside H + S

  double h_of(const std::string& label) const;
  double s_of(const std::string& label) const;
  nlohmann::json to_json() const;
};

Mat16 generator_from_coefficients(const std::array<double, 15>& h,
                                  const std::array<double, 15>& s);
ErrorDecomposition decompose_generator(const Mat16& gen);
Mat16 error_generator(const Mat16& lambda);

struct FidelityEstimate {
  double ent_infidelity = 0.0;
  double avg_fidelity = 1.0;
};
FidelityEstimate infidelity_from_coefficients(const ErrorDecomposition& dec);
double avg_from_ent(double f_ent, int d = 4);
// Exact entanglement fidelity of a noise channel given as a PTM.
double ent_fidelity_of_ptm(const Mat16& lambda);

// Nearest CPTP map (Frobenius) via Dykstra alternating projections.
Mat16 cptp_project(const Mat16& lambda, double tol = 1e-9, int max_iter = 20000);
Eigen::Matrix<cplx, 16, 16> choi_of_ptm(const Mat16& ptm);
Mat16 ptm_of_choi(const Eigen::Matrix<cplx, 16, 16>& choi);

// Gates whose names start with 'Z' are virtual and treated as exact.
bool is_virtual_gate(const std::string& name);

struct FbtObservation {
  std::vector<std::string> gates;
  double mean = 0.0;  // observed blockade probability
  int shots = 1;
};

std::vector<FbtObservation> observations_from_records(const std::vector<RbRecord>& records,
                                                      bool include_minus = true);

// Stacked residuals eps_g (rows 1..15 of each 16x16 block; row 0 is fixed
// by trace preservation) with a joint Gaussian posterior.
struct NoiseResidual {
  std::vector<std::string> gates;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  static constexpr int kPerGate = 15 * 16;
  static NoiseResidual prior(const std::vector<std::string>& gates, double sigma);

  int gate_index(const std::string& name) const;  // -1 if absent
  Mat16 epsilon(int g) const;
  Mat16 lambda(int g) const { return Mat16::Identity() + epsilon(g); }
};

struct FbtOptions {
  double prior_sigma = 0.03;
  double variance_floor = 1e-6;
  bool relinearize = false;  // true: linearise about the running mean
  double convergence_ratio = 0.9;
};

// One rank-1 linear-Gaussian update for a parity-readout observation.
NoiseResidual fbt_update(const NoiseResidual& prior, const std::vector<std::string>& sequence,
                         double observed_mean, int shots, const FbtOptions& opt = {});
void fbt_update_in_place(NoiseResidual& post, const std::vector<std::string>& sequence,
                         double observed_mean, int shots, const FbtOptions& opt = {});

// Gate set = distinct physical gates in the data, sorted.
std::vector<std::string> gate_set_of(const std::vector<FbtObservation>& obs);

NoiseResidual run_fbt(const std::vector<FbtObservation>& obs, const FbtOptions& opt = {},
                      std::vector<std::string> gates = {});

struct GateReport {
  std::string name;
  Mat16 lambda;  // after CPTP projection and gauge fixing
  Mat16 generator;
  ErrorDecomposition dec;
  double f_avg = 1.0;        // exact, from the projected channel
  double f_avg_coeff = 1.0;  // from the H/S coefficients
  double f_avg_err = 0.0;    // linear propagation of the posterior
};

struct FbtReport {
  std::vector<GateReport> gates;
  bool converged = true;
  std::string gauge;
  std::vector<std::string> warnings;

  const GateReport& gate(const std::string& name) const;
  nlohmann::json to_json() const;
};

FbtReport fbt_report(const NoiseResidual& post, const FbtOptions& opt = {});

}  // namespace hotspin
