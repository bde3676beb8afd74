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

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hotspin/rng.hpp"
#include "json.hpp"

namespace hotspin {

// Hidden state 0 = even parity, 1 = odd; symbol 0 = blockaded (even
// reading), 1 = unblockaded.
struct HmmModel {
  Eigen::VectorXd pi;     // S
  Eigen::MatrixXd a;      // S x S, row-stochastic
  Eigen::MatrixXd theta;  // S x O, row-stochastic

  int n_states() const { return static_cast<int>(pi.size()); }
  int n_symbols() const { return static_cast<int>(theta.cols()); }
  void validate(double tol = 1e-12) const;

  // Two-state parity model from named probabilities.
  static HmmModel parity(double p_init_even, double p_read_even, double p_read_odd,
                         double p_even_to_odd, double p_odd_to_even);
  static HmmModel default_init(int n_states = 2, int n_symbols = 2);
  nlohmann::json to_json() const;
  static HmmModel from_json(const nlohmann::json& j);
};

struct ChainData {
  std::vector<std::vector<int>> chains;  // rectangular, entries 0/1

  int n_chains() const { return static_cast<int>(chains.size()); }
  int n_reads() const { return chains.empty() ? 0 : static_cast<int>(chains[0].size()); }
  void validate(int n_symbols = 2) const;
  std::string to_csv() const;
  static ChainData from_csv(const std::string& text);
};

ChainData simulate_chains(const HmmModel& model, int n_chains, int n_reads, Stream& rng);

// Sum of per-chain log marginal likelihoods. -inf when some chain is
// impossible; `impossible` is set in that case.
double log_likelihood(const HmmModel& model, const ChainData& data, bool* impossible = nullptr);
double chain_log_likelihood(const HmmModel& model, const std::vector<int>& chain);

// Most likely hidden path; ties go to the lower state index.
std::vector<int> viterbi_path(const HmmModel& model, const std::vector<int>& chain);

struct SpamEstimate {
  HmmModel model;
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;

  // Named parity-level probabilities and their Cramér-Rao deviations.
  double p_init_even = 0, p_init_odd = 0, p_read_even = 0, p_read_odd = 0;
  double p_even_to_odd = 0, p_odd_to_even = 0;
  double sd_init_even = 0, sd_init_odd = 0, sd_read_even = 0, sd_read_odd = 0;
  double sd_even_to_odd = 0, sd_odd_to_even = 0;
  bool bounds_valid = false;

  nlohmann::json to_json() const;
};

// Baum-Welch from one starting model. The log-likelihood is checked to be
// non-decreasing at every iteration.
SpamEstimate baum_welch_fit(const ChainData& data, const HmmModel& init, int max_iters = 2000,
                            double tol = 1e-10);

// Default start plus `restarts` random starts; best likelihood wins, then
// Fisher bounds are attached.
SpamEstimate fit_spam(const ChainData& data, Stream& rng, int restarts = 10,
                      int max_iters = 2000, double tol = 1e-10);

struct FisherBounds {
  Eigen::VectorXd sd_pi;
  Eigen::MatrixXd sd_a, sd_theta;
  bool singular = false;
  bool boundary = false;
};

// Observed information from central differences (h = 1e-4) in log-ratio
// coordinates of each stochastic row.
FisherBounds fisher_bounds(const HmmModel& model, const ChainData& data, double h = 1e-4);
void attach_bounds(SpamEstimate& est, const ChainData& data);

struct Reconstruction {
  std::vector<double> posterior_even;  // P(s_1 = even | chain)
  double corrected_p_blockade = 0.0;
  double raw_p_blockade = 0.0;  // fraction of chains whose first read is blockaded
};

Reconstruction reconstruct_initial(const HmmModel& model, const ChainData& data);

}  // namespace hotspin
