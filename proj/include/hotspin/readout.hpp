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

// Pauli-spin-blockade parity readout with blockade relaxation during the
// integration window and Gaussian sensor noise.

#include <string>
#include <string_view>
#include <vector>

#include "hotspin/device.hpp"

namespace hotspin {

// Basis index for a two-spin label: "dd", "du", "ud", "uu" or the arrow forms.
int basis_index(std::string_view label);
std::string basis_label(int index);

enum class Parity { kBlockaded, kUnblockaded };
Parity ideal_parity(std::string_view label);

struct ReadoutModel {
  double signal_blockaded = 1.0;
  double signal_unblockaded = 0.0;
  double noise_sigma = 0.08;
  double t_integration = 50e-6;
  double threshold = 0.5;
  double t1_psb = 1e-3;
  double odd_flip_prob = 0.0;

  static ReadoutModel from_profile(const DeviceProfile& p);
  void validate() const;
  // Outcome for a raw signal; 1 means blockaded.
  int classify(double signal) const;
};

struct ShotRecord {
  double signal = 0.0;
  int outcome = 0;
};

struct ReadoutSample {
  ShotRecord shot;
  DensityMatrix post;
  bool even = false;     // parity branch chosen by the Born rule
  bool relaxed = false;  // blockade decayed inside the window
};

ReadoutSample sample_readout(const DensityMatrix& rho, const ReadoutModel& model, Stream& rng);

// Projective parity measurement with no noise, relaxation or flips.
ReadoutSample sample_readout_ideal(const DensityMatrix& rho, Stream& rng);

// Probability of outcome 1 for an even state, integrating the relaxation
// time distribution against the Gaussian threshold crossing.
double prob_blockaded_given_even(const ReadoutModel& model);
double prob_unblockaded_given_odd(const ReadoutModel& model);

struct ReadoutFidelity {
  double f_charge = 0.0, f_even = 0.0, f_odd = 0.0;
  double se_charge = 0.0, se_even = 0.0, se_odd = 0.0;
  int n_shots = 0;
};

ReadoutFidelity estimate_readout_fidelity(const ReadoutModel& model, int n_shots, Stream& rng);

// Threshold that maximises the mean assignment fidelity of two labelled
// signal sets (blockaded and unblockaded references).
double fit_threshold(const std::vector<double>& blockaded, const std::vector<double>& unblockaded);

struct HistogramBin {
  double center = 0.0;
  long count = 0;
};
std::vector<HistogramBin> histogram(const std::vector<double>& values, int bins, double lo,
                                    double hi);
std::string histogram_csv(const std::vector<HistogramBin>& h);
std::string shots_jsonl(const std::vector<ShotRecord>& shots);

}  // namespace hotspin
