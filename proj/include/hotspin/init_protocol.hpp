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

// Algorithmic initialisation: thermal load, parity filter, zCNOT and a
// second parity filter, repeated until both readouts report blockade.

#include <map>
#include <optional>
#include <string>

#include "hotspin/device.hpp"
#include "hotspin/readout.hpp"

namespace hotspin {

enum class InitDepth { kRampOnly, kParityFiltered, kFull };
InitDepth parse_init_depth(const std::string& s);
std::string to_string(InitDepth d);

struct InitDurations {
  double ramp_s = 5e-6;
  double readout_s = -1.0;  // negative: the profile's integration time
  double zcnot_s = -1.0;    // negative: the compiled gate length
  double pulse_s = -1.0;    // negative: the compiled pi-pulse length
};

struct InitConfig {
  std::string target = "dd";
  int max_iterations = 100;
  InitDurations durations;
  InitDepth depth = InitDepth::kFull;
  bool ideal_readout = false;
  bool ideal_gates = false;
  NoiseConfig noise;
  std::optional<DensityMatrix> load_state;  // replaces the thermal load

  void validate() const;
};

struct InitResult {
  DensityMatrix state;
  int n_iteration = 0;
  double elapsed = 0.0;
  bool success = false;
  double fidelity = 0.0;  // overlap with the target basis state
};

InitResult run_algorithmic_init(const InitConfig& cfg, const DeviceProfile& p, Stream& rng);

struct InitCost {
  double mean_n_iteration = 0.0;
  double mean_t_initialisation = 0.0;
  double mean_fidelity = 0.0;
  double success_rate = 0.0;
  std::map<int, long> histogram;  // n_iteration -> runs
  std::vector<InitResult> runs;
};

InitCost estimate_cost(const InitConfig& cfg, const DeviceProfile& p, int n_runs, Stream& rng);

}  // namespace hotspin
