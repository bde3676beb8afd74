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

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hotspin/clifford.hpp"
#include "hotspin/device.hpp"
#include "hotspin/fitting.hpp"
#include "hotspin/readout.hpp"
#include "json.hpp"

namespace hotspin {

struct RbStep {
  int clifford = -1;  // -1 for an interleaved gate
  std::vector<std::string> gates;
  bool recovery = false;
};

struct RbSequence {
  int length = 0;
  int qubit = 1;  // target of single-qubit RB and of the -ZZ flip pulse
  std::vector<RbStep> steps;
  int recovery = -1;
  int n_interleaved = 0;

  std::vector<std::string> flat() const;
  std::string flip_gate() const;  // X(pi) on `qubit`
};

// m random Cliffords (each followed by `interleave` when set) and the
// recovery element that returns the ideal composite to the identity.
RbSequence generate_rb_sequence(const CliffordGroup& group, int m,
                                const std::optional<std::string>& interleave, Stream& rng,
                                int qubit = 1);

// Ideal composite PTM (16x16) of a gate list.
Mat16 sequence_ptm(const std::vector<std::string>& gates);

// Probability of a blockaded (even) readout for one shot of a sequence.
class RbExecutor {
 public:
  virtual ~RbExecutor() = default;
  // Called once, single-threaded, before any p_blockade call.
  virtual void prepare(const std::vector<const RbSequence*>& /*seqs*/) {}
  virtual double p_blockade(const RbSequence& seq, bool flip, Stream& rng) const = 0;
  // False when p_blockade ignores `rng`; shots are then drawn binomially.
  virtual bool stochastic() const { return false; }
};

class IdealExecutor : public RbExecutor {
 public:
  double p_blockade(const RbSequence& seq, bool flip, Stream& rng) const override;
};

// Ideal gates followed by fixed channels: per named gate and/or per step.
class ChannelExecutor : public RbExecutor {
 public:
  std::map<std::string, Mat16> gate_channels;
  std::optional<Mat16> step_channel;
  double p_blockade(const RbSequence& seq, bool flip, Stream& rng) const override;
};

struct PhysicalOptions {
  NoiseConfig noise;
  bool noisy = true;
  bool ideal_readout = false;
  double padding = 0.02e-6;  // between adjacent pulses
  double gap = 0.1e-6;       // real-time-logic gap between Clifford steps
};

class PhysicalExecutor : public RbExecutor {
 public:
  PhysicalExecutor(DeviceProfile p, PhysicalOptions opt = {});
  void prepare(const std::vector<const RbSequence*>& seqs) override;
  double p_blockade(const RbSequence& seq, bool flip, Stream& rng) const override;
  bool stochastic() const override { return opt_.noisy; }

 private:
  DeviceProfile p_;
  PhysicalOptions opt_;
  std::unique_ptr<GateLibrary> lib_;
  double f_even_ = 1.0, f_odd_ = 1.0;
};

Mat16 depolarizing_ptm_1q(double p, int qubit);
Mat16 depolarizing_ptm_2q(double p);

struct RbOptions {
  int n_qubits = 1;
  int qubit = 1;
  std::vector<int> lengths;
  int sequences = 10;  // random sequences per length
  int shots = 50;      // shots per sequence and projection
  std::optional<std::string> interleave;
  bool fix_c = true;
  bool keep_records = false;

  void validate() const;
};

struct RbRecord {
  int id = 0;
  int length = 0;
  std::vector<std::string> gates;  // +ZZ sequence; -ZZ appends flip_gate
  std::string flip_gate;
  int shots = 0;
  int blockaded_plus = 0;
  int blockaded_minus = 0;
};

struct RbRun {
  int n_qubits = 1;
  std::optional<std::string> interleave;
  std::vector<int> lengths;
  std::vector<double> plus, plus_se, minus, minus_se, diff, diff_se;
  DecayFit fit;
  bool fit_ok = false;
  std::string fit_error;
  double fidelity = 0.0;
  double fidelity_err = 0.0;
  std::vector<RbRecord> records;

  nlohmann::json to_json() const;
};

RbRun run_rb(RbExecutor& exec, const RbOptions& opt, Stream& rng);
// Physical simulation against a device profile.
RbRun run_rb(const DeviceProfile& p, const RbOptions& opt, Stream& rng,
             const PhysicalOptions& phys = {});

struct IrbResult {
  RbRun reference, interleaved;
  double ratio = 0.0;          // F_interleaved / F_reference
  double gate_fidelity = 0.0;  // from the decay-rate difference
  nlohmann::json to_json() const;
};

IrbResult run_irb(RbExecutor& exec, RbOptions opt, const std::string& gate, Stream& rng);

// Clifford fidelity from the decay rate.
double rb_fidelity(double b, int n_qubits);

nlohmann::json sequences_to_json(const std::vector<RbRecord>& records);
std::string outcomes_jsonl(const std::vector<RbRecord>& records);
std::vector<RbRecord> records_from_files(const nlohmann::json& sequences,
                                         const std::string& outcomes_jsonl);

}  // namespace hotspin
