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

// Simulated coherence experiments, DCZ oscillations, CPMG noise
// spectroscopy and the crosstalk calibration formulas.

#include <functional>
#include <string>
#include <vector>

#include "hotspin/device.hpp"
#include "hotspin/fitting.hpp"
#include "hotspin/readout.hpp"

namespace hotspin {

enum class CoherenceKind { kT1, kRamsey, kHahn, kCpmg };
CoherenceKind parse_coherence_kind(const std::string& s);
std::string to_string(CoherenceKind k);

struct ExperimentOptions {
  int shots = 500;
  int qubit = 1;
  int cpmg_pulses = 1;
  NoiseConfig noise;
  bool noisy = true;
  bool ideal_readout = false;
  // Basis state prepared by the t1 experiment; defaults to the target
  // qubit flipped up.
  std::string t1_state;
};

struct CoherenceResult {
  CoherenceKind kind = CoherenceKind::kT1;
  std::vector<double> times;
  std::vector<double> p_blockade;
  std::vector<double> p_err;
  DecayFit fit;
  double t_char = 0.0;  // fitted 1/b, infinite when no decay is seen
  bool fit_ok = true;   // false keeps the data; t_char is then NaN
  std::string fit_error;
  std::string csv() const;
};

CoherenceResult run_coherence_experiment(CoherenceKind kind, const DeviceProfile& p,
                                         const std::vector<double>& times,
                                         const ExperimentOptions& opt, Stream& rng);

// Evaluates P(blockade) for a gate program at each sweep point. The
// program builder returns the operations for sweep value x. Shots share a
// quasi-static noise draw across the sweep.
struct SweepResult {
  std::vector<double> mean;
  std::vector<double> err;
};
SweepResult run_parity_sweep(const DeviceProfile& p, const std::vector<double>& xs,
                             const std::function<std::vector<GateOp>(double)>& program,
                             const DensityMatrix& initial, const ExperimentOptions& opt,
                             Stream& rng);

struct DczScanPoint {
  double voltage = 0.0;
  double j = 0.0;
  std::vector<double> p_blockade;
  std::vector<double> p_err;
  OscillationFit fit;
  bool fit_ok = false;
};

struct DczScan {
  std::vector<double> times;  // total exchange time
  std::vector<DczScanPoint> points;
};

// X1(pi/2), exchange t/2, X1(pi)||X2(pi), exchange t/2, X1(pi/2), parity.
DczScan dcz_scan(const DeviceProfile& p, const std::vector<double>& voltages,
                 const std::vector<double>& times, const ExperimentOptions& opt, Stream& rng);

struct RabiChevron {
  std::vector<double> detunings;  // Hz
  std::vector<double> times;      // s
  std::vector<std::vector<double>> p_blockade;  // [detuning][time]
};

RabiChevron rabi_chevron(const DeviceProfile& p, const std::vector<double>& detunings,
                         const std::vector<double>& times, const ExperimentOptions& opt,
                         Stream& rng);

// Dominant oscillation frequency of a uniformly or non-uniformly sampled
// trace, from a refined discrete Fourier peak search.
double dominant_frequency(const std::vector<double>& t, const std::vector<double>& y);

// ---- noise spectroscopy ----

struct CpmgDecay {
  int n_pulses = 1;
  std::vector<double> times;      // total evolution time tau
  std::vector<double> coherence;  // C(tau) in (0, 1)
  std::vector<double> coherence_err;  // optional
};

struct PsdPoint {
  double frequency = 0.0;  // Hz
  double density = 0.0;    // Hz^2/Hz
  double error = 0.0;
  int n_pulses = 0;
};

struct PsdEstimate {
  std::vector<PsdPoint> points;
  static constexpr const char* kConvention =
      "single-sided PSD of the qubit frequency noise in Hz^2/Hz; "
      "S(n/(2 tau)) = -ln C(tau) / (pi^2 tau), using the total filter weight";
  nlohmann::json to_json() const;
  LineFit log_slope() const;
};

PsdEstimate psd_from_cpmg(const std::vector<CpmgDecay>& decays);

// Single-sided frequency-noise spectrum S(f) in Hz^2/Hz.
using NoiseSpectrum = std::function<double(double)>;

// Monte-Carlo CPMG coherence under a stationary Gaussian frequency noise
// with the given spectrum, synthesised as random-amplitude sinusoids on a
// log-spaced grid between f_lo and f_hi.
std::vector<CpmgDecay> synthesize_cpmg_decays(const NoiseSpectrum& s, const std::vector<int>& ns,
                                              const std::vector<double>& times, int realizations,
                                              Stream& rng, double f_lo = 1e2, double f_hi = 1e9,
                                              int components = 400);

// Device-level CPMG decays on the simulator, converted to coherence.
std::vector<CpmgDecay> device_cpmg_decays(const DeviceProfile& p, const std::vector<int>& ns,
                                          const std::vector<double>& times,
                                          const ExperimentOptions& opt, Stream& rng);

// ---- crosstalk ----

double crosstalk_rabi_frequency(double delta_ez, int n);
double ac_stark_shift(double f_rabi, double delta_ez);

// Spectator Z phase (rad) after a resonant drive of `duration` on qubit 1,
// from the full two-qubit unitary.
double simulated_spectator_phase(double f_rabi, double delta_ez, double duration);

// Spectator spin-flip population after one uncorrected X(pi/2) on qubit 1.
double spectator_population_error(const DeviceProfile& p);

}  // namespace hotspin
