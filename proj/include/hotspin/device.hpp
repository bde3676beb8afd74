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

// Physics model of the two-qubit device: profiles, static Hamiltonians,
// pulse-level evolution in the doubly-rotating frame and gate compilation.

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hotspin/qcore.hpp"
#include "hotspin/rng.hpp"

namespace hotspin {

inline constexpr double kPlanck = 6.62607015e-34;     // J s
inline constexpr double kBoltzmann = 1.380649e-23;    // J / K

// Coherence time with a power-law temperature dependence. The law is applied
// between 0.5 K and 1.5 K (and extrapolated above); below 0.5 K the value is
// held at its 0.5 K level.
struct PowerLaw {
  double anchor = 0.0;    // seconds, at t_ref
  double t_ref = 1.0;     // kelvin
  double exponent = 0.0;

  double at(double temperature) const;
};

struct ReadoutParams {
  double signal_blockaded = 1.0;
  double signal_unblockaded = 0.0;
  double noise_sigma = 0.08;       // sensor noise at t_integration, signal units
  double t_integration = 50e-6;    // s
  std::optional<double> threshold; // defaults to the midpoint of the levels
  double odd_flip_prob = 0.0;      // odd -> even back-action per readout

  double effective_threshold() const;
};

struct DeviceProfile {
  std::string name = "custom";
  double b0 = 0.79;            // T
  double temperature = 1.0;    // K
  double f_qubit_1 = 22.1e9;   // Hz
  double delta_ez = 14.6e6;    // Hz, f_qubit_2 - f_qubit_1
  double exchange_ref = 3.77e6;  // J0 in Hz at v_ref
  double v_ref = 0.5;          // V
  double exchange_slope = 20.0;  // decades per volt
  double f_rabi = 1.84e6;      // Hz
  PowerLaw t1;
  PowerLaw t2_star;
  PowerLaw t2_hahn;
  PowerLaw t1_psb;
  double sigma_j = 0.0015;     // relative quasi-static exchange noise
  ReadoutParams readout;

  double f_qubit_2() const { return f_qubit_1 + delta_ez; }
  double f_qubit(int q) const { return q == 1 ? f_qubit_1 : f_qubit_2(); }
  double t1_now() const { return t1.at(temperature); }
  double t2_star_now() const { return t2_star.at(temperature); }
  double t2_hahn_now() const { return t2_hahn.at(temperature); }
  double t1_psb_now() const { return t1_psb.at(temperature); }
  // Excited-state (spin up) population of qubit q in thermal equilibrium.
  double excited_population(int q) const;

  // Throws ProfileError when an invariant fails.
  void validate() const;
};

DeviceProfile bundled_profile(const std::string& name);
std::vector<std::string> bundled_profile_names();
nlohmann::json profile_to_json(const DeviceProfile& p);
// Accepts a full profile or {"base": "<bundled name>", ...overrides}.
DeviceProfile profile_from_json(const nlohmann::json& j);
DeviceProfile with_temperature(DeviceProfile p, double kelvin);

double exchange_from_voltage(double v_j, const DeviceProfile& p);
double voltage_for_exchange(double j, const DeviceProfile& p);

// Gibbs state of -(f1/2) ZI - (f2/2) IZ + (J/4)(XX + YY + ZZ - II).
DensityMatrix thermal_state(const DeviceProfile& p, double j);

enum class SegmentKind { kMicrowave, kExchange, kIdle };

struct Tone {
  double frequency = 0.0;  // carrier, Hz
  double phase = 0.0;      // rad, in the frame of `target`
  double amplitude = 0.0;  // Rabi frequency, Hz
  int target = 1;          // qubit whose virtual frame the phase follows
};

struct PulseSegment {
  SegmentKind kind = SegmentKind::kIdle;
  double duration = 0.0;   // s
  std::vector<Tone> tones; // microwave only; two tones = simultaneous drive
  double j = 0.0;          // exchange, Hz

  static PulseSegment microwave(double duration, Tone tone);
  static PulseSegment simultaneous(double duration, std::vector<Tone> tones);
  static PulseSegment exchange(double duration, double j);
  static PulseSegment idle(double duration);
};

// Zero-duration virtual Z: adds (dz1, dz2) to the frame phases.
struct FrameShift {
  double dz1 = 0.0;
  double dz2 = 0.0;
};

using GateOp = std::variant<PulseSegment, FrameShift>;

struct GateSpec {
  std::string name;
  std::vector<GateOp> ops;
  std::array<double, 2> virtual_phase{0.0, 0.0};  // net frame shift, rad
  Mat4c target = Mat4c::Identity();
  double duration = 0.0;
  double exchange_j = 0.0;
  double exchange_voltage = 0.0;
  bool is_virtual() const { return duration == 0.0; }
};

struct NoiseConfig {
  bool quasi_static = true;
  bool dephasing = true;
  bool relaxation = true;
  bool exchange_noise = true;
};

struct NoiseDraw {
  double delta1 = 0.0;  // Hz
  double delta2 = 0.0;  // Hz
  double dj_rel = 0.0;
};

NoiseDraw draw_noise(const DeviceProfile& p, const NoiseConfig& cfg, Stream& rng);

// Applies the PTM of Rz(theta1) (x) Rz(theta2) to a Pauli vector.
void apply_z_rotation(Vec16& r, double theta1, double theta2);

// Per-shot evolution engine. The state is the physical state in the
// doubly-rotating frame; `frame` holds the deferred virtual-Z phases, so the
// logical state is Rz(frame1) (x) Rz(frame2) applied to it.
class PulseEngine {
 public:
  PulseEngine(const DeviceProfile& p, bool noisy, NoiseConfig cfg = {},
              NoiseDraw draw = {});

  void reset(const DensityMatrix& rho, double t_start = 0.0);
  void apply(const PulseSegment& seg);
  void apply(const FrameShift& shift);
  void apply(const GateSpec& gate);

  const Vec16& state() const { return r_; }
  void set_state(const Vec16& r) { r_ = r; }
  DensityMatrix physical_state() const;
  DensityMatrix logical_state() const;
  double time() const { return t_; }
  std::array<double, 2> frame() const { return frame_; }
  const NoiseDraw& draw() const { return draw_; }

  // Step size used for a segment in noisy mode.
  double step_size(const PulseSegment& seg) const;

 private:
  struct Key {
    int kind;
    int n_tones;
    double duration, j, rel_freq, amplitude;
    double rel_freq2, amplitude2;
    int target1, target2;
    auto operator<=>(const Key&) const = default;
  };
  const Mat16& segment_map(const PulseSegment& seg, const Key& key);
  Mat4c frame_hamiltonian(const PulseSegment& seg, double g) const;
  Mat16 dissipator(double dt) const;

  const DeviceProfile& p_;
  bool noisy_;
  NoiseConfig cfg_;
  NoiseDraw draw_;
  Vec16 r_;
  double t_ = 0.0;
  std::array<double, 2> frame_{0.0, 0.0};
  std::map<Key, Mat16> cache_;
};

// Evolves rho through the segments. With noise on, draws quasi-static
// offsets from `rng` first.
DensityMatrix simulate_pulse(const DensityMatrix& rho,
                             const std::vector<PulseSegment>& segments,
                             const DeviceProfile& p, bool noise, Stream& rng,
                             const NoiseConfig& cfg = {}, double t_start = 0.0);

// Supported names: X1(pi/2), X1(-pi/2), X1(pi), X2(...), Z1(<angle>),
// Z2(<angle>), I, CZ, DCZ, zCNOT, CNOT. Angles accept pi fractions or radians.
GateSpec compile_gate(const std::string& name, const DeviceProfile& p);

// Ideal unitary of a named gate; profile independent.
Mat4c gate_target_unitary(const std::string& name);

// Noiseless logical PTM of a compiled gate, frame corrections included.
Mat16 simulated_gate_ptm(const GateSpec& g, const DeviceProfile& p);

// Exchange value on the synchronised ladder J = dEz / sqrt(16 m^2 - 1)
// closest to the profile's J0; each half of a CZ then completes m full
// flip-flop cycles.
double synchronised_exchange(const DeviceProfile& p);

// Caches compiled gates for one profile.
class GateLibrary {
 public:
  explicit GateLibrary(DeviceProfile p);
  const GateSpec& get(const std::string& name);
  const DeviceProfile& profile() const { return p_; }

 private:
  DeviceProfile p_;
  std::map<std::string, std::unique_ptr<GateSpec>> gates_;
};

}  // namespace hotspin
