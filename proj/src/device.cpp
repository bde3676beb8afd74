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


#include "hotspin/device.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <regex>
#include <set>

#include "hotspin/errors.hpp"

namespace hotspin {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// 2*pi*x reduced to [0, 2*pi); keeps phases accurate for large f*t.
double cycles_to_angle(double x) { return kTwoPi * (x - std::floor(x)); }

Mat4c heisenberg() {
  Mat4c h = pauli(5) + pauli(10) + pauli(15) - Mat4c::Identity();
  return 0.25 * h;
}

const Mat4c& heisenberg_cached() {
  static const Mat4c h = heisenberg();
  return h;
}

Mat4c z_on(int q) { return q == 1 ? pauli(12) : pauli(3); }
Mat4c x_on(int q) { return q == 1 ? pauli(4) : pauli(1); }
Mat4c y_on(int q) { return q == 1 ? pauli(8) : pauli(2); }

Mat16 matrix_power(Mat16 base, std::uint64_t n) {
  Mat16 out = Mat16::Identity();
  while (n > 0) {
    if (n & 1u) out = base * out;
    n >>= 1u;
    if (n > 0) base = base * base;
  }
  return out;
}

nlohmann::json law_json(const PowerLaw& l) {
  return {{"anchor", l.anchor}, {"t_ref", l.t_ref}, {"exponent", l.exponent}};
}

PowerLaw law_from(const nlohmann::json& j, PowerLaw base, const char* what) {
  if (!j.is_object()) throw ProfileError(std::string(what) + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "anchor") base.anchor = it.value().get<double>();
    else if (it.key() == "t_ref") base.t_ref = it.value().get<double>();
    else if (it.key() == "exponent") base.exponent = it.value().get<double>();
    else throw ProfileError(std::string("unknown key in ") + what + ": " + it.key());
  }
  return base;
}

DeviceProfile profile_1k() {
  DeviceProfile p;
  p.name = "1K-0.79T";
  p.b0 = 0.79;
  p.temperature = 1.0;
  p.f_qubit_1 = 22.1e9;
  // N = 8 crosstalk synchronisation: sqrt(dEz^2 + f_rabi^2) = 8 f_rabi.
  p.f_rabi = 1.84e6;
  p.delta_ez = std::sqrt(63.0) * p.f_rabi;
  // First rung of the synchronised exchange ladder, dEz / sqrt(15).
  p.exchange_ref = p.delta_ez / std::sqrt(15.0);
  p.v_ref = 0.5;
  p.exchange_slope = 20.0;
  // Single-spin T1. The parity-readout decay also carries the spectator's
  // thermal excitation, so its fitted time comes out near 9.3 ms.
  p.t1 = {14.3e-3, 1.0, -2.5};
  p.t2_star = {2.32e-6, 1.0, -0.2};
  p.t2_hahn = {33.26e-6, 1.0, -1.05};
  p.t1_psb = {1.36e-3, 1.0, -2.8};
  p.sigma_j = 0.0015;
  p.readout.signal_blockaded = 1.0;
  p.readout.signal_unblockaded = 0.0;
  p.readout.noise_sigma = 0.0788;
  p.readout.t_integration = 50e-6;
  p.readout.threshold = 0.198;
  p.readout.odd_flip_prob = 0.0327;
  return p;
}

DeviceProfile profile_100mk() {
  DeviceProfile p = profile_1k();
  p.name = "0.1K-0.79T";
  p.temperature = 0.1;
  p.t1 = {331.29e-3, 0.14, -2.5};
  p.t2_star = {3.44e-6, 0.14, -0.2};
  p.t2_hahn = {76.86e-6, 0.14, -1.05};
  p.sigma_j = 0.0005;
  p.readout.odd_flip_prob = 0.0263;
  return p;
}

}  // namespace

double PowerLaw::at(double temperature) const {
  const double tc = std::max(temperature, 0.5);
  const double tr = std::max(t_ref, 0.5);
  return anchor * std::pow(tc / tr, exponent);
}

double ReadoutParams::effective_threshold() const {
  return threshold.value_or(0.5 * (signal_blockaded + signal_unblockaded));
}

double DeviceProfile::excited_population(int q) const {
  const double x = kPlanck * f_qubit(q) / (kBoltzmann * temperature);
  return 1.0 / (1.0 + std::exp(x));
}

void DeviceProfile::validate() const {
  auto pos = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ProfileError(std::string(what) + " must be positive and finite");
  };
  pos(temperature, "temperature");
  pos(f_qubit_1, "f_qubit_1");
  pos(f_qubit_2(), "f_qubit_2");
  pos(f_rabi, "f_rabi");
  pos(exchange_ref, "exchange_ref");
  pos(exchange_slope, "exchange_slope");
  if (!(std::abs(delta_ez) > 0.0)) throw ProfileError("delta_ez must be nonzero");
  if (b0 < 0.0) throw ProfileError("b0 must be non-negative");
  for (const PowerLaw* l : {&t1, &t2_star, &t2_hahn, &t1_psb}) {
    pos(l->anchor, "coherence anchor");
    pos(l->t_ref, "coherence reference temperature");
    for (double t : {0.1, 0.5, 1.0, 1.5}) pos(l->at(t), "coherence time");
  }
  if (!(sigma_j >= 0.0)) throw ProfileError("sigma_j must be non-negative");
  pos(readout.noise_sigma, "readout.noise_sigma");
  pos(readout.t_integration, "readout.t_integration");
  if (readout.signal_blockaded == readout.signal_unblockaded)
    throw ProfileError("readout signal levels must differ");
  if (!(readout.odd_flip_prob >= 0.0 && readout.odd_flip_prob <= 1.0))
    throw ProfileError("readout.odd_flip_prob must lie in [0, 1]");
}

std::vector<std::string> bundled_profile_names() { return {"1K-0.79T", "0.1K-0.79T"}; }

DeviceProfile bundled_profile(const std::string& name) {
  if (name == "1K-0.79T") return profile_1k();
  if (name == "0.1K-0.79T") return profile_100mk();
  throw ProfileError("unknown bundled profile: " + name);
}

nlohmann::json profile_to_json(const DeviceProfile& p) {
  nlohmann::json ro = {{"signal_blockaded", p.readout.signal_blockaded},
                       {"signal_unblockaded", p.readout.signal_unblockaded},
                       {"noise_sigma", p.readout.noise_sigma},
                       {"t_integration", p.readout.t_integration},
                       {"odd_flip_prob", p.readout.odd_flip_prob}};
  if (p.readout.threshold) ro["threshold"] = *p.readout.threshold;
  return {{"name", p.name},
          {"b0", p.b0},
          {"temperature", p.temperature},
          {"f_qubit_1", p.f_qubit_1},
          {"delta_ez", p.delta_ez},
          {"f_qubit_2", p.f_qubit_2()},
          {"exchange_ref", p.exchange_ref},
          {"v_ref", p.v_ref},
          {"exchange_slope", p.exchange_slope},
          {"f_rabi", p.f_rabi},
          {"t1", law_json(p.t1)},
          {"t2_star", law_json(p.t2_star)},
          {"t2_hahn", law_json(p.t2_hahn)},
          {"t1_psb", law_json(p.t1_psb)},
          {"sigma_j", p.sigma_j},
          {"readout", ro}};
}

DeviceProfile profile_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ProfileError("profile must be a JSON object");
  DeviceProfile p;
  const bool has_base = j.contains("base");
  if (has_base) {
    p = bundled_profile(j.at("base").get<std::string>());
  } else {
    for (const char* k : {"temperature", "f_qubit_1", "f_rabi", "t1", "t2_star", "t2_hahn",
                          "t1_psb", "readout"}) {
      if (!j.contains(k)) throw ProfileError(std::string("profile is missing key: ") + k);
    }
    if (!j.contains("delta_ez") && !j.contains("f_qubit_2"))
      throw ProfileError("profile needs delta_ez or f_qubit_2");
  }
  try {
    std::optional<double> f2;
    bool has_delta = false;
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      const auto& v = it.value();
      if (k == "base") continue;
      if (k == "name") p.name = v.get<std::string>();
      else if (k == "b0") p.b0 = v.get<double>();
      else if (k == "temperature") p.temperature = v.get<double>();
      else if (k == "f_qubit_1") p.f_qubit_1 = v.get<double>();
      else if (k == "f_qubit_2") f2 = v.get<double>();
      else if (k == "delta_ez") { p.delta_ez = v.get<double>(); has_delta = true; }
      else if (k == "exchange_ref") p.exchange_ref = v.get<double>();
      else if (k == "v_ref") p.v_ref = v.get<double>();
      else if (k == "exchange_slope") p.exchange_slope = v.get<double>();
      else if (k == "f_rabi") p.f_rabi = v.get<double>();
      else if (k == "t1") p.t1 = law_from(v, p.t1, "t1");
      else if (k == "t2_star") p.t2_star = law_from(v, p.t2_star, "t2_star");
      else if (k == "t2_hahn") p.t2_hahn = law_from(v, p.t2_hahn, "t2_hahn");
      else if (k == "t1_psb") p.t1_psb = law_from(v, p.t1_psb, "t1_psb");
      else if (k == "sigma_j") p.sigma_j = v.get<double>();
      else if (k == "readout") {
        if (!v.is_object()) throw ProfileError("readout must be an object");
        for (auto r = v.begin(); r != v.end(); ++r) {
          const std::string& rk = r.key();
          if (rk == "signal_blockaded") p.readout.signal_blockaded = r->get<double>();
          else if (rk == "signal_unblockaded") p.readout.signal_unblockaded = r->get<double>();
          else if (rk == "noise_sigma") p.readout.noise_sigma = r->get<double>();
          else if (rk == "t_integration") p.readout.t_integration = r->get<double>();
          else if (rk == "threshold") p.readout.threshold = r->get<double>();
          else if (rk == "odd_flip_prob") p.readout.odd_flip_prob = r->get<double>();
          else throw ProfileError("unknown readout key: " + rk);
        }
      } else {
        throw ProfileError("unknown profile key: " + k);
      }
    }
    if (f2) {
      if (has_delta) {
        if (std::abs(*f2 - p.f_qubit_1 - p.delta_ez) > 1e-3)
          throw ProfileError("f_qubit_2 and delta_ez disagree");
      } else {
        p.delta_ez = *f2 - p.f_qubit_1;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ProfileError(std::string("bad profile value: ") + e.what());
  }
  p.validate();
  return p;
}

DeviceProfile with_temperature(DeviceProfile p, double kelvin) {
  p.temperature = kelvin;
  p.validate();
  return p;
}

double exchange_from_voltage(double v_j, const DeviceProfile& p) {
  return p.exchange_ref * std::pow(10.0, p.exchange_slope * (v_j - p.v_ref));
}

double voltage_for_exchange(double j, const DeviceProfile& p) {
  if (!(j > 0.0)) throw CompilationError("exchange must be positive to map to a voltage");
  return p.v_ref + std::log10(j / p.exchange_ref) / p.exchange_slope;
}

DensityMatrix thermal_state(const DeviceProfile& p, double j) {
  if (!(p.temperature > 0.0)) throw ValidationError("temperature must be positive");
  const Mat4c h = -0.5 * p.f_qubit_1 * pauli(12) - 0.5 * p.f_qubit_2() * pauli(3) +
                  j * heisenberg_cached();
  Eigen::SelfAdjointEigenSolver<Mat4c> es(h);
  const double beta = kPlanck / (kBoltzmann * p.temperature);  // per Hz
  const auto& ev = es.eigenvalues();
  const double e0 = ev.minCoeff();
  Eigen::Vector4d w;
  for (int k = 0; k < 4; ++k) w[k] = std::exp(-beta * (ev[k] - e0));
  w /= w.sum();
  const Mat4c rho = es.eigenvectors() * w.cast<cplx>().asDiagonal() *
                    es.eigenvectors().adjoint();
  return DensityMatrix::unchecked(rho);
}

PulseSegment PulseSegment::microwave(double duration, Tone tone) {
  PulseSegment s;
  s.kind = SegmentKind::kMicrowave;
  s.duration = duration;
  s.tones = {tone};
  return s;
}

PulseSegment PulseSegment::simultaneous(double duration, std::vector<Tone> tones) {
  PulseSegment s;
  s.kind = SegmentKind::kMicrowave;
  s.duration = duration;
  s.tones = std::move(tones);
  return s;
}

PulseSegment PulseSegment::exchange(double duration, double j) {
  PulseSegment s;
  s.kind = SegmentKind::kExchange;
  s.duration = duration;
  s.j = j;
  return s;
}

PulseSegment PulseSegment::idle(double duration) {
  PulseSegment s;
  s.kind = SegmentKind::kIdle;
  s.duration = duration;
  return s;
}

NoiseDraw draw_noise(const DeviceProfile& p, const NoiseConfig& cfg, Stream& rng) {
  NoiseDraw d;
  if (cfg.quasi_static) {
    const double sigma_f = 1.0 / (std::sqrt(2.0) * M_PI * p.t2_star_now());
    d.delta1 = rng.normal(0.0, sigma_f);
    d.delta2 = rng.normal(0.0, sigma_f);
  }
  if (cfg.exchange_noise && p.sigma_j > 0.0) d.dj_rel = rng.normal(0.0, p.sigma_j);
  return d;
}

void apply_z_rotation(Vec16& r, double theta1, double theta2) {
  if (theta2 != 0.0) {
    const double c = std::cos(theta2), s = std::sin(theta2);
    for (int a = 0; a < 4; ++a) {
      const double x = r[4 * a + 1], y = r[4 * a + 2];
      r[4 * a + 1] = c * x - s * y;
      r[4 * a + 2] = s * x + c * y;
    }
  }
  if (theta1 != 0.0) {
    const double c = std::cos(theta1), s = std::sin(theta1);
    for (int b = 0; b < 4; ++b) {
      const double x = r[4 + b], y = r[8 + b];
      r[4 + b] = c * x - s * y;
      r[8 + b] = s * x + c * y;
    }
  }
}

PulseEngine::PulseEngine(const DeviceProfile& p, bool noisy, NoiseConfig cfg, NoiseDraw draw)
    : p_(p), noisy_(noisy), cfg_(cfg), draw_(noisy ? draw : NoiseDraw{}) {
  r_ = DensityMatrix::basis_state(0).pauli_vector();
}

void PulseEngine::reset(const DensityMatrix& rho, double t_start) {
  r_ = rho.pauli_vector();
  t_ = t_start;
  frame_ = {0.0, 0.0};
}

DensityMatrix PulseEngine::physical_state() const { return DensityMatrix::from_pauli_vector(r_); }

DensityMatrix PulseEngine::logical_state() const {
  Vec16 r = r_;
  apply_z_rotation(r, frame_[0], frame_[1]);
  return DensityMatrix::from_pauli_vector(r);
}

double PulseEngine::step_size(const PulseSegment& seg) const {
  double dt = std::min(1.0 / (50.0 * p_.f_rabi), seg.duration);
  if (seg.j > 0.0) dt = std::min(dt, 1.0 / (50.0 * seg.j));
  return dt;
}

Mat4c PulseEngine::frame_hamiltonian(const PulseSegment& seg, double g) const {
  // g < 0 selects the doubly-rotating frame, otherwise a uniform frame at g.
  const double delta[2] = {draw_.delta1, draw_.delta2};
  Mat4c h = Mat4c::Zero();
  for (int q = 1; q <= 2; ++q) {
    const double detuning = g < 0.0 ? delta[q - 1]
                                    : (q == 1 ? 0.0 : p_.delta_ez) + (p_.f_qubit_1 - g) +
                                          delta[q - 1];
    h -= 0.5 * detuning * z_on(q);
  }
  if (seg.j > 0.0) h += seg.j * (1.0 + draw_.dj_rel) * heisenberg_cached();
  if (seg.kind == SegmentKind::kMicrowave) {
    if (seg.tones.size() == 1) {
      const double a = seg.tones[0].amplitude;
      h += 0.5 * a * (x_on(1) + x_on(2));
    } else {
      for (const Tone& t : seg.tones) h += 0.5 * t.amplitude * x_on(t.target);
    }
  }
  return h;
}

Mat16 PulseEngine::dissipator(double dt) const {
  Mat4 d[2];
  for (int q = 0; q < 2; ++q) {
    const double g1 = cfg_.relaxation ? 1.0 / p_.t1_now() : 0.0;
    const double gphi = cfg_.dephasing ? 1.0 / p_.t2_hahn_now() : 0.0;
    const double z_eq = 1.0 - 2.0 * p_.excited_population(q + 1);
    const double ez = std::exp(-g1 * dt);
    const double ex = std::exp(-(0.5 * g1 + gphi) * dt);
    d[q] = Mat4::Identity();
    d[q](1, 1) = ex;
    d[q](2, 2) = ex;
    d[q](3, 3) = ez;
    d[q](3, 0) = z_eq * (1.0 - ez);
  }
  return kron_ptm(d[0], d[1]);
}

const Mat16& PulseEngine::segment_map(const PulseSegment& seg, const Key& key) {
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  double g = p_.f_qubit_1;
  if (seg.kind == SegmentKind::kMicrowave) g = seg.tones.size() == 1 ? seg.tones[0].frequency : -1.0;
  const Mat4c h = frame_hamiltonian(seg, g);
  Mat16 s;
  const bool dissipative = noisy_ && (cfg_.relaxation || cfg_.dephasing);
  if (!dissipative) {
    s = ptm_of_unitary_trusted(evolve_unitary(h, seg.duration));
  } else {
    const double dt0 = step_size(seg);
    const auto n = static_cast<std::uint64_t>(std::ceil(seg.duration / dt0 - 1e-9));
    const double dt = seg.duration / static_cast<double>(n);
    const Mat16 step = dissipator(dt) * ptm_of_unitary_trusted(evolve_unitary(h, dt));
    s = matrix_power(step, n);
    if (std::abs(s(0, 0) - 1.0) > 1e-6 || s.row(0).tail<15>().cwiseAbs().maxCoeff() > 1e-6)
      throw IntegrationError("segment map lost trace preservation");
  }
  return cache_.emplace(key, s).first->second;
}

void PulseEngine::apply(const FrameShift& shift) {
  frame_[0] += shift.dz1;
  frame_[1] += shift.dz2;
}

void PulseEngine::apply(const PulseSegment& seg) {
  if (!(seg.duration >= 0.0)) throw ValidationError("segment duration must be non-negative");
  if (!(seg.j >= 0.0)) throw ValidationError("exchange J must be non-negative");
  if (seg.duration == 0.0) return;
  Key key{static_cast<int>(seg.kind), static_cast<int>(seg.tones.size()), seg.duration, seg.j,
          0.0, 0.0, 0.0, 0.0, 0, 0};
  double g = p_.f_qubit_1;
  double phi[2] = {0.0, 0.0};
  bool uniform = true;
  if (seg.kind == SegmentKind::kMicrowave) {
    if (seg.tones.empty()) throw ValidationError("microwave segment needs a tone");
    for (const Tone& t : seg.tones) {
      if (t.target != 1 && t.target != 2) throw ValidationError("tone target must be 1 or 2");
      if (!(t.amplitude >= 0.0)) throw ValidationError("tone amplitude must be non-negative");
    }
    if (seg.tones.size() == 1) {
      const Tone& t = seg.tones[0];
      g = t.frequency;
      phi[0] = phi[1] = t.phase - frame_[t.target - 1];
      key.rel_freq = t.frequency - p_.f_qubit_1;
      key.amplitude = t.amplitude;
      key.target1 = t.target;
    } else {
      // Simultaneous tones: each is resonant with its own target and drives
      // only that qubit; the cross-tone crosstalk is taken as calibrated out.
      if (seg.tones.size() != 2 || seg.tones[0].target == seg.tones[1].target)
        throw ValidationError("simultaneous drive needs one tone per qubit");
      if (seg.j > 0.0) throw ValidationError("simultaneous drive requires J = 0");
      uniform = false;
      for (const Tone& t : seg.tones) {
        if (std::abs(t.frequency - p_.f_qubit(t.target)) > 1.0)
          throw ValidationError("simultaneous tones must be resonant with their targets");
        phi[t.target - 1] = t.phase - frame_[t.target - 1];
      }
      const Tone& a = seg.tones[0].target == 1 ? seg.tones[0] : seg.tones[1];
      const Tone& b = seg.tones[0].target == 1 ? seg.tones[1] : seg.tones[0];
      key.amplitude = a.amplitude;
      key.amplitude2 = b.amplitude;
      key.target1 = 1;
      key.target2 = 2;
    }
  }
  const Mat16& s = segment_map(seg, key);
  const double t0 = t_, t1 = t_ + seg.duration;
  double in1 = -phi[0], in2 = -phi[1], out1 = phi[0], out2 = phi[1];
  if (uniform) {
    // Doubly-rotating frame to the uniform frame at g and back.
    const double d1 = g - p_.f_qubit_1;
    const double d2 = g - p_.f_qubit_2();
    in1 += cycles_to_angle(d1 * t0);
    in2 += cycles_to_angle(d2 * t0);
    out1 -= cycles_to_angle(d1 * t1);
    out2 -= cycles_to_angle(d2 * t1);
  }
  apply_z_rotation(r_, in1, in2);
  r_ = s * r_;
  apply_z_rotation(r_, out1, out2);
  t_ = t1;
}

void PulseEngine::apply(const GateSpec& gate) {
  for (const GateOp& op : gate.ops) std::visit([this](const auto& o) { apply(o); }, op);
}

DensityMatrix simulate_pulse(const DensityMatrix& rho, const std::vector<PulseSegment>& segments,
                             const DeviceProfile& p, bool noise, Stream& rng,
                             const NoiseConfig& cfg, double t_start) {
  const NoiseDraw d = noise ? draw_noise(p, cfg, rng) : NoiseDraw{};
  PulseEngine eng(p, noise, cfg, d);
  eng.reset(rho, t_start);
  for (const auto& s : segments) eng.apply(s);
  const DensityMatrix out = eng.physical_state();
  if (std::abs(out.trace() - 1.0) > 1e-6) throw IntegrationError("trace drifted during evolution");
  return out;
}

// ---- compilation ----

namespace {

double parse_angle(const std::string& text) {
  static const std::regex frac(R"(^\s*(-?)\s*pi\s*(?:/\s*([0-9.]+))?\s*$)");
  static const std::regex mult(R"(^\s*(-?[0-9.]+)\s*\*?\s*pi\s*(?:/\s*([0-9.]+))?\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, frac)) {
    double v = M_PI;
    if (m[2].matched) v /= std::stod(m[2].str());
    return m[1].str() == "-" ? -v : v;
  }
  if (std::regex_match(text, m, mult)) {
    double v = std::stod(m[1].str()) * M_PI;
    if (m[2].matched) v /= std::stod(m[2].str());
    return v;
  }
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw UnknownGateError("cannot parse angle: " + text);
}

Mat4c on_qubit(int q, const Mat2c& u) {
  return q == 1 ? kron(u, Mat2c::Identity()) : kron(Mat2c::Identity(), u);
}

// Noiseless logical unitary of a gate op list, frames included.
Mat4c simulate_unitary(const std::vector<GateOp>& ops, const DeviceProfile& p) {
  Mat4c u = Mat4c::Identity();
  double t = 0.0;
  std::array<double, 2> frame{0.0, 0.0};
  for (const auto& op : ops) {
    if (const auto* fs = std::get_if<FrameShift>(&op)) {
      frame[0] += fs->dz1;
      frame[1] += fs->dz2;
      continue;
    }
    const auto& seg = std::get<PulseSegment>(op);
    if (seg.duration == 0.0) continue;
    // Hamiltonian directly in the doubly-rotating frame, piecewise exact.
    double g = p.f_qubit_1;
    double phi[2] = {0.0, 0.0};
    Mat4c h = Mat4c::Zero();
    bool uniform = true;
    if (seg.kind == SegmentKind::kMicrowave && seg.tones.size() == 1) {
      g = seg.tones[0].frequency;
      phi[0] = phi[1] = seg.tones[0].phase - frame[seg.tones[0].target - 1];
      h += 0.5 * seg.tones[0].amplitude *
           (std::cos(phi[0]) * (x_on(1) + x_on(2)) + std::sin(phi[0]) * (y_on(1) + y_on(2)));
    } else if (seg.kind == SegmentKind::kMicrowave) {
      uniform = false;
      for (const Tone& tn : seg.tones) {
        const double ph = tn.phase - frame[tn.target - 1];
        h += 0.5 * tn.amplitude * (std::cos(ph) * x_on(tn.target) + std::sin(ph) * y_on(tn.target));
      }
    }
    if (uniform) {
      h -= 0.5 * (p.f_qubit_1 - g) * z_on(1) + 0.5 * (p.f_qubit_2() - g) * z_on(2);
    }
    h += seg.j * heisenberg_cached();
    Mat4c e = evolve_unitary(h, seg.duration);
    if (uniform) {
      auto ug = [&](double time) {
        return kron(rz(cycles_to_angle((g - p.f_qubit_1) * time)),
                    rz(cycles_to_angle((g - p.f_qubit_2()) * time)));
      };
      e = ug(t + seg.duration).adjoint() * e * ug(t);
    }
    u = e * u;
    t += seg.duration;
  }
  return kron(rz(frame[0]), rz(frame[1])) * u;
}

// Frame shift (dz1, dz2) such that Rz(dz1) (x) Rz(dz2) * actual matches the
// target up to a global phase, given the residual is diagonal.
FrameShift local_z_fix(const Mat4c& actual, const Mat4c& target) {
  const Mat4c d = target * actual.adjoint();
  const double a0 = std::arg(d(0, 0));
  return {std::remainder(std::arg(d(2, 2)) - a0, 2.0 * M_PI),
          std::remainder(std::arg(d(1, 1)) - a0, 2.0 * M_PI)};
}

double phase_distance(const Mat4c& a, const Mat4c& b) {
  const cplx ov = (b.adjoint() * a).trace();
  const cplx ph = std::abs(ov) > 0.0 ? ov / std::abs(ov) : cplx(1.0);
  return (a - ph * b).cwiseAbs().maxCoeff();
}

struct Builder {
  const DeviceProfile& p;
  std::vector<GateOp> ops;
  double duration = 0.0;

  // Negative angles drive about -X.
  void rotation(int q, double angle) {
    const double tau = std::abs(angle) / (2.0 * M_PI * p.f_rabi);
    Tone t{p.f_qubit(q), angle < 0.0 ? M_PI : 0.0, p.f_rabi, q};
    std::vector<GateOp> seg{PulseSegment::microwave(tau, t)};
    // Spectator Stark phase from the exact two-qubit evolution.
    const FrameShift fix = local_z_fix(simulate_unitary(seg, p), on_qubit(q, rx(angle)));
    ops.push_back(seg[0]);
    if (q == 1) ops.push_back(FrameShift{0.0, fix.dz2});
    else ops.push_back(FrameShift{fix.dz1, 0.0});
    duration += tau;
  }
  void virtual_z(int q, double theta) {
    ops.push_back(q == 1 ? FrameShift{theta, 0.0} : FrameShift{0.0, theta});
  }
};

Mat4c zz_phase() {
  // exp(-i pi/4 ZZ)
  Mat4c u = Mat4c::Zero();
  const cplx m = std::polar(1.0, -M_PI / 4), pl = std::polar(1.0, M_PI / 4);
  u(0, 0) = m;
  u(1, 1) = pl;
  u(2, 2) = pl;
  u(3, 3) = m;
  return u;
}

Mat4c cz_matrix() {
  Mat4c u = Mat4c::Identity();
  u(3, 3) = -1.0;
  return u;
}

}  // namespace

double synchronised_exchange(const DeviceProfile& p) {
  const double dez = std::abs(p.delta_ez);
  double best = 0.0, best_err = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= 64; ++m) {
    const double j = dez / std::sqrt(16.0 * m * m - 1.0);
    const double err = std::abs(std::log(j / p.exchange_ref));
    if (err < best_err) {
      best_err = err;
      best = j;
    }
  }
  return best;
}

namespace {

std::string strip_spaces(const std::string& raw) {
  std::string name;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) name += c;
  return name;
}

const std::regex& rotation_pattern() {
  static const std::regex rot(R"(^([XZ])([12])\((.+)\)$)");
  return rot;
}

}  // namespace

Mat4c gate_target_unitary(const std::string& raw_name) {
  const std::string name = strip_spaces(raw_name);
  std::smatch m;
  if (std::regex_match(name, m, rotation_pattern())) {
    const int q = m[2].str()[0] - '0';
    const double angle = parse_angle(m[3].str());
    return on_qubit(q, m[1].str() == "Z" ? rz(angle) : rx(angle));
  }
  if (name == "I") return Mat4c::Identity();
  if (name == "CZ") return cz_matrix();
  if (name == "DCZ") return kron(pauli1(1), pauli1(1)) * zz_phase();
  Mat4c t = Mat4c::Zero();
  if (name == "zCNOT") {
    // NOT on qubit 2 when qubit 1 is up: uu -> ud, dd untouched.
    t(0, 0) = t(1, 1) = 1.0;
    t(2, 3) = t(3, 2) = 1.0;
    return t;
  }
  if (name == "CNOT") {
    // NOT on qubit 2 when qubit 1 is down: dd -> du, uu untouched.
    t(0, 1) = t(1, 0) = 1.0;
    t(2, 2) = t(3, 3) = 1.0;
    return t;
  }
  throw UnknownGateError("unsupported gate: " + raw_name);
}

GateSpec compile_gate(const std::string& raw_name, const DeviceProfile& p) {
  const std::string name = strip_spaces(raw_name);
  GateSpec g;
  g.name = name;
  g.target = gate_target_unitary(name);
  Builder b{p, {}, 0.0};
  std::smatch m;
  const double t_half_pi = 1.0 / (4.0 * p.f_rabi);

  auto finish_two_qubit = [&]() {
    // Local Z corrections fold exchange Stark shifts into the frame.
    const FrameShift fix = local_z_fix(simulate_unitary(b.ops, p), g.target);
    if (std::abs(fix.dz1) > 1e-12 || std::abs(fix.dz2) > 1e-12) b.ops.push_back(fix);
  };
  auto exchange_params = [&]() {
    const double j = synchronised_exchange(p);
    if (!(j > 0.0) || !std::isfinite(j))
      throw CompilationError("profile gives no usable exchange for " + name);
    g.exchange_j = j;
    g.exchange_voltage = voltage_for_exchange(j, p);
    return j;
  };
  auto cz_into = [&](Builder& bb, double j) {
    const double t = 1.0 / (2.0 * j);
    std::vector<GateOp> ex{PulseSegment::exchange(t, j)};
    const FrameShift fix = local_z_fix(simulate_unitary(ex, p), cz_matrix());
    bb.ops.push_back(ex[0]);
    bb.ops.push_back(fix);
    bb.duration += t;
  };

  if (std::regex_match(name, m, rotation_pattern())) {
    const int q = m[2].str()[0] - '0';
    const double angle = parse_angle(m[3].str());
    if (m[1].str() == "Z") {
      b.virtual_z(q, angle);
    } else {
      if (std::abs(angle) < 1e-15) throw UnknownGateError("zero-angle X rotation: " + name);
      b.rotation(q, angle);
    }
  } else if (name == "I") {
    b.ops.push_back(PulseSegment::idle(t_half_pi));
    b.duration = t_half_pi;
  } else if (name == "CZ") {
    cz_into(b, exchange_params());
  } else if (name == "DCZ") {
    const double j = exchange_params();
    const double th = 1.0 / (4.0 * j);
    const double tpi = 1.0 / (2.0 * p.f_rabi);
    b.ops.push_back(PulseSegment::exchange(th, j));
    b.ops.push_back(PulseSegment::simultaneous(
        tpi, {Tone{p.f_qubit_1, 0.0, p.f_rabi, 1}, Tone{p.f_qubit_2(), 0.0, p.f_rabi, 2}}));
    b.ops.push_back(PulseSegment::exchange(th, j));
    b.duration = 2.0 * th + tpi;
    finish_two_qubit();
  } else if (name == "zCNOT" || name == "CNOT") {
    const double j = exchange_params();
    if (name == "zCNOT") {
      b.virtual_z(2, M_PI / 2);
      b.rotation(2, M_PI / 2);
      b.virtual_z(2, M_PI);
    } else {
      b.virtual_z(2, M_PI / 2);
      b.rotation(2, M_PI / 2);
    }
    cz_into(b, j);
    b.rotation(2, M_PI / 2);
    b.virtual_z(2, M_PI / 2);
    finish_two_qubit();
  } else {
    throw UnknownGateError("unsupported gate: " + raw_name);
  }

  g.ops = std::move(b.ops);
  g.duration = b.duration;
  for (const auto& op : g.ops) {
    if (const auto* fs = std::get_if<FrameShift>(&op)) {
      g.virtual_phase[0] += fs->dz1;
      g.virtual_phase[1] += fs->dz2;
    }
  }
  const double err = phase_distance(simulate_unitary(g.ops, p), g.target);
  if (err > 1e-9)
    throw CompilationError(name + " does not reach its target for this profile (error " +
                           std::to_string(err) + ")");
  return g;
}

Mat16 simulated_gate_ptm(const GateSpec& g, const DeviceProfile& p) {
  // The engine map is linear, so basis vectors give the PTM columns.
  Mat16 out;
  for (int k = 0; k < 16; ++k) {
    Vec16 e = Vec16::Zero();
    e[k] = 1.0;
    PulseEngine eng(p, false);
    eng.set_state(e);
    eng.apply(g);
    Vec16 r = eng.state();
    apply_z_rotation(r, eng.frame()[0], eng.frame()[1]);
    out.col(k) = r;
  }
  return out;
}

GateLibrary::GateLibrary(DeviceProfile p) : p_(std::move(p)) {}

const GateSpec& GateLibrary::get(const std::string& name) {
  auto it = gates_.find(name);
  if (it == gates_.end())
    it = gates_.emplace(name, std::make_unique<GateSpec>(compile_gate(name, p_))).first;
  return *it->second;
}

}  // namespace hotspin
