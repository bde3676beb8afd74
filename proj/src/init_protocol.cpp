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


#include "hotspin/init_protocol.hpp"

#include "hotspin/errors.hpp"

namespace hotspin {

InitDepth parse_init_depth(const std::string& s) {
  if (s == "ramp-only") return InitDepth::kRampOnly;
  if (s == "parity-filtered") return InitDepth::kParityFiltered;
  if (s == "full") return InitDepth::kFull;
  throw ValidationError("unknown init depth: " + s);
}

std::string to_string(InitDepth d) {
  switch (d) {
    case InitDepth::kRampOnly: return "ramp-only";
    case InitDepth::kParityFiltered: return "parity-filtered";
    case InitDepth::kFull: return "full";
  }
  return "full";
}

void InitConfig::validate() const {
  basis_index(target);
  if (max_iterations < 1) throw ValidationError("max_iterations must be at least 1");
  if (durations.ramp_s < 0.0) throw ValidationError("ramp duration must be non-negative");
}

InitResult run_algorithmic_init(const InitConfig& cfg, const DeviceProfile& p, Stream& rng) {
  cfg.validate();
  const int target = basis_index(cfg.target);
  const ReadoutModel model = ReadoutModel::from_profile(p);
  const DensityMatrix load = cfg.load_state.value_or(thermal_state(p, 0.0));
  // For uu the CNOT sends dd to du and keeps uu, so the second filter
  // passes uu instead of dd.
  const GateSpec conv = compile_gate(target == 3 ? "CNOT" : "zCNOT", p);
  std::optional<GateSpec> flip;
  if (target == 1) flip = compile_gate("X2(pi)", p);
  if (target == 2) flip = compile_gate("X1(pi)", p);
  const double t_read = cfg.durations.readout_s >= 0.0 ? cfg.durations.readout_s : model.t_integration;
  const double t_conv = cfg.durations.zcnot_s >= 0.0 ? cfg.durations.zcnot_s : conv.duration;
  const double t_flip = cfg.durations.pulse_s >= 0.0 ? cfg.durations.pulse_s
                                                     : (flip ? flip->duration : 0.0);

  const bool gate_noise = !cfg.ideal_gates;
  PulseEngine eng(p, gate_noise, cfg.noise, gate_noise ? draw_noise(p, cfg.noise, rng) : NoiseDraw{});
  auto read = [&](const DensityMatrix& rho) {
    return cfg.ideal_readout ? sample_readout_ideal(rho, rng) : sample_readout(rho, model, rng);
  };
  auto gate = [&](const GateSpec& g, const DensityMatrix& rho, double t) {
    eng.reset(rho, t);
    eng.apply(g);
    return eng.logical_state();
  };

  InitResult res;
  DensityMatrix rho = load;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    res.n_iteration = it;
    rho = load;
    res.elapsed += cfg.durations.ramp_s;
    if (cfg.depth == InitDepth::kRampOnly) {
      res.success = true;
      break;
    }
    ReadoutSample r1 = read(rho);
    res.elapsed += t_read;
    rho = r1.post;
    if (r1.shot.outcome == 0) continue;
    if (cfg.depth == InitDepth::kParityFiltered) {
      res.success = true;
      break;
    }
    rho = gate(conv, rho, res.elapsed);
    res.elapsed += t_conv;
    ReadoutSample r2 = read(rho);
    res.elapsed += t_read;
    rho = r2.post;
    if (r2.shot.outcome == 0) continue;
    res.success = true;
    break;
  }
  if (res.success && cfg.depth == InitDepth::kFull) {
    if (flip) {
      rho = gate(*flip, rho, res.elapsed);
      res.elapsed += t_flip;
    }
  }
  res.state = rho;
  res.fidelity = rho.population(cfg.depth == InitDepth::kFull ? target : 0);
  return res;
}

InitCost estimate_cost(const InitConfig& cfg, const DeviceProfile& p, int n_runs, Stream& rng) {
  if (n_runs < 100) throw ValidationError("n_runs must be at least 100");
  InitCost c;
  c.runs.resize(n_runs);
  parallel_for(static_cast<std::size_t>(n_runs), [&](std::size_t i) {
    Stream s = rng.child(i);
    c.runs[i] = run_algorithmic_init(cfg, p, s);
  });
  for (const auto& r : c.runs) {
    c.mean_n_iteration += r.n_iteration;
    c.mean_t_initialisation += r.elapsed;
    c.mean_fidelity += r.fidelity;
    c.success_rate += r.success ? 1.0 : 0.0;
    ++c.histogram[r.n_iteration];
  }
  c.mean_n_iteration /= n_runs;
  c.mean_t_initialisation /= n_runs;
  c.mean_fidelity /= n_runs;
  c.success_rate /= n_runs;
  return c;
}

}  // namespace hotspin
