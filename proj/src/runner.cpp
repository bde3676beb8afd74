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


#include "hotspin/runner.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "hotspin/benchmark.hpp"
#include "hotspin/characterize.hpp"
#include "hotspin/errors.hpp"
#include "hotspin/hmm.hpp"
#include "hotspin/init_protocol.hpp"
#include "hotspin/readout.hpp"
#include "hotspin/tomography.hpp"

namespace hotspin {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path resolve(const std::string& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : fs::path(base) / path;
}

double num(const json& params, const char* key, double def) {
  if (!params.contains(key)) return def;
  if (!params[key].is_number()) throw ValidationError(std::string(key) + " must be a number");
  return params[key].get<double>();
}

int integer(const json& params, const char* key, int def) {
  if (!params.contains(key)) return def;
  if (!params[key].is_number_integer())
    throw ValidationError(std::string(key) + " must be an integer");
  return params[key].get<int>();
}

std::string text(const json& params, const char* key, const std::string& def) {
  if (!params.contains(key)) return def;
  if (!params[key].is_string()) throw ValidationError(std::string(key) + " must be a string");
  return params[key].get<std::string>();
}

bool flag(const json& params, const char* key, bool def) {
  if (!params.contains(key)) return def;
  if (!params[key].is_boolean()) throw ValidationError(std::string(key) + " must be a boolean");
  return params[key].get<bool>();
}

template <class T>
std::vector<T> list(const json& params, const char* key, std::vector<T> def) {
  if (!params.contains(key)) return def;
  try {
    return params[key].get<std::vector<T>>();
  } catch (const json::exception&) {
    throw ValidationError(std::string(key) + " must be a list of numbers");
  }
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = n == 1 ? a : a + (b - a) * k / (n - 1);
  return v;
}

std::vector<double> geomspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = a * std::pow(b / a, n == 1 ? 0.0 : double(k) / (n - 1));
  return v;
}

json finite(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string series_csv(const std::string& header, const std::vector<std::vector<double>>& cols) {
  std::ostringstream os;
  os.precision(12);
  os << header << '\n';
  for (std::size_t i = 0; i < cols[0].size(); ++i) {
    for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c][i];
    os << '\n';
  }
  return os.str();
}

ExperimentOptions experiment_options(const RunConfig& cfg, int default_shots) {
  ExperimentOptions o;
  o.shots = cfg.shots > 0 ? cfg.shots : default_shots;
  o.qubit = integer(cfg.params, "qubit", 1);
  o.noisy = flag(cfg.params, "noisy", true);
  o.ideal_readout = flag(cfg.params, "ideal_readout", false);
  o.cpmg_pulses = integer(cfg.params, "cpmg_pulses", 1);
  return o;
}

struct Ctx {
  const RunConfig& cfg;
  DeviceProfile profile;
  Stream rng;
  std::map<std::string, std::string>& raw;
  bool fit_failed = false;
};

json run_coherence(Ctx& c, CoherenceKind kind) {
  const ExperimentOptions o = experiment_options(c.cfg, 300);
  double scale = kind == CoherenceKind::kT1       ? c.profile.t1_now()
                 : kind == CoherenceKind::kRamsey ? c.profile.t2_star_now()
                                                  : c.profile.t2_hahn_now();
  const auto times = list<double>(c.cfg.params, "times", linspace(0.0, 3.0 * scale, 16));
  const CoherenceResult r = run_coherence_experiment(kind, c.profile, times, o, c.rng);
  c.raw["raw/" + to_string(kind) + ".csv"] = r.csv();
  json j = {{"times", r.times},
            {"p_blockade", r.p_blockade},
            {"p_blockade_err", r.p_err},
            {"fit_ok", r.fit_ok},
            {"characteristic_time", finite(r.t_char)}};
  if (r.fit_ok) {
    j["fit"] = r.fit.to_json();
  } else {
    j["fit_error"] = r.fit_error;
    c.fit_failed = true;
  }
  return j;
}

json run_rabi(Ctx& c) {
  const ExperimentOptions o = experiment_options(c.cfg, 200);
  const auto det = list<double>(c.cfg.params, "detunings", linspace(-3e6, 3e6, 13));
  const auto times = list<double>(c.cfg.params, "times", linspace(0.0, 2e-6, 41));
  const RabiChevron ch = rabi_chevron(c.profile, det, times, o, c.rng);
  std::vector<std::vector<double>> cols(3);
  std::size_t centre = 0;
  for (std::size_t k = 0; k < det.size(); ++k) {
    if (std::abs(det[k]) < std::abs(det[centre])) centre = k;
    for (std::size_t t = 0; t < times.size(); ++t) {
      cols[0].push_back(det[k]);
      cols[1].push_back(times[t]);
      cols[2].push_back(ch.p_blockade[k][t]);
    }
  }
  c.raw["raw/rabi.csv"] = series_csv("detuning_hz,time_s,p_blockade", cols);
  return {{"detunings", det},
          {"times", times},
          {"p_blockade", ch.p_blockade},
          {"rabi_frequency_at_min_detuning", dominant_frequency(times, ch.p_blockade[centre])}};
}

std::vector<CpmgDecay> cpmg_decays(Ctx& c, const std::vector<int>& ns,
                                   const std::vector<double>& times) {
  const std::string mode = text(c.cfg.params, "mode", "device");
  if (mode == "device")
    return device_cpmg_decays(c.profile, ns, times, experiment_options(c.cfg, 300), c.rng);
  if (mode != "synthetic") throw ValidationError("cpmg-psd mode must be device or synthetic");
  const json sp = c.cfg.params.value("spectrum", json{{"type", "white"}, {"s0", 1e6}});
  const std::string type = text(sp, "type", "white");
  NoiseSpectrum s;
  if (type == "white") {
    const double s0 = num(sp, "s0", 1e6);
    s = [s0](double) { return s0; };
  } else if (type == "power") {
    const double a = num(sp, "a", 1e10), alpha = num(sp, "alpha", 1.0);
    s = [a, alpha](double f) { return a / std::pow(f, alpha); };
  } else {
    throw ValidationError("spectrum type must be white or power");
  }
  return synthesize_cpmg_decays(s, ns, times, integer(c.cfg.params, "realizations", 200), c.rng);
}

json run_cpmg_psd(Ctx& c) {
  const auto ns = list<int>(c.cfg.params, "n_pulses", {1, 2, 4, 8, 16});
  const bool device = text(c.cfg.params, "mode", "device") == "device";
  const double t2 = c.profile.t2_hahn_now();
  const auto times = list<double>(c.cfg.params, "times",
                                  device ? geomspace(0.2 * t2, 2.0 * t2, 8)
                                         : geomspace(1e-6, 1e-4, 8));
  const auto decays = cpmg_decays(c, ns, times);
  const PsdEstimate psd = psd_from_cpmg(decays);
  std::vector<std::vector<double>> cols(4);
  for (const auto& p : psd.points) {
    cols[0].push_back(p.frequency);
    cols[1].push_back(p.density);
    cols[2].push_back(p.error);
    cols[3].push_back(p.n_pulses);
  }
  c.raw["raw/psd.csv"] = series_csv("frequency_hz,density,error,n_pulses", cols);
  json j = psd.to_json();
  if (psd.points.size() >= 2) {
    const LineFit lf = psd.log_slope();
    j["log_slope"] = lf.slope;
    j["log_slope_err"] = lf.slope_err;
  }
  return j;
}

json run_dcz_scan(Ctx& c) {
  const ExperimentOptions o = experiment_options(c.cfg, 200);
  const auto volts = list<double>(c.cfg.params, "voltages", {});
  const auto times = list<double>(c.cfg.params, "times", linspace(0.0, 5e-6, 51));
  const DczScan scan = dcz_scan(c.profile, volts, times, o, c.rng);
  json pts = json::array();
  std::vector<std::vector<double>> cols(3);
  for (const auto& p : scan.points) {
    json jp = {{"voltage", p.voltage}, {"exchange_hz", p.j}, {"p_blockade", p.p_blockade},
               {"p_blockade_err", p.p_err}, {"fit_ok", p.fit_ok}};
    if (p.fit_ok) {
      jp["fit"] = p.fit.to_json();
      jp["quality_factor"] = p.fit.q();
    } else {
      c.fit_failed = true;
    }
    pts.push_back(jp);
    for (std::size_t t = 0; t < times.size(); ++t) {
      cols[0].push_back(p.voltage);
      cols[1].push_back(times[t]);
      cols[2].push_back(p.p_blockade[t]);
    }
  }
  c.raw["raw/dcz_scan.csv"] = series_csv("voltage,time_s,p_blockade", cols);
  return {{"times", times}, {"points", pts}};
}

InitConfig init_config(const RunConfig& cfg) {
  InitConfig ic;
  ic.target = text(cfg.params, "target", "dd");
  ic.max_iterations = integer(cfg.params, "max_iterations", 100);
  ic.depth = parse_init_depth(text(cfg.params, "depth", "full"));
  ic.durations.ramp_s = num(cfg.params, "ramp_s", ic.durations.ramp_s);
  ic.ideal_readout = flag(cfg.params, "ideal_readout", false);
  ic.ideal_gates = flag(cfg.params, "ideal_gates", false);
  ic.validate();
  return ic;
}

json run_init(Ctx& c, bool cost) {
  const InitConfig ic = init_config(c.cfg);
  const int runs = integer(c.cfg.params, "runs", cost ? 1000 : 100);
  if (runs < (cost ? 100 : 1)) throw ValidationError(cost ? "init-cost needs runs >= 100" : "runs must be >= 1");
  std::vector<InitResult> res(runs);
  parallel_for(runs, [&](std::size_t i) {
    Stream s = c.rng.child(i);
    res[i] = run_algorithmic_init(ic, c.profile, s);
  });
  std::ostringstream jl;
  double n_it = 0, el = 0, fid = 0, ok = 0;
  std::map<int, long> hist;
  for (const auto& r : res) {
    jl << json{{"n_iteration", r.n_iteration}, {"elapsed_s", r.elapsed}, {"fidelity", r.fidelity},
               {"success", r.success}}
              .dump()
       << '\n';
    n_it += r.n_iteration;
    el += r.elapsed;
    fid += r.fidelity;
    ok += r.success;
    ++hist[r.n_iteration];
  }
  c.raw["raw/init_runs.jsonl"] = jl.str();
  json h = json::object();
  for (auto [k, v] : hist) h[std::to_string(k)] = v;
  return {{"runs", runs},
          {"target", ic.target},
          {"depth", to_string(ic.depth)},
          {"mean_n_iteration", n_it / runs},
          {"mean_t_initialisation_s", el / runs},
          {"mean_fidelity", fid / runs},
          {"success_rate", ok / runs},
          {"histogram", h}};
}

RbOptions rb_options(const RunConfig& cfg, int n_qubits) {
  RbOptions o;
  o.n_qubits = n_qubits;
  o.qubit = integer(cfg.params, "qubit", 1);
  o.lengths = list<int>(cfg.params, "lengths",
                        n_qubits == 1 ? std::vector<int>{1, 10, 25, 50, 100, 200, 400, 700}
                                      : std::vector<int>{1, 2, 3, 4, 6, 8, 12, 16});
  o.sequences = integer(cfg.params, "sequences", 20);
  o.shots = cfg.shots > 0 ? cfg.shots : 50;
  o.fix_c = flag(cfg.params, "fix_c", true);
  o.keep_records = true;
  return o;
}

std::unique_ptr<RbExecutor> rb_executor(Ctx& c, int n_qubits) {
  const std::string ex = text(c.cfg.params, "executor", "physical");
  if (ex == "physical") {
    PhysicalOptions po;
    po.ideal_readout = flag(c.cfg.params, "ideal_readout", false);
    po.noisy = flag(c.cfg.params, "noisy", true);
    po.padding = num(c.cfg.params, "padding_s", po.padding);
    po.gap = num(c.cfg.params, "gap_s", po.gap);
    return std::make_unique<PhysicalExecutor>(c.profile, po);
  }
  if (ex == "ideal") return std::make_unique<IdealExecutor>();
  if (ex == "depolarizing") {
    const double p = num(c.cfg.params, "depolarizing_p", 0.997);
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("depolarizing_p must lie in [0, 1]");
    auto e = std::make_unique<ChannelExecutor>();
    e->step_channel = n_qubits == 1 ? depolarizing_ptm_1q(p, integer(c.cfg.params, "qubit", 1))
                                    : depolarizing_ptm_2q(p);
    return e;
  }
  throw ValidationError("executor must be physical, ideal or depolarizing");
}

void write_rb_raw(Ctx& c, const RbRun& run, const std::string& tag) {
  std::vector<double> len(run.lengths.begin(), run.lengths.end());
  c.raw["raw/" + tag + ".csv"] = series_csv(
      "length,p_plus_zz,p_plus_zz_se,p_minus_zz,p_minus_zz_se",
      {len, run.plus, run.plus_se, run.minus, run.minus_se});
  c.raw["raw/" + tag + "_sequences.json"] = sequences_to_json(run.records).dump() + "\n";
  c.raw["raw/" + tag + "_outcomes.jsonl"] = outcomes_jsonl(run.records);
}

json run_rb_kind(Ctx& c, int n_qubits) {
  const RbOptions o = rb_options(c.cfg, n_qubits);
  auto ex = rb_executor(c, n_qubits);
  const RbRun run = run_rb(*ex, o, c.rng);
  write_rb_raw(c, run, "rb");
  if (!run.fit_ok) c.fit_failed = true;
  json j = run.to_json();
  j["executor"] = text(c.cfg.params, "executor", "physical");
  const CliffordGroup& g = n_qubits == 1 ? CliffordGroup::one_qubit() : CliffordGroup::two_qubit();
  j["avg_physical_1q_per_clifford"] = g.avg_physical_1q();
  j["avg_two_qubit_per_clifford"] = g.avg_two_qubit();
  return j;
}

json run_irb_kind(Ctx& c) {
  const int nq = integer(c.cfg.params, "n_qubits", 2);
  RbOptions o = rb_options(c.cfg, nq);
  auto ex = rb_executor(c, nq);
  const std::string gate = text(c.cfg.params, "gate", nq == 2 ? "DCZ" : "X1(pi/2)");
  IrbResult r;
  try {
    r = run_irb(*ex, o, gate, c.rng);
  } catch (const FitError& e) {
    c.fit_failed = true;
    return {{"gate", gate}, {"fit_error", e.what()}};
  }
  write_rb_raw(c, r.reference, "irb_reference");
  write_rb_raw(c, r.interleaved, "irb_interleaved");
  json j = r.to_json();
  j["gate"] = gate;
  return j;
}

json run_fbt_kind(Ctx& c) {
  const json& pr = c.cfg.params;
  std::string seq_path, out_path;
  if (pr.contains("source")) {
    const fs::path src = resolve(c.cfg.base_dir, text(pr, "source", ""));
    seq_path = (src / "raw" / "rb_sequences.json").string();
    out_path = (src / "raw" / "rb_outcomes.jsonl").string();
  } else {
    if (!pr.contains("sequences") || !pr.contains("outcomes"))
      throw ValidationError("fbt needs source, or sequences and outcomes");
    seq_path = resolve(c.cfg.base_dir, text(pr, "sequences", "")).string();
    out_path = resolve(c.cfg.base_dir, text(pr, "outcomes", "")).string();
  }
  json seqs;
  try {
    seqs = json::parse(read_text(seq_path));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad sequence file: ") + e.what());
  }
  const auto records = records_from_files(seqs, read_text(out_path));
  FbtOptions fo;
  fo.prior_sigma = num(pr, "prior_sigma", fo.prior_sigma);
  fo.variance_floor = num(pr, "variance_floor", fo.variance_floor);
  fo.relinearize = flag(pr, "relinearize", fo.relinearize);
  const auto obs = observations_from_records(records, flag(pr, "include_minus", true));
  const NoiseResidual post = run_fbt(obs, fo);
  json j = fbt_report(post, fo).to_json();
  j["n_observations"] = obs.size();
  j["prior_sigma"] = fo.prior_sigma;
  return j;
}

ChainData chains_after_init(const DeviceProfile& p, const InitConfig& ic, int n_chains,
                            int n_reads, Stream& rng) {
  const ReadoutModel rm = ReadoutModel::from_profile(p);
  ChainData d;
  d.chains.resize(n_chains);
  parallel_for(n_chains, [&](std::size_t c) {
    Stream s = rng.child(c);
    DensityMatrix rho = run_algorithmic_init(ic, p, s).state;
    for (int t = 0; t < n_reads; ++t) {
      const ReadoutSample r = sample_readout(rho, rm, s);
      d.chains[c].push_back(1 - r.shot.outcome);  // 0 = blockaded
      rho = r.post;
    }
  });
  return d;
}

json run_hmm(Ctx& c) {
  const json& pr = c.cfg.params;
  ChainData data;
  if (pr.contains("data")) {
    data = ChainData::from_csv(read_text(resolve(c.cfg.base_dir, text(pr, "data", ""))));
  } else if (pr.contains("synthetic")) {
    const json& s = pr["synthetic"];
    const HmmModel gen = HmmModel::parity(num(s, "p_init_even", 0.9934), num(s, "p_read_even", 0.9934),
                                          num(s, "p_read_odd", 0.9615), num(s, "p_even_to_odd", 0.01),
                                          num(s, "p_odd_to_even", 0.02));
    Stream g = c.rng.child(1);
    data = simulate_chains(gen, integer(s, "n_chains", 1000), integer(s, "n_reads", 20), g);
  } else {
    Stream g = c.rng.child(1);
    data = chains_after_init(c.profile, init_config(c.cfg), integer(pr, "n_chains", 1000),
                             integer(pr, "n_reads", 20), g);
  }
  Stream f = c.rng.child(2);
  const SpamEstimate est = fit_spam(data, f, integer(pr, "restarts", 10));
  const Reconstruction rec = reconstruct_initial(est.model, data);
  c.raw["raw/chains.csv"] = data.to_csv();
  json j = est.to_json();
  j["n_chains"] = data.n_chains();
  j["n_reads"] = data.n_reads();
  j["raw_p_blockade"] = rec.raw_p_blockade;
  j["corrected_p_blockade"] = rec.corrected_p_blockade;
  return j;
}

json run_readout_cal(Ctx& c) {
  const int n = c.cfg.shots > 0 ? c.cfg.shots : 20000;
  const ReadoutModel rm = ReadoutModel::from_profile(c.profile);
  Stream fr = c.rng.child(0);
  const ReadoutFidelity f = estimate_readout_fidelity(rm, n, fr);
  std::vector<double> even(n), odd(n);
  parallel_for(n, [&](std::size_t i) {
    Stream s = c.rng.child(1 + i);
    even[i] = sample_readout(DensityMatrix::basis_state(0), rm, s).shot.signal;
    odd[i] = sample_readout(DensityMatrix::basis_state(1), rm, s).shot.signal;
  });
  const int bins = integer(c.cfg.params, "bins", 60);
  const double lo = std::min(rm.signal_blockaded, rm.signal_unblockaded) - 5 * rm.noise_sigma;
  const double hi = std::max(rm.signal_blockaded, rm.signal_unblockaded) + 5 * rm.noise_sigma;
  c.raw["raw/histogram_even.csv"] = histogram_csv(histogram(even, bins, lo, hi));
  c.raw["raw/histogram_odd.csv"] = histogram_csv(histogram(odd, bins, lo, hi));
  return {{"n_shots", n},
          {"f_charge", f.f_charge},
          {"f_charge_se", f.se_charge},
          {"f_even", f.f_even},
          {"f_even_se", f.se_even},
          {"f_odd", f.f_odd},
          {"f_odd_se", f.se_odd},
          {"threshold", rm.threshold},
          {"fitted_threshold", fit_threshold(even, odd)},
          {"analytic_f_even", prob_blockaded_given_even(rm)},
          {"analytic_f_odd", prob_unblockaded_given_odd(rm)}};
}

json run_table1(Ctx& c) {
  Table1Options o;
  const json& pr = c.cfg.params;
  o.profiles = list<std::string>(pr, "profiles", o.profiles);
  o.readout_shots = integer(pr, "readout_shots", o.readout_shots);
  o.init_runs = integer(pr, "init_runs", o.init_runs);
  o.coherence_shots = integer(pr, "coherence_shots", o.coherence_shots);
  o.rb_sequences = integer(pr, "rb_sequences", o.rb_sequences);
  o.rb_shots = integer(pr, "rb_shots", o.rb_shots);
  o.fbt_sequences = integer(pr, "fbt_sequences", o.fbt_sequences);
  o.hmm_chains = integer(pr, "hmm_chains", o.hmm_chains);
  o.hmm_reads = integer(pr, "hmm_reads", o.hmm_reads);
  return reproduce_table1(o, *c.cfg.seed);
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> k{"rabi",  "t1",      "ramsey",  "hahn",    "cpmg-psd",
                                          "dcz-scan", "init",  "init-cost", "rb-1q", "rb-2q",
                                          "irb",   "fbt",     "hmm-fit", "readout-cal", "table1"};
  return k;
}

DeviceProfile resolve_profile(const json& ref, const std::string& base_dir) {
  if (ref.is_object()) return profile_from_json(ref);
  if (!ref.is_string()) throw ProfileError("profile must be a name, a path or an object");
  const std::string s = ref.get<std::string>();
  for (const auto& n : bundled_profile_names())
    if (n == s) return bundled_profile(s);
  const fs::path path = resolve(base_dir, s);
  if (!fs::exists(path)) throw ProfileError("unknown profile: " + s);
  try {
    return profile_from_json(json::parse(read_text(path)));
  } catch (const json::exception& e) {
    throw ProfileError(std::string("cannot parse profile file: ") + e.what());
  }
}

RunConfig RunConfig::from_json(const json& j, const std::string& base_dir) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  static const std::vector<std::string> keys{"kind", "seed", "profile", "shots", "params", "out"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
      throw ValidationError("unknown config key: " + it.key());
  RunConfig c;
  c.base_dir = base_dir;
  if (!j.contains("kind") || !j["kind"].is_string()) throw ValidationError("config needs a kind");
  c.kind = j["kind"].get<std::string>();
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer() || j["seed"].get<long long>() < 0)
      throw ValidationError("seed must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("profile")) c.profile = j["profile"];
  if (j.contains("shots")) {
    if (!j["shots"].is_number_integer() || j["shots"].get<long long>() < 1)
      throw ValidationError("shots must be a positive integer");
    c.shots = j["shots"].get<int>();
  }
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw ValidationError("params must be an object");
    c.params = j["params"];
  }
  if (j.contains("out")) c.out_dir = resolve(base_dir, j["out"].get<std::string>()).string();
  return c;
}

json RunConfig::to_json() const {
  json j = {{"kind", kind}, {"profile", profile}, {"params", params}};
  j["seed"] = seed ? json(*seed) : json(nullptr);
  if (shots > 0) j["shots"] = shots;
  return j;
}

void RunConfig::validate() const {
  const auto& k = experiment_kinds();
  if (std::find(k.begin(), k.end(), kind) == k.end())
    throw UnknownKindError("unknown experiment kind: " + kind);
  if (!seed) throw ValidationError("a seed is required");
}

json error_json(int code, const std::string& type, const std::string& message) {
  return {{"schema", kErrorSchema},
          {"exit_code", code},
          {"error", {{"type", type}, {"message", message}}}};
}

RunResult run_experiment(const RunConfig& cfg) {
  RunResult out;
  auto fail = [&](int code, const std::string& type, const std::string& msg) {
    out.exit_code = code;
    out.report = error_json(code, type, msg);
    out.raw.clear();
    return out;
  };
  try {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    Ctx c{cfg, resolve_profile(cfg.profile, cfg.base_dir), Stream(*cfg.seed), out.raw};
    json payload;
    const std::string& k = cfg.kind;
    if (k == "rabi") payload = run_rabi(c);
    else if (k == "t1") payload = run_coherence(c, CoherenceKind::kT1);
    else if (k == "ramsey") payload = run_coherence(c, CoherenceKind::kRamsey);
    else if (k == "hahn") payload = run_coherence(c, CoherenceKind::kHahn);
    else if (k == "cpmg-psd") payload = run_cpmg_psd(c);
    else if (k == "dcz-scan") payload = run_dcz_scan(c);
    else if (k == "init") payload = run_init(c, false);
    else if (k == "init-cost") payload = run_init(c, true);
    else if (k == "rb-1q") payload = run_rb_kind(c, 1);
    else if (k == "rb-2q") payload = run_rb_kind(c, 2);
    else if (k == "irb") payload = run_irb_kind(c);
    else if (k == "fbt") payload = run_fbt_kind(c);
    else if (k == "hmm-fit") payload = run_hmm(c);
    else if (k == "readout-cal") payload = run_readout_cal(c);
    else if (k == "table1") payload = run_table1(c);

    out.report = {{"schema", kReportSchema},
                  {"kind", k},
                  {"config", cfg.to_json()},
                  {"profile", profile_to_json(c.profile)},
                  {"status", c.fit_failed ? "fit_failed" : "ok"},
                  {"payload", payload}};
    json files = json::array();
    for (const auto& [name, body] : out.raw) files.push_back(name);
    out.report["raw_files"] = files;
    if (cfg.timing)
      out.report["wall_time_s"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.exit_code = c.fit_failed ? kExitFit : kExitOk;
    return out;
  } catch (const UnknownKindError& e) {
    return fail(kExitUnknownKind, e.kind(), e.what());
  } catch (const ValidationError& e) {
    return fail(kExitValidation, e.kind(), e.what());
  } catch (const ProfileError& e) {
    return fail(kExitProfile, e.kind(), e.what());
  } catch (const FitError& e) {
    return fail(kExitFit, e.kind(), e.what());
  } catch (const Error& e) {
    return fail(kExitModule, e.kind(), e.what());
  } catch (const json::exception& e) {
    return fail(kExitValidation, "validation", e.what());
  } catch (const std::exception& e) {
    return fail(kExitModule, "internal", e.what());
  }
}

namespace {

class DirLock {
 public:
  explicit DirLock(const fs::path& dir) : path_(dir / ".lock") {
    fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0) throw LockError("output directory is locked: " + path_.string());
  }
  ~DirLock() {
    ::close(fd_);
    std::error_code ec;
    fs::remove(path_, ec);
  }
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  fs::path path_;
  int fd_ = -1;
};

void write_file(const fs::path& p, const std::string& body) {
  fs::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) throw ValidationError("cannot write " + p.string());
  os << body;
}

}  // namespace

int execute(const RunConfig& cfg) {
  if (cfg.threads > 0) set_thread_count(cfg.threads);
  const fs::path out(cfg.out_dir);
  try {
    fs::create_directories(out);
  } catch (const fs::filesystem_error& e) {
    return kExitValidation;
  }
  std::unique_ptr<DirLock> lock;
  try {
    lock = std::make_unique<DirLock>(out);
  } catch (const LockError&) {
    return kExitLock;
  }
  const RunResult r = run_experiment(cfg);
  std::error_code ec;
  if (r.report.value("schema", "") == kErrorSchema) {
    fs::remove(out / "report.json", ec);
    write_file(out / "error.json", r.report.dump(2) + "\n");
    return r.exit_code;
  }
  fs::remove(out / "error.json", ec);
  for (const auto& [name, body] : r.raw) write_file(out / name, body);
  write_file(out / "report.json", r.report.dump(2) + "\n");
  return r.exit_code;
}

// ---- reference table ----

namespace {

struct ReferenceRow {
  const char* metric;
  double value;   // NaN when not reported
  double error;
  double low, high;  // acceptance band on the simulated value
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<ReferenceRow> reference_rows(const std::string& profile) {
  if (profile == "1K-0.79T")
    return {{"initialise_even", 0.9934, 0.0027, 0.985, 1.0},
            {"readout_even", 0.9934, 0.0008, 0.9910, 0.9958},
            {"readout_odd", 0.9615, 0.0044, 0.9483, 0.9747},
            {"clifford_1q", 0.9960, 0.0001, 0.9957, 0.9963},
            {"dcz_f_avg", 0.9892, 0.0067, 0.980, 0.996},
            {"t1_s", 9.29e-3, 3.99e-3, 9.29e-3 * 0.85, 9.29e-3 * 1.15},
            {"t2_star_s", 2.32e-6, 0.19e-6, 2.32e-6 * 0.85, 2.32e-6 * 1.15},
            {"t2_hahn_s", 33.26e-6, 3.38e-6, 33.26e-6 * 0.85, 33.26e-6 * 1.15}};
  if (profile == "0.1K-0.79T")
    return {{"initialise_even", 0.9940, 0.0025, 0.985, 1.0},
            {"readout_even", 0.9969, 0.0007, 0.9948, 0.9990},
            {"readout_odd", 0.9679, 0.0012, 0.9643, 0.9715},
            {"clifford_1q", kNaN, kNaN, kNaN, kNaN},
            {"dcz_f_avg", 0.9915, 0.0013, 0.9876, 0.9954},
            {"t1_s", 331.29e-3, 78.0e-3, 331.29e-3 * 0.85, 331.29e-3 * 1.15},
            {"t2_star_s", 3.44e-6, 0.13e-6, 3.44e-6 * 0.85, 3.44e-6 * 1.15},
            {"t2_hahn_s", 76.86e-6, 17.08e-6, 76.86e-6 * 0.85, 76.86e-6 * 1.15}};
  return {};
}

}  // namespace

json reproduce_table1(const Table1Options& opt, std::uint64_t seed) {
  json table = json::array();
  Stream root(seed);
  for (std::size_t pi = 0; pi < opt.profiles.size(); ++pi) {
    const std::string& name = opt.profiles[pi];
    Stream rng = root.child(pi);
    json row = {{"profile", name}};
    std::map<std::string, std::pair<double, double>> sim;  // value, error
    std::vector<std::string> failures;
    DeviceProfile p;
    try {
      p = bundled_profile(name);
    } catch (const Error& e) {
      row["failures"] = {std::string("profile: ") + e.what()};
      table.push_back(row);
      continue;
    }
    auto stage = [&](const char* what, const std::function<void()>& body) {
      try {
        body();
      } catch (const std::exception& e) {
        failures.push_back(std::string(what) + ": " + e.what());
      }
    };

    stage("readout-cal", [&] {
      Stream s = rng.child(0);
      const ReadoutFidelity f =
          estimate_readout_fidelity(ReadoutModel::from_profile(p), opt.readout_shots, s);
      sim["charge_readout"] = {f.f_charge, f.se_charge};
      sim["readout_even_direct"] = {f.f_even, f.se_even};
      sim["readout_odd_direct"] = {f.f_odd, f.se_odd};
    });
    stage("init", [&] {
      Stream s = rng.child(1);
      const InitCost c = estimate_cost(InitConfig{}, p, std::max(opt.init_runs, 100), s);
      sim["init_fidelity_dd"] = {c.mean_fidelity, 0.0};
      sim["init_mean_n_iteration"] = {c.mean_n_iteration, 0.0};
      sim["init_mean_t_s"] = {c.mean_t_initialisation, 0.0};
    });
    stage("hmm-fit", [&] {
      Stream s = rng.child(2), f = rng.child(3);
      const ChainData d = chains_after_init(p, InitConfig{}, opt.hmm_chains, opt.hmm_reads, s);
      const SpamEstimate e = fit_spam(d, f);
      sim["initialise_even"] = {e.p_init_even, e.sd_init_even};
      sim["readout_even"] = {e.p_read_even, e.sd_read_even};
      sim["readout_odd"] = {e.p_read_odd, e.sd_read_odd};
    });
    stage("coherence", [&] {
      ExperimentOptions eo;
      eo.shots = opt.coherence_shots;
      const std::pair<const char*, CoherenceKind> kinds[] = {
          {"t1_s", CoherenceKind::kT1},
          {"t2_star_s", CoherenceKind::kRamsey},
          {"t2_hahn_s", CoherenceKind::kHahn}};
      int k = 0;
      for (const auto& [key, kind] : kinds) {
        const double scale = kind == CoherenceKind::kT1       ? p.t1_now()
                             : kind == CoherenceKind::kRamsey ? p.t2_star_now()
                                                              : p.t2_hahn_now();
        Stream s = rng.child(10 + k++);
        const CoherenceResult r =
            run_coherence_experiment(kind, p, linspace(0.0, 3.0 * scale, 16), eo, s);
        if (!r.fit_ok) throw FitError(r.fit_error);
        const double err = r.fit.b > 0.0 ? r.fit.b_error() / (r.fit.b * r.fit.b) : 0.0;
        sim[key] = {r.t_char, err};
      }
    });
    stage("rb-1q", [&] {
      RbOptions o;
      o.n_qubits = 1;
      o.lengths = {1, 20, 50, 100, 200, 400, 800};
      o.sequences = opt.rb_sequences;
      o.shots = opt.rb_shots;
      Stream s = rng.child(20);
      const RbRun r = run_rb(p, o, s);
      if (!r.fit_ok) throw FitError(r.fit_error);
      sim["clifford_1q"] = {r.fidelity, r.fidelity_err};
    });
    stage("rb-2q+fbt", [&] {
      RbOptions o;
      o.n_qubits = 2;
      o.lengths = {1, 2, 3, 4, 5, 6, 8};
      o.sequences = opt.fbt_sequences;
      o.shots = 100;
      o.keep_records = true;
      Stream s = rng.child(21);
      const RbRun r = run_rb(p, o, s);
      if (r.fit_ok) sim["clifford_2q"] = {r.fidelity, r.fidelity_err};
      const FbtReport rep = fbt_report(run_fbt(observations_from_records(r.records)));
      const GateReport& g = rep.gate("DCZ");
      sim["dcz_f_avg"] = {g.f_avg, g.f_avg_err};
    });

    json metrics = json::array();
    std::set<std::string> listed;
    for (const auto& pr : reference_rows(name)) {
      json m = {{"metric", pr.metric}};
      listed.insert(pr.metric);
      auto it = sim.find(pr.metric);
      m["simulated"] = it == sim.end() ? json(nullptr) : finite(it->second.first);
      m["simulated_err"] = it == sim.end() ? json(nullptr) : finite(it->second.second);
      m["reference"] = finite(pr.value);
      m["reference_err"] = finite(pr.error);
      m["band"] = std::isnan(pr.low) ? json(nullptr) : json::array({pr.low, pr.high});
      if (it == sim.end() || std::isnan(pr.low) || !std::isfinite(it->second.first))
        m["within"] = nullptr;
      else
        m["within"] = it->second.first >= pr.low && it->second.first <= pr.high;
      metrics.push_back(m);
    }
    for (const auto& [key, v] : sim)
      if (!listed.count(key))
        metrics.push_back({{"metric", key}, {"simulated", finite(v.first)},
                           {"simulated_err", finite(v.second)}, {"reference", nullptr},
                           {"reference_err", nullptr}, {"band", nullptr}, {"within", nullptr}});
    row["metrics"] = metrics;
    row["failures"] = failures;
    table.push_back(row);
  }
  return {{"rows", table}};
}

}  // namespace hotspin
