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


#include "hotspin/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "hotspin/errors.hpp"

namespace hotspin {

namespace {

Vec16 dd_vector() {
  Vec16 r = Vec16::Zero();
  r(0) = r(3) = r(12) = r(15) = 1.0;
  return r;
}

double parity_even(const Vec16& r) { return std::clamp(0.5 * (1.0 + r(15)), 0.0, 1.0); }

Eigen::MatrixXd restrict_to(const Mat16& ptm, int qubit) {
  Eigen::MatrixXd out(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      out(i, j) = qubit == 1 ? ptm(4 * i, 4 * j) : ptm(i, j);
  return out;
}

}  // namespace

std::vector<std::string> RbSequence::flat() const {
  std::vector<std::string> out;
  for (const auto& s : steps) out.insert(out.end(), s.gates.begin(), s.gates.end());
  return out;
}

std::string RbSequence::flip_gate() const { return "X" + std::to_string(qubit) + "(pi)"; }

RbSequence generate_rb_sequence(const CliffordGroup& group, int m,
                                const std::optional<std::string>& interleave, Stream& rng,
                                int qubit) {
  if (m < 1) throw ValidationError("sequence length must be at least 1");
  if (qubit != 1 && qubit != 2) throw ValidationError("qubit must be 1 or 2");
  const bool one = group.n_qubits() == 1;
  int inter = -1;
  if (interleave) {
    const Mat16 full = ideal_gate_ptm(*interleave);
    inter = one ? group.find(restrict_to(full, qubit)) : group.find(Eigen::MatrixXd(full));
    if (inter < 0) throw ValidationError("interleaved gate is not a Clifford: " + *interleave);
    if (one && (full - kron_ptm(restrict_to(full, 1), restrict_to(full, 2))).norm() > 1e-9)
      throw ValidationError("interleaved gate must act on one qubit: " + *interleave);
  }
  auto names = [&](int k) {
    std::vector<std::string> g = group.at(k).gates;
    if (one)
      for (auto& s : g) s = rename_qubit(s, qubit);
    return g;
  };
  RbSequence seq;
  seq.length = m;
  seq.qubit = one ? qubit : 1;
  int total = group.identity();
  for (int i = 0; i < m; ++i) {
    const int c = group.sample(rng);
    seq.steps.push_back({c, names(c), false});
    total = group.compose(total, c);
    if (inter >= 0) {
      seq.steps.push_back({-1, {*interleave}, false});
      total = group.compose(total, inter);
      ++seq.n_interleaved;
    }
  }
  seq.recovery = group.inverse(total);
  seq.steps.push_back({seq.recovery, names(seq.recovery), true});
  return seq;
}

Mat16 sequence_ptm(const std::vector<std::string>& gates) {
  Mat16 m = Mat16::Identity();
  for (const auto& g : gates) m = ideal_gate_ptm(g) * m;
  return m;
}

double IdealExecutor::p_blockade(const RbSequence& seq, bool flip, Stream&) const {
  Vec16 r = dd_vector();
  for (const auto& g : seq.flat()) r = ideal_gate_ptm(g) * r;
  if (flip) r = ideal_gate_ptm(seq.flip_gate()) * r;
  return parity_even(r);
}

double ChannelExecutor::p_blockade(const RbSequence& seq, bool flip, Stream&) const {
  Vec16 r = dd_vector();
  for (const auto& step : seq.steps) {
    for (const auto& g : step.gates) {
      r = ideal_gate_ptm(g) * r;
      auto it = gate_channels.find(g);
      if (it != gate_channels.end()) r = it->second * r;
    }
    if (step_channel) r = *step_channel * r;
  }
  if (flip) {
    r = ideal_gate_ptm(seq.flip_gate()) * r;
    auto it = gate_channels.find(seq.flip_gate());
    if (it != gate_channels.end()) r = it->second * r;
  }
  return parity_even(r);
}

PhysicalExecutor::PhysicalExecutor(DeviceProfile p, PhysicalOptions opt)
    : p_(std::move(p)), opt_(opt), lib_(std::make_unique<GateLibrary>(p_)) {
  p_.validate();
  if (opt_.padding < 0.0 || opt_.gap < 0.0) throw ValidationError("negative padding or gap");
  if (!opt_.ideal_readout) {
    const ReadoutModel rm = ReadoutModel::from_profile(p_);
    f_even_ = prob_blockaded_given_even(rm);
    f_odd_ = prob_unblockaded_given_odd(rm);
  }
}

void PhysicalExecutor::prepare(const std::vector<const RbSequence*>& seqs) {
  std::set<std::string> names;
  for (const auto* s : seqs) {
    for (const auto& g : s->flat()) names.insert(g);
    names.insert(s->flip_gate());
  }
  // Compile up front; lookups during the parallel loop only read the cache.
  for (const auto& n : names) lib_->get(n);
}

double PhysicalExecutor::p_blockade(const RbSequence& seq, bool flip, Stream& rng) const {
  const NoiseDraw draw = opt_.noisy ? draw_noise(p_, opt_.noise, rng) : NoiseDraw{};
  PulseEngine eng(p_, opt_.noisy, opt_.noise, draw);
  eng.reset(DensityMatrix::basis_state(0));
  bool started = false;
  double pending = 0.0;
  auto run = [&](const std::string& name) {
    const GateSpec& g = lib_->get(name);
    if (!g.is_virtual()) {
      if (started && pending > 0.0) eng.apply(PulseSegment::idle(pending));
      started = true;
      pending = opt_.padding;
    }
    eng.apply(g);
  };
  for (const auto& step : seq.steps) {
    for (const auto& g : step.gates) run(g);
    pending += opt_.gap;
  }
  if (flip) run(seq.flip_gate());
  const double pe = parity_even(eng.state());
  return pe * f_even_ + (1.0 - pe) * (1.0 - f_odd_);
}

Mat16 depolarizing_ptm_1q(double p, int qubit) {
  if (qubit != 1 && qubit != 2) throw ValidationError("qubit must be 1 or 2");
  Mat16 m = Mat16::Identity();
  for (int k = 0; k < 16; ++k) {
    const int a = qubit == 1 ? k / 4 : k % 4;
    if (a != 0) m(k, k) = p;
  }
  return m;
}

Mat16 depolarizing_ptm_2q(double p) {
  Mat16 m = Mat16::Identity() * p;
  m(0, 0) = 1.0;
  return m;
}

void RbOptions::validate() const {
  if (n_qubits != 1 && n_qubits != 2) throw ValidationError("n_qubits must be 1 or 2");
  if (qubit != 1 && qubit != 2) throw ValidationError("qubit must be 1 or 2");
  if (lengths.size() < 4) throw ValidationError("RB needs at least 4 sequence lengths");
  for (int m : lengths)
    if (m < 1) throw ValidationError("sequence lengths must be >= 1");
  if (sequences < 1 || shots < 1) throw ValidationError("sequences and shots must be >= 1");
  if (sequences * shots < 50) throw ValidationError("RB needs at least 50 shots per length");
}

double rb_fidelity(double b, int n_qubits) { return 1.0 - (n_qubits == 1 ? 0.5 : 0.75) * b; }

RbRun run_rb(RbExecutor& exec, const RbOptions& opt, Stream& rng) {
  opt.validate();
  const CliffordGroup& group =
      opt.n_qubits == 1 ? CliffordGroup::one_qubit() : CliffordGroup::two_qubit();
  const int n_len = static_cast<int>(opt.lengths.size());
  const int n_seq = n_len * opt.sequences;

  std::vector<RbSequence> seqs(n_seq);
  for (int k = 0; k < n_seq; ++k) {
    Stream g = rng.child(2 * static_cast<std::uint64_t>(k));
    seqs[k] = generate_rb_sequence(group, opt.lengths[k / opt.sequences], opt.interleave, g,
                                   opt.qubit);
  }
  std::vector<const RbSequence*> ptrs;
  for (const auto& s : seqs) ptrs.push_back(&s);
  exec.prepare(ptrs);

  std::vector<int> k_plus(n_seq, 0), k_minus(n_seq, 0);
  parallel_for(n_seq, [&](std::size_t k) {
    Stream s = rng.child(2 * static_cast<std::uint64_t>(k) + 1);
    if (!exec.stochastic()) {
      k_plus[k] = s.binomial(opt.shots, exec.p_blockade(seqs[k], false, s));
      k_minus[k] = s.binomial(opt.shots, exec.p_blockade(seqs[k], true, s));
      return;
    }
    for (int i = 0; i < opt.shots; ++i) {
      k_plus[k] += s.bernoulli(exec.p_blockade(seqs[k], false, s));
      k_minus[k] += s.bernoulli(exec.p_blockade(seqs[k], true, s));
    }
  });

  RbRun run;
  run.n_qubits = opt.n_qubits;
  run.interleave = opt.interleave;
  run.lengths = opt.lengths;
  const double total = static_cast<double>(opt.sequences) * opt.shots;
  auto stats = [&](const std::vector<int>& k, int li, double* mean, double* se) {
    std::vector<double> per(opt.sequences);
    double m = 0.0;
    for (int s = 0; s < opt.sequences; ++s) {
      per[s] = static_cast<double>(k[li * opt.sequences + s]) / opt.shots;
      m += per[s];
    }
    m /= opt.sequences;
    double var_seq = 0.0;
    for (double v : per) var_seq += (v - m) * (v - m);
    const double se_seq =
        opt.sequences > 1 ? std::sqrt(var_seq / (opt.sequences - 1) / opt.sequences) : 0.0;
    const double se_bin = std::sqrt(std::max(m * (1.0 - m), 0.25 / total) / total);
    *mean = m;
    *se = std::max(se_seq, se_bin);
  };
  for (int li = 0; li < n_len; ++li) {
    double mp, sp, mm, sm;
    stats(k_plus, li, &mp, &sp);
    stats(k_minus, li, &mm, &sm);
    run.plus.push_back(mp);
    run.plus_se.push_back(sp);
    run.minus.push_back(mm);
    run.minus_se.push_back(sm);
    run.diff.push_back(mp - mm);
    run.diff_se.push_back(std::hypot(sp, sm));
  }

  std::vector<double> x(opt.lengths.begin(), opt.lengths.end());
  FitOptions fo;
  fo.fix_d = true;
  fo.d_value = 0.0;
  fo.fix_c = opt.fix_c;
  fo.c_value = 1.0;
  try {
    run.fit = fit_stretched_exp(x, run.diff, fo, run.diff_se);
    run.fit_ok = true;
    run.fidelity = rb_fidelity(run.fit.b, opt.n_qubits);
    run.fidelity_err = (opt.n_qubits == 1 ? 0.5 : 0.75) * run.fit.b_error();
  } catch (const FitError& e) {
    run.fit_error = e.what();
  }

  if (opt.keep_records) {
    for (int k = 0; k < n_seq; ++k) {
      RbRecord r;
      r.id = k;
      r.length = seqs[k].length;
      r.gates = seqs[k].flat();
      r.flip_gate = seqs[k].flip_gate();
      r.shots = opt.shots;
      r.blockaded_plus = k_plus[k];
      r.blockaded_minus = k_minus[k];
      run.records.push_back(std::move(r));
    }
  }
  return run;
}

RbRun run_rb(const DeviceProfile& p, const RbOptions& opt, Stream& rng,
             const PhysicalOptions& phys) {
  PhysicalExecutor exec(p, phys);
  return run_rb(exec, opt, rng);
}

IrbResult run_irb(RbExecutor& exec, RbOptions opt, const std::string& gate, Stream& rng) {
  IrbResult out;
  opt.interleave.reset();
  Stream r_ref = rng.child(0), r_int = rng.child(1);
  out.reference = run_rb(exec, opt, r_ref);
  opt.interleave = gate;
  out.interleaved = run_rb(exec, opt, r_int);
  if (!out.reference.fit_ok || !out.interleaved.fit_ok)
    throw FitError("interleaved benchmarking fit failed");
  out.ratio = out.interleaved.fidelity / out.reference.fidelity;
  const double d = opt.n_qubits == 1 ? 2.0 : 4.0;
  out.gate_fidelity =
      1.0 - (d - 1.0) / d * (1.0 - std::exp(-(out.interleaved.fit.b - out.reference.fit.b)));
  return out;
}

nlohmann::json RbRun::to_json() const {
  nlohmann::json j;
  j["n_qubits"] = n_qubits;
  j["interleave"] = interleave ? nlohmann::json(*interleave) : nlohmann::json(nullptr);
  j["lengths"] = lengths;
  j["p_plus_zz"] = plus;
  j["p_plus_zz_se"] = plus_se;
  j["p_minus_zz"] = minus;
  j["p_minus_zz_se"] = minus_se;
  j["difference"] = diff;
  j["difference_se"] = diff_se;
  j["fit_ok"] = fit_ok;
  if (fit_ok) {
    j["fit"] = fit.to_json();
    j["clifford_fidelity"] = fidelity;
    j["clifford_fidelity_err"] = fidelity_err;
  } else {
    j["fit_error"] = fit_error;
  }
  return j;
}

nlohmann::json IrbResult::to_json() const {
  return {{"reference", reference.to_json()},
          {"interleaved", interleaved.to_json()},
          {"fidelity_ratio", ratio},
          {"gate_fidelity", gate_fidelity}};
}

nlohmann::json sequences_to_json(const std::vector<RbRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records)
    arr.push_back({{"id", r.id}, {"length", r.length}, {"gates", r.gates},
                   {"flip_gate", r.flip_gate}});
  return arr;
}

std::string outcomes_jsonl(const std::vector<RbRecord>& records) {
  std::ostringstream os;
  for (const auto& r : records) {
    nlohmann::json j = {{"id", r.id},
                        {"shots", r.shots},
                        {"blockaded_plus_zz", r.blockaded_plus},
                        {"blockaded_minus_zz", r.blockaded_minus}};
    os << j.dump() << '\n';
  }
  return os.str();
}

std::vector<RbRecord> records_from_files(const nlohmann::json& sequences,
                                         const std::string& outcomes) {
  if (!sequences.is_array()) throw ValidationError("sequence file must hold a JSON array");
  std::map<int, RbRecord> by_id;
  for (const auto& s : sequences) {
    RbRecord r;
    r.id = s.at("id").get<int>();
    r.length = s.value("length", 0);
    r.gates = s.at("gates").get<std::vector<std::string>>();
    r.flip_gate = s.value("flip_gate", std::string("X1(pi)"));
    by_id[r.id] = std::move(r);
  }
  std::istringstream is(outcomes);
  std::string line;
  std::vector<RbRecord> out;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto j = nlohmann::json::parse(line);
    auto it = by_id.find(j.at("id").get<int>());
    if (it == by_id.end()) throw ValidationError("outcome for unknown sequence id");
    RbRecord r = it->second;
    r.shots = j.at("shots").get<int>();
    r.blockaded_plus = j.at("blockaded_plus_zz").get<int>();
    r.blockaded_minus = j.value("blockaded_minus_zz", -1);
    if (r.shots < 1 || r.blockaded_plus < 0 || r.blockaded_plus > r.shots)
      throw ValidationError("inconsistent outcome counts");
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace hotspin
