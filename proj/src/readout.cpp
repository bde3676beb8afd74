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


#include "hotspin/readout.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hotspin/errors.hpp"

namespace hotspin {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

DensityMatrix project(const DensityMatrix& rho, bool even, double* prob) {
  Mat4c p = Mat4c::Zero();
  if (even) {
    p(0, 0) = p(3, 3) = 1.0;
  } else {
    p(1, 1) = p(2, 2) = 1.0;
  }
  const Mat4c m = p * rho.matrix() * p;
  const double pr = m.trace().real();
  if (prob) *prob = pr;
  if (pr <= 0.0) return DensityMatrix::basis_state(even ? 0 : 1);
  return DensityMatrix::unchecked(m / pr);
}

DensityMatrix odd_mixture() {
  Mat4c m = Mat4c::Zero();
  m(1, 1) = m(2, 2) = 0.5;
  return DensityMatrix::unchecked(m);
}

}  // namespace

int basis_index(std::string_view label) {
  static const char* ascii[] = {"dd", "du", "ud", "uu"};
  static const char* arrows[] = {"↓↓", "↓↑", "↑↓", "↑↑"};
  for (int k = 0; k < 4; ++k)
    if (label == ascii[k] || label == arrows[k]) return k;
  throw ValidationError("unknown two-spin label: " + std::string(label));
}

std::string basis_label(int index) {
  static const char* ascii[] = {"dd", "du", "ud", "uu"};
  if (index < 0 || index > 3) throw ValidationError("basis index out of range");
  return ascii[index];
}

Parity ideal_parity(std::string_view label) {
  const int k = basis_index(label);
  return (k == 0 || k == 3) ? Parity::kBlockaded : Parity::kUnblockaded;
}

ReadoutModel ReadoutModel::from_profile(const DeviceProfile& p) {
  ReadoutModel m;
  m.signal_blockaded = p.readout.signal_blockaded;
  m.signal_unblockaded = p.readout.signal_unblockaded;
  m.noise_sigma = p.readout.noise_sigma;
  m.t_integration = p.readout.t_integration;
  m.threshold = p.readout.effective_threshold();
  m.t1_psb = p.t1_psb_now();
  m.odd_flip_prob = p.readout.odd_flip_prob;
  m.validate();
  return m;
}

void ReadoutModel::validate() const {
  if (signal_blockaded == signal_unblockaded) throw ValidationError("signal levels must differ");
  const double lo = std::min(signal_blockaded, signal_unblockaded);
  const double hi = std::max(signal_blockaded, signal_unblockaded);
  if (!(threshold > lo && threshold < hi))
    throw ValidationError("threshold must lie strictly between the signal levels");
  if (!(noise_sigma >= 0.0)) throw ValidationError("noise_sigma must be non-negative");
  if (!(t_integration > 0.0)) throw ValidationError("t_integration must be positive");
  if (!(t1_psb > 0.0)) throw ValidationError("t1_psb must be positive");
  if (!(odd_flip_prob >= 0.0 && odd_flip_prob <= 1.0))
    throw ValidationError("odd_flip_prob must lie in [0, 1]");
}

int ReadoutModel::classify(double signal) const {
  return signal_blockaded > signal_unblockaded ? (signal > threshold ? 1 : 0)
                                               : (signal < threshold ? 1 : 0);
}

ReadoutSample sample_readout(const DensityMatrix& rho, const ReadoutModel& model, Stream& rng) {
  double p_even = 0.0;
  const DensityMatrix even_post = project(rho, true, &p_even);
  ReadoutSample out;
  out.even = rng.uniform() < std::clamp(p_even, 0.0, 1.0);
  double level;
  if (out.even) {
    const double tau = rng.exponential(model.t1_psb);
    if (tau >= model.t_integration) {
      level = model.signal_blockaded;
      out.post = even_post;
    } else {
      const double w = tau / model.t_integration;
      level = w * model.signal_blockaded + (1.0 - w) * model.signal_unblockaded;
      out.relaxed = true;
      // The blockade lifts by tunnelling into the singlet branch, which
      // leaves the spins in the odd subspace.
      out.post = odd_mixture();
    }
  } else {
    out.post = project(rho, false, nullptr);
    level = rng.uniform() < model.odd_flip_prob ? model.signal_blockaded
                                                : model.signal_unblockaded;
  }
  out.shot.signal = level + (model.noise_sigma > 0.0 ? rng.normal(0.0, model.noise_sigma) : 0.0);
  out.shot.outcome = model.classify(out.shot.signal);
  return out;
}

ReadoutSample sample_readout_ideal(const DensityMatrix& rho, Stream& rng) {
  double p_even = 0.0;
  const DensityMatrix even_post = project(rho, true, &p_even);
  ReadoutSample out;
  out.even = rng.uniform() < std::clamp(p_even, 0.0, 1.0);
  out.post = out.even ? even_post : project(rho, false, nullptr);
  out.shot.outcome = out.even ? 1 : 0;
  out.shot.signal = out.shot.outcome;
  return out;
}

double prob_blockaded_given_even(const ReadoutModel& m) {
  // P(1) = e^{-T/T1} P(1 | S_b) + int_0^T (1/T1) e^{-tau/T1} P(1 | level(tau)) dtau,
  // evaluated by composite Simpson on the relaxation time.
  const double sgn = m.signal_blockaded > m.signal_unblockaded ? 1.0 : -1.0;
  auto p1 = [&](double level) {
    if (m.noise_sigma == 0.0) return sgn * (level - m.threshold) > 0.0 ? 1.0 : 0.0;
    return normal_cdf(sgn * (level - m.threshold) / m.noise_sigma);
  };
  const double t = m.t_integration;
  double acc = std::exp(-t / m.t1_psb) * p1(m.signal_blockaded);
  const int n = 4000;
  const double h = t / n;
  double s = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double tau = k * h;
    const double w = tau / t;
    const double f = std::exp(-tau / m.t1_psb) / m.t1_psb *
                     p1(w * m.signal_blockaded + (1.0 - w) * m.signal_unblockaded);
    s += f * ((k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0));
  }
  return acc + s * h / 3.0;
}

double prob_unblockaded_given_odd(const ReadoutModel& m) {
  const double sgn = m.signal_blockaded > m.signal_unblockaded ? 1.0 : -1.0;
  auto p0 = [&](double level) {
    if (m.noise_sigma == 0.0) return sgn * (level - m.threshold) > 0.0 ? 0.0 : 1.0;
    return 1.0 - normal_cdf(sgn * (level - m.threshold) / m.noise_sigma);
  };
  return (1.0 - m.odd_flip_prob) * p0(m.signal_unblockaded) +
         m.odd_flip_prob * p0(m.signal_blockaded);
}

ReadoutFidelity estimate_readout_fidelity(const ReadoutModel& model, int n_shots, Stream& rng) {
  if (n_shots < 1000) throw ValidationError("n_shots must be at least 1000");
  model.validate();
  const int n = n_shots;
  std::vector<int> ok_b(n), ok_u(n), ok_even(n), ok_odd(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    Stream s = rng.child(i);
    // Charge readout: the two sensor levels without spin physics.
    const double nb = model.noise_sigma > 0.0 ? s.normal(0.0, model.noise_sigma) : 0.0;
    const double nu = model.noise_sigma > 0.0 ? s.normal(0.0, model.noise_sigma) : 0.0;
    ok_b[i] = model.classify(model.signal_blockaded + nb) == 1;
    ok_u[i] = model.classify(model.signal_unblockaded + nu) == 0;
    ok_even[i] = sample_readout(DensityMatrix::basis_state(0), model, s).shot.outcome == 1;
    ok_odd[i] = sample_readout(DensityMatrix::basis_state(2), model, s).shot.outcome == 0;
  });
  auto frac = [&](const std::vector<int>& v) {
    long c = 0;
    for (int x : v) c += x;
    return static_cast<double>(c) / n;
  };
  auto se = [&](double p, double count) { return std::sqrt(std::max(p * (1.0 - p), 0.0) / count); };
  ReadoutFidelity f;
  f.n_shots = n;
  f.f_charge = 0.5 * (frac(ok_b) + frac(ok_u));
  f.se_charge = se(f.f_charge, 2.0 * n);
  f.f_even = frac(ok_even);
  f.se_even = se(f.f_even, n);
  f.f_odd = frac(ok_odd);
  f.se_odd = se(f.f_odd, n);
  return f;
}

double fit_threshold(const std::vector<double>& blockaded, const std::vector<double>& unblockaded) {
  if (blockaded.empty() || unblockaded.empty())
    throw ValidationError("threshold fit needs both reference sets");
  std::vector<double> b = blockaded, u = unblockaded;
  std::sort(b.begin(), b.end());
  std::sort(u.begin(), u.end());
  double mb = 0.0, mu = 0.0;
  for (double x : b) mb += x;
  for (double x : u) mu += x;
  const bool high = mb / b.size() > mu / u.size();
  std::vector<double> cand(b);
  cand.insert(cand.end(), u.begin(), u.end());
  std::sort(cand.begin(), cand.end());
  double best = cand.front(), best_f = -1.0;
  for (std::size_t k = 0; k + 1 < cand.size(); ++k) {
    const double t = 0.5 * (cand[k] + cand[k + 1]);
    const double below_b = std::lower_bound(b.begin(), b.end(), t) - b.begin();
    const double below_u = std::lower_bound(u.begin(), u.end(), t) - u.begin();
    const double fb = high ? 1.0 - below_b / b.size() : below_b / b.size();
    const double fu = high ? below_u / u.size() : 1.0 - below_u / u.size();
    const double f = 0.5 * (fb + fu);
    if (f > best_f) {
      best_f = f;
      best = t;
    }
  }
  return best;
}

std::vector<HistogramBin> histogram(const std::vector<double>& values, int bins, double lo,
                                    double hi) {
  if (bins < 1 || !(hi > lo)) throw ValidationError("bad histogram range");
  std::vector<HistogramBin> h(bins);
  const double w = (hi - lo) / bins;
  for (int k = 0; k < bins; ++k) h[k].center = lo + (k + 0.5) * w;
  for (double v : values) {
    if (v < lo || v > hi) continue;
    const int k = std::min(bins - 1, static_cast<int>((v - lo) / w));
    ++h[k].count;
  }
  return h;
}

std::string histogram_csv(const std::vector<HistogramBin>& h) {
  std::ostringstream os;
  os.precision(10);
  os << "bin_center,count\n";
  for (const auto& b : h) os << b.center << ',' << b.count << '\n';
  return os.str();
}

std::string shots_jsonl(const std::vector<ShotRecord>& shots) {
  std::string out;
  for (const auto& s : shots) {
    out += nlohmann::json{{"signal", s.signal}, {"outcome", s.outcome}}.dump();
    out += '\n';
  }
  return out;
}

}  // namespace hotspin
