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


#include "hotspin/characterize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hotspin/errors.hpp"

namespace hotspin {

namespace {

void append(std::vector<GateOp>& ops, const GateSpec& g) {
  ops.insert(ops.end(), g.ops.begin(), g.ops.end());
}

// Y(pi) on qubit q as a frame-sandwiched X(pi).
void append_y_pi(std::vector<GateOp>& ops, int q, const GateSpec& x_pi) {
  ops.push_back(q == 1 ? FrameShift{-M_PI / 2, 0.0} : FrameShift{0.0, -M_PI / 2});
  append(ops, x_pi);
  ops.push_back(q == 1 ? FrameShift{M_PI / 2, 0.0} : FrameShift{0.0, M_PI / 2});
}

std::string qname(const char* axis, int q, const char* angle) {
  return std::string(axis) + std::to_string(q) + "(" + angle + ")";
}

}  // namespace

CoherenceKind parse_coherence_kind(const std::string& s) {
  if (s == "t1") return CoherenceKind::kT1;
  if (s == "ramsey") return CoherenceKind::kRamsey;
  if (s == "hahn") return CoherenceKind::kHahn;
  if (s == "cpmg") return CoherenceKind::kCpmg;
  throw ValidationError("unknown coherence experiment: " + s);
}

std::string to_string(CoherenceKind k) {
  switch (k) {
    case CoherenceKind::kT1: return "t1";
    case CoherenceKind::kRamsey: return "ramsey";
    case CoherenceKind::kHahn: return "hahn";
    case CoherenceKind::kCpmg: return "cpmg";
  }
  return "t1";
}

std::string CoherenceResult::csv() const {
  std::ostringstream os;
  os.precision(12);
  os << "x,y,y_err\n";
  for (std::size_t k = 0; k < times.size(); ++k)
    os << times[k] << ',' << p_blockade[k] << ',' << p_err[k] << '\n';
  return os.str();
}

SweepResult run_parity_sweep(const DeviceProfile& p, const std::vector<double>& xs,
                             const std::function<std::vector<GateOp>(double)>& program,
                             const DensityMatrix& initial, const ExperimentOptions& opt,
                             Stream& rng) {
  if (opt.shots < 1) throw ValidationError("shots must be positive");
  const ReadoutModel model = ReadoutModel::from_profile(p);
  const double p1_even = opt.ideal_readout ? 1.0 : prob_blockaded_given_even(model);
  const double p1_odd = opt.ideal_readout ? 0.0 : 1.0 - prob_unblockaded_given_odd(model);
  std::vector<std::vector<GateOp>> programs;
  programs.reserve(xs.size());
  for (double x : xs) programs.push_back(program(x));

  const std::size_t nx = xs.size();
  std::vector<unsigned char> hits(static_cast<std::size_t>(opt.shots) * nx, 0);
  parallel_for(static_cast<std::size_t>(opt.shots), [&](std::size_t s) {
    Stream st = rng.child(s);
    const NoiseDraw d = opt.noisy ? draw_noise(p, opt.noise, st) : NoiseDraw{};
    PulseEngine eng(p, opt.noisy, opt.noise, d);
    for (std::size_t k = 0; k < nx; ++k) {
      eng.reset(initial, 0.0);
      for (const auto& op : programs[k]) std::visit([&](const auto& o) { eng.apply(o); }, op);
      const double p_even = std::clamp(0.5 * (1.0 + eng.state()[15]), 0.0, 1.0);
      const double p1 = p1_even * p_even + p1_odd * (1.0 - p_even);
      hits[s * nx + k] = st.uniform() < p1 ? 1 : 0;
    }
  });
  SweepResult out;
  out.mean.assign(nx, 0.0);
  out.err.assign(nx, 0.0);
  for (std::size_t k = 0; k < nx; ++k) {
    long c = 0;
    for (int s = 0; s < opt.shots; ++s) c += hits[s * nx + k];
    const double m = static_cast<double>(c) / opt.shots;
    out.mean[k] = m;
    out.err[k] = std::sqrt(std::max(m * (1.0 - m), 0.25 / opt.shots) / opt.shots);
  }
  return out;
}

CoherenceResult run_coherence_experiment(CoherenceKind kind, const DeviceProfile& p,
                                         const std::vector<double>& times,
                                         const ExperimentOptions& opt, Stream& rng) {
  const int q = opt.qubit;
  if (q != 1 && q != 2) throw ValidationError("qubit must be 1 or 2");
  if (times.empty()) throw ValidationError("times must not be empty");
  double scale = 0.0;
  switch (kind) {
    case CoherenceKind::kT1: scale = p.t1_now(); break;
    case CoherenceKind::kRamsey: scale = p.t2_star_now(); break;
    case CoherenceKind::kHahn: scale = p.t2_hahn_now(); break;
    case CoherenceKind::kCpmg: scale = p.t1_now(); break;
  }
  for (double t : times)
    if (!(t >= 0.0) || t > 10.0 * scale)
      throw ValidationError("sweep times must lie in [0, 10 x the expected decay scale]");
  if (kind == CoherenceKind::kCpmg && opt.cpmg_pulses < 1)
    throw ValidationError("cpmg needs at least one pulse");

  const GateSpec x_half = compile_gate(qname("X", q, "pi/2"), p);
  const GateSpec x_pi = compile_gate(qname("X", q, "pi"), p);
  DensityMatrix initial = DensityMatrix::basis_state(0);
  std::function<std::vector<GateOp>(double)> program;
  switch (kind) {
    case CoherenceKind::kT1: {
      const std::string label = opt.t1_state.empty() ? (q == 1 ? "ud" : "du") : opt.t1_state;
      initial = DensityMatrix::basis_state(basis_index(label));
      program = [](double t) { return std::vector<GateOp>{PulseSegment::idle(t)}; };
      break;
    }
    case CoherenceKind::kRamsey:
      program = [&](double t) {
        std::vector<GateOp> ops;
        append(ops, x_half);
        ops.push_back(PulseSegment::idle(t));
        append(ops, x_half);
        return ops;
      };
      break;
    case CoherenceKind::kHahn:
      program = [&](double t) {
        std::vector<GateOp> ops;
        append(ops, x_half);
        ops.push_back(PulseSegment::idle(t / 2));
        append(ops, x_pi);
        ops.push_back(PulseSegment::idle(t / 2));
        append(ops, x_half);
        return ops;
      };
      break;
    case CoherenceKind::kCpmg: {
      const int n = opt.cpmg_pulses;
      program = [&, n](double t) {
        std::vector<GateOp> ops;
        append(ops, x_half);
        ops.push_back(PulseSegment::idle(t / (2.0 * n)));
        for (int k = 0; k < n; ++k) {
          append_y_pi(ops, q, x_pi);
          ops.push_back(PulseSegment::idle(k + 1 < n ? t / n : t / (2.0 * n)));
        }
        append(ops, x_half);
        return ops;
      };
      break;
    }
  }
  const SweepResult sw = run_parity_sweep(p, times, program, initial, opt, rng);
  CoherenceResult res;
  res.kind = kind;
  res.times = times;
  res.p_blockade = sw.mean;
  res.p_err = sw.err;
  try {
    res.fit = fit_stretched_exp(times, sw.mean);
  } catch (const FitError& e) {
    res.fit_ok = false;
    res.fit_error = e.what();
    res.t_char = std::numeric_limits<double>::quiet_NaN();
    return res;
  }
  res.t_char = res.fit.flat || res.fit.b <= 0.0 ? std::numeric_limits<double>::infinity()
                                                : 1.0 / res.fit.b;
  return res;
}

DczScan dcz_scan(const DeviceProfile& p, const std::vector<double>& voltages,
                 const std::vector<double>& times, const ExperimentOptions& opt, Stream& rng) {
  if (times.size() < 8) throw ValidationError("dcz scan needs at least 8 time points");
  std::vector<double> vs = voltages;
  if (vs.empty()) vs.push_back(voltage_for_exchange(synchronised_exchange(p), p));
  const GateSpec x_half = compile_gate("X1(pi/2)", p);
  const double tpi = 1.0 / (2.0 * p.f_rabi);
  const PulseSegment echo = PulseSegment::simultaneous(
      tpi, {Tone{p.f_qubit_1, 0.0, p.f_rabi, 1}, Tone{p.f_qubit_2(), 0.0, p.f_rabi, 2}});
  DczScan scan;
  scan.times = times;
  for (std::size_t iv = 0; iv < vs.size(); ++iv) {
    DczScanPoint pt;
    pt.voltage = vs[iv];
    pt.j = exchange_from_voltage(vs[iv], p);
    auto program = [&](double t) {
      std::vector<GateOp> ops;
      append(ops, x_half);
      ops.push_back(PulseSegment::exchange(t / 2, pt.j));
      ops.push_back(echo);
      ops.push_back(PulseSegment::exchange(t / 2, pt.j));
      append(ops, x_half);
      return ops;
    };
    Stream sub = rng.child(iv);
    const SweepResult sw =
        run_parity_sweep(p, times, program, DensityMatrix::basis_state(0), opt, sub);
    pt.p_blockade = sw.mean;
    pt.p_err = sw.err;
    try {
      pt.fit = fit_oscillation(times, sw.mean);
      pt.fit_ok = true;
    } catch (const FitError&) {
      pt.fit_ok = false;
    }
    scan.points.push_back(std::move(pt));
  }
  return scan;
}

RabiChevron rabi_chevron(const DeviceProfile& p, const std::vector<double>& detunings,
                         const std::vector<double>& times, const ExperimentOptions& opt,
                         Stream& rng) {
  RabiChevron ch;
  ch.detunings = detunings;
  ch.times = times;
  const int q = opt.qubit;
  for (std::size_t k = 0; k < detunings.size(); ++k) {
    const double f = p.f_qubit(q) + detunings[k];
    auto program = [&](double t) {
      return std::vector<GateOp>{PulseSegment::microwave(t, Tone{f, 0.0, p.f_rabi, q})};
    };
    Stream sub = rng.child(k);
    ch.p_blockade.push_back(
        run_parity_sweep(p, times, program, DensityMatrix::basis_state(0), opt, sub).mean);
  }
  return ch;
}

double dominant_frequency(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size() || t.size() < 4) throw ValidationError("need at least 4 samples");
  const std::size_t n = t.size();
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= n;
  auto power = [&](double f) {
    double c = 0.0, s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      c += (y[k] - mean) * std::cos(2.0 * M_PI * f * t[k]);
      s += (y[k] - mean) * std::sin(2.0 * M_PI * f * t[k]);
    }
    return c * c + s * s;
  };
  const double span = t.back() - t.front();
  const double f_lo = 0.5 / span, f_hi = 0.5 * (n - 1) / span;
  const int grid = 20000;
  const double step = (f_hi - f_lo) / grid;
  double best = f_lo, best_p = -1.0;
  for (int k = 0; k <= grid; ++k) {
    const double f = f_lo + k * step;
    const double pw = power(f);
    if (pw > best_p) {
      best_p = pw;
      best = f;
    }
  }
  // Golden-section refinement within one grid step.
  double a = best - step, b = best + step;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  for (int it = 0; it < 80; ++it) {
    if (power(c) > power(d)) b = d;
    else a = c;
    c = b - g * (b - a);
    d = a + g * (b - a);
  }
  return 0.5 * (a + b);
}

// ---- noise spectroscopy ----

nlohmann::json PsdEstimate::to_json() const {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : points)
    pts.push_back({{"frequency", p.frequency},
                   {"density", p.density},
                   {"error", p.error},
                   {"n_pulses", p.n_pulses}});
  return {{"convention", kConvention}, {"points", pts}};
}

LineFit PsdEstimate::log_slope() const {
  std::vector<double> x, y;
  for (const auto& p : points) {
    if (p.density > 0.0) {
      x.push_back(std::log(p.frequency));
      y.push_back(std::log(p.density));
    }
  }
  return fit_line(x, y);
}

PsdEstimate psd_from_cpmg(const std::vector<CpmgDecay>& decays) {
  if (decays.size() < 2) throw ValidationError("psd needs at least two pulse numbers");
  PsdEstimate est;
  for (const auto& d : decays) {
    if (d.times.size() < 5 || d.coherence.size() != d.times.size())
      throw ValidationError("each CPMG decay needs at least 5 time points");
    if (d.n_pulses < 1) throw ValidationError("pulse number must be positive");
    std::vector<double> lx, ly, tv, cv, ev;
    bool all_one = true;
    for (std::size_t k = 0; k < d.times.size(); ++k) {
      const double c = d.coherence[k];
      if (c < 1.0 - 1e-12) all_one = false;
      if (!(c > 0.0 && c < 1.0) || !(d.times[k] > 0.0)) continue;
      const double chi = -std::log(c);
      // Points not resolved from full coherence or full decay carry no slope.
      const double e = k < d.coherence_err.size() ? d.coherence_err[k] : 0.0;
      if (e > 0.0 && (c < 2.0 * e || chi < 2.0 * e / c)) continue;
      lx.push_back(std::log(d.times[k]));
      ly.push_back(std::log(chi));
      tv.push_back(d.times[k]);
      cv.push_back(c);
      ev.push_back(k < d.coherence_err.size() ? d.coherence_err[k] : 0.0);
    }
    if (all_one) {
      // No decay at all: zero density across the probed band.
      for (double t : d.times)
        if (t > 0.0) est.points.push_back({d.n_pulses / (2.0 * t), 0.0, 0.0, d.n_pulses});
      continue;
    }
    if (lx.size() < 3) throw FitError("too few valid coherence points for CPMG inversion");
    // A power law chi = A tau^beta keeps chi monotone before inversion.
    const LineFit lf = fit_line(lx, ly);
    double resid = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k)
      resid += std::pow(ly[k] - lf.intercept - lf.slope * lx[k], 2);
    const double rel_sd = lx.size() > 2 ? std::sqrt(resid / (lx.size() - 2.0)) : 0.0;
    for (std::size_t k = 0; k < tv.size(); ++k) {
      const double chi = std::exp(lf.intercept + lf.slope * lx[k]);
      const double s = chi / (M_PI * M_PI * tv[k]);
      double err = s * rel_sd;
      if (ev[k] > 0.0) err = std::hypot(err, ev[k] / cv[k] / (M_PI * M_PI * tv[k]));
      est.points.push_back({d.n_pulses / (2.0 * tv[k]), s, err, d.n_pulses});
    }
  }
  std::sort(est.points.begin(), est.points.end(),
            [](const PsdPoint& a, const PsdPoint& b) { return a.frequency < b.frequency; });
  return est;
}

std::vector<CpmgDecay> synthesize_cpmg_decays(const NoiseSpectrum& spec, const std::vector<int>& ns,
                                              const std::vector<double>& times, int realizations,
                                              Stream& rng, double f_lo, double f_hi,
                                              int components) {
  if (realizations < 1 || components < 2 || !(f_hi > f_lo && f_lo > 0.0))
    throw ValidationError("bad noise synthesis parameters");
  const int K = components;
  const double ratio = std::pow(f_hi / f_lo, 1.0 / (K - 1));
  std::vector<double> f(K), amp(K);
  for (int k = 0; k < K; ++k) {
    f[k] = f_lo * std::pow(ratio, k);
    const double df = f[k] * std::log(ratio);
    amp[k] = std::sqrt(std::max(spec(f[k]), 0.0) * df);
  }
  // Gaussian quadrature amplitudes per realization.
  std::vector<double> g(static_cast<std::size_t>(realizations) * K),
      h(static_cast<std::size_t>(realizations) * K);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = rng.normal();
    h[i] = rng.normal();
  }
  std::vector<CpmgDecay> out;
  for (int n : ns) {
    if (n < 1) throw ValidationError("pulse number must be positive");
    CpmgDecay d;
    d.n_pulses = n;
    d.times = times;
    for (double tau : times) {
      // Filter integrals of cos and sin over the sign-switching windows.
      std::vector<double> ic(K), is(K);
      for (int k = 0; k < K; ++k) {
        const double w = 2.0 * M_PI * f[k];
        double c = 0.0, s = 0.0, a = 0.0, sign = 1.0;
        for (int j = 0; j <= n; ++j) {
          const double b = j < n ? tau * (2.0 * j + 1.0) / (2.0 * n) : tau;
          c += sign * (std::sin(w * b) - std::sin(w * a)) / w;
          s += sign * (std::cos(w * a) - std::cos(w * b)) / w;
          a = b;
          sign = -sign;
        }
        ic[k] = 2.0 * M_PI * amp[k] * c;
        is[k] = 2.0 * M_PI * amp[k] * s;
      }
      double sum = 0.0, sum2 = 0.0;
      for (int r = 0; r < realizations; ++r) {
        double phi = 0.0;
        const std::size_t base = static_cast<std::size_t>(r) * K;
        for (int k = 0; k < K; ++k) phi += g[base + k] * ic[k] + h[base + k] * is[k];
        const double cphi = std::cos(phi);
        sum += cphi;
        sum2 += cphi * cphi;
      }
      const double m = sum / realizations;
      d.coherence.push_back(m);
      d.coherence_err.push_back(std::sqrt(std::max(sum2 / realizations - m * m, 0.0) / realizations));
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<CpmgDecay> device_cpmg_decays(const DeviceProfile& p, const std::vector<int>& ns,
                                          const std::vector<double>& times,
                                          const ExperimentOptions& opt, Stream& rng) {
  const ReadoutModel model = ReadoutModel::from_profile(p);
  const double p1_even = opt.ideal_readout ? 1.0 : prob_blockaded_given_even(model);
  const double p1_odd = opt.ideal_readout ? 0.0 : 1.0 - prob_unblockaded_given_odd(model);
  std::vector<CpmgDecay> out;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    ExperimentOptions o = opt;
    o.cpmg_pulses = ns[i];
    Stream sub = rng.child(i);
    const CoherenceResult r = run_coherence_experiment(CoherenceKind::kCpmg, p, times, o, sub);
    CpmgDecay d;
    d.n_pulses = ns[i];
    d.times = times;
    for (std::size_t k = 0; k < times.size(); ++k) {
      // Undo the readout map, then C = 1 - 2 p_even (the echoed state is odd).
      const double p_even = (r.p_blockade[k] - p1_odd) / (p1_even - p1_odd);
      d.coherence.push_back(1.0 - 2.0 * p_even);
      d.coherence_err.push_back(2.0 * r.p_err[k] / (p1_even - p1_odd));
    }
    out.push_back(std::move(d));
  }
  return out;
}

// ---- crosstalk ----

double crosstalk_rabi_frequency(double delta_ez, int n) {
  if (n < 4 || n % 4 != 0) throw ValidationError("n must be a positive multiple of 4");
  return std::abs(delta_ez) / std::sqrt(static_cast<double>(n) * n - 1.0);
}

double ac_stark_shift(double f_rabi, double delta_ez) {
  if (delta_ez == 0.0) throw ValidationError("delta_ez must be nonzero");
  return f_rabi * f_rabi / (2.0 * delta_ez);
}

double simulated_spectator_phase(double f_rabi, double delta_ez, double duration) {
  // Carrier frame of qubit 1; qubit 2 sits delta_ez away.
  const Mat4c h = 0.5 * delta_ez * kron(Mat2c::Identity(), pauli1(3)) * -1.0 +
                  0.5 * f_rabi * (kron(pauli1(1), Mat2c::Identity()) + kron(Mat2c::Identity(), pauli1(1)));
  Mat4c u = evolve_unitary(h, duration);
  // Back to the doubly-rotating frame: qubit 2 rotated by Rz(-2 pi dEz t).
  const double turns = delta_ez * duration;
  const double ang = 2.0 * M_PI * (turns - std::floor(turns));
  u = kron(Mat2c::Identity(), rz(ang)) * u;
  const Mat4c v = kron(rx(2.0 * M_PI * f_rabi * duration), Mat2c::Identity()).adjoint() * u;
  return std::arg(v(1, 1) * std::conj(v(0, 0)));
}

double spectator_population_error(const DeviceProfile& p) {
  PulseEngine eng(p, false);
  eng.reset(DensityMatrix::basis_state(0));
  eng.apply(PulseSegment::microwave(1.0 / (4.0 * p.f_rabi), Tone{p.f_qubit_1, 0.0, p.f_rabi, 1}));
  const DensityMatrix rho = eng.physical_state();
  return rho.population(1) + rho.population(3);
}

}  // namespace hotspin
