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


#include "hotspin/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

#include "hotspin/clifford.hpp"
#include "hotspin/errors.hpp"

namespace hotspin {

namespace {

using Mat16c = Eigen::Matrix<cplx, 16, 16>;

Mat16 superop_ptm(const std::function<Mat4c(const Mat4c&)>& f) {
  Mat16 out;
  for (int j = 0; j < 16; ++j) {
    const Mat4c img = f(pauli(j));
    for (int i = 0; i < 16; ++i) out(i, j) = (pauli(i) * img).trace().real() / 4.0;
  }
  return out;
}

struct Basis {
  std::array<Mat16, 30> b;  // H_1..H_15, S_1..S_15
  Eigen::Matrix<double, 30, 30> gram_inv;
};

const Basis& basis() {
  static const Basis bs = [] {
    Basis out;
    for (int k = 1; k < 16; ++k) {
      out.b[k - 1] = hamiltonian_generator(k);
      out.b[14 + k] = stochastic_generator(k);
    }
    Eigen::Matrix<double, 30, 30> g;
    for (int a = 0; a < 30; ++a)
      for (int c = 0; c < 30; ++c) g(a, c) = (out.b[a].array() * out.b[c].array()).sum();
    out.gram_inv = g.inverse();
    return out;
  }();
  return bs;
}

Vec16 dd_vector() {
  Vec16 r = Vec16::Zero();
  r(0) = r(3) = r(12) = r(15) = 1.0;
  return r;
}

Vec16 parity_effect() {
  Vec16 e = Vec16::Zero();
  e(0) = e(15) = 0.5;
  return e;
}

int label_index(const std::string& label) {
  const int k = PauliLabel::parse(label).index();
  if (k == 0) throw ValidationError("identity has no error coefficient");
  return k - 1;
}

}  // namespace

Mat16 hamiltonian_generator(int k) {
  const Mat4c& p = pauli(k);
  return superop_ptm([&](const Mat4c& r) -> Mat4c { return cplx(0, -1) * (p * r - r * p); });
}

Mat16 stochastic_generator(int k) {
  const Mat4c& p = pauli(k);
  return superop_ptm([&](const Mat4c& r) -> Mat4c { return p * r * p - r; });
}

double ErrorDecomposition::h_of(const std::string& label) const { return h[label_index(label)]; }
double ErrorDecomposition::s_of(const std::string& label) const { return s[label_index(label)]; }

nlohmann::json ErrorDecomposition::to_json() const {
  nlohmann::json jh, js;
  for (int k = 1; k < 16; ++k) {
    const std::string l = PauliLabel(k).str();
    jh[l] = h[k - 1];
    js[l] = s[k - 1];
  }
  return {{"hamiltonian", jh}, {"stochastic", js}, {"residual_norm", residual_norm}};
}

Mat16 generator_from_coefficients(const std::array<double, 15>& h,
                                  const std::array<double, 15>& s) {
  const Basis& bs = basis();
  Mat16 g = Mat16::Zero();
  for (int k = 0; k < 15; ++k) g += h[k] * bs.b[k] + s[k] * bs.b[15 + k];
  return g;
}

ErrorDecomposition decompose_generator(const Mat16& gen) {
  const Basis& bs = basis();
  Eigen::Matrix<double, 30, 1> rhs;
  for (int a = 0; a < 30; ++a) rhs(a) = (bs.b[a].array() * gen.array()).sum();
  const Eigen::Matrix<double, 30, 1> c = bs.gram_inv * rhs;
  ErrorDecomposition d;
  for (int k = 0; k < 15; ++k) {
    d.h[k] = c(k);
    d.s[k] = c(15 + k);
  }
  d.residual_norm = (gen - generator_from_coefficients(d.h, d.s)).norm();
  return d;
}

Mat16 error_generator(const Mat16& lambda) { return matrix_log_principal(lambda); }

double avg_from_ent(double f_ent, int d) { return (d * f_ent + 1.0) / (d + 1.0); }

FidelityEstimate infidelity_from_coefficients(const ErrorDecomposition& dec) {
  double r = 0.0;
  for (int k = 0; k < 15; ++k) r += dec.s[k] + dec.h[k] * dec.h[k];
  return {r, avg_from_ent(1.0 - r)};
}

double ent_fidelity_of_ptm(const Mat16& lambda) { return lambda.trace() / 16.0; }

Mat16c choi_of_ptm(const Mat16& ptm) {
  Mat16c j = Mat16c::Zero();
  for (int a = 0; a < 16; ++a)
    for (int b = 0; b < 16; ++b) {
      if (ptm(a, b) == 0.0) continue;
      const Mat4c pt = pauli(b).transpose();
      const Mat4c& pa = pauli(a);
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
          j.block<4, 4>(4 * r, 4 * c) += (ptm(a, b) / 4.0) * pt(r, c) * pa;
    }
  return j;
}

Mat16 ptm_of_choi(const Mat16c& choi) {
  Mat16 out;
  for (int a = 0; a < 16; ++a)
    for (int b = 0; b < 16; ++b) {
      const Mat4c pt = pauli(b).transpose();
      const Mat4c& pa = pauli(a);
      cplx acc = 0.0;
      // Tr((P_b^T (x) P_a) J) using the block structure.
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
          if (pt(r, c) != 0.0) acc += pt(r, c) * (pa * choi.block<4, 4>(4 * c, 4 * r)).trace();
      out(a, b) = acc.real() / 4.0;
    }
  return out;
}

Mat16 cptp_project(const Mat16& lambda, double tol, int max_iter) {
  auto tp = [](Mat16 m) {
    m.row(0).setZero();
    m(0, 0) = 1.0;
    return m;
  };
  auto psd = [](const Mat16& m) {
    Mat16c j = choi_of_ptm(m);
    j = 0.5 * (j + j.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Mat16c> es(j);
    const Eigen::Matrix<double, 16, 1> ev = es.eigenvalues().cwiseMax(0.0);
    return ptm_of_choi(es.eigenvectors() * ev.cast<cplx>().asDiagonal() *
                       es.eigenvectors().adjoint());
  };
  auto min_eig = [](const Mat16& m) {
    Mat16c j = choi_of_ptm(m);
    j = 0.5 * (j + j.adjoint()).eval();
    return Eigen::SelfAdjointEigenSolver<Mat16c>(j, Eigen::EigenvaluesOnly).eigenvalues()(0);
  };
  auto tp_gap = [](const Mat16& m) {
    Eigen::Matrix<double, 1, 16> e = Eigen::Matrix<double, 1, 16>::Zero();
    e(0) = 1.0;
    return (m.row(0) - e).cwiseAbs().maxCoeff();
  };
  if (tp_gap(lambda) <= tol && min_eig(lambda) >= -tol) return lambda;

  Mat16 x = lambda, p = Mat16::Zero(), q = Mat16::Zero();
  double gap = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const Mat16 y = tp(x + p);
    p = x + p - y;
    const Mat16 xn = psd(y + q);
    q = y + q - xn;
    const double step = (xn - x).norm();
    x = xn;
    gap = tp_gap(x);
    if (step < 0.1 * tol && gap < tol) return tp(x);
  }
  throw ConvergenceError("CPTP projection did not converge; trace-preservation gap " +
                         std::to_string(gap));
}

bool is_virtual_gate(const std::string& name) { return !name.empty() && name[0] == 'Z'; }

std::vector<FbtObservation> observations_from_records(const std::vector<RbRecord>& records,
                                                      bool include_minus) {
  std::vector<FbtObservation> out;
  for (const auto& r : records) {
    out.push_back({r.gates, static_cast<double>(r.blockaded_plus) / r.shots, r.shots});
    if (include_minus && r.blockaded_minus >= 0) {
      auto g = r.gates;
      g.push_back(r.flip_gate);
      out.push_back({std::move(g), static_cast<double>(r.blockaded_minus) / r.shots, r.shots});
    }
  }
  return out;
}

NoiseResidual NoiseResidual::prior(const std::vector<std::string>& gates, double sigma) {
  if (!(sigma >= 0.0)) throw ValidationError("prior sigma must be non-negative");
  NoiseResidual r;
  r.gates = gates;
  const int n = kPerGate * static_cast<int>(gates.size());
  r.mean = Eigen::VectorXd::Zero(n);
  r.cov = Eigen::MatrixXd::Identity(n, n) * (sigma * sigma);
  return r;
}

int NoiseResidual::gate_index(const std::string& name) const {
  auto it = std::find(gates.begin(), gates.end(), name);
  return it == gates.end() ? -1 : static_cast<int>(it - gates.begin());
}

Mat16 NoiseResidual::epsilon(int g) const {
  Mat16 e = Mat16::Zero();
  for (int i = 1; i < 16; ++i)
    for (int j = 0; j < 16; ++j) e(i, j) = mean(g * kPerGate + (i - 1) * 16 + j);
  return e;
}

void fbt_update_in_place(NoiseResidual& post, const std::vector<std::string>& sequence,
                         double y, int shots, const FbtOptions& opt) {
  if (!(y >= 0.0 && y <= 1.0)) throw ValidationError("observed mean must lie in [0, 1]");
  if (shots < 1) throw ValidationError("shots must be >= 1");
  const int n = static_cast<int>(sequence.size());
  std::vector<int> idx(n);
  std::vector<Mat16> lam(post.gates.size());
  for (std::size_t g = 0; g < post.gates.size(); ++g)
    lam[g] = opt.relinearize ? post.lambda(static_cast<int>(g)) : Mat16::Identity();
  for (int t = 0; t < n; ++t) {
    idx[t] = post.gate_index(sequence[t]);
    if (idx[t] < 0 && !is_virtual_gate(sequence[t]))
      throw UnknownGateError("gate not in the FBT gate set: " + sequence[t]);
  }

  std::vector<Vec16> a(n);  // state just before each noise channel
  Vec16 s = dd_vector();
  for (int t = 0; t < n; ++t) {
    a[t] = ideal_gate_ptm(sequence[t]) * s;
    s = idx[t] >= 0 ? Vec16(lam[idx[t]] * a[t]) : a[t];
  }
  const Vec16 e = parity_effect();
  double pred = e.dot(s);

  Eigen::VectorXd h = Eigen::VectorXd::Zero(post.mean.size());
  Vec16 w = e;
  for (int t = n - 1; t >= 0; --t) {
    if (idx[t] >= 0) {
      const int base = idx[t] * NoiseResidual::kPerGate;
      for (int i = 1; i < 16; ++i) {
        if (w(i) == 0.0) continue;
        h.segment<16>(base + (i - 1) * 16) += w(i) * a[t];
      }
      w = lam[idx[t]].transpose() * w;
    }
    w = ideal_gate_ptm(sequence[t]).transpose() * w;
  }
  if (!opt.relinearize) pred += h.dot(post.mean);

  const double r = std::max(y * (1.0 - y) / shots, opt.variance_floor);
  const Eigen::VectorXd u = post.cov * h;
  const double sv = h.dot(u) + r;
  post.mean += u * ((y - pred) / sv);
  post.cov.noalias() -= (u / sv) * u.transpose();
}

NoiseResidual fbt_update(const NoiseResidual& prior, const std::vector<std::string>& sequence,
                         double observed_mean, int shots, const FbtOptions& opt) {
  NoiseResidual post = prior;
  fbt_update_in_place(post, sequence, observed_mean, shots, opt);
  return post;
}

std::vector<std::string> gate_set_of(const std::vector<FbtObservation>& obs) {
  std::set<std::string> names;
  for (const auto& o : obs)
    for (const auto& g : o.gates)
      if (!is_virtual_gate(g)) names.insert(g);
  return {names.begin(), names.end()};
}

NoiseResidual run_fbt(const std::vector<FbtObservation>& obs, const FbtOptions& opt,
                      std::vector<std::string> gates) {
  if (gates.empty()) gates = gate_set_of(obs);
  NoiseResidual post = NoiseResidual::prior(gates, opt.prior_sigma);
  for (const auto& o : obs) fbt_update_in_place(post, o.gates, o.mean, o.shots, opt);
  return post;
}

const GateReport& FbtReport::gate(const std::string& name) const {
  for (const auto& g : gates)
    if (g.name == name) return g;
  throw ValidationError("gate not in report: " + name);
}

FbtReport fbt_report(const NoiseResidual& post, const FbtOptions& opt) {
  FbtReport rep;
  const double prior_trace =
      opt.prior_sigma * opt.prior_sigma * static_cast<double>(post.mean.size());
  rep.converged = prior_trace <= 0.0 || post.cov.trace() < opt.convergence_ratio * prior_trace;
  if (!rep.converged) rep.warnings.push_back("posterior not converged");

  const int idle = post.gate_index("I");
  rep.gauge = idle >= 0 ? "idle-local-phase" : "none";
  for (std::size_t g = 0; g < post.gates.size(); ++g) {
    GateReport gr;
    gr.name = post.gates[g];
    gr.lambda = cptp_project(post.lambda(static_cast<int>(g)));
    if (static_cast<int>(g) == idle) {
      // Fold the idle gate's local Z phases into the qubit frames.
      const Mat16 hz1 = hamiltonian_generator(12), hz2 = hamiltonian_generator(3);
      for (int it = 0; it < 4; ++it) {
        const ErrorDecomposition d = decompose_generator(error_generator(gr.lambda));
        gr.lambda = matrix_exp(-d.h[11] * hz1 - d.h[2] * hz2) * gr.lambda;
      }
    }
    gr.generator = error_generator(gr.lambda);
    gr.dec = decompose_generator(gr.generator);
    gr.f_avg = avg_from_ent(ent_fidelity_of_ptm(gr.lambda));
    gr.f_avg_coeff = infidelity_from_coefficients(gr.dec).avg_fidelity;
    double var = 0.0;
    const int base = static_cast<int>(g) * NoiseResidual::kPerGate;
    for (int i = 1; i < 16; ++i)
      for (int k = 1; k < 16; ++k)
        var += post.cov(base + (i - 1) * 16 + i, base + (k - 1) * 16 + k);
    gr.f_avg_err = 0.8 * std::sqrt(std::max(var, 0.0)) / 16.0;
    rep.gates.push_back(std::move(gr));
  }
  return rep;
}

nlohmann::json FbtReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& g : gates) {
    std::vector<int> order(15);
    std::iota(order.begin(), order.end(), 0);
    auto by_h = order, by_s = order;
    std::stable_sort(by_h.begin(), by_h.end(),
                     [&](int a, int b) { return std::abs(g.dec.h[a]) > std::abs(g.dec.h[b]); });
    std::stable_sort(by_s.begin(), by_s.end(),
                     [&](int a, int b) { return g.dec.s[a] > g.dec.s[b]; });
    nlohmann::json top_h = nlohmann::json::array(), top_s = nlohmann::json::array();
    for (int k = 0; k < 5; ++k) {
      top_h.push_back({{"label", PauliLabel(by_h[k] + 1).str()},
                       {"h", g.dec.h[by_h[k]]},
                       {"contribution", g.dec.h[by_h[k]] * g.dec.h[by_h[k]]}});
      top_s.push_back({{"label", PauliLabel(by_s[k] + 1).str()},
                       {"s", g.dec.s[by_s[k]]},
                       {"contribution", g.dec.s[by_s[k]]}});
    }
    arr.push_back({{"gate", g.name},
                   {"ptm", real_matrix_to_json(g.lambda * ideal_gate_ptm(g.name))},
                   {"noise_ptm", real_matrix_to_json(g.lambda)},
                   {"generator", real_matrix_to_json(g.generator)},
                   {"decomposition", g.dec.to_json()},
                   {"f_avg", g.f_avg},
                   {"f_avg_err", g.f_avg_err},
                   {"f_avg_coefficients", g.f_avg_coeff},
                   {"top_hamiltonian", top_h},
                   {"top_stochastic", top_s}});
  }
  return {{"gates", arr}, {"converged", converged}, {"gauge", gauge}, {"warnings", warnings}};
}

}  // namespace hotspin
