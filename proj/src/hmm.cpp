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


#include "hotspin/hmm.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "hotspin/errors.hpp"

namespace hotspin {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

struct LogModel {
  Eigen::VectorXd pi;
  Eigen::MatrixXd a, theta;
  explicit LogModel(const HmmModel& m)
      : pi(m.pi.unaryExpr(&safe_log)),
        a(m.a.unaryExpr(&safe_log)),
        theta(m.theta.unaryExpr(&safe_log)) {}
};

// alpha(t, s) = log p(m_1..m_t, s_t = s)
Eigen::MatrixXd forward(const LogModel& lm, const std::vector<int>& c) {
  const int n = static_cast<int>(c.size()), s = static_cast<int>(lm.pi.size());
  Eigen::MatrixXd al(n, s);
  for (int k = 0; k < s; ++k) al(0, k) = lm.pi(k) + lm.theta(k, c[0]);
  for (int t = 1; t < n; ++t)
    for (int k = 0; k < s; ++k) {
      double acc = kNegInf;
      for (int j = 0; j < s; ++j) acc = log_sum_exp(acc, al(t - 1, j) + lm.a(j, k));
      al(t, k) = acc + lm.theta(k, c[t]);
    }
  return al;
}

Eigen::MatrixXd backward(const LogModel& lm, const std::vector<int>& c) {
  const int n = static_cast<int>(c.size()), s = static_cast<int>(lm.pi.size());
  Eigen::MatrixXd be(n, s);
  be.row(n - 1).setZero();
  for (int t = n - 2; t >= 0; --t)
    for (int j = 0; j < s; ++j) {
      double acc = kNegInf;
      for (int k = 0; k < s; ++k)
        acc = log_sum_exp(acc, lm.a(j, k) + lm.theta(k, c[t + 1]) + be(t + 1, k));
      be(t, j) = acc;
    }
  return be;
}

double row_ll(const Eigen::RowVectorXd& v) {
  double acc = kNegInf;
  for (int k = 0; k < v.size(); ++k) acc = log_sum_exp(acc, v(k));
  return acc;
}

void check_row(const Eigen::RowVectorXd& r, double tol, const char* what) {
  if ((r.array() < 0.0).any() || (r.array() > 1.0).any())
    throw ValidationError(std::string(what) + " has entries outside [0, 1]");
  if (std::abs(r.sum() - 1.0) > tol) throw ValidationError(std::string(what) + " row does not sum to 1");
}

Eigen::RowVectorXd random_row(int n, Stream& rng) {
  Eigen::RowVectorXd r(n);
  for (int k = 0; k < n; ++k) r(k) = rng.exponential(1.0) + 1e-3;
  return r / r.sum();
}

// Stochastic rows <-> log ratios against the last entry.
struct Param {
  int kind;  // 0 pi, 1 a, 2 theta
  int row;
};

std::vector<Param> rows_of(const HmmModel& m) {
  std::vector<Param> out{{0, 0}};
  for (int i = 0; i < m.n_states(); ++i) out.push_back({1, i});
  for (int i = 0; i < m.n_states(); ++i) out.push_back({2, i});
  return out;
}

Eigen::RowVectorXd get_row(const HmmModel& m, const Param& p) {
  if (p.kind == 0) return m.pi.transpose();
  if (p.kind == 1) return m.a.row(p.row);
  return m.theta.row(p.row);
}

void set_row(HmmModel& m, const Param& p, const Eigen::RowVectorXd& r) {
  if (p.kind == 0)
    m.pi = r.transpose();
  else if (p.kind == 1)
    m.a.row(p.row) = r;
  else
    m.theta.row(p.row) = r;
}

Eigen::RowVectorXd softmax_tail(const Eigen::VectorXd& x, int n) {
  Eigen::RowVectorXd r(n);
  const double mx = std::max(0.0, x.maxCoeff());
  for (int k = 0; k < n - 1; ++k) r(k) = std::exp(x(k) - mx);
  r(n - 1) = std::exp(-mx);
  return r / r.sum();
}

}  // namespace

void HmmModel::validate(double tol) const {
  const int s = n_states();
  if (s < 1) throw ValidationError("HMM needs at least one state");
  if (a.rows() != s || a.cols() != s || theta.rows() != s || theta.cols() < 1)
    throw ValidationError("HMM matrix shapes are inconsistent");
  check_row(pi.transpose(), tol, "start vector");
  for (int i = 0; i < s; ++i) {
    check_row(a.row(i), tol, "transition matrix");
    check_row(theta.row(i), tol, "emission matrix");
  }
}

HmmModel HmmModel::parity(double pie, double pre, double pro, double peo, double poe) {
  HmmModel m;
  m.pi = Eigen::Vector2d(pie, 1.0 - pie);
  m.a.resize(2, 2);
  m.a << 1.0 - peo, peo, poe, 1.0 - poe;
  m.theta.resize(2, 2);
  m.theta << pre, 1.0 - pre, 1.0 - pro, pro;
  m.validate();
  return m;
}

HmmModel HmmModel::default_init(int s, int o) {
  if (s < 2 || o < 2) throw ValidationError("default start needs at least 2 states and symbols");
  HmmModel m;
  m.pi = Eigen::VectorXd::Constant(s, 0.1 / (s - 1));
  m.pi(0) = 0.9;
  m.a = Eigen::MatrixXd::Constant(s, s, 0.05 / (s - 1));
  m.theta = Eigen::MatrixXd::Constant(s, o, 0.1 / (o - 1));
  for (int i = 0; i < s; ++i) {
    m.a(i, i) = 0.95;
    m.theta(i, std::min(i, o - 1)) = 0.9;
  }
  // More states than symbols: rows past o-1 share the last symbol.
  for (int i = 0; i < s; ++i) m.theta.row(i) /= m.theta.row(i).sum();
  return m;
}

nlohmann::json HmmModel::to_json() const {
  nlohmann::json j;
  j["pi"] = std::vector<double>(pi.data(), pi.data() + pi.size());
  auto rows = [](const Eigen::MatrixXd& m) {
    std::vector<std::vector<double>> out(m.rows());
    for (int i = 0; i < m.rows(); ++i)
      for (int k = 0; k < m.cols(); ++k) out[i].push_back(m(i, k));
    return out;
  };
  j["a"] = rows(a);
  j["theta"] = rows(theta);
  return j;
}

HmmModel HmmModel::from_json(const nlohmann::json& j) {
  HmmModel m;
  const auto pi = j.at("pi").get<std::vector<double>>();
  m.pi = Eigen::Map<const Eigen::VectorXd>(pi.data(), pi.size());
  auto mat = [](const nlohmann::json& v) {
    const auto rows = v.get<std::vector<std::vector<double>>>();
    if (rows.empty()) throw ValidationError("empty matrix in HMM model");
    Eigen::MatrixXd m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows[0].size()) throw ValidationError("ragged matrix in HMM model");
      for (std::size_t k = 0; k < rows[i].size(); ++k) m(i, k) = rows[i][k];
    }
    return m;
  };
  m.a = mat(j.at("a"));
  m.theta = mat(j.at("theta"));
  m.validate(1e-9);
  return m;
}

void ChainData::validate(int n_symbols) const {
  if (chains.empty()) throw ValidationError("chain data is empty");
  const std::size_t n = chains[0].size();
  if (n == 0) throw ValidationError("chains must contain at least one read");
  for (const auto& c : chains) {
    if (c.size() != n) throw ValidationError("chain data is not rectangular");
    for (int v : c)
      if (v < 0 || v >= n_symbols) throw ValidationError("chain entry out of range");
  }
}

std::string ChainData::to_csv() const {
  std::ostringstream os;
  for (const auto& c : chains) {
    for (std::size_t t = 0; t < c.size(); ++t) os << (t ? "," : "") << c[t];
    os << '\n';
  }
  return os.str();
}

ChainData ChainData::from_csv(const std::string& text) {
  ChainData d;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<int> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t\r");
      const auto e = cell.find_last_not_of(" \t\r");
      if (b == std::string::npos) throw ValidationError("empty CSV cell");
      const std::string v = cell.substr(b, e - b + 1);
      if (v != "0" && v != "1") throw ValidationError("chain entries must be 0 or 1");
      row.push_back(v[0] - '0');
    }
    d.chains.push_back(std::move(row));
  }
  d.validate();
  return d;
}

ChainData simulate_chains(const HmmModel& m, int n_chains, int n_reads, Stream& rng) {
  m.validate(1e-9);
  if (n_chains < 1 || n_reads < 1) throw ValidationError("need at least one chain and read");
  auto draw = [&](Stream& s, const Eigen::RowVectorXd& p) {
    double u = s.uniform(), acc = 0.0;
    for (int k = 0; k < p.size(); ++k) {
      acc += p(k);
      if (u < acc) return k;
    }
    return static_cast<int>(p.size()) - 1;
  };
  ChainData d;
  d.chains.resize(n_chains);
  parallel_for(n_chains, [&](std::size_t c) {
    Stream s = rng.child(c);
    std::vector<int>& out = d.chains[c];
    int st = draw(s, m.pi.transpose());
    for (int t = 0; t < n_reads; ++t) {
      if (t > 0) st = draw(s, m.a.row(st));
      out.push_back(draw(s, m.theta.row(st)));
    }
  });
  return d;
}

double chain_log_likelihood(const HmmModel& model, const std::vector<int>& chain) {
  if (chain.empty()) throw ValidationError("empty chain");
  const LogModel lm(model);
  const Eigen::MatrixXd al = forward(lm, chain);
  return row_ll(al.row(al.rows() - 1));
}

double log_likelihood(const HmmModel& model, const ChainData& data, bool* impossible) {
  data.validate(model.n_symbols());
  const LogModel lm(model);
  std::vector<double> per(data.n_chains());
  parallel_for(per.size(), [&](std::size_t c) {
    const Eigen::MatrixXd al = forward(lm, data.chains[c]);
    per[c] = row_ll(al.row(al.rows() - 1));
  });
  double total = 0.0;
  for (double v : per) total += v;  // fixed order
  if (impossible) *impossible = total == kNegInf;
  return total;
}

std::vector<int> viterbi_path(const HmmModel& model, const std::vector<int>& chain) {
  if (chain.empty()) return {};
  const LogModel lm(model);
  const int n = static_cast<int>(chain.size()), s = model.n_states();
  Eigen::MatrixXd d(n, s);
  Eigen::MatrixXi back(n, s);
  for (int k = 0; k < s; ++k) d(0, k) = lm.pi(k) + lm.theta(k, chain[0]);
  for (int t = 1; t < n; ++t)
    for (int k = 0; k < s; ++k) {
      int arg = 0;
      double best = d(t - 1, 0) + lm.a(0, k);
      for (int j = 1; j < s; ++j) {
        const double v = d(t - 1, j) + lm.a(j, k);
        if (v > best) {
          best = v;
          arg = j;
        }
      }
      d(t, k) = best + lm.theta(k, chain[t]);
      back(t, k) = arg;
    }
  std::vector<int> path(n);
  int arg = 0;
  for (int k = 1; k < s; ++k)
    if (d(n - 1, k) > d(n - 1, arg)) arg = k;
  path[n - 1] = arg;
  for (int t = n - 1; t > 0; --t) path[t - 1] = back(t, path[t]);
  return path;
}

SpamEstimate baum_welch_fit(const ChainData& data, const HmmModel& init, int max_iters,
                            double tol) {
  init.validate(1e-9);
  data.validate(init.n_symbols());
  const int s = init.n_states(), o = init.n_symbols();
  const int nc = data.n_chains();

  struct Acc {
    Eigen::VectorXd pi;
    Eigen::MatrixXd a, th;
    double ll = 0.0;
  };
  auto e_step = [&](const HmmModel& m) {
    const LogModel lm(m);
    std::vector<Acc> per(nc);
    parallel_for(nc, [&](std::size_t c) {
      const auto& ch = data.chains[c];
      const int n = static_cast<int>(ch.size());
      const Eigen::MatrixXd al = forward(lm, ch), be = backward(lm, ch);
      const double ll = row_ll(al.row(n - 1));
      Acc& acc = per[c];
      acc.ll = ll;
      acc.pi = Eigen::VectorXd::Zero(s);
      acc.a = Eigen::MatrixXd::Zero(s, s);
      acc.th = Eigen::MatrixXd::Zero(s, o);
      if (ll == kNegInf) return;
      for (int t = 0; t < n; ++t)
        for (int k = 0; k < s; ++k) {
          const double g = std::exp(al(t, k) + be(t, k) - ll);
          if (t == 0) acc.pi(k) += g;
          acc.th(k, ch[t]) += g;
        }
      for (int t = 0; t + 1 < n; ++t)
        for (int j = 0; j < s; ++j)
          for (int k = 0; k < s; ++k)
            acc.a(j, k) +=
                std::exp(al(t, j) + lm.a(j, k) + lm.theta(k, ch[t + 1]) + be(t + 1, k) - ll);
    });
    Acc tot{Eigen::VectorXd::Zero(s), Eigen::MatrixXd::Zero(s, s), Eigen::MatrixXd::Zero(s, o),
            0.0};
    for (const auto& p : per) {
      tot.pi += p.pi;
      tot.a += p.a;
      tot.th += p.th;
      tot.ll += p.ll;
    }
    return tot;
  };
  auto normalise = [](Eigen::MatrixXd m, const Eigen::MatrixXd& fallback) {
    for (int i = 0; i < m.rows(); ++i) {
      const double z = m.row(i).sum();
      m.row(i) = z > 0.0 ? Eigen::RowVectorXd(m.row(i) / z) : Eigen::RowVectorXd(fallback.row(i));
    }
    return m;
  };

  SpamEstimate est;
  HmmModel m = init;
  Acc acc = e_step(m);
  if (acc.ll == kNegInf) throw FitError("data impossible under the starting model");
  double ll = acc.ll;
  for (int it = 1; it <= max_iters; ++it) {
    HmmModel next;
    next.pi = acc.pi / acc.pi.sum();
    next.a = normalise(acc.a, m.a);
    next.theta = normalise(acc.th, m.theta);
    Acc nacc = e_step(next);
    if (nacc.ll < ll - 1e-10 * std::max(1.0, std::abs(ll)))
      throw ConvergenceError("EM log-likelihood decreased");
    const double gain = nacc.ll - ll;
    m = next;
    acc = nacc;
    ll = nacc.ll;
    est.iterations = it;
    if (gain <= tol * std::max(1.0, std::abs(ll))) {
      est.converged = true;
      break;
    }
  }

  // Label convention: state 0 is the one that reads blockaded.
  if (s == 2 && m.theta(0, 0) < 0.5) {
    HmmModel sw = m;
    sw.pi = Eigen::Vector2d(m.pi(1), m.pi(0));
    sw.a << m.a(1, 1), m.a(1, 0), m.a(0, 1), m.a(0, 0);
    sw.theta.row(0) = m.theta.row(1);
    sw.theta.row(1) = m.theta.row(0);
    m = sw;
  }
  bool flat = true;
  for (const auto& c : data.chains)
    for (int v : c) flat = flat && v == data.chains[0][0];
  if (flat) est.warnings.push_back("degenerate data: all outcomes identical; boundary estimate");
  est.model = m;
  est.log_likelihood = ll;
  if (s == 2 && o == 2) {
    est.p_init_even = m.pi(0);
    est.p_init_odd = m.pi(1);
    est.p_read_even = m.theta(0, 0);
    est.p_read_odd = m.theta(1, 1);
    est.p_even_to_odd = m.a(0, 1);
    est.p_odd_to_even = m.a(1, 0);
  }
  return est;
}

SpamEstimate fit_spam(const ChainData& data, Stream& rng, int restarts, int max_iters,
                      double tol) {
  if (restarts < 0) throw ValidationError("restarts must be non-negative");
  SpamEstimate best = baum_welch_fit(data, HmmModel::default_init(), max_iters, tol);
  for (int r = 0; r < restarts; ++r) {
    Stream s = rng.child(r);
    HmmModel m;
    m.pi = random_row(2, s).transpose();
    m.a.resize(2, 2);
    m.theta.resize(2, 2);
    for (int i = 0; i < 2; ++i) {
      m.a.row(i) = random_row(2, s);
      m.theta.row(i) = random_row(2, s);
    }
    try {
      SpamEstimate e = baum_welch_fit(data, m, max_iters, tol);
      if (e.log_likelihood > best.log_likelihood + 1e-9) best = std::move(e);
    } catch (const FitError&) {
    }
  }
  attach_bounds(best, data);
  return best;
}

FisherBounds fisher_bounds(const HmmModel& model, const ChainData& data, double h) {
  model.validate(1e-9);
  const auto rows = rows_of(model);
  FisherBounds fb;
  fb.sd_pi = Eigen::VectorXd::Zero(model.n_states());
  fb.sd_a = Eigen::MatrixXd::Zero(model.n_states(), model.n_states());
  fb.sd_theta = Eigen::MatrixXd::Zero(model.n_states(), model.n_symbols());

  // Coordinates: log(p_k / p_last) for every row entry but the last.
  std::vector<int> offset;
  int dim = 0;
  for (const auto& r : rows) {
    const Eigen::RowVectorXd v = get_row(model, r);
    offset.push_back(dim);
    for (int k = 0; k < v.size(); ++k)
      if (v(k) < 1e-9 || v(k) > 1.0 - 1e-9) fb.boundary = true;
    dim += static_cast<int>(v.size()) - 1;
  }
  if (fb.boundary) return fb;  // information diverges; bounds reported as 0

  Eigen::VectorXd x0(dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Eigen::RowVectorXd v = get_row(model, rows[r]);
    for (int k = 0; k + 1 < v.size(); ++k) x0(offset[r] + k) = std::log(v(k) / v(v.size() - 1));
  }
  auto build = [&](const Eigen::VectorXd& x) {
    HmmModel m = model;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const int n = static_cast<int>(get_row(model, rows[r]).size());
      set_row(m, rows[r], softmax_tail(x.segment(offset[r], n - 1), n));
    }
    return m;
  };
  auto f = [&](const Eigen::VectorXd& x) { return log_likelihood(build(x), data); };

  const double f0 = f(x0);
  Eigen::MatrixXd hess(dim, dim);
  for (int i = 0; i < dim; ++i) {
    Eigen::VectorXd xp = x0, xm = x0;
    xp(i) += h;
    xm(i) -= h;
    hess(i, i) = (f(xp) - 2.0 * f0 + f(xm)) / (h * h);
    for (int j = 0; j < i; ++j) {
      Eigen::VectorXd a = x0, b = x0, c = x0, d = x0;
      a(i) += h, a(j) += h;
      b(i) += h, b(j) -= h;
      c(i) -= h, c(j) += h;
      d(i) -= h, d(j) -= h;
      hess(i, j) = hess(j, i) = (f(a) - f(b) - f(c) + f(d)) / (4.0 * h * h);
    }
  }
  const Eigen::MatrixXd info = -hess;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(info);
  if (es.eigenvalues().minCoeff() <= 1e-9 * std::max(1.0, es.eigenvalues().maxCoeff())) {
    fb.singular = true;
    const double inf = std::numeric_limits<double>::infinity();
    fb.sd_pi.setConstant(inf);
    fb.sd_a.setConstant(inf);
    fb.sd_theta.setConstant(inf);
    return fb;
  }
  const Eigen::MatrixXd cov = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
                              es.eigenvectors().transpose();
  // Delta method, row by row: dp/dx for the softmax-tail map.
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Eigen::RowVectorXd p = get_row(model, rows[r]);
    const int n = static_cast<int>(p.size());
    Eigen::MatrixXd jac(n, n - 1);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n - 1; ++l) jac(k, l) = p(k) * ((k == l ? 1.0 : 0.0) - p(l));
    const Eigen::MatrixXd cv = jac * cov.block(offset[r], offset[r], n - 1, n - 1) * jac.transpose();
    Eigen::RowVectorXd sd(n);
    for (int k = 0; k < n; ++k) sd(k) = std::sqrt(std::max(cv(k, k), 0.0));
    if (rows[r].kind == 0)
      fb.sd_pi = sd.transpose();
    else if (rows[r].kind == 1)
      fb.sd_a.row(rows[r].row) = sd;
    else
      fb.sd_theta.row(rows[r].row) = sd;
  }
  return fb;
}

void attach_bounds(SpamEstimate& est, const ChainData& data) {
  const FisherBounds fb = fisher_bounds(est.model, data);
  est.bounds_valid = !fb.singular;
  if (fb.boundary) est.warnings.push_back("estimate at the parameter boundary; bounds set to 0");
  if (fb.singular) est.warnings.push_back("singular Fisher information; bounds infinite");
  if (est.model.n_states() == 2 && est.model.n_symbols() == 2) {
    est.sd_init_even = fb.sd_pi(0);
    est.sd_init_odd = fb.sd_pi(1);
    est.sd_read_even = fb.sd_theta(0, 0);
    est.sd_read_odd = fb.sd_theta(1, 1);
    est.sd_even_to_odd = fb.sd_a(0, 1);
    est.sd_odd_to_even = fb.sd_a(1, 0);
  }
}

nlohmann::json SpamEstimate::to_json() const {
  auto num = [](double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  };
  nlohmann::json j;
  j["model"] = model.to_json();
  j["log_likelihood"] = log_likelihood;
  j["iterations"] = iterations;
  j["converged"] = converged;
  j["P_init,even"] = {{"value", p_init_even}, {"sd", num(sd_init_even)}};
  j["P_init,odd"] = {{"value", p_init_odd}, {"sd", num(sd_init_odd)}};
  j["P_read,even"] = {{"value", p_read_even}, {"sd", num(sd_read_even)}};
  j["P_read,odd"] = {{"value", p_read_odd}, {"sd", num(sd_read_odd)}};
  j["P_even->odd"] = {{"value", p_even_to_odd}, {"sd", num(sd_even_to_odd)}};
  j["P_odd->even"] = {{"value", p_odd_to_even}, {"sd", num(sd_odd_to_even)}};
  j["bounds_valid"] = bounds_valid;
  j["warnings"] = warnings;
  return j;
}

Reconstruction reconstruct_initial(const HmmModel& model, const ChainData& data) {
  model.validate(1e-9);
  data.validate(model.n_symbols());
  const LogModel lm(model);
  Reconstruction r;
  r.posterior_even.resize(data.n_chains());
  parallel_for(data.n_chains(), [&](std::size_t c) {
    const auto& ch = data.chains[c];
    const Eigen::MatrixXd al = forward(lm, ch), be = backward(lm, ch);
    const double ll = row_ll(al.row(al.rows() - 1));
    r.posterior_even[c] = ll == kNegInf ? 0.0 : std::exp(al(0, 0) + be(0, 0) - ll);
  });
  double sum = 0.0, raw = 0.0;
  for (int c = 0; c < data.n_chains(); ++c) {
    sum += r.posterior_even[c];
    raw += data.chains[c][0] == 0 ? 1.0 : 0.0;
  }
  r.corrected_p_blockade = sum / data.n_chains();
  r.raw_p_blockade = raw / data.n_chains();
  return r;
}

}  // namespace hotspin
