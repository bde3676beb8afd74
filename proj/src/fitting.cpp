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


#include "hotspin/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hotspin/errors.hpp"

namespace hotspin {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd covariance_from(const MatrixXd& jtj, double scale) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(jtj);
  const auto& ev = es.eigenvalues();
  if (ev.minCoeff() <= ev.maxCoeff() * 1e-14 || ev.minCoeff() <= 0.0)
    throw FitError("singular Jacobian at the solution");
  return scale * es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

void check_samples(const std::vector<double>& t, const std::vector<double>& y, std::size_t min_n) {
  if (t.size() != y.size()) throw FitError("t and y differ in length");
  if (t.size() < min_n) throw FitError("too few samples: need " + std::to_string(min_n));
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!std::isfinite(t[k]) || !std::isfinite(y[k])) throw FitError("non-finite sample");
    if (k > 0 && !(t[k] > t[k - 1])) throw FitError("t must be strictly increasing");
  }
  if (t.front() < 0.0) throw FitError("t must be non-negative");
}

}  // namespace

LmResult levenberg_marquardt(const LmProblem& prob, VectorXd p, int max_iter, double tol) {
  auto ok = [&](const VectorXd& q) {
    return q.allFinite() && (!prob.feasible || prob.feasible(q));
  };
  if (!ok(p)) throw FitError("initial guess is infeasible");
  VectorXd r = prob.residual(p);
  double rss = r.squaredNorm();
  double lambda = 1e-3;
  LmResult out;
  int it = 0;
  for (; it < max_iter; ++it) {
    const MatrixXd j = prob.jacobian(p);
    const MatrixXd jtj = j.transpose() * j;
    const VectorXd g = j.transpose() * r;
    VectorXd scale = jtj.diagonal().cwiseMax(1e-300);
    bool improved = false;
    for (int inner = 0; inner < 60; ++inner) {
      MatrixXd a = jtj;
      a.diagonal() += lambda * scale;
      const VectorXd step = a.ldlt().solve(-g);
      const VectorXd q = p + step;
      if (!step.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      if (ok(q)) {
        const VectorXd rq = prob.residual(q);
        const double rss_q = rq.squaredNorm();
        if (std::isfinite(rss_q) && rss_q <= rss) {
          const double rel = (rss - rss_q) / std::max(rss, 1e-300);
          const double step_rel = step.norm() / (p.norm() + 1e-300);
          p = q;
          r = rq;
          rss = rss_q;
          lambda = std::max(lambda / 3.0, 1e-12);
          improved = true;
          if (rel < tol || step_rel < 1e-13 || rss < 1e-30) out.converged = true;
          break;
        }
      }
      lambda *= 4.0;
    }
    if (!improved) {
      // No downhill step exists at any damping: a stationary point.
      out.converged = true;
      break;
    }
    if (out.converged) break;
  }
  const MatrixXd j = prob.jacobian(p);
  out.params = p;
  out.jtj = j.transpose() * j;
  out.rss = rss;
  out.iterations = it;
  return out;
}

// ---- stretched exponential ----

double DecayFit::eval(double t) const {
  if (flat) return d;
  return a * std::exp(-std::pow(b * t, c)) + d;
}

double DecayFit::b_error() const { return std::sqrt(std::max(covariance(1, 1), 0.0)); }

nlohmann::json DecayFit::to_json() const {
  nlohmann::json cov = nlohmann::json::array();
  for (int i = 0; i < 4; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < 4; ++k) row.push_back(covariance(i, k));
    cov.push_back(row);
  }
  return {{"params", {{"a", a}, {"b", b}, {"c", c}, {"d", d}}},
          {"covariance", cov},
          {"residual", residual_norm},
          {"flat", flat}};
}

DecayFit fit_stretched_exp(const std::vector<double>& t, const std::vector<double>& y,
                           const FitOptions& opt, const std::vector<double>& sigma) {
  // two spare degrees of freedom beyond the free parameters
  check_samples(t, y, 4 + (opt.fix_c ? 0 : 1) + (opt.fix_d ? 0 : 1));
  const std::size_t n = t.size();
  if (!sigma.empty() && sigma.size() != n) throw FitError("sigma length mismatch");
  VectorXd w = VectorXd::Ones(n);
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    if (!(sigma[k] > 0.0)) throw FitError("sigma must be positive");
    w[k] = 1.0 / sigma[k];
  }

  DecayFit fit;
  const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
  const double span = *ymax - *ymin;
  if (span <= 1e-12 * (1.0 + std::abs(*ymax))) {
    fit.flat = true;
    fit.a = 0.0;
    fit.b = 0.0;
    fit.c = opt.fix_c ? opt.c_value : 1.0;
    double mean = 0.0;
    for (double v : y) mean += v;
    fit.d = opt.fix_d ? opt.d_value : mean / n;
    for (std::size_t k = 0; k < n; ++k) fit.residual_norm += std::pow(y[k] - fit.d, 2);
    fit.residual_norm = std::sqrt(fit.residual_norm);
    return fit;
  }

  // Initial guess: a = y0 - y_inf, d = y_inf, c = 1, b from a log-linear fit.
  const double d0 = opt.fix_d ? opt.d_value : y.back();
  const double a0 = y.front() - d0;
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < n; ++k) {
    const double ratio = (y[k] - d0) / a0;
    if (ratio > 0.02 && ratio < 1.0 && t[k] > 0.0) {
      lx.push_back(t[k]);
      ly.push_back(std::log(ratio));
    }
  }
  double b0 = 0.0;
  if (lx.size() >= 2) {
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
      sxx += lx[k] * lx[k];
      sxy += lx[k] * ly[k];
    }
    b0 = -sxy / sxx;  // through the origin, since ln(ratio) = 0 at t = 0
  }
  if (!(b0 > 0.0) || !std::isfinite(b0)) b0 = 1.0 / (t.back() - t.front() + 1e-300);
  const double c0 = opt.fix_c ? opt.c_value : 1.0;

  // Free parameters in order a, b, [c], [d]; b is fitted as b*tscale.
  const double tscale = t.back() > 0.0 ? t.back() : 1.0;
  std::vector<int> idx{0, 1};
  if (!opt.fix_c) idx.push_back(2);
  if (!opt.fix_d) idx.push_back(3);
  const int np = static_cast<int>(idx.size());
  auto full = [&](const VectorXd& q) {
    Eigen::Vector4d f(0.0, 0.0, opt.c_value, opt.d_value);
    for (int k = 0; k < np; ++k) f[idx[k]] = q[k];
    f[1] /= tscale;
    return f;
  };
  LmProblem prob;
  prob.residual = [&](const VectorXd& q) {
    const Eigen::Vector4d f = full(q);
    VectorXd r(n);
    for (std::size_t k = 0; k < n; ++k)
      r[k] = w[k] * (f[0] * std::exp(-std::pow(f[1] * t[k], f[2])) + f[3] - y[k]);
    return r;
  };
  prob.jacobian = [&](const VectorXd& q) {
    const Eigen::Vector4d f = full(q);
    MatrixXd j(n, np);
    for (std::size_t k = 0; k < n; ++k) {
      const double x = f[1] * t[k];
      const double u = x > 0.0 ? std::pow(x, f[2]) : 0.0;
      const double e = std::exp(-u);
      const double col[4] = {e, x > 0.0 ? -f[0] * e * f[2] * u / f[1] / tscale : 0.0,
                             x > 0.0 ? -f[0] * e * u * std::log(x) : 0.0, 1.0};
      for (int m = 0; m < np; ++m) j(k, m) = w[k] * col[idx[m]];
    }
    return j;
  };
  prob.feasible = [&](const VectorXd& q) {
    const Eigen::Vector4d f = full(q);
    return f[1] > 0.0 && f[2] > 0.05 && f[2] < 20.0;
  };

  LmResult best;
  best.rss = std::numeric_limits<double>::infinity();
  // Deterministic restarts around the log-linear rate.
  for (double mult : {1.0, 0.3, 3.0, 0.1, 10.0}) {
    VectorXd p0(np);
    const Eigen::Vector4d g(a0, b0 * mult * tscale, c0, d0);
    for (int k = 0; k < np; ++k) p0[k] = g[idx[k]];
    try {
      LmResult r = levenberg_marquardt(prob, p0, opt.max_iter);
      if (r.rss < best.rss) best = r;
    } catch (const FitError&) {
    }
    if (best.converged && best.rss < 1e-24 * n) break;
  }
  if (!std::isfinite(best.rss) || !best.converged)
    throw FitError("stretched-exponential fit did not converge");

  const Eigen::Vector4d f = full(best.params);
  fit.a = f[0];
  fit.b = f[1];
  fit.c = f[2];
  fit.d = f[3];
  fit.iterations = best.iterations;
  fit.residual_norm = std::sqrt(best.rss);
  const double dof = std::max<double>(1.0, static_cast<double>(n) - np);
  const double s2 = sigma.empty() ? best.rss / dof : 1.0;
  MatrixXd cov;
  try {
    cov = covariance_from(best.jtj, s2);
  } catch (const FitError&) {
    if (best.rss < 1e-20) {
      cov = MatrixXd::Zero(np, np);
    } else {
      throw;
    }
  }
  for (int i = 0; i < np; ++i)
    for (int k = 0; k < np; ++k) {
      double v = cov(i, k);
      if (idx[i] == 1) v /= tscale;
      if (idx[k] == 1) v /= tscale;
      fit.covariance(idx[i], idx[k]) = v;
    }
  return fit;
}

// ---- oscillation ----

double OscillationFit::eval(double t) const {
  return amplitude * std::exp(-std::pow(t / t2, c)) * std::cos(2.0 * M_PI * frequency * t + phase) +
         offset;
}

nlohmann::json OscillationFit::to_json() const {
  nlohmann::json cov = nlohmann::json::array();
  for (int i = 0; i < 6; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < 6; ++k) row.push_back(covariance(i, k));
    cov.push_back(row);
  }
  return {{"params",
           {{"amplitude", amplitude},
            {"frequency", frequency},
            {"phase", phase},
            {"t2", t2},
            {"c", c},
            {"offset", offset},
            {"q", q()}}},
          {"covariance", cov},
          {"residual", residual_norm}};
}

OscillationFit fit_oscillation(const std::vector<double>& t, const std::vector<double>& y,
                               bool fit_stretch) {
  check_samples(t, y, 8);
  const std::size_t n = t.size();
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= n;
  // Periodogram peak on a grid up to the mean Nyquist rate.
  const double span = t.back() - t.front();
  const double f_max = 0.5 * (n - 1) / span;
  const double f_min = 0.5 / span;
  double f0 = f_min, best_pow = -1.0, ph0 = 0.0, amp0 = 0.0;
  const int grid = 4000;
  for (int k = 0; k <= grid; ++k) {
    const double f = f_min + (f_max - f_min) * k / grid;
    double cs = 0.0, sn = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      const double arg = 2.0 * M_PI * f * t[m];
      cs += (y[m] - mean) * std::cos(arg);
      sn += (y[m] - mean) * std::sin(arg);
    }
    const double pw = cs * cs + sn * sn;
    if (pw > best_pow) {
      best_pow = pw;
      f0 = f;
      ph0 = std::atan2(-sn, cs);
      amp0 = 2.0 * std::sqrt(pw) / n;
    }
  }
  const double tscale = span > 0.0 ? span : 1.0;
  // Parameters: A, f*tscale, phase, T2/tscale, c, offset.
  auto unpack = [&](const VectorXd& q) {
    Eigen::Matrix<double, 6, 1> f;
    f << q[0], q[1] / tscale, q[2], q[3] * tscale, fit_stretch ? q[4] : 1.0,
        q[fit_stretch ? 5 : 4];
    return f;
  };
  const int np = fit_stretch ? 6 : 5;
  LmProblem prob;
  prob.residual = [&](const VectorXd& q) {
    const auto f = unpack(q);
    VectorXd r(n);
    for (std::size_t k = 0; k < n; ++k)
      r[k] = f[0] * std::exp(-std::pow(t[k] / f[3], f[4])) *
                 std::cos(2.0 * M_PI * f[1] * t[k] + f[2]) +
             f[5] - y[k];
    return r;
  };
  prob.jacobian = [&](const VectorXd& q) {
    const auto f = unpack(q);
    MatrixXd j(n, np);
    for (std::size_t k = 0; k < n; ++k) {
      const double x = t[k] / f[3];
      const double u = x > 0.0 ? std::pow(x, f[4]) : 0.0;
      const double e = std::exp(-u);
      const double arg = 2.0 * M_PI * f[1] * t[k] + f[2];
      const double cs = std::cos(arg), sn = std::sin(arg);
      j(k, 0) = e * cs;
      j(k, 1) = -f[0] * e * sn * 2.0 * M_PI * t[k] / tscale;
      j(k, 2) = -f[0] * e * sn;
      j(k, 3) = f[0] * cs * e * f[4] * u / f[3] * tscale;
      if (fit_stretch) {
        j(k, 4) = x > 0.0 ? -f[0] * cs * e * u * std::log(x) : 0.0;
        j(k, 5) = 1.0;
      } else {
        j(k, 4) = 1.0;
      }
    }
    return j;
  };
  prob.feasible = [&](const VectorXd& q) {
    const auto f = unpack(q);
    return f[1] > 0.0 && f[3] > 0.0 && f[4] > 0.2 && f[4] < 10.0;
  };
  LmResult best;
  best.rss = std::numeric_limits<double>::infinity();
  for (double tmul : {1.0, 0.3, 3.0, 10.0}) {
    VectorXd p0(np);
    p0[0] = amp0;
    p0[1] = f0 * tscale;
    p0[2] = ph0;
    p0[3] = tmul;
    if (fit_stretch) {
      p0[4] = 1.0;
      p0[5] = mean;
    } else {
      p0[4] = mean;
    }
    try {
      LmResult r = levenberg_marquardt(prob, p0, 800);
      if (r.rss < best.rss) best = r;
    } catch (const FitError&) {
    }
  }
  if (!std::isfinite(best.rss)) throw FitError("oscillation fit did not converge");
  const auto f = unpack(best.params);
  OscillationFit out;
  out.amplitude = f[0];
  out.frequency = f[1];
  out.phase = std::remainder(f[2], 2.0 * M_PI);
  out.t2 = f[3];
  out.c = f[4];
  out.offset = f[5];
  if (out.amplitude < 0.0) {
    out.amplitude = -out.amplitude;
    out.phase = std::remainder(out.phase + M_PI, 2.0 * M_PI);
  }
  out.residual_norm = std::sqrt(best.rss);
  const double dof = std::max<double>(1.0, static_cast<double>(n) - np);
  MatrixXd cov = MatrixXd::Zero(np, np);
  try {
    cov = covariance_from(best.jtj, best.rss / dof);
  } catch (const FitError&) {
    if (best.rss > 1e-20) throw;
  }
  const double sc[6] = {1.0, 1.0 / tscale, 1.0, tscale, 1.0, 1.0};
  const int map5[5] = {0, 1, 2, 3, 5};
  for (int i = 0; i < np; ++i)
    for (int k = 0; k < np; ++k) {
      const int a = fit_stretch ? i : map5[i], b = fit_stretch ? k : map5[k];
      out.covariance(a, b) = cov(i, k) * sc[a] * sc[b];
    }
  return out;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw FitError("line fit needs two or more points");
  const double n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (sxx <= 0.0) throw FitError("line fit needs distinct x values");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k)
    rss += std::pow(y[k] - f.intercept - f.slope * x[k], 2);
  const double s2 = x.size() > 2 ? rss / (n - 2.0) : 0.0;
  f.slope_err = std::sqrt(s2 / sxx);
  f.intercept_err = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  return f;
}

}  // namespace hotspin
