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

// Damped least-squares fitting of decay and oscillation curves.

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace hotspin {

struct LmProblem {
  // Residuals r(p) = model(p) - y, weighted if the caller wants weights.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> residual;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
  // Optional feasibility test; infeasible trial steps are rejected.
  std::function<bool(const Eigen::VectorXd&)> feasible;
};

struct LmResult {
  Eigen::VectorXd params;
  Eigen::MatrixXd jtj;  // at the solution
  double rss = 0.0;
  int iterations = 0;
  bool converged = false;
};

LmResult levenberg_marquardt(const LmProblem& prob, Eigen::VectorXd p0, int max_iter = 500,
                             double tol = 1e-15);

struct FitOptions {
  bool fix_c = false;
  double c_value = 1.0;
  bool fix_d = false;
  double d_value = 0.0;
  int max_iter = 500;
};

// y = a exp(-(b t)^c) + d
struct DecayFit {
  double a = 0.0, b = 0.0, c = 1.0, d = 0.0;
  Eigen::Matrix4d covariance = Eigen::Matrix4d::Zero();  // order a, b, c, d
  double residual_norm = 0.0;
  int iterations = 0;
  bool flat = false;  // data carried no decay; a = b = 0

  double eval(double t) const;
  double characteristic_time() const { return b > 0.0 ? 1.0 / b : 0.0; }
  double b_error() const;
  nlohmann::json to_json() const;
};

DecayFit fit_stretched_exp(const std::vector<double>& t, const std::vector<double>& y,
                           const FitOptions& opt = {},
                           const std::vector<double>& sigma = {});

// y = A exp(-(t/T2)^c) cos(2 pi f t + phase) + offset
struct OscillationFit {
  double amplitude = 0.0, frequency = 0.0, phase = 0.0, t2 = 0.0, c = 1.0, offset = 0.0;
  Eigen::Matrix<double, 6, 6> covariance = Eigen::Matrix<double, 6, 6>::Zero();
  double residual_norm = 0.0;

  double q() const { return frequency * t2; }
  double eval(double t) const;
  nlohmann::json to_json() const;
};

OscillationFit fit_oscillation(const std::vector<double>& t, const std::vector<double>& y,
                               bool fit_stretch = true);

// Ordinary least squares line y = slope x + intercept with standard errors.
struct LineFit {
  double slope = 0.0, intercept = 0.0, slope_err = 0.0, intercept_err = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hotspin
