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

// Dense two-qubit linear algebra: density matrices, Pauli transfer matrices
// and the principal matrix logarithm used for error generators.
//
// Conventions shared by every module:
//  * basis order |dd>, |du>, |ud>, |uu> (d = spin down = |0>, qubit 1 first);
//  * Pauli labels in lexicographic order II, IX, IY, IZ, XI, ..., ZZ, with the
//    first letter acting on qubit 1, so label "AB" has index 4*a + b;
//  * PTM entry (i, j) = Tr(P_i U P_j U^dag) / 4, acting on Pauli vectors
//    r_i = Tr(P_i rho), so r_II = 1 for every state.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <string>
#include <string_view>

#include "json.hpp"

namespace hotspin {

using cplx = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;
using Mat4c = Eigen::Matrix4cd;
using Vec4c = Eigen::Vector4cd;
using Mat4 = Eigen::Matrix4d;
using Mat16 = Eigen::Matrix<double, 16, 16>;
using Vec16 = Eigen::Matrix<double, 16, 1>;

class PauliLabel {
 public:
  explicit PauliLabel(int index);
  static PauliLabel parse(std::string_view text);

  int index() const { return index_; }
  int first() const { return index_ / 4; }
  int second() const { return index_ % 4; }
  std::string str() const;
  bool is_identity() const { return index_ == 0; }

  static std::array<PauliLabel, 16> all();

 private:
  int index_;
};

// Single-qubit Pauli k in {I, X, Y, Z}.
const Mat2c& pauli1(int k);
// Two-qubit Pauli by lexicographic index.
const Mat4c& pauli(int index);

Mat4c kron(const Mat2c& a, const Mat2c& b);

class DensityMatrix {
 public:
  DensityMatrix();  // |dd><dd|

  // Validated construction: Hermitian, unit trace, PSD within `tol` (the
  // eigenvalue check uses 1e-10 slack regardless).
  static DensityMatrix from_matrix(const Mat4c& m, double tol = 1e-12);
  // Trusted construction for internal evolution; hermitises the input.
  static DensityMatrix unchecked(const Mat4c& m);
  static DensityMatrix from_pauli_vector(const Vec16& r);
  static DensityMatrix basis_state(int index);
  static DensityMatrix maximally_mixed();

  const Mat4c& matrix() const { return m_; }
  Vec16 pauli_vector() const;
  double population(int basis_index) const;
  double purity() const;
  double trace() const;
  double min_eigenvalue() const;
  // Empty string when every invariant holds within `tol`.
  std::string invariant_violation(double tol = 1e-12) const;

 private:
  explicit DensityMatrix(const Mat4c& m) : m_(m) {}
  Mat4c m_;
};

DensityMatrix dm_pure(const Vec4c& ket);

bool is_unitary(const Mat4c& u, double tol = 1e-12);
Mat16 ptm_of_unitary(const Mat4c& u);
// Same map without the unitarity check; callers guarantee the input.
Mat16 ptm_of_unitary_trusted(const Mat4c& u);
// Single-qubit PTM (4x4) of a 2x2 unitary.
Mat4 ptm_of_unitary_1q(const Mat2c& u);
// PTM of a product channel a (qubit 1) tensor b (qubit 2).
Mat16 kron_ptm(const Mat4& a, const Mat4& b);

Mat16 matrix_log_principal(const Mat16& m);
Mat16 matrix_exp(const Mat16& m);

DensityMatrix apply_channel(const Mat16& m, const DensityMatrix& rho);

// exp(-i * 2*pi * h * t) for Hermitian h given in Hz and t in seconds.
Mat4c evolve_unitary(const Mat4c& h_hz, double t);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// Single-qubit rotations, R_axis(theta) = exp(-i theta sigma / 2).
Mat2c rx(double theta);
Mat2c ry(double theta);
Mat2c rz(double theta);

// JSON encodings: complex matrices as row-major arrays of [re, im] pairs,
// real matrices as row-major arrays of numbers.
nlohmann::json complex_matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd complex_matrix_from_json(const nlohmann::json& j);
nlohmann::json real_matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd real_matrix_from_json(const nlohmann::json& j);

}  // namespace hotspin
