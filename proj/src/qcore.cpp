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

#include "hotspin/qcore.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>

#include "hotspin/errors.hpp"

namespace hotspin {

namespace {

constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};

struct Sparse4 {
  // Every two-qubit Pauli has exactly one nonzero per row.
  std::array<int, 4> col;
  std::array<cplx, 4> val;
};

const std::array<Mat2c, 4>& paulis1() {
  static const std::array<Mat2c, 4> p = [] {
    std::array<Mat2c, 4> out;
    const cplx i(0.0, 1.0);
    out[0] << 1, 0, 0, 1;
    out[1] << 0, 1, 1, 0;
    out[2] << 0, -i, i, 0;
    out[3] << 1, 0, 0, -1;
    return out;
  }();
  return p;
}

const std::array<Mat4c, 16>& paulis2() {
  static const std::array<Mat4c, 16> p = [] {
    std::array<Mat4c, 16> out;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) out[4 * a + b] = kron(paulis1()[a], paulis1()[b]);
    return out;
  }();
  return p;
}

const std::array<Sparse4, 16>& sparse_paulis() {
  static const std::array<Sparse4, 16> s = [] {
    std::array<Sparse4, 16> out;
    for (int k = 0; k < 16; ++k) {
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
          if (std::abs(paulis2()[k](r, c)) > 0.5) {
            out[k].col[r] = c;
            out[k].val[r] = paulis2()[k](r, c);
          }
        }
      }
    }
    return out;
  }();
  return s;
}

// Re Tr(P_k M) using the one-nonzero-per-row structure.
double trace_with_pauli(int k, const Mat4c& m) {
  const Sparse4& s = sparse_paulis()[k];
  cplx acc = 0.0;
  for (int r = 0; r < 4; ++r) acc += s.val[r] * m(s.col[r], r);
  return acc.real();
}

}  // namespace

PauliLabel::PauliLabel(int index) : index_(index) {
  if (index < 0 || index > 15) throw ValidationError("Pauli index out of range");
}

PauliLabel PauliLabel::parse(std::string_view text) {
  if (text.size() != 2) throw ValidationError("Pauli label must have two letters");
  int idx[2];
  for (int q = 0; q < 2; ++q) {
    const char* hit = std::find(kLetters, kLetters + 4, text[q]);
    if (hit == kLetters + 4) throw ValidationError("bad Pauli letter in label");
    idx[q] = static_cast<int>(hit - kLetters);
  }
  return PauliLabel(4 * idx[0] + idx[1]);
}

std::string PauliLabel::str() const {
  return std::string{kLetters[first()], kLetters[second()]};
}

std::array<PauliLabel, 16> PauliLabel::all() {
  return {PauliLabel(0),  PauliLabel(1),  PauliLabel(2),  PauliLabel(3),
          PauliLabel(4),  PauliLabel(5),  PauliLabel(6),  PauliLabel(7),
          PauliLabel(8),  PauliLabel(9),  PauliLabel(10), PauliLabel(11),
          PauliLabel(12), PauliLabel(13), PauliLabel(14), PauliLabel(15)};
}

const Mat2c& pauli1(int k) { return paulis1().at(k); }
const Mat4c& pauli(int index) { return paulis2().at(index); }

Mat4c kron(const Mat2c& a, const Mat2c& b) {
  Mat4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

DensityMatrix::DensityMatrix() : m_(Mat4c::Zero()) { m_(0, 0) = 1.0; }

DensityMatrix DensityMatrix::from_matrix(const Mat4c& m, double tol) {
  DensityMatrix d(m);
  const std::string err = d.invariant_violation(tol);
  if (err.empty()) return d;
  if (std::abs(d.trace() - 1.0) > tol) throw NormalizationError("invalid density matrix: " + err);
  throw ValidationError("invalid density matrix: " + err);
}

DensityMatrix DensityMatrix::unchecked(const Mat4c& m) {
  return DensityMatrix(0.5 * (m + m.adjoint()));
}

DensityMatrix DensityMatrix::from_pauli_vector(const Vec16& r) {
  Mat4c m = Mat4c::Zero();
  for (int k = 0; k < 16; ++k) {
    if (r[k] != 0.0) m += (r[k] / 4.0) * paulis2()[k];
  }
  return DensityMatrix(m);
}

DensityMatrix DensityMatrix::basis_state(int index) {
  Mat4c m = Mat4c::Zero();
  m(index, index) = 1.0;
  return DensityMatrix(m);
}

DensityMatrix DensityMatrix::maximally_mixed() {
  return DensityMatrix(Mat4c::Identity() / 4.0);
}

Vec16 DensityMatrix::pauli_vector() const {
  Vec16 r;
  for (int k = 0; k < 16; ++k) r[k] = trace_with_pauli(k, m_);
  return r;
}

double DensityMatrix::population(int basis_index) const {
  return m_(basis_index, basis_index).real();
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

double DensityMatrix::trace() const { return m_.trace().real(); }

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Mat4c> es(0.5 * (m_ + m_.adjoint()),
                                          Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::string DensityMatrix::invariant_violation(double tol) const {
  if (!m_.allFinite()) return "non-finite entries";
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol) return "not Hermitian";
  if (std::abs(m_.trace() - cplx(1.0, 0.0)) > tol) return "trace differs from 1";
  if (min_eigenvalue() < -1e-10) return "negative eigenvalue";
  return {};
}

DensityMatrix dm_pure(const Vec4c& ket) {
  if (!ket.allFinite() || std::abs(ket.norm() - 1.0) > 1e-12) {
    throw NormalizationError("ket is not normalised to 1e-12");
  }
  return DensityMatrix::unchecked(ket * ket.adjoint());
}

bool is_unitary(const Mat4c& u, double tol) {
  return u.allFinite() &&
         (u * u.adjoint() - Mat4c::Identity()).cwiseAbs().maxCoeff() <= tol;
}

Mat16 ptm_of_unitary(const Mat4c& u) {
  if (!is_unitary(u)) throw NotUnitaryError("matrix is not unitary to 1e-12");
  return ptm_of_unitary_trusted(u);
}

Mat16 ptm_of_unitary_trusted(const Mat4c& u) {
  Mat16 r;
  const Mat4c ud = u.adjoint();
  for (int j = 0; j < 16; ++j) {
    const Mat4c mj = u * paulis2()[j] * ud;
    for (int i = 0; i < 16; ++i) r(i, j) = 0.25 * trace_with_pauli(i, mj);
  }
  return r;
}

Mat4 ptm_of_unitary_1q(const Mat2c& u) {
  Mat4 r;
  const Mat2c ud = u.adjoint();
  for (int j = 0; j < 4; ++j) {
    const Mat2c mj = u * paulis1()[j] * ud;
    for (int i = 0; i < 4; ++i) r(i, j) = 0.5 * (paulis1()[i] * mj).trace().real();
  }
  return r;
}

Mat16 kron_ptm(const Mat4& a, const Mat4& b) {
  Mat16 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
  return out;
}

Mat16 matrix_log_principal(const Mat16& m) {
  Eigen::EigenSolver<Mat16> es(m, true);
  if (es.info() != Eigen::Success) {
    throw ConvergenceError("eigendecomposition failed in matrix log");
  }
  const auto lambda = es.eigenvalues();
  for (int k = 0; k < 16; ++k) {
    if (std::abs(lambda[k].imag()) <= 1e-6 && lambda[k].real() <= 1e-6) {
      throw BranchAmbiguityError(
          "eigenvalue on or within 1e-6 of the closed negative real axis");
    }
  }
  const Eigen::Matrix<cplx, 16, 16> v = es.eigenvectors();
  Eigen::PartialPivLU<Eigen::Matrix<cplx, 16, 16>> lu(v);
  const Eigen::Matrix<cplx, 16, 16> vinv = lu.inverse();
  const double cond = v.cwiseAbs().rowwise().sum().maxCoeff() *
                      vinv.cwiseAbs().rowwise().sum().maxCoeff();
  Mat16 out;
  if (std::isfinite(cond) && cond < 1e8) {
    Eigen::Matrix<cplx, 16, 1> logl;
    for (int k = 0; k < 16; ++k) logl[k] = std::log(lambda[k]);
    out = (v * logl.asDiagonal() * vinv).real();
  } else {
    // Nearly defective: Schur-Parlett evaluation.
    out = m.log();
  }
  const double err = (matrix_exp(out) - m).cwiseAbs().maxCoeff();
  if (!(err <= 1e-9)) {
    throw ConvergenceError("matrix log round trip exceeded 1e-9");
  }
  return out;
}

Mat16 matrix_exp(const Mat16& m) { return m.exp(); }

DensityMatrix apply_channel(const Mat16& m, const DensityMatrix& rho) {
  return DensityMatrix::from_pauli_vector(m * rho.pauli_vector());
}

Mat4c evolve_unitary(const Mat4c& h_hz, double t) {
  Eigen::SelfAdjointEigenSolver<Mat4c> es(0.5 * (h_hz + h_hz.adjoint()));
  const double w = -2.0 * M_PI * t;
  Vec4c phases;
  for (int k = 0; k < 4; ++k) phases[k] = std::polar(1.0, w * es.eigenvalues()[k]);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  const Mat4c d = a.matrix() - b.matrix();
  Eigen::SelfAdjointEigenSolver<Mat4c> es(0.5 * (d + d.adjoint()),
                                          Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Mat2c rx(double theta) {
  Mat2c u;
  const cplx c(std::cos(theta / 2), 0.0), s(0.0, -std::sin(theta / 2));
  u << c, s, s, c;
  return u;
}

Mat2c ry(double theta) {
  Mat2c u;
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  u << c, -s, s, c;
  return u;
}

Mat2c rz(double theta) {
  Mat2c u = Mat2c::Zero();
  u(0, 0) = std::polar(1.0, -theta / 2);
  u(1, 1) = std::polar(1.0, theta / 2);
  return u;
}

nlohmann::json complex_matrix_to_json(const Eigen::MatrixXcd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXcd complex_matrix_from_json(const nlohmann::json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[r].size()) != cols)
      throw ValidationError("ragged complex matrix");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = cplx(j[r][c].at(0).get<double>(), j[r][c].at(1).get<double>());
  }
  return m;
}

nlohmann::json real_matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd real_matrix_from_json(const nlohmann::json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[r].size()) != cols)
      throw ValidationError("ragged real matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

}  // namespace hotspin
