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

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "hotspin/qcore.hpp"
#include "hotspin/rng.hpp"

namespace hotspin {

struct CliffordElement {
  int index = 0;
  Eigen::MatrixXd ptm;             // 4x4 (one qubit) or 16x16 (two qubits)
  std::vector<std::string> gates;  // time order
  int n_physical_1q = 0;           // X rotations and idles; Z is virtual
  int n_two_qubit = 0;
};

// Exhaustive Clifford group with minimal-cost decompositions. Cost is
// lexicographic in (DCZ count, physical single-qubit count, virtual Z).
// Built once; the singletons are immutable and safe to share.
class CliffordGroup {
 public:
  static const CliffordGroup& one_qubit();
  static const CliffordGroup& two_qubit();

  int n_qubits() const { return n_qubits_; }
  int size() const { return static_cast<int>(elements_.size()); }
  const CliffordElement& at(int i) const { return elements_.at(i); }

  // -1 when `ptm` is not (within 1e-9) a group element.
  int find(const Eigen::MatrixXd& ptm) const;
  // Element for "first, then second".
  int compose(int first, int second) const;
  int inverse(int i) const { return inverse_.at(i); }
  int identity() const { return identity_; }
  int sample(Stream& rng) const;

  double avg_physical_1q() const;
  double avg_two_qubit() const;

 private:
  explicit CliffordGroup(int n_qubits);
  int lookup(const std::vector<std::int8_t>& perm) const;

  int n_qubits_;
  int identity_ = 0;
  std::vector<CliffordElement> elements_;
  std::vector<std::vector<std::int8_t>> perms_;  // signed image of each Pauli
  std::vector<int> inverse_;
  std::unordered_map<std::string, int> index_;
};

// Ideal PTM of a named gate in the two-qubit Pauli basis.
Mat16 ideal_gate_ptm(const std::string& name);

// Single-qubit gate names are written for qubit 1; map them onto `q`.
std::string rename_qubit(const std::string& gate, int q);

}  // namespace hotspin
