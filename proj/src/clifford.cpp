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


#include "hotspin/clifford.hpp"

#include <map>
#include <mutex>
#include <queue>
#include <regex>
#include <tuple>

#include "hotspin/device.hpp"
#include "hotspin/errors.hpp"

namespace hotspin {

namespace {

using Perm = std::vector<std::int8_t>;
using Cost = std::tuple<int, int, int>;  // (DCZ, physical 1Q, virtual Z)

struct Generator {
  std::string name;
  Perm perm;
  Cost cost;
};

Eigen::MatrixXd restrict_1q(const Mat16& ptm) {
  Eigen::MatrixXd out(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = ptm(4 * i, 4 * j);
  return out;
}

Perm perm_of(const Eigen::MatrixXd& ptm) {
  const int d = static_cast<int>(ptm.rows());
  Perm perm(d - 1, 0);
  for (int j = 1; j < d; ++j) {
    int hits = 0;
    for (int i = 1; i < d; ++i) {
      const double v = ptm(i, j);
      if (std::abs(std::abs(v) - 1.0) < 1e-9) {
        perm[j - 1] = static_cast<std::int8_t>(v > 0 ? i : -i);
        ++hits;
      } else if (std::abs(v) > 1e-9) {
        return {};
      }
    }
    if (hits != 1) return {};
  }
  return perm;
}

// g applied after a.
Perm then(const Perm& g, const Perm& a) {
  Perm out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    const int s = a[j] > 0 ? 1 : -1;
    const int img = g[std::abs(a[j]) - 1];
    out[j] = static_cast<std::int8_t>(s * img);
  }
  return out;
}

Eigen::MatrixXd ptm_of_perm(const Perm& perm) {
  const int d = static_cast<int>(perm.size()) + 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  m(0, 0) = 1.0;
  for (int j = 1; j < d; ++j) {
    const int v = perm[j - 1];
    m(std::abs(v), j) = v > 0 ? 1.0 : -1.0;
  }
  return m;
}

std::string key_of(const Perm& p) { return std::string(p.begin(), p.end()); }

Cost operator+(const Cost& a, const Cost& b) {
  return {std::get<0>(a) + std::get<0>(b), std::get<1>(a) + std::get<1>(b),
          std::get<2>(a) + std::get<2>(b)};
}

}  // namespace

Mat16 ideal_gate_ptm(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, Mat16> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(name);
  if (it != cache.end()) return it->second;
  const Mat16 ptm = ptm_of_unitary_trusted(gate_target_unitary(name));
  cache.emplace(name, ptm);
  return ptm;
}

std::string rename_qubit(const std::string& gate, int q) {
  if (q != 1 && q != 2) throw ValidationError("qubit must be 1 or 2");
  if (q == 1) return gate;
  static const std::regex one(R"(^([XZ])1\()");
  return std::regex_replace(gate, one, "$012(");
}

CliffordGroup::CliffordGroup(int n_qubits) : n_qubits_(n_qubits) {
  const int dim = n_qubits == 1 ? 4 : 16;
  std::vector<Generator> gens;
  const std::vector<int> qubits = n_qubits == 1 ? std::vector<int>{1}
                                                : std::vector<int>{1, 2};
  for (int q : qubits) {
    for (const char* a : {"pi/2", "-pi/2", "pi"}) {
      for (char axis : {'X', 'Z'}) {
        std::string name = std::string(1, axis) + std::to_string(q) + "(" + a + ")";
        const Mat16 full = ideal_gate_ptm(name);
        Eigen::MatrixXd ptm = n_qubits == 1 ? restrict_1q(full) : Eigen::MatrixXd(full);
        const Cost c = axis == 'X' ? Cost{0, 1, 0} : Cost{0, 0, 1};
        gens.push_back({name, perm_of(ptm), c});
      }
    }
  }
  if (n_qubits == 2) gens.push_back({"DCZ", perm_of(ideal_gate_ptm("DCZ")), {1, 0, 0}});

  // Dijkstra from the identity; discovery order fixes element indices.
  Perm id(dim - 1);
  for (int j = 1; j < dim; ++j) id[j - 1] = static_cast<std::int8_t>(j);
  std::vector<Perm> nodes{id};
  std::vector<Cost> best{{0, 0, 0}};
  std::vector<int> parent{-1}, via{-1};
  std::vector<bool> done{false};
  std::unordered_map<std::string, int> seen{{key_of(id), 0}};
  using Item = std::pair<Cost, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.push({{0, 0, 0}, 0});
  while (!pq.empty()) {
    auto [c, u] = pq.top();
    pq.pop();
    if (done[u] || c != best[u]) continue;
    done[u] = true;
    for (int g = 0; g < static_cast<int>(gens.size()); ++g) {
      Perm next = then(gens[g].perm, nodes[u]);
      const Cost nc = c + gens[g].cost;
      auto [it, fresh] = seen.emplace(key_of(next), static_cast<int>(nodes.size()));
      if (fresh) {
        nodes.push_back(std::move(next));
        best.push_back(nc);
        parent.push_back(u);
        via.push_back(g);
        done.push_back(false);
        pq.push({nc, it->second});
      } else if (nc < best[it->second]) {
        best[it->second] = nc;
        parent[it->second] = u;
        via[it->second] = g;
        pq.push({nc, it->second});
      }
    }
  }

  const std::size_t expected = n_qubits == 1 ? 24 : 11520;
  if (nodes.size() != expected)
    throw CompilationError("Clifford group has " + std::to_string(nodes.size()) +
                           " elements, expected " + std::to_string(expected));

  elements_.resize(nodes.size());
  perms_ = nodes;
  index_ = std::move(seen);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    CliffordElement& e = elements_[k];
    e.index = static_cast<int>(k);
    e.ptm = ptm_of_perm(nodes[k]);
    for (int u = static_cast<int>(k); parent[u] >= 0; u = parent[u])
      e.gates.insert(e.gates.begin(), gens[via[u]].name);
    e.n_two_qubit = std::get<0>(best[k]);
    e.n_physical_1q = std::get<1>(best[k]);
    // A purely virtual single-qubit element still occupies one slot.
    if (n_qubits == 1 && e.n_physical_1q == 0) {
      e.gates.insert(e.gates.begin(), "I");
      e.n_physical_1q = 1;
    }
    Mat16 composed = Mat16::Identity();
    for (const auto& g : e.gates) composed = ideal_gate_ptm(g) * composed;
    const Eigen::MatrixXd c = n_qubits == 1 ? restrict_1q(composed) : Eigen::MatrixXd(composed);
    if ((c - e.ptm).cwiseAbs().maxCoeff() > 1e-10)
      throw CompilationError("decomposition mismatch for Clifford " + std::to_string(k));
  }

  inverse_.assign(nodes.size(), -1);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    Perm inv(dim - 1);
    for (int j = 1; j < dim; ++j) {
      const int v = nodes[k][j - 1];
      inv[std::abs(v) - 1] = static_cast<std::int8_t>(v > 0 ? j : -j);
    }
    inverse_[k] = lookup(inv);
    if (inverse_[k] < 0) throw CompilationError("missing inverse in Clifford group");
  }
}

const CliffordGroup& CliffordGroup::one_qubit() {
  static const CliffordGroup g(1);
  return g;
}

const CliffordGroup& CliffordGroup::two_qubit() {
  static const CliffordGroup g(2);
  return g;
}

int CliffordGroup::lookup(const std::vector<std::int8_t>& perm) const {
  auto it = index_.find(key_of(perm));
  return it == index_.end() ? -1 : it->second;
}

int CliffordGroup::find(const Eigen::MatrixXd& ptm) const {
  const int dim = n_qubits_ == 1 ? 4 : 16;
  if (ptm.rows() != dim || ptm.cols() != dim) return -1;
  if (std::abs(ptm(0, 0) - 1.0) > 1e-9) return -1;
  for (int k = 1; k < dim; ++k)
    if (std::abs(ptm(0, k)) > 1e-9 || std::abs(ptm(k, 0)) > 1e-9) return -1;
  const Perm p = perm_of(ptm);
  return p.empty() ? -1 : lookup(p);
}

int CliffordGroup::compose(int first, int second) const {
  return lookup(then(perms_.at(second), perms_.at(first)));
}

int CliffordGroup::sample(Stream& rng) const {
  std::uniform_int_distribution<int> pick(0, size() - 1);
  return pick(rng);
}

double CliffordGroup::avg_physical_1q() const {
  double s = 0.0;
  for (const auto& e : elements_) s += e.n_physical_1q;
  return s / size();
}

double CliffordGroup::avg_two_qubit() const {
  double s = 0.0;
  for (const auto& e : elements_) s += e.n_two_qubit;
  return s / size();
}

}  // namespace hotspin
