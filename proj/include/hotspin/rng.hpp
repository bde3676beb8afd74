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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace hotspin {

// Stateless 64-bit mixer (splitmix64 finaliser).
std::uint64_t mix64(std::uint64_t x);

// Derives a child key from a parent key and a counter.
std::uint64_t derive_key(std::uint64_t parent, std::uint64_t counter);

// A random stream identified by (root seed, path of counters). Streams with
// distinct paths are statistically independent, so shot k of an experiment
// draws the same numbers no matter which thread runs it.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t seed);

  // Child stream for counter `id`; does not advance this stream.
  Stream child(std::uint64_t id) const;

  std::uint64_t key() const { return key_; }

  result_type operator()() { return engine_(); }
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }

  double uniform();
  double normal(double mean = 0.0, double sigma = 1.0);
  double exponential(double mean);
  bool bernoulli(double p);
  int binomial(int n, double p);

 private:
  std::uint64_t key_;
  std::mt19937_64 engine_;
};

// Worker count used by parallel_for; 0 means hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(i) for i in [0, n). Each index runs exactly once; results must be
// written to per-index slots so reductions stay in a fixed order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hotspin
