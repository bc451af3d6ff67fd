/* Copyright 2026 The qclandscape Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <cstdint>
#include <string_view>

namespace qcl {

// Counter-based generator: the i-th draw is a pure function of (key, i), so
// any substream can be reproduced without replaying its siblings. Outputs are
// bit-identical across compilers and standard libraries, which the
// <random> distributions do not guarantee.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  // Substream keyed by (master, id, purpose). Distinct tuples give
  // statistically independent streams.
  static CounterRng substream(std::uint64_t master, std::uint64_t id, std::string_view purpose);

  static std::uint64_t mix(std::uint64_t x);
  static std::uint64_t derive(std::uint64_t master, std::uint64_t id, std::string_view purpose);

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Standard normal via Box-Muller (cosine branch only).
  double normal();
  bool coin() { return (next_u64() >> 63) != 0; }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qcl
