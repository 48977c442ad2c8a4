// Copyright 2026 The Seedsmith Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEEDSMITH_CORE_RNG_HPP
#define SEEDSMITH_CORE_RNG_HPP

#include <cassert>
#include <cstdint>
#include <random>
#include <vector>

namespace seedsmith {

// Deterministic random source. The mt19937_64 engine itself is pinned by the
// standard; the distribution helpers are hand-rolled because the standard
// library's distributions are not bit-stable across implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next() { return engine_(); }

  /// Uniform in [lo, hi], inclusive on both ends.
  int64_t range(int64_t lo, int64_t hi) {
    assert(lo <= hi);
    uint64_t span = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo) + 1;
    if (span == 0) return static_cast<int64_t>(next());  // full 64-bit span
    return lo + static_cast<int64_t>(next() % span);
  }

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    assert(!items.empty());
    return items[static_cast<size_t>(next() % items.size())];
  }

  size_t index(size_t size) {
    assert(size > 0);
    return static_cast<size_t>(next() % size);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace seedsmith

#endif  // SEEDSMITH_CORE_RNG_HPP
