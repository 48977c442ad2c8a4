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

#ifndef SEEDSMITH_CORE_CLOCK_HPP
#define SEEDSMITH_CORE_CLOCK_HPP

#include <chrono>
#include <cstdint>

namespace seedsmith {

// Campaign budgets are wall-clock in production but must be reproducible in
// tests and snapshots, so time flows through this interface. The simulated
// variant is advanced explicitly by providers (a fixed cost per call, or a
// recorded latency during cassette replay), which makes an entire campaign
// timeline a pure function of its inputs.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual int64_t now_ms() = 0;
};

class RealClock final : public Clock {
 public:
  int64_t now_ms() override {
    using namespace std::chrono;
    return duration_cast<milliseconds>(steady_clock::now().time_since_epoch()).count();
  }
};

class SimClock final : public Clock {
 public:
  explicit SimClock(int64_t start_ms = 0) : now_(start_ms) {}
  int64_t now_ms() override { return now_; }
  void advance_ms(int64_t delta) { now_ += delta; }

 private:
  int64_t now_;
};

}  // namespace seedsmith

#endif  // SEEDSMITH_CORE_CLOCK_HPP
