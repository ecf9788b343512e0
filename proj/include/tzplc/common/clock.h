// Copyright 2026 The tzplc Authors
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

#ifndef TZPLC_COMMON_CLOCK_H_
#define TZPLC_COMMON_CLOCK_H_

#include <atomic>
#include <chrono>
#include <cstdint>

namespace tzplc {

using Duration = std::chrono::nanoseconds;

enum class ClockMode { kVirtual, kWall };

// Time source shared by the runtime, the world simulator and the bench.
//
// `charge` models a cost that the simulation injects (world switch, link
// latency, crypto). A virtual clock advances by exactly that amount; a wall
// clock sleeps for it so the cost shows up in real measurements.
class Clock {
 public:
  virtual ~Clock() = default;

  virtual ClockMode mode() const = 0;
  // Monotonic time since the clock was created.
  virtual Duration now() const = 0;
  virtual void sleep_for(Duration d) = 0;
  virtual void charge(Duration d) = 0;

  bool is_virtual() const { return mode() == ClockMode::kVirtual; }
};

// Deterministic clock: time moves only through charge()/sleep_for().
class VirtualClock final : public Clock {
 public:
  ClockMode mode() const override { return ClockMode::kVirtual; }
  Duration now() const override { return Duration(ticks_.load()); }
  void sleep_for(Duration d) override { advance(d); }
  void charge(Duration d) override { advance(d); }

 private:
  void advance(Duration d) {
    if (d.count() > 0) ticks_.fetch_add(d.count());
  }

  std::atomic<std::int64_t> ticks_{0};
};

class WallClock final : public Clock {
 public:
  WallClock() : origin_(std::chrono::steady_clock::now()) {}

  ClockMode mode() const override { return ClockMode::kWall; }
  Duration now() const override {
    return std::chrono::duration_cast<Duration>(
        std::chrono::steady_clock::now() - origin_);
  }
  void sleep_for(Duration d) override;
  void charge(Duration d) override { sleep_for(d); }

 private:
  std::chrono::steady_clock::time_point origin_;
};

}  // namespace tzplc

#endif  // TZPLC_COMMON_CLOCK_H_
