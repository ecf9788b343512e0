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

#ifndef TZPLC_BENCH_BENCH_H_
#define TZPLC_BENCH_BENCH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tzplc/common/cycle_report.h"
#include "tzplc/common/error.h"
#include "tzplc/runtime/config.h"
#include "tzplc/testbed/testbed.h"

namespace tzplc::bench {

enum class BenchErrc {
  kInsufficientCycles,
  kDegenerateFit,
  kIoError,
  kConfigError,
};

std::string_view module_name(BenchErrc);
std::string_view to_string(BenchErrc code);
using BenchError = CodedError<BenchErrc>;

inline constexpr std::uint64_t kMinCycles = 1000;
inline constexpr std::uint64_t kWarmupCycles = 10;

struct BenchStats {
  runtime::Mode mode = runtime::Mode::kEnhanced;
  std::size_t pairs = 1;
  std::uint64_t cycles = 0;
  double avg_ms = 0;
  double std_ms = 0;  // population standard deviation
  double max_ms = 0;

  bool operator==(const BenchStats&) const = default;
};

// Stats over the totals of `reports`. Errors: InsufficientCycles when empty.
BenchStats stats_from_reports(runtime::Mode mode, std::size_t pairs,
                              const std::vector<CycleReport>& reports);

struct Measurement {
  BenchStats stats;
  // Measured cycles only; the warm-up is dropped.
  std::vector<CycleReport> reports;
};

// Runs the loopback installation of `base` (mode, clock, latency, seed...)
// with `pairs` sensor/actuator pairs for kWarmupCycles + cycles cycles.
// Errors: InsufficientCycles (cycles < kMinCycles), ConfigError when the
// run aborts.
Measurement measure(const testbed::TestbedConfig& base, std::size_t pairs,
                    std::uint64_t cycles = kMinCycles);

struct Fit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
};

// Least squares over (x, y). Errors: DegenerateFit with fewer than three
// distinct x. A constant y fits perfectly (slope 0, r_squared 1).
Fit fit_line(const std::vector<std::pair<double, double>>& points);
// Over (pairs, avg_ms).
Fit fit_scaling(const std::vector<BenchStats>& stats);

struct Breakdown {
  std::uint64_t cycles = 0;
  // Per-phase means in microseconds, indexed by Phase.
  std::array<double, kPhaseCount> phase_us{};
  double total_us = 0;
  double residual_us = 0;
};

// Errors: InsufficientCycles when `reports` is empty.
Breakdown breakdown(const std::vector<CycleReport>& reports);
std::string render_breakdown(const std::vector<std::pair<runtime::Mode, Breakdown>>& rows);
nlohmann::json to_json(const Breakdown& b);

enum class Format { kJson, kCsv, kText, kSvg };

std::string_view to_string(Format f);
// Throws kConfigError.
Format format_from_string(std::string_view name);

// Deterministic for identical inputs. Text is a table with
// one row per mode, avg/std/max under each pair count.
std::string render(const std::vector<BenchStats>& stats, Format format);
// Parses the csv form back. Throws kConfigError on malformed input.
std::vector<BenchStats> parse_csv(std::string_view text);
nlohmann::json to_json(const BenchStats& s);

// Errors: IoError.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace tzplc::bench

#endif  // TZPLC_BENCH_BENCH_H_
