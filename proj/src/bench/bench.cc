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

#include "tzplc/bench/bench.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace tzplc::bench {

using runtime::Mode;

std::string_view module_name(BenchErrc) { return "bench"; }

std::string_view to_string(BenchErrc code) {
  switch (code) {
    case BenchErrc::kInsufficientCycles: return "InsufficientCycles";
    case BenchErrc::kDegenerateFit: return "DegenerateFit";
    case BenchErrc::kIoError: return "IoError";
    case BenchErrc::kConfigError: return "ConfigError";
  }
  return "BenchError";
}

namespace {

double to_ms(Duration d) { return static_cast<double>(d.count()) / 1e6; }
double to_us(Duration d) { return static_cast<double>(d.count()) / 1e3; }

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Shortest form that parses back to the same double.
std::string exact(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

BenchStats stats_from_reports(Mode mode, std::size_t pairs,
                              const std::vector<CycleReport>& reports) {
  if (reports.empty()) throw BenchError(BenchErrc::kInsufficientCycles, "no cycles");
  BenchStats s;
  s.mode = mode;
  s.pairs = pairs;
  s.cycles = reports.size();
  Duration sum{0};
  for (const auto& r : reports) {
    sum += r.total;
    s.max_ms = std::max(s.max_ms, to_ms(r.total));
  }
  s.avg_ms = to_ms(sum) / static_cast<double>(reports.size());
  double var = 0;
  for (const auto& r : reports) {
    double d = to_ms(r.total) - s.avg_ms;
    var += d * d;
  }
  s.std_ms = std::sqrt(var / static_cast<double>(reports.size()));
  // Rounding can put the mean of identical totals a hair above them.
  s.max_ms = std::max(s.max_ms, s.avg_ms);
  return s;
}

Measurement measure(const testbed::TestbedConfig& base, std::size_t pairs,
                    std::uint64_t cycles) {
  if (cycles < kMinCycles) {
    throw BenchError(BenchErrc::kInsufficientCycles,
                     std::to_string(cycles) + " cycles requested, at least " +
                         std::to_string(kMinCycles) + " needed");
  }
  testbed::TestbedConfig config = base;
  config.scenario = testbed::ScenarioKind::kLoopback;
  config.pairs = pairs;
  config.cycles = kWarmupCycles + cycles;
  testbed::Testbed tb(config);
  auto result = tb.run();
  if (result.error) {
    throw BenchError(BenchErrc::kConfigError, "bench run aborted: " + *result.error);
  }
  Measurement m;
  m.reports.assign(result.reports.begin() + static_cast<std::ptrdiff_t>(kWarmupCycles),
                   result.reports.end());
  m.stats = stats_from_reports(config.mode, pairs, m.reports);
  return m;
}

Fit fit_line(const std::vector<std::pair<double, double>>& points) {
  std::set<double> xs;
  for (const auto& p : points) xs.insert(p.first);
  if (xs.size() < 3) {
    throw BenchError(BenchErrc::kDegenerateFit,
                     std::to_string(xs.size()) + " distinct points, 3 needed");
  }
  double n = static_cast<double>(points.size());
  double mx = 0, my = 0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  Fit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (syy == 0) {
    f.slope = 0;
    f.intercept = my;
    f.r_squared = 1;
    return f;
  }
  double sse = 0;
  for (const auto& [x, y] : points) {
    double e = y - (f.slope * x + f.intercept);
    sse += e * e;
  }
  f.r_squared = 1 - sse / syy;
  return f;
}

Fit fit_scaling(const std::vector<BenchStats>& stats) {
  std::vector<std::pair<double, double>> points;
  for (const auto& s : stats) points.emplace_back(static_cast<double>(s.pairs), s.avg_ms);
  return fit_line(points);
}

Breakdown breakdown(const std::vector<CycleReport>& reports) {
  if (reports.empty()) throw BenchError(BenchErrc::kInsufficientCycles, "no cycles");
  Breakdown b;
  b.cycles = reports.size();
  // Sum exactly, divide once.
  PhaseTimes sums{};
  Duration total{0};
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < kPhaseCount; ++i) sums[i] += r.phases[i];
    total += r.total;
  }
  auto n = static_cast<Duration::rep>(reports.size());
  Duration phase_total{0};
  for (std::size_t i = 0; i < kPhaseCount; ++i) {
    b.phase_us[i] = to_us(sums[i]) / static_cast<double>(n);
    phase_total += sums[i];
  }
  b.total_us = to_us(total) / static_cast<double>(n);
  b.residual_us = to_us(total - phase_total) / static_cast<double>(n);
  return b;
}

nlohmann::json to_json(const Breakdown& b) {
  nlohmann::json phases = nlohmann::json::object();
  for (std::size_t i = 0; i < kPhaseCount; ++i) {
    phases[std::string(phase_name(static_cast<Phase>(i)))] = b.phase_us[i];
  }
  return {{"cycles", b.cycles},
          {"phases_us", phases},
          {"total_us", b.total_us},
          {"residual_us", b.residual_us}};
}

std::string render_breakdown(const std::vector<std::pair<Mode, Breakdown>>& rows) {
  std::ostringstream out;
  out << "Latency breakdown (us, mean per cycle)\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-18s", "phase");
  out << line;
  for (const auto& [mode, b] : rows) {
    std::snprintf(line, sizeof line, "%14s", std::string(runtime::to_string(mode)).c_str());
    out << line;
  }
  out << "\n";
  auto row = [&](const std::string& name, auto value) {
    std::snprintf(line, sizeof line, "%-18s", name.c_str());
    out << line;
    for (const auto& [mode, b] : rows) {
      std::snprintf(line, sizeof line, "%14.3f", value(b));
      out << line;
    }
    out << "\n";
  };
  for (std::size_t i = 0; i < kPhaseCount; ++i) {
    row(std::string(phase_name(static_cast<Phase>(i))),
        [i](const Breakdown& b) { return b.phase_us[i]; });
  }
  row("residual", [](const Breakdown& b) { return b.residual_us; });
  row("total", [](const Breakdown& b) { return b.total_us; });
  out << "world_switch and logic_exec defaults follow measured figures; the other "
         "phase costs are configured values.\n";
  return out.str();
}

std::string_view to_string(Format f) {
  switch (f) {
    case Format::kJson: return "json";
    case Format::kCsv: return "csv";
    case Format::kText: return "text";
    case Format::kSvg: return "svg";
  }
  return "?";
}

Format format_from_string(std::string_view name) {
  for (Format f : {Format::kJson, Format::kCsv, Format::kText, Format::kSvg}) {
    if (name == to_string(f)) return f;
  }
  throw BenchError(BenchErrc::kConfigError, "unknown format '" + std::string(name) + "'");
}

nlohmann::json to_json(const BenchStats& s) {
  return {{"mode", runtime::to_string(s.mode)}, {"pairs", s.pairs}, {"cycles", s.cycles},
          {"avg_ms", s.avg_ms},                 {"std_ms", s.std_ms}, {"max_ms", s.max_ms}};
}

namespace {

std::string render_csv(const std::vector<BenchStats>& stats) {
  std::string out = "mode,pairs,avg_ms,std_ms,max_ms\n";
  for (const auto& s : stats) {
    out += std::string(runtime::to_string(s.mode)) + "," + std::to_string(s.pairs) + "," +
           exact(s.avg_ms) + "," + exact(s.std_ms) + "," + exact(s.max_ms) + "\n";
  }
  return out;
}

std::vector<Mode> modes_in_order(const std::vector<BenchStats>& stats) {
  std::vector<Mode> modes;
  for (const auto& s : stats) {
    if (std::find(modes.begin(), modes.end(), s.mode) == modes.end()) modes.push_back(s.mode);
  }
  return modes;
}

std::vector<std::size_t> pairs_in_order(const std::vector<BenchStats>& stats) {
  std::set<std::size_t> pairs;
  for (const auto& s : stats) pairs.insert(s.pairs);
  return {pairs.begin(), pairs.end()};
}

const BenchStats* find(const std::vector<BenchStats>& stats, Mode m, std::size_t pairs) {
  for (const auto& s : stats) {
    if (s.mode == m && s.pairs == pairs) return &s;
  }
  return nullptr;
}

std::string mode_title(Mode m) {
  switch (m) {
    case Mode::kBaseline: return "Baseline PLC";
    case Mode::kMinimal: return "Minimal TEE-PLC";
    case Mode::kEnhanced: return "Enhanced TEE-PLC";
  }
  return "?";
}

std::string render_text(const std::vector<BenchStats>& stats) {
  auto modes = modes_in_order(stats);
  auto pairs = pairs_in_order(stats);
  constexpr int kCell = 8;
  std::string title_col(18, ' ');
  std::ostringstream out;
  out << "Execution Time (ms)\n";
  out << title_col;
  for (std::size_t p : pairs) {
    std::string h = std::to_string(p) + (p == 1 ? " pair" : " pairs");
    std::string cell = " | " + h;
    cell.resize(3 + 3 * kCell, ' ');
    out << cell;
  }
  out << "\n" << std::string(18, ' ');
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, " | %-*s%-*s%-*s", kCell, "avg", kCell, "std", kCell, "max");
    out << buf;
  }
  out << "\n";
  for (Mode m : modes) {
    std::string name = mode_title(m);
    name.resize(18, ' ');
    out << name;
    for (std::size_t p : pairs) {
      const BenchStats* s = find(stats, m, p);
      char buf[64];
      if (s == nullptr) {
        std::snprintf(buf, sizeof buf, " | %-*s%-*s%-*s", kCell, "-", kCell, "-", kCell, "-");
      } else {
        std::snprintf(buf, sizeof buf, " | %-*s%-*s%-*s", kCell, fixed(s->avg_ms, 3).c_str(),
                      kCell, fixed(s->std_ms, 3).c_str(), kCell, fixed(s->max_ms, 3).c_str());
      }
      out << buf;
    }
    out << "\n";
  }
  return out.str();
}

std::string render_svg(const std::vector<BenchStats>& stats) {
  auto modes = modes_in_order(stats);
  auto pairs = pairs_in_order(stats);
  constexpr double kW = 640, kH = 400, kLeft = 60, kRight = 160, kTop = 30, kBottom = 50;
  double max_x = pairs.empty() ? 1 : static_cast<double>(pairs.back());
  double max_y = 0;
  for (const auto& s : stats) max_y = std::max(max_y, s.avg_ms);
  max_y = max_y <= 0 ? 1 : max_y * 1.1;
  auto px = [&](double x) { return kLeft + (kW - kLeft - kRight) * x / max_x; };
  auto py = [&](double y) { return kH - kBottom - (kH - kTop - kBottom) * y / max_y; };
  static const char* kColors[] = {"#1b9e77", "#d95f02", "#7570b3"};

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << py(0) << "\" x2=\"" << px(max_x) << "\" y2=\""
      << py(0) << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << py(0) << "\" x2=\"" << kLeft << "\" y2=\""
      << kTop << "\" stroke=\"black\"/>\n";
  for (std::size_t p : pairs) {
    out << "<text x=\"" << px(static_cast<double>(p)) << "\" y=\"" << py(0) + 18
        << "\" text-anchor=\"middle\">" << p << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    double y = max_y * i / 4;
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">"
        << fixed(y, 1) << "</text>\n";
  }
  out << "<text x=\"" << px(max_x / 2) << "\" y=\"" << kH - 12
      << "\" text-anchor=\"middle\">sensor/actuator pairs</text>\n";
  out << "<text x=\"16\" y=\"" << (kTop + kH - kBottom) / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << (kTop + kH - kBottom) / 2
      << ")\">avg scan cycle (ms)</text>\n";
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const char* color = kColors[i % 3];
    std::string path;
    for (std::size_t p : pairs) {
      const BenchStats* s = find(stats, modes[i], p);
      if (s == nullptr) continue;
      path += fixed(px(static_cast<double>(p)), 2) + "," + fixed(py(s->avg_ms), 2) + " ";
    }
    out << "<polyline class=\"series\" data-mode=\"" << runtime::to_string(modes[i])
        << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"" << path
        << "\"/>\n";
    double ly = kTop + 20.0 * static_cast<double>(i);
    out << "<rect x=\"" << kW - kRight + 20 << "\" y=\"" << ly - 9 << "\" width=\"12\" "
        << "height=\"12\" fill=\"" << color << "\"/>\n";
    out << "<text x=\"" << kW - kRight + 38 << "\" y=\"" << ly + 2 << "\">"
        << mode_title(modes[i]) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace

std::string render(const std::vector<BenchStats>& stats, Format format) {
  switch (format) {
    case Format::kJson: {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& s : stats) j.push_back(to_json(s));
      return j.dump(2) + "\n";
    }
    case Format::kCsv: return render_csv(stats);
    case Format::kText: return render_text(stats);
    case Format::kSvg: return render_svg(stats);
  }
  return {};
}

std::vector<BenchStats> parse_csv(std::string_view text) {
  std::vector<BenchStats> out;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "mode,pairs,avg_ms,std_ms,max_ms") {
    throw BenchError(BenchErrc::kConfigError, "missing csv header");
  }
  auto number = [](std::string_view field, auto& value) {
    auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
      throw BenchError(BenchErrc::kConfigError, "bad csv number '" + std::string(field) + "'");
    }
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (fields.size() != 5) throw BenchError(BenchErrc::kConfigError, "bad csv row: " + line);
    BenchStats s;
    try {
      s.mode = runtime::mode_from_string(fields[0]);
    } catch (const Error& e) {
      throw BenchError(BenchErrc::kConfigError, e.what());
    }
    number(fields[1], s.pairs);
    number(fields[2], s.avg_ms);
    number(fields[3], s.std_ms);
    number(fields[4], s.max_ms);
    out.push_back(s);
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw BenchError(BenchErrc::kIoError, "cannot open " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw BenchError(BenchErrc::kIoError, "cannot write " + path.string());
}

}  // namespace tzplc::bench
