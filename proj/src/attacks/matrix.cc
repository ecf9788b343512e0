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

#include <sstream>

#include "tzplc/attacks/attacks.h"

namespace tzplc::attacks {

using runtime::Mode;

const MatrixCell* Matrix::cell(Vector v, Mode m) const {
  for (const auto& c : cells) {
    if (c.vector == v && c.mode == m) return &c;
  }
  return nullptr;
}

std::vector<const MatrixCell*> Matrix::mismatches() const {
  std::vector<const MatrixCell*> out;
  for (const auto& c : cells) {
    if (!c.matches()) out.push_back(&c);
  }
  return out;
}

Matrix run_matrix(const std::vector<Mode>& modes, const std::vector<Vector>& vectors,
                  std::uint64_t seed) {
  Matrix m;
  m.modes = modes;
  m.vectors = vectors;
  for (Vector v : vectors) {
    for (Mode mode : modes) {
      AttackScenario s = make_attack(v, mode, seed);
      MatrixCell c;
      c.vector = v;
      c.mode = mode;
      c.expected = s.expected;
      c.outcome = run_attack(s);
      m.cells.push_back(std::move(c));
    }
  }
  return m;
}

void check_matrix(const Matrix& m) {
  auto bad = m.mismatches();
  if (bad.empty()) return;
  std::string what;
  for (const MatrixCell* c : bad) {
    if (!what.empty()) what += "; ";
    what += std::string(1, letter(c->vector)) + "/" + std::string(runtime::to_string(c->mode)) +
            ": expected " + std::string(to_string(c->expected)) + ", got " +
            std::string(to_string(c->outcome.verdict));
  }
  throw AttackError(AttackErrc::kMatrixMismatch, what);
}

nlohmann::json to_json(const AttackOutcome& o) {
  nlohmann::json evidence = nlohmann::json::array();
  for (const auto& e : o.evidence) evidence.push_back({{"kind", e.kind}, {"detail", e.detail}});
  return {{"attack", o.attack},
          {"mode", runtime::to_string(o.mode)},
          {"verdict", to_string(o.verdict)},
          {"evidence", evidence},
          {"evidence_hash", o.evidence_hash()}};
}

nlohmann::json to_json(const Matrix& m) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : m.cells) {
    nlohmann::json j = to_json(c.outcome);
    j["vector"] = to_string(c.vector);
    j["letter"] = std::string(1, letter(c.vector));
    j["expected"] = to_string(c.expected);
    j["matches"] = c.matches();
    cells.push_back(std::move(j));
  }
  nlohmann::json modes = nlohmann::json::array();
  for (Mode mode : m.modes) modes.push_back(runtime::to_string(mode));
  return {{"modes", modes}, {"cells", cells}, {"matches", m.mismatches().empty()}};
}

namespace {

std::string column_title(Mode m) {
  switch (m) {
    case Mode::kBaseline: return "Baseline PLC";
    case Mode::kMinimal: return "Minimal TEE-PLC";
    case Mode::kEnhanced: return "Enhanced TEE-PLC";
  }
  return "?";
}

std::string mark(Verdict v) {
  switch (v) {
    case Verdict::kBlocked: return "✓";
    case Verdict::kSucceeded: return "";
    case Verdict::kNotApplicable: return "(N/A)";
    case Verdict::kOutOfScope: return "Secure Boot";
  }
  return "?";
}

// Display width of UTF-8 text: counts code points.
std::size_t width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

std::string pad(const std::string& s, std::size_t w) {
  return s + std::string(w > width(s) ? w - width(s) : 0, ' ');
}

}  // namespace

std::string render_table(const Matrix& m) {
  std::vector<std::string> header = {"Attack Vector"};
  for (Mode mode : m.modes) header.push_back(column_title(mode));
  std::vector<std::vector<std::string>> rows;
  bool any_mismatch = false;
  for (Vector v : m.vectors) {
    std::vector<std::string> row = {std::string(title(v))};
    for (Mode mode : m.modes) {
      const MatrixCell* c = m.cell(v, mode);
      std::string text = c ? mark(c->outcome.verdict) : "-";
      if (c && !c->matches()) {
        text += text.empty() ? "!" : " !";
        any_mismatch = true;
      }
      row.push_back(text);
    }
    rows.push_back(std::move(row));
  }
  std::vector<std::size_t> widths(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) {
    widths[i] = width(header[i]);
    for (const auto& row : rows) widths[i] = std::max(widths[i], width(row[i]));
  }
  auto line = [&widths](const std::vector<std::string>& cells) {
    std::string out = "|";
    for (std::size_t i = 0; i < cells.size(); ++i) out += " " + pad(cells[i], widths[i]) + " |";
    return out + "\n";
  };
  std::string rule = "+";
  for (std::size_t w : widths) rule += std::string(w + 2, '-') + "+";
  rule += "\n";

  std::ostringstream out;
  out << rule << line(header) << rule;
  for (const auto& row : rows) out << line(row);
  out << rule;
  out << "✓ blocked; blank = not protected (the attack succeeded); (N/A) = nothing to "
         "attack in this design; Secure Boot = left to secure boot, not simulated\n";
  if (any_mismatch) out << "! differs from the expected verdict\n";
  return out.str();
}

}  // namespace tzplc::attacks
