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

#include "tzplc/logic/eval.h"

#include <cstdlib>
#include <stdexcept>

namespace tzplc::logic {

namespace {

void mark_reads(const Expr& e, std::vector<bool>& read) {
  if (e.kind == ExprKind::kVariable) read[e.variable] = true;
  if (e.lhs) mark_reads(*e.lhs, read);
  if (e.rhs) mark_reads(*e.rhs, read);
}

void mark_reads(const Block& block, std::vector<bool>& read) {
  for (const auto& s : block) {
    if (s.value) mark_reads(*s.value, read);
    for (const auto& b : s.branches) {
      mark_reads(*b.condition, read);
      mark_reads(b.body, read);
    }
    mark_reads(s.otherwise, read);
  }
}

std::uint32_t bank_size(const ImageShape& shape, const LocatedAddress& a) {
  bool in = a.direction == IoDirection::kInput;
  if (a.width == IoWidth::kBit) return in ? shape.input_bits : shape.output_bits;
  return in ? shape.input_words : shape.output_words;
}

[[noreturn]] void overflow(const Expr& e) {
  throw LogicError(LogicErrc::kArithmeticOverflow,
                   "INT overflow at line " + std::to_string(e.pos.line) + ", column " +
                       std::to_string(e.pos.column));
}

std::int32_t checked(std::int32_t v, const Expr& e) {
  if (v < -32768 || v > 32767) overflow(e);
  return v;
}

class Evaluator {
 public:
  explicit Evaluator(std::vector<std::int32_t>& vars) : vars_(vars) {}

  void run(const Block& block) {
    for (const auto& s : block) {
      if (s.kind == Stmt::Kind::kAssign) {
        vars_[s.target] = eval(*s.value);
        continue;
      }
      bool taken = false;
      for (const auto& b : s.branches) {
        if (eval(*b.condition) != 0) {
          run(b.body);
          taken = true;
          break;
        }
      }
      if (!taken) run(s.otherwise);
    }
  }

  std::int32_t eval(const Expr& e) {
    switch (e.kind) {
      case ExprKind::kLiteral:
        return e.value;
      case ExprKind::kVariable:
        return vars_[e.variable];
      case ExprKind::kNot:
        return eval(*e.lhs) == 0 ? 1 : 0;
      case ExprKind::kNegate:
        return checked(-eval(*e.lhs), e);
      case ExprKind::kAbs:
        return checked(std::abs(eval(*e.lhs)), e);
      case ExprKind::kBinary:
        break;
    }
    // AND/OR evaluate both sides: there are no side effects to skip.
    std::int32_t l = eval(*e.lhs);
    std::int32_t r = eval(*e.rhs);
    switch (e.op) {
      case BinaryOp::kOr:
        return (l | r) != 0;
      case BinaryOp::kAnd:
        return (l & r) != 0;
      case BinaryOp::kEq:
        return l == r;
      case BinaryOp::kNe:
        return l != r;
      case BinaryOp::kLt:
        return l < r;
      case BinaryOp::kLe:
        return l <= r;
      case BinaryOp::kGt:
        return l > r;
      case BinaryOp::kGe:
        return l >= r;
      case BinaryOp::kAdd:
        return checked(l + r, e);
      case BinaryOp::kSub:
        return checked(l - r, e);
      case BinaryOp::kMul:
        return checked(l * r, e);
    }
    return 0;
  }

 private:
  std::vector<std::int32_t>& vars_;
};

}  // namespace

bool BoundProgram::reads(const LocatedAddress& address) const {
  const auto& decls = program_->declarations;
  for (std::size_t i = 0; i < decls.size(); ++i) {
    if (decls[i].location == address) return read_vars_[i];
  }
  return false;
}

BoundProgram bind(LogicProgram program, const ImageShape& shape) {
  for (const auto& d : program.declarations) {
    if (!d.location) continue;
    if (d.location->index >= bank_size(shape, *d.location)) {
      throw LogicError(LogicErrc::kAddressOutOfRange,
                       d.location->to_string() + " ('" + d.name + "') outside bank of " +
                           std::to_string(bank_size(shape, *d.location)),
                       d.pos);
    }
  }
  BoundProgram bound;
  bound.read_vars_.assign(program.declarations.size(), false);
  mark_reads(program.body, bound.read_vars_);
  bound.program_ = std::make_shared<const LogicProgram>(std::move(program));
  bound.shape_ = shape;
  return bound;
}

BoundProgram compile(std::string_view source, const ImageShape& shape) {
  return bind(parse(source), shape);
}

ProgramState initial_state(const BoundProgram& bound) {
  ProgramState s;
  for (const auto& d : bound.program().declarations) s.values.push_back(d.initial);
  return s;
}

ProcessImage eval_cycle(const BoundProgram& bound, ProgramState& state,
                        const ProcessImage& image) {
  if (image.shape() != bound.shape()) {
    throw std::invalid_argument("process image does not match the bound shape");
  }
  const auto& decls = bound.program().declarations;
  std::vector<std::int32_t> vars = state.values;
  for (std::size_t i = 0; i < decls.size(); ++i) {
    const auto& loc = decls[i].location;
    if (!loc || loc->direction != IoDirection::kInput) continue;
    vars[i] = loc->width == IoWidth::kBit
                  ? static_cast<std::int32_t>(image.input_bits[loc->index])
                  : static_cast<std::int16_t>(image.input_words[loc->index]);
  }
  Evaluator(vars).run(bound.program().body);
  ProcessImage out = image;
  for (std::size_t i = 0; i < decls.size(); ++i) {
    const auto& loc = decls[i].location;
    if (!loc || loc->direction != IoDirection::kOutput) continue;
    if (loc->width == IoWidth::kBit) {
      out.output_bits[loc->index] = vars[i] != 0;
    } else {
      out.output_words[loc->index] = static_cast<std::uint16_t>(vars[i]);
    }
  }
  state.values = std::move(vars);
  return out;
}

ProcessImage eval_cycle(const BoundProgram& bound, const ProcessImage& image) {
  ProgramState state = initial_state(bound);
  return eval_cycle(bound, state, image);
}

}  // namespace tzplc::logic
