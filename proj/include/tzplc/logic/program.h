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

#ifndef TZPLC_LOGIC_PROGRAM_H_
#define TZPLC_LOGIC_PROGRAM_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tzplc/common/error.h"

namespace tzplc::logic {

enum class LogicErrc {
  kSyntaxError,
  kTypeError,
  kDuplicateLocation,
  kAddressOutOfRange,
  kArithmeticOverflow,
};

constexpr std::string_view module_name(LogicErrc) { return "logic"; }
std::string_view to_string(LogicErrc code);

struct SourcePos {
  int line = 0;
  int column = 0;
};

class LogicError : public CodedError<LogicErrc> {
 public:
  LogicError(LogicErrc code, const std::string& what, std::optional<SourcePos> pos = {});

  // Set for parse-time errors.
  const std::optional<SourcePos>& pos() const noexcept { return pos_; }

 private:
  std::optional<SourcePos> pos_;
};

enum class ValueType { kBool, kInt };

std::string_view type_name(ValueType t);

enum class IoDirection { kInput, kOutput };
enum class IoWidth { kBit, kWord };

// %IX<byte>.<bit>, %QX<byte>.<bit>, %IW<n>, %QW<n>.
struct LocatedAddress {
  IoDirection direction = IoDirection::kInput;
  IoWidth width = IoWidth::kBit;
  // Flattened slot: byte * 8 + bit for bits, the word number for words.
  std::uint32_t index = 0;

  std::string to_string() const;
  bool operator==(const LocatedAddress&) const = default;
};

// Parses "%IX0.7" style addresses (case-insensitive). Returns nullopt on any
// malformed text.
std::optional<LocatedAddress> parse_address(std::string_view text);

struct Declaration {
  std::string name;
  ValueType type = ValueType::kBool;
  std::optional<LocatedAddress> location;
  std::int32_t initial = 0;
  bool constant = false;
  SourcePos pos;
};

enum class ExprKind { kLiteral, kVariable, kNot, kNegate, kAbs, kBinary };

enum class BinaryOp { kOr, kAnd, kEq, kNe, kLt, kLe, kGt, kGe, kAdd, kSub, kMul };

struct Expr {
  ExprKind kind = ExprKind::kLiteral;
  BinaryOp op = BinaryOp::kOr;
  ValueType type = ValueType::kBool;
  std::int32_t value = 0;   // literal
  std::size_t variable = 0; // index into declarations
  std::unique_ptr<Expr> lhs;
  std::unique_ptr<Expr> rhs;
  SourcePos pos;
};

struct Stmt;
using Block = std::vector<Stmt>;

struct Branch {
  std::unique_ptr<Expr> condition;
  Block body;
};

struct Stmt {
  enum class Kind { kAssign, kIf } kind = Kind::kAssign;
  std::size_t target = 0;
  std::unique_ptr<Expr> value;
  // IF / ELSIF arms in order, then the optional ELSE block.
  std::vector<Branch> branches;
  Block otherwise;
  SourcePos pos;
};

// Parsed and type-checked Structured Text program.
struct LogicProgram {
  std::string name;
  std::vector<Declaration> declarations;
  Block body;

  std::optional<std::size_t> find(std::string_view name) const;
};

// Errors: SyntaxError, TypeError, DuplicateLocation, all carrying the source
// position.
LogicProgram parse(std::string_view source);

}  // namespace tzplc::logic

#endif  // TZPLC_LOGIC_PROGRAM_H_
