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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>

#include "tzplc/logic/program.h"

namespace tzplc::logic {

std::string_view to_string(LogicErrc code) {
  switch (code) {
    case LogicErrc::kSyntaxError:
      return "SyntaxError";
    case LogicErrc::kTypeError:
      return "TypeError";
    case LogicErrc::kDuplicateLocation:
      return "DuplicateLocation";
    case LogicErrc::kAddressOutOfRange:
      return "AddressOutOfRange";
    case LogicErrc::kArithmeticOverflow:
      return "ArithmeticOverflow";
  }
  return "LogicError";
}

namespace {

std::string with_pos(const std::string& what, const std::optional<SourcePos>& pos) {
  if (!pos) return what;
  return "line " + std::to_string(pos->line) + ", column " + std::to_string(pos->column) +
         ": " + what;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

LogicError::LogicError(LogicErrc code, const std::string& what,
                       std::optional<SourcePos> pos)
    : CodedError(code, with_pos(what, pos)), pos_(pos) {}

std::string_view type_name(ValueType t) { return t == ValueType::kBool ? "BOOL" : "INT"; }

std::string LocatedAddress::to_string() const {
  std::string out = direction == IoDirection::kInput ? "%I" : "%Q";
  if (width == IoWidth::kBit) {
    return out + "X" + std::to_string(index / 8) + "." + std::to_string(index % 8);
  }
  return out + "W" + std::to_string(index);
}

std::optional<LocatedAddress> parse_address(std::string_view text) {
  std::string s = upper(text);
  if (s.size() < 4 || s[0] != '%') return std::nullopt;
  LocatedAddress a;
  if (s[1] == 'I') {
    a.direction = IoDirection::kInput;
  } else if (s[1] == 'Q') {
    a.direction = IoDirection::kOutput;
  } else {
    return std::nullopt;
  }
  auto number = [](std::string_view digits, std::uint32_t limit) -> std::optional<std::uint32_t> {
    std::uint32_t v = 0;
    if (digits.empty()) return std::nullopt;
    auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || end != digits.data() + digits.size() || v > limit) {
      return std::nullopt;
    }
    return v;
  };
  std::string_view rest = std::string_view(s).substr(3);
  if (s[2] == 'X') {
    auto dot = rest.find('.');
    if (dot == std::string_view::npos) return std::nullopt;
    auto byte = number(rest.substr(0, dot), 8191);
    auto bit = number(rest.substr(dot + 1), 7);
    if (!byte || !bit) return std::nullopt;
    a.width = IoWidth::kBit;
    a.index = *byte * 8 + *bit;
    return a;
  }
  if (s[2] == 'W') {
    auto word = number(rest, 65535);
    if (!word) return std::nullopt;
    a.width = IoWidth::kWord;
    a.index = *word;
    return a;
  }
  return std::nullopt;
}

std::optional<std::size_t> LogicProgram::find(std::string_view name) const {
  std::string key = upper(name);
  for (std::size_t i = 0; i < declarations.size(); ++i) {
    if (upper(declarations[i].name) == key) return i;
  }
  return std::nullopt;
}

namespace {

enum class Tok {
  kIdent,
  kInt,
  kAddress,
  kAssign,  // :=
  kColon,
  kSemi,
  kComma,
  kLParen,
  kRParen,
  kEq,
  kNe,
  kLt,
  kLe,
  kGt,
  kGe,
  kPlus,
  kMinus,
  kStar,
  kAmp,
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;  // identifiers upper-cased; original kept in `raw`
  std::string raw;
  SourcePos pos;
};

[[noreturn]] void syntax(const std::string& what, SourcePos pos) {
  throw LogicError(LogicErrc::kSyntaxError, what, pos);
}

[[noreturn]] void type_error(const std::string& what, SourcePos pos) {
  throw LogicError(LogicErrc::kTypeError, what, pos);
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  int col = 1;
  auto advance = [&](std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    SourcePos pos{line, col};
    if (c == '(' && i + 1 < src.size() && src[i + 1] == '*') {
      advance(2);
      while (i < src.size() && !(src[i] == '*' && i + 1 < src.size() && src[i + 1] == ')')) {
        advance();
      }
      if (i >= src.size()) syntax("unterminated comment", pos);
      advance(2);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        advance();
      }
      std::string raw(src.substr(start, i - start));
      out.push_back({Tok::kIdent, upper(raw), raw, pos});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      while (i < src.size() &&
             (std::isdigit(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        if (src[i] != '_') digits.push_back(src[i]);
        advance();
      }
      if (i < src.size() && (std::isalpha(static_cast<unsigned char>(src[i])))) {
        syntax("malformed number", pos);
      }
      out.push_back({Tok::kInt, digits, digits, pos});
      continue;
    }
    if (c == '%') {
      std::size_t start = i;
      advance();
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '.')) {
        advance();
      }
      std::string raw(src.substr(start, i - start));
      out.push_back({Tok::kAddress, upper(raw), raw, pos});
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < src.size() && src[i + 1] == b;
    };
    Tok kind;
    std::size_t len = 1;
    if (two(':', '=')) {
      kind = Tok::kAssign;
      len = 2;
    } else if (two('<', '>')) {
      kind = Tok::kNe;
      len = 2;
    } else if (two('<', '=')) {
      kind = Tok::kLe;
      len = 2;
    } else if (two('>', '=')) {
      kind = Tok::kGe;
      len = 2;
    } else {
      switch (c) {
        case ':': kind = Tok::kColon; break;
        case ';': kind = Tok::kSemi; break;
        case ',': kind = Tok::kComma; break;
        case '(': kind = Tok::kLParen; break;
        case ')': kind = Tok::kRParen; break;
        case '=': kind = Tok::kEq; break;
        case '<': kind = Tok::kLt; break;
        case '>': kind = Tok::kGt; break;
        case '+': kind = Tok::kPlus; break;
        case '-': kind = Tok::kMinus; break;
        case '*': kind = Tok::kStar; break;
        case '&': kind = Tok::kAmp; break;
        default:
          syntax(std::string("unexpected character '") + c + "'", pos);
      }
    }
    std::string text(src.substr(i, len));
    out.push_back({kind, text, text, pos});
    advance(len);
  }
  out.push_back({Tok::kEnd, "", "", {line, col}});
  return out;
}

const char* const kReserved[] = {
    "PROGRAM", "END_PROGRAM", "VAR", "END_VAR", "CONSTANT", "AT", "BOOL", "INT",
    "IF", "THEN", "ELSIF", "ELSE", "END_IF", "AND", "OR", "NOT", "ABS", "TRUE", "FALSE",
};

bool reserved(const std::string& word) {
  return std::find(std::begin(kReserved), std::end(kReserved), word) != std::end(kReserved);
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  LogicProgram program() {
    LogicProgram prog;
    bool wrapped = false;
    if (keyword("PROGRAM")) {
      wrapped = true;
      prog.name = expect_name("program name");
    }
    while (peek_keyword("VAR")) declarations(prog);
    prog_ = &prog;
    prog.body = block({"END_PROGRAM"});
    if (wrapped) {
      if (!keyword("END_PROGRAM")) syntax("expected END_PROGRAM", cur().pos);
    }
    if (cur().kind != Tok::kEnd) syntax("unexpected '" + cur().raw + "'", cur().pos);
    return prog;
  }

 private:
  const Token& cur() const { return toks_[at_]; }
  const Token& next() { return toks_[at_++]; }

  bool peek_keyword(const char* kw) const {
    return cur().kind == Tok::kIdent && cur().text == kw;
  }
  bool keyword(const char* kw) {
    if (!peek_keyword(kw)) return false;
    ++at_;
    return true;
  }
  void expect_keyword(const char* kw) {
    if (!keyword(kw)) syntax(std::string("expected ") + kw, cur().pos);
  }
  bool accept(Tok kind) {
    if (cur().kind != kind) return false;
    ++at_;
    return true;
  }
  void expect(Tok kind, const char* what) {
    if (!accept(kind)) syntax(std::string("expected ") + what, cur().pos);
  }
  std::string expect_name(const char* what) {
    if (cur().kind != Tok::kIdent || reserved(cur().text)) {
      syntax(std::string("expected ") + what, cur().pos);
    }
    return next().raw;
  }

  void declarations(LogicProgram& prog) {
    expect_keyword("VAR");
    bool constant = keyword("CONSTANT");
    while (!keyword("END_VAR")) {
      if (cur().kind == Tok::kEnd) syntax("expected END_VAR", cur().pos);
      Declaration d;
      d.pos = cur().pos;
      d.name = expect_name("variable name");
      d.constant = constant;
      if (prog.find(d.name)) type_error("variable '" + d.name + "' redeclared", d.pos);
      if (keyword("AT")) {
        if (cur().kind != Tok::kAddress) syntax("expected located address", cur().pos);
        const Token& t = next();
        d.location = parse_address(t.text);
        if (!d.location) syntax("malformed address '" + t.raw + "'", t.pos);
        if (constant) type_error("constants cannot be located", t.pos);
        for (const auto& other : prog.declarations) {
          if (other.location == d.location) {
            throw LogicError(LogicErrc::kDuplicateLocation,
                             d.location->to_string() + " already bound to '" +
                                 other.name + "'",
                             t.pos);
          }
        }
      }
      expect(Tok::kColon, "':'");
      if (keyword("BOOL")) {
        d.type = ValueType::kBool;
      } else if (keyword("INT")) {
        d.type = ValueType::kInt;
      } else {
        syntax("expected BOOL or INT", cur().pos);
      }
      if (d.location) {
        bool bit = d.location->width == IoWidth::kBit;
        if (bit != (d.type == ValueType::kBool)) {
          type_error(d.location->to_string() + " cannot hold " +
                         std::string(type_name(d.type)),
                     d.pos);
        }
      }
      if (accept(Tok::kAssign)) {
        SourcePos p = cur().pos;
        auto [type, value] = constant_value();
        if (type != d.type) type_error("initializer type mismatch", p);
        if (d.location && d.location->direction == IoDirection::kInput) {
          type_error("input variables cannot be initialized", p);
        }
        d.initial = value;
      } else if (constant) {
        syntax("constant needs an initializer", cur().pos);
      }
      expect(Tok::kSemi, "';'");
      prog.declarations.push_back(std::move(d));
    }
  }

  std::pair<ValueType, std::int32_t> constant_value() {
    if (keyword("TRUE")) return {ValueType::kBool, 1};
    if (keyword("FALSE")) return {ValueType::kBool, 0};
    bool negative = accept(Tok::kMinus);
    if (cur().kind != Tok::kInt) syntax("expected constant", cur().pos);
    std::int32_t v = int_literal(next(), negative);
    return {ValueType::kInt, v};
  }

  std::int32_t int_literal(const Token& t, bool negative) {
    std::int64_t v = 0;
    for (char c : t.text) {
      v = v * 10 + (c - '0');
      if (v > 32768) break;
    }
    if (negative) v = -v;
    if (v < -32768 || v > 32767) syntax("integer literal out of INT range", t.pos);
    return static_cast<std::int32_t>(v);
  }

  Block block(std::initializer_list<const char*> terminators) {
    Block out;
    while (true) {
      if (cur().kind == Tok::kEnd) return out;
      for (const char* t : terminators) {
        if (peek_keyword(t)) return out;
      }
      if (accept(Tok::kSemi)) continue;
      out.push_back(statement());
    }
  }

  Stmt statement() {
    Stmt s;
    s.pos = cur().pos;
    if (keyword("IF")) {
      s.kind = Stmt::Kind::kIf;
      do {
        Branch b;
        b.condition = bool_expr("IF condition");
        expect_keyword("THEN");
        b.body = block({"ELSIF", "ELSE", "END_IF"});
        s.branches.push_back(std::move(b));
      } while (keyword("ELSIF"));
      if (keyword("ELSE")) s.otherwise = block({"END_IF"});
      expect_keyword("END_IF");
      accept(Tok::kSemi);
      return s;
    }
    SourcePos target_pos = cur().pos;
    std::string name = expect_name("statement");
    auto idx = prog_->find(name);
    if (!idx) type_error("undeclared variable '" + name + "'", target_pos);
    const Declaration& d = prog_->declarations[*idx];
    if (d.constant) type_error("cannot assign to constant '" + d.name + "'", target_pos);
    if (d.location && d.location->direction == IoDirection::kInput) {
      type_error("cannot assign to input '" + d.name + "'", target_pos);
    }
    expect(Tok::kAssign, "':='");
    s.kind = Stmt::Kind::kAssign;
    s.target = *idx;
    SourcePos vpos = cur().pos;
    s.value = expr();
    if (s.value->type != d.type) {
      type_error("cannot assign " + std::string(type_name(s.value->type)) + " to " +
                     std::string(type_name(d.type)) + " '" + d.name + "'",
                 vpos);
    }
    expect(Tok::kSemi, "';'");
    return s;
  }

  std::unique_ptr<Expr> bool_expr(const char* what) {
    SourcePos p = cur().pos;
    auto e = expr();
    if (e->type != ValueType::kBool) type_error(std::string(what) + " must be BOOL", p);
    return e;
  }

  std::unique_ptr<Expr> binary(BinaryOp op, std::unique_ptr<Expr> l,
                               std::unique_ptr<Expr> r, SourcePos pos) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::kBinary;
    e->op = op;
    e->pos = pos;
    switch (op) {
      case BinaryOp::kOr:
      case BinaryOp::kAnd:
        if (l->type != ValueType::kBool || r->type != ValueType::kBool) {
          type_error("AND/OR need BOOL operands", pos);
        }
        e->type = ValueType::kBool;
        break;
      case BinaryOp::kEq:
      case BinaryOp::kNe:
        if (l->type != r->type) type_error("comparison of BOOL with INT", pos);
        e->type = ValueType::kBool;
        break;
      case BinaryOp::kLt:
      case BinaryOp::kLe:
      case BinaryOp::kGt:
      case BinaryOp::kGe:
        if (l->type != ValueType::kInt || r->type != ValueType::kInt) {
          type_error("ordering comparison needs INT operands", pos);
        }
        e->type = ValueType::kBool;
        break;
      case BinaryOp::kAdd:
      case BinaryOp::kSub:
      case BinaryOp::kMul:
        if (l->type != ValueType::kInt || r->type != ValueType::kInt) {
          type_error("arithmetic needs INT operands", pos);
        }
        e->type = ValueType::kInt;
        break;
    }
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
  }

  std::unique_ptr<Expr> expr() {
    auto l = and_expr();
    while (peek_keyword("OR")) {
      SourcePos p = next().pos;
      l = binary(BinaryOp::kOr, std::move(l), and_expr(), p);
    }
    return l;
  }

  std::unique_ptr<Expr> and_expr() {
    auto l = comparison();
    while (peek_keyword("AND") || cur().kind == Tok::kAmp) {
      SourcePos p = next().pos;
      l = binary(BinaryOp::kAnd, std::move(l), comparison(), p);
    }
    return l;
  }

  std::unique_ptr<Expr> comparison() {
    auto l = additive();
    static const std::map<Tok, BinaryOp> ops = {
        {Tok::kEq, BinaryOp::kEq}, {Tok::kNe, BinaryOp::kNe}, {Tok::kLt, BinaryOp::kLt},
        {Tok::kLe, BinaryOp::kLe}, {Tok::kGt, BinaryOp::kGt}, {Tok::kGe, BinaryOp::kGe}};
    auto it = ops.find(cur().kind);
    if (it == ops.end()) return l;
    SourcePos p = next().pos;
    l = binary(it->second, std::move(l), additive(), p);
    if (ops.count(cur().kind)) syntax("comparisons do not chain", cur().pos);
    return l;
  }

  std::unique_ptr<Expr> additive() {
    auto l = multiplicative();
    while (cur().kind == Tok::kPlus || cur().kind == Tok::kMinus) {
      const Token& t = next();
      l = binary(t.kind == Tok::kPlus ? BinaryOp::kAdd : BinaryOp::kSub, std::move(l),
                 multiplicative(), t.pos);
    }
    return l;
  }

  std::unique_ptr<Expr> multiplicative() {
    auto l = unary();
    while (cur().kind == Tok::kStar) {
      SourcePos p = next().pos;
      l = binary(BinaryOp::kMul, std::move(l), unary(), p);
    }
    return l;
  }

  std::unique_ptr<Expr> unary() {
    SourcePos p = cur().pos;
    if (keyword("NOT")) {
      auto operand = unary();
      if (operand->type != ValueType::kBool) type_error("NOT needs a BOOL operand", p);
      auto e = std::make_unique<Expr>();
      e->kind = ExprKind::kNot;
      e->type = ValueType::kBool;
      e->lhs = std::move(operand);
      e->pos = p;
      return e;
    }
    if (accept(Tok::kMinus)) {
      if (cur().kind == Tok::kInt) {
        auto e = std::make_unique<Expr>();
        e->kind = ExprKind::kLiteral;
        e->type = ValueType::kInt;
        e->value = int_literal(next(), true);
        e->pos = p;
        return e;
      }
      auto operand = unary();
      if (operand->type != ValueType::kInt) type_error("negation needs an INT operand", p);
      auto e = std::make_unique<Expr>();
      e->kind = ExprKind::kNegate;
      e->type = ValueType::kInt;
      e->lhs = std::move(operand);
      e->pos = p;
      return e;
    }
    return primary();
  }

  std::unique_ptr<Expr> primary() {
    SourcePos p = cur().pos;
    auto e = std::make_unique<Expr>();
    e->pos = p;
    if (accept(Tok::kLParen)) {
      e = expr();
      expect(Tok::kRParen, "')'");
      return e;
    }
    if (cur().kind == Tok::kInt) {
      e->kind = ExprKind::kLiteral;
      e->type = ValueType::kInt;
      e->value = int_literal(next(), false);
      return e;
    }
    if (keyword("TRUE") || keyword("FALSE")) {
      e->kind = ExprKind::kLiteral;
      e->type = ValueType::kBool;
      e->value = toks_[at_ - 1].text == "TRUE" ? 1 : 0;
      return e;
    }
    if (keyword("ABS")) {
      expect(Tok::kLParen, "'(' after ABS");
      auto operand = expr();
      if (operand->type != ValueType::kInt) type_error("ABS needs an INT operand", p);
      expect(Tok::kRParen, "')'");
      e->kind = ExprKind::kAbs;
      e->type = ValueType::kInt;
      e->lhs = std::move(operand);
      return e;
    }
    if (cur().kind == Tok::kIdent && !reserved(cur().text)) {
      const Token& t = next();
      auto idx = prog_->find(t.raw);
      if (!idx) type_error("undeclared variable '" + t.raw + "'", t.pos);
      e->kind = ExprKind::kVariable;
      e->variable = *idx;
      e->type = prog_->declarations[*idx].type;
      return e;
    }
    syntax(cur().kind == Tok::kEnd ? "unexpected end of input"
                                   : "unexpected '" + cur().raw + "'",
           p);
  }

  std::vector<Token> toks_;
  std::size_t at_ = 0;
  const LogicProgram* prog_ = nullptr;
};

}  // namespace

LogicProgram parse(std::string_view source) { return Parser(lex(source)).program(); }

}  // namespace tzplc::logic
