#pragma once

#include <algorithm>
#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "critters/error.hpp"
#include "critters/lang/ast.hpp"
#include "critters/lang/validate.hpp"

namespace critters {

namespace detail {

enum class TokenKind { word, integer, symbol, end };

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;   // original spelling
  std::string lower;  // lowercase spelling for keyword matching
  long long value = 0;
  int line = 1;
  int column = 1;
};

inline std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline bool is_keyword(std::string_view lower) {
  static const std::set<std::string, std::less<>> keywords = [] {
    std::set<std::string, std::less<>> k{"init", "tile", "if",   "else", "terrain", "x",
                                         "y",    "or",   "and",  "pass", "always"};
    for (auto a : kAttributes) k.emplace(to_string(a));
    for (auto c : kColors) k.emplace(to_string(c));
    for (auto t : kTerrains) k.emplace(to_string(t));
    return k;
  }();
  return keywords.contains(lower);
}

// '#' starts a comment that runs to end of line.
inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        ++j;
      }
      tok.kind = TokenKind::word;
      tok.text = std::string(src.substr(i, j - i));
      tok.lower = lowercase(tok.text);
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < src.size() &&
                std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i + 1;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      tok.kind = TokenKind::integer;
      tok.text = std::string(src.substr(i, j - i));
      if (j - i > 10) throw ParseError("integer literal out of range", line, col);
      tok.value = std::stoll(tok.text);
      if (tok.value > 1'000'000'000LL || tok.value < -1'000'000'000LL) {
        throw ParseError("integer literal out of range", line, col);
      }
      advance(j - i);
    } else {
      static constexpr std::array<std::string_view, 4> two{"==", "!=", "<=", ">="};
      tok.kind = TokenKind::symbol;
      const auto rest = src.substr(i);
      const auto it = std::find_if(two.begin(), two.end(),
                                   [&](std::string_view s) { return rest.starts_with(s); });
      if (it != two.end()) {
        tok.text = std::string(*it);
      } else if (std::string_view("{}();=<>").find(c) != std::string_view::npos) {
        tok.text = std::string(1, c);
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
      }
      advance(tok.text.size());
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(tokenize(src)) {}

  Program program() {
    Program p;
    expect_word("init");
    expect_symbol("{");
    while (!at_symbol("}")) p.init.push_back(assignment());
    expect_symbol("}");
    expect_word("tile");
    expect_symbol("{");
    p.on_tile = block_body();
    expect_symbol("}");
    expect_end();
    return p;
  }

  Predicate predicate() {
    Predicate pred;
    expect_word("pass");
    if (at_word("always")) {
      next();
    } else {
      expect_word("if");
      pred.conjuncts.push_back(atom());
      while (at_word("and")) {
        next();
        pred.conjuncts.push_back(atom());
      }
    }
    expect_end();
    return pred;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  bool at_word(std::string_view w) const {
    return peek().kind == TokenKind::word && peek().lower == w;
  }
  bool at_symbol(std::string_view s) const {
    return peek().kind == TokenKind::symbol && peek().text == s;
  }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(peek(), msg); }
  [[noreturn]] static void fail_at(const Token& t, const std::string& msg) {
    throw ParseError(msg, t.line, t.column);
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case TokenKind::end: return "end of input";
      case TokenKind::integer: return "integer " + t.text;
      default: return "'" + t.text + "'";
    }
  }

  void expect_word(std::string_view w) {
    if (!at_word(w)) fail("expected '" + std::string(w) + "', found " + describe(peek()));
    next();
  }
  void expect_symbol(std::string_view s) {
    if (!at_symbol(s)) fail("expected '" + std::string(s) + "', found " + describe(peek()));
    next();
  }
  void expect_end() {
    if (peek().kind != TokenKind::end) fail("unexpected " + describe(peek()));
  }

  int integer() {
    if (peek().kind != TokenKind::integer) fail("expected integer, found " + describe(peek()));
    return static_cast<int>(next().value);
  }

  std::string identifier() {
    const Token& t = peek();
    if (t.kind != TokenKind::word) fail("expected name, found " + describe(t));
    if (is_keyword(t.lower)) fail("'" + t.text + "' is a reserved word");
    return next().text;
  }

  RelOp relop() {
    if (peek().kind == TokenKind::symbol) {
      if (auto op = relop_from(peek().text)) {
        next();
        return *op;
      }
    }
    fail("expected comparison operator, found " + describe(peek()));
  }

  Color color_value() {
    const Token& t = peek();
    if (t.kind == TokenKind::word) {
      if (auto c = color_from(t.lower)) {
        next();
        return *c;
      }
      fail("unknown color '" + t.text + "'");
    }
    fail("expected color, found " + describe(t));
  }

  // `attr = color` or `name = int`, optional trailing ';'
  Statement assignment() {
    const Token& head = peek();
    if (head.kind != TokenKind::word) fail("expected assignment, found " + describe(head));
    Statement s;
    if (auto attr = attribute_from(head.lower)) {
      next();
      expect_symbol("=");
      s = set_attr(*attr, color_value());
    } else {
      if (is_keyword(head.lower)) fail("unexpected '" + head.text + "'");
      std::string name = next().text;
      expect_symbol("=");
      if (peek().kind == TokenKind::word && color_from(peek().lower)) {
        fail_at(head, "unknown attribute '" + name + "'");
      }
      s = set_var(std::move(name), integer());
    }
    if (at_symbol(";")) next();
    return s;
  }

  Block block_body() {
    Block out;
    while (!at_symbol("}") && peek().kind != TokenKind::end) out.push_back(statement());
    return out;
  }

  Statement statement() {
    if (!at_word("if")) return assignment();
    next();
    Condition cond = condition();
    expect_symbol("{");
    Block then_branch = block_body();
    expect_symbol("}");
    Block else_branch;
    if (at_word("else")) {
      next();
      expect_symbol("{");
      else_branch = block_body();
      expect_symbol("}");
    }
    return if_then(std::move(cond), std::move(then_branch), std::move(else_branch));
  }

  // or-expr := and-expr ("or" and-expr)* ; and binds tighter, both left-assoc
  Condition condition() {
    Condition lhs = conjunction();
    while (at_word("or")) {
      next();
      lhs = any_of(std::move(lhs), conjunction());
    }
    return lhs;
  }

  Condition conjunction() {
    Condition lhs = primary();
    while (at_word("and")) {
      next();
      lhs = all_of(std::move(lhs), primary());
    }
    return lhs;
  }

  Condition primary() {
    if (at_symbol("(")) {
      next();
      Condition c = condition();
      expect_symbol(")");
      return c;
    }
    const Token& head = peek();
    if (head.kind != TokenKind::word) fail("expected condition, found " + describe(head));
    if (head.lower == "terrain") {
      next();
      expect_symbol("==");
      const Token& t = peek();
      if (t.kind != TokenKind::word) fail("expected terrain, found " + describe(t));
      auto kind = terrain_from(t.lower);
      if (!kind) fail("unknown terrain '" + t.text + "'");
      next();
      return terrain_is(*kind);
    }
    if (head.lower == "x" || head.lower == "y") {
      const Axis axis = head.lower == "x" ? Axis::x : Axis::y;
      next();
      const Token& op_tok = peek();
      const RelOp op = relop();
      if (op == RelOp::ne) fail_at(op_tok, "operator != is not allowed on coordinates");
      const Token& bound_tok = peek();
      const int bound = integer();
      if (bound < 0 || bound >= kBoardSize) fail_at(bound_tok, "coordinate bound out of range 0..15");
      return coord(axis, op, bound);
    }
    if (attribute_from(head.lower)) fail("attributes cannot be tested in conditions");
    std::string name = identifier();
    const RelOp op = relop();
    return var_cmp(std::move(name), op, integer());
  }

  AtomicTest atom() {
    const Token& head = peek();
    if (head.kind == TokenKind::word) {
      if (auto attr = attribute_from(head.lower)) {
        next();
        expect_symbol("==");
        return AttrEquals{*attr, color_value()};
      }
    }
    std::string name = identifier();
    const RelOp op = relop();
    if (peek().kind == TokenKind::word && color_from(peek().lower)) {
      fail_at(head, "unknown attribute '" + name + "'");
    }
    return VarCompare{std::move(name), op, integer()};
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses and validates a program. Throws ParseError on syntax errors and
/// ValidationError on semantic ones (e.g. "uninitialized variable mood").
inline Program parse_program(std::string_view text) {
  Program p = detail::Parser(text).program();
  if (auto violations = validate_program(p); !violations.empty()) {
    throw ValidationError(std::move(violations));
  }
  return p;
}

inline Predicate parse_predicate(std::string_view text) {
  Predicate p = detail::Parser(text).predicate();
  if (auto violations = validate_predicate(p); !violations.empty()) {
    throw ValidationError(std::move(violations));
  }
  return p;
}

}  // namespace critters
