#pragma once

#include <string>

#include "critters/lang/ast.hpp"

namespace critters {

namespace detail {

// 0 = or, 1 = and, 2 = atom
inline int precedence(const Condition& c) {
  if (std::holds_alternative<Or>(c.node)) return 0;
  if (std::holds_alternative<And>(c.node)) return 1;
  return 2;
}

inline void print_condition(std::string& out, const Condition& c);

inline void print_operand(std::string& out, const Condition& child, int parent_prec,
                          bool right_side) {
  const int prec = precedence(child);
  const bool parens = prec < parent_prec || (right_side && prec == parent_prec);
  if (parens) out += '(';
  print_condition(out, child);
  if (parens) out += ')';
}

inline void print_condition(std::string& out, const Condition& c) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TerrainIs>) {
          out += "terrain == ";
          out += to_string(n.kind);
        } else if constexpr (std::is_same_v<T, CoordCompare>) {
          out += to_string(n.axis);
          out += ' ';
          out += to_string(n.op);
          out += ' ';
          out += std::to_string(n.bound);
        } else if constexpr (std::is_same_v<T, VarCompare>) {
          out += n.name;
          out += ' ';
          out += to_string(n.op);
          out += ' ';
          out += std::to_string(n.bound);
        } else {
          const int prec = std::is_same_v<T, Or> ? 0 : 1;
          print_operand(out, *n.left, prec, false);
          out += std::is_same_v<T, Or> ? " or " : " and ";
          print_operand(out, *n.right, prec, true);
        }
      },
      c.node);
}

inline void print_block(std::string& out, const Block& block, int indent);

inline void print_statement(std::string& out, const Statement& s, int indent) {
  out.append(static_cast<std::size_t>(indent) * 2, ' ');
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SetAttribute>) {
          out += to_string(n.attr);
          out += " = ";
          out += to_string(n.value);
          out += '\n';
        } else if constexpr (std::is_same_v<T, SetVariable>) {
          out += n.name;
          out += " = ";
          out += std::to_string(n.value);
          out += '\n';
        } else {
          out += "if ";
          print_condition(out, n.cond);
          out += " {\n";
          print_block(out, n.then_branch, indent + 1);
          out.append(static_cast<std::size_t>(indent) * 2, ' ');
          out += '}';
          if (!n.else_branch.empty()) {
            out += " else {\n";
            print_block(out, n.else_branch, indent + 1);
            out.append(static_cast<std::size_t>(indent) * 2, ' ');
            out += '}';
          }
          out += '\n';
        }
      },
      s.node);
}

inline void print_block(std::string& out, const Block& block, int indent) {
  for (const auto& s : block) print_statement(out, s, indent);
}

}  // namespace detail

inline std::string to_text(const Condition& c) {
  std::string out;
  detail::print_condition(out, c);
  return out;
}

/// Canonical program text: lowercase keywords, two-space indentation, one
/// statement per line, trailing newline.
inline std::string to_text(const Program& p) {
  std::string out = "init {\n";
  detail::print_block(out, p.init, 1);
  out += "}\ntile {\n";
  detail::print_block(out, p.on_tile, 1);
  out += "}\n";
  return out;
}

inline std::string to_text(const AtomicTest& atom) {
  if (const auto* eq = std::get_if<AttrEquals>(&atom)) {
    return std::string(to_string(eq->attr)) + " == " + std::string(to_string(eq->value));
  }
  const auto& v = std::get<VarCompare>(atom);
  return v.name + " " + std::string(to_string(v.op)) + " " + std::to_string(v.bound);
}

inline std::string to_text(const Predicate& p) {
  if (p.conjuncts.empty()) return "pass always";
  std::string out = "pass if ";
  for (std::size_t i = 0; i < p.conjuncts.size(); ++i) {
    if (i > 0) out += " and ";
    out += to_text(p.conjuncts[i]);
  }
  return out;
}

}  // namespace critters
