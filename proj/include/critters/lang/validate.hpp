#pragma once

#include <set>
#include <string>
#include <vector>

#include "critters/lang/ast.hpp"

namespace critters {

namespace detail {

struct ProgramChecker {
  std::set<std::string, std::less<>> declared;
  std::set<std::string, std::less<>> reported;
  std::vector<std::string> violations;

  void use(const std::string& name) {
    if (!declared.contains(name) && reported.insert(name).second) {
      violations.push_back("uninitialized variable " + name);
    }
  }

  void check(const Condition& c) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, CoordCompare>) {
            if (n.bound < 0 || n.bound >= kBoardSize) {
              violations.push_back("coordinate bound out of range: " + std::to_string(n.bound));
            }
            if (n.op == RelOp::ne) violations.push_back("operator != is not allowed on coordinates");
          } else if constexpr (std::is_same_v<T, VarCompare>) {
            use(n.name);
          } else if constexpr (std::is_same_v<T, Or> || std::is_same_v<T, And>) {
            check(*n.left);
            check(*n.right);
          }
        },
        c.node);
  }

  void check(const Block& block, int depth) {
    for (const auto& s : block) {
      if (const auto* v = std::get_if<SetVariable>(&s.node)) {
        use(v->name);
      } else if (const auto* branch = std::get_if<If>(&s.node)) {
        if (depth + 1 > kMaxIfDepth) {
          violations.push_back("if nesting deeper than " + std::to_string(kMaxIfDepth));
        }
        check(branch->cond);
        check(branch->then_branch, depth + 1);
        check(branch->else_branch, depth + 1);
      }
    }
  }
};

}  // namespace detail

/// Static checks: `init` holds assignments only, every variable used anywhere
/// in the tile block is assigned in `init`, if-nesting is bounded, and
/// coordinate bounds are on the board.
inline std::vector<std::string> validate_program(const Program& p) {
  detail::ProgramChecker checker;
  for (const auto& s : p.init) {
    if (std::holds_alternative<If>(s.node)) {
      checker.violations.push_back("init may only contain assignments");
    } else if (const auto* v = std::get_if<SetVariable>(&s.node)) {
      checker.declared.insert(v->name);
    }
  }
  checker.check(p.on_tile, 0);
  return std::move(checker.violations);
}

inline std::vector<std::string> validate_predicate(const Predicate& p) {
  std::vector<std::string> violations;
  std::set<Attribute> seen;
  for (const auto& atom : p.conjuncts) {
    if (const auto* eq = std::get_if<AttrEquals>(&atom)) {
      if (!seen.insert(eq->attr).second) {
        violations.push_back("duplicate test on attribute " + std::string(to_string(eq->attr)));
      }
    }
  }
  return violations;
}

/// Names assigned in `init`, in first-assignment order.
inline std::vector<std::string> declared_variables(const Program& p) {
  std::vector<std::string> out;
  for (const auto& s : p.init) {
    if (const auto* v = std::get_if<SetVariable>(&s.node)) {
      if (std::find(out.begin(), out.end(), v->name) == out.end()) out.push_back(v->name);
    }
  }
  return out;
}

}  // namespace critters
