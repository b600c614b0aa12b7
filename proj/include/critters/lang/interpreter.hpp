#pragma once

#include "critters/lang/ast.hpp"

namespace critters {

inline bool eval_condition(const Condition& c, const CritterState& state, const TileContext& ctx) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TerrainIs>) {
          return ctx.terrain == n.kind;
        } else if constexpr (std::is_same_v<T, CoordCompare>) {
          return compare(n.axis == Axis::x ? ctx.x : ctx.y, n.op, n.bound);
        } else if constexpr (std::is_same_v<T, VarCompare>) {
          const auto it = state.variables.find(n.name);
          return it != state.variables.end() && compare(it->second, n.op, n.bound);
        } else if constexpr (std::is_same_v<T, Or>) {
          return eval_condition(*n.left, state, ctx) || eval_condition(*n.right, state, ctx);
        } else {
          return eval_condition(*n.left, state, ctx) && eval_condition(*n.right, state, ctx);
        }
      },
      c.node);
}

inline void exec_block(const Block& block, CritterState& state, const TileContext& ctx) {
  for (const auto& s : block) {
    if (const auto* a = std::get_if<SetAttribute>(&s.node)) {
      state.set(a->attr, a->value);
    } else if (const auto* v = std::get_if<SetVariable>(&s.node)) {
      state.variables.insert_or_assign(v->name, v->value);
    } else {
      const auto& branch = std::get<If>(s.node);
      exec_block(eval_condition(branch.cond, state, ctx) ? branch.then_branch : branch.else_branch,
                 state, ctx);
    }
  }
}

/// Defaults (white shirt, white hat, black hair) overwritten by `init` in order.
inline CritterState exec_init(const Program& program) {
  CritterState state;
  exec_block(program.init, state, TileContext{});
  return state;
}

inline CritterState exec_tile(const Program& program, CritterState state, const TileContext& ctx) {
  exec_block(program.on_tile, state, ctx);
  return state;
}

/// A test on a variable the critter does not carry is false.
inline bool eval_atom(const AtomicTest& atom, const CritterState& state) {
  if (const auto* eq = std::get_if<AttrEquals>(&atom)) return state.get(eq->attr) == eq->value;
  const auto& v = std::get<VarCompare>(atom);
  const auto it = state.variables.find(v.name);
  return it != state.variables.end() && compare(it->second, v.op, v.bound);
}

inline bool eval_predicate(const Predicate& pred, const CritterState& state) {
  for (const auto& atom : pred.conjuncts) {
    if (!eval_atom(atom, state)) return false;
  }
  return true;
}

}  // namespace critters
