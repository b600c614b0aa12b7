#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "critters/error.hpp"
#include "critters/lang.hpp"
#include "critters/world.hpp"

namespace critters {

enum class MutationOperator : std::uint8_t {
  color_replacement,
  threshold_replacement,
  relational_op_replacement,
  terrain_replacement,
  branch_swap,
  statement_deletion,
  integer_assign_replacement,
};

inline constexpr std::array kMutationOperators{
    MutationOperator::color_replacement,         MutationOperator::threshold_replacement,
    MutationOperator::relational_op_replacement, MutationOperator::terrain_replacement,
    MutationOperator::branch_swap,               MutationOperator::statement_deletion,
    MutationOperator::integer_assign_replacement};

inline constexpr std::string_view to_string(MutationOperator op) {
  constexpr std::array<std::string_view, 7> names{
      "color_replacement", "threshold_replacement", "relational_op_replacement",
      "terrain_replacement", "branch_swap", "statement_deletion", "integer_assign_replacement"};
  return names[static_cast<std::size_t>(op)];
}

using MutationPayload = std::variant<std::monostate, Color, int, RelOp, Terrain>;

/// Location is a path of child indices from the program root:
///   [0|1]           init | tile block
///   then stmt index within the block; below an `if`:
///   0 = condition, 1 = then block, 2 = else block
///   and below `or`/`and`: 0 = left, 1 = right.
struct MutationDescriptor {
  MutationOperator op;
  std::vector<int> location;
  MutationPayload payload;
  bool operator==(const MutationDescriptor&) const = default;
};

struct MutantProgram {
  std::string id;
  Program program;
  std::optional<MutationDescriptor> descriptor;  // nullopt: hand-written
  bool operator==(const MutantProgram&) const = default;
};

inline std::string location_text(const std::vector<int>& location) {
  std::string out;
  for (std::size_t i = 0; i < location.size(); ++i) {
    if (i > 0) out += '.';
    out += std::to_string(location[i]);
  }
  return out;
}

inline std::string payload_text(const MutationPayload& payload) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "-";
        } else if constexpr (std::is_same_v<T, int>) {
          return std::to_string(p);
        } else {
          return std::string(to_string(p));
        }
      },
      payload);
}

/// `<operator> <location> <payload>`, e.g. `color_replacement 1.0.1.0 blue`.
inline std::string to_text(const MutationDescriptor& d) {
  return std::string(to_string(d.op)) + " " + location_text(d.location) + " " +
         payload_text(d.payload);
}

inline MutationDescriptor parse_descriptor(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string op_word, loc_word, payload_word, extra;
  if (!(in >> op_word >> loc_word >> payload_word) || (in >> extra)) {
    throw Error("malformed mutation descriptor '" + std::string(text) + "'");
  }
  MutationDescriptor d{};
  const auto op = detail::lookup(op_word, kMutationOperators);
  if (!op) throw Error("unknown mutation operator '" + op_word + "'");
  d.op = *op;
  std::istringstream loc(loc_word);
  for (std::string part; std::getline(loc, part, '.');) {
    try {
      d.location.push_back(std::stoi(part));
    } catch (const std::exception&) {
      throw Error("malformed mutation location '" + loc_word + "'");
    }
  }
  auto bad = [&]() -> Error { return Error("payload ill-typed for operator"); };
  switch (d.op) {
    case MutationOperator::color_replacement:
      if (auto c = color_from(payload_word)) d.payload = *c; else throw bad();
      break;
    case MutationOperator::threshold_replacement:
    case MutationOperator::integer_assign_replacement:
      try {
        d.payload = std::stoi(payload_word);
      } catch (const std::exception&) {
        throw bad();
      }
      break;
    case MutationOperator::relational_op_replacement:
      if (auto r = relop_from(payload_word)) d.payload = *r; else throw bad();
      break;
    case MutationOperator::terrain_replacement:
      if (auto t = terrain_from(payload_word)) d.payload = *t; else throw bad();
      break;
    case MutationOperator::branch_swap:
    case MutationOperator::statement_deletion:
      if (payload_word != "-") throw bad();
      break;
  }
  return d;
}

namespace detail {

struct MutationTarget {
  Block* block = nullptr;  // set when the target is a statement
  std::size_t index = 0;
  Condition* cond = nullptr;  // set when the target is a condition
};

inline MutationTarget locate(Program& program, const std::vector<int>& path) {
  const Error invalid("location invalid");
  if (path.size() < 2 || (path[0] != 0 && path[0] != 1)) throw invalid;
  Block* block = path[0] == 0 ? &program.init : &program.on_tile;
  std::size_t i = 1;
  while (true) {
    const int idx = path[i];
    if (idx < 0 || static_cast<std::size_t>(idx) >= block->size()) throw invalid;
    Statement& stmt = (*block)[static_cast<std::size_t>(idx)];
    if (i + 1 == path.size()) return MutationTarget{block, static_cast<std::size_t>(idx), nullptr};
    auto* branch = std::get_if<If>(&stmt.node);
    if (branch == nullptr) throw invalid;
    const int child = path[i + 1];
    if (child == 1 || child == 2) {
      block = child == 1 ? &branch->then_branch : &branch->else_branch;
      i += 2;
      if (i >= path.size()) throw invalid;
      continue;
    }
    if (child != 0) throw invalid;
    Condition* cond = &branch->cond;
    for (std::size_t k = i + 2; k < path.size(); ++k) {
      Box<Condition>* next = nullptr;
      if (auto* o = std::get_if<Or>(&cond->node)) {
        next = path[k] == 0 ? &o->left : path[k] == 1 ? &o->right : nullptr;
      } else if (auto* a = std::get_if<And>(&cond->node)) {
        next = path[k] == 0 ? &a->left : path[k] == 1 ? &a->right : nullptr;
      }
      if (next == nullptr) throw invalid;
      cond = &**next;
    }
    return MutationTarget{nullptr, 0, cond};
  }
}

template <class T>
const T& payload_as(const MutationPayload& p) {
  if (const T* v = std::get_if<T>(&p)) return *v;
  throw Error("payload ill-typed for operator");
}

template <class Field, class T>
void replace(Field& field, const T& value) {
  if (field == value) throw Error("payload equals original");
  field = value;
}

}  // namespace detail

/// Returns `cut` with exactly the node addressed by `d` replaced or deleted.
inline Program apply_mutation(const Program& cut, const MutationDescriptor& d) {
  Program out = cut;
  const detail::MutationTarget target = detail::locate(out, d.location);
  const Error wrong_kind("location invalid");
  Statement* stmt = target.block != nullptr ? &(*target.block)[target.index] : nullptr;

  switch (d.op) {
    case MutationOperator::color_replacement: {
      auto* s = stmt != nullptr ? std::get_if<SetAttribute>(&stmt->node) : nullptr;
      if (s == nullptr) throw wrong_kind;
      detail::replace(s->value, detail::payload_as<Color>(d.payload));
      break;
    }
    case MutationOperator::integer_assign_replacement: {
      auto* s = stmt != nullptr ? std::get_if<SetVariable>(&stmt->node) : nullptr;
      if (s == nullptr) throw wrong_kind;
      detail::replace(s->value, detail::payload_as<int>(d.payload));
      break;
    }
    case MutationOperator::threshold_replacement: {
      if (target.cond == nullptr) throw wrong_kind;
      const int bound = detail::payload_as<int>(d.payload);
      if (auto* c = std::get_if<CoordCompare>(&target.cond->node)) {
        if (bound < 0 || bound >= kBoardSize) throw Error("payload ill-typed for operator");
        detail::replace(c->bound, bound);
      } else if (auto* v = std::get_if<VarCompare>(&target.cond->node)) {
        detail::replace(v->bound, bound);
      } else {
        throw wrong_kind;
      }
      break;
    }
    case MutationOperator::relational_op_replacement: {
      if (target.cond == nullptr) throw wrong_kind;
      const RelOp op = detail::payload_as<RelOp>(d.payload);
      if (auto* c = std::get_if<CoordCompare>(&target.cond->node)) {
        if (op == RelOp::ne) throw Error("payload ill-typed for operator");
        detail::replace(c->op, op);
      } else if (auto* v = std::get_if<VarCompare>(&target.cond->node)) {
        detail::replace(v->op, op);
      } else {
        throw wrong_kind;
      }
      break;
    }
    case MutationOperator::terrain_replacement: {
      auto* t = target.cond != nullptr ? std::get_if<TerrainIs>(&target.cond->node) : nullptr;
      if (t == nullptr) throw wrong_kind;
      detail::replace(t->kind, detail::payload_as<Terrain>(d.payload));
      break;
    }
    case MutationOperator::branch_swap: {
      auto* b = stmt != nullptr ? std::get_if<If>(&stmt->node) : nullptr;
      if (b == nullptr || b->then_branch.empty() || b->else_branch.empty()) throw wrong_kind;
      detail::payload_as<std::monostate>(d.payload);
      if (b->then_branch == b->else_branch) throw Error("payload equals original");
      std::swap(b->then_branch, b->else_branch);
      break;
    }
    case MutationOperator::statement_deletion: {
      if (stmt == nullptr) throw wrong_kind;
      detail::payload_as<std::monostate>(d.payload);
      target.block->erase(target.block->begin() + static_cast<std::ptrdiff_t>(target.index));
      break;
    }
  }
  return out;
}

namespace detail {

struct DescriptorCollector {
  std::vector<MutationDescriptor> out;

  void add(MutationOperator op, const std::vector<int>& path, MutationPayload payload) {
    out.push_back(MutationDescriptor{op, path, std::move(payload)});
  }

  void bounds(const std::vector<int>& path, int bound, bool clamp) {
    for (int candidate : {bound - 1, bound + 1}) {
      if (clamp) candidate = std::clamp(candidate, 0, kBoardSize - 1);
      if (candidate != bound) add(MutationOperator::threshold_replacement, path, candidate);
    }
  }

  template <std::size_t N>
  void ops(const std::vector<int>& path, RelOp current, const std::array<RelOp, N>& domain) {
    for (RelOp op : domain) {
      if (op != current) add(MutationOperator::relational_op_replacement, path, op);
    }
  }

  void condition(const Condition& c, std::vector<int> path) {
    if (const auto* t = std::get_if<TerrainIs>(&c.node)) {
      for (Terrain kind : kWalkableTerrains) {
        if (kind != t->kind) add(MutationOperator::terrain_replacement, path, kind);
      }
    } else if (const auto* k = std::get_if<CoordCompare>(&c.node)) {
      bounds(path, k->bound, true);
      ops(path, k->op, kCoordOps);
    } else if (const auto* v = std::get_if<VarCompare>(&c.node)) {
      bounds(path, v->bound, false);
      ops(path, v->op, kRelOps);
    } else {
      const auto children = [&]() -> std::pair<const Condition*, const Condition*> {
        if (const auto* o = std::get_if<Or>(&c.node)) return {&*o->left, &*o->right};
        const auto& a = std::get<And>(c.node);
        return {&*a.left, &*a.right};
      }();
      path.push_back(0);
      condition(*children.first, path);
      path.back() = 1;
      condition(*children.second, path);
    }
  }

  void block(const Block& b, const std::vector<int>& prefix, bool is_init) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      std::vector<int> path = prefix;
      path.push_back(static_cast<int>(i));
      const Statement& s = b[i];
      // Deleting an init attribute assignment is the same behaviour as
      // replacing its color with the default, which the color operator covers.
      if (!(is_init && std::holds_alternative<SetAttribute>(s.node))) {
        add(MutationOperator::statement_deletion, path, std::monostate{});
      }
      if (const auto* a = std::get_if<SetAttribute>(&s.node)) {
        for (Color c : kColors) {
          if (c != a->value) add(MutationOperator::color_replacement, path, c);
        }
      } else if (const auto* v = std::get_if<SetVariable>(&s.node)) {
        add(MutationOperator::integer_assign_replacement, path, v->value - 1);
        add(MutationOperator::integer_assign_replacement, path, v->value + 1);
      } else {
        const auto& branch = std::get<If>(s.node);
        if (!branch.then_branch.empty() && !branch.else_branch.empty()) {
          add(MutationOperator::branch_swap, path, std::monostate{});
        }
        auto child = path;
        child.push_back(0);
        condition(branch.cond, child);
        child.back() = 1;
        block(branch.then_branch, child, false);
        child.back() = 2;
        block(branch.else_branch, child, false);
      }
    }
  }
};

}  // namespace detail

/// All descriptors the operator set can apply to `cut`, in program order.
inline std::vector<MutationDescriptor> mutation_sites(const Program& cut) {
  detail::DescriptorCollector collector;
  collector.block(cut.init, {0}, true);
  collector.block(cut.on_tile, {1}, false);
  return std::move(collector.out);
}

/// Compact single-token form, e.g. `color_replacement@1.0.1.0=blue`.
inline std::string descriptor_id(const MutationDescriptor& d) {
  return std::string(to_string(d.op)) + "@" + location_text(d.location) + "=" +
         payload_text(d.payload);
}

/// Every valid first-order mutant of `cut`, deduplicated structurally.
inline std::vector<MutantProgram> enumerate_mutants(const Program& cut) {
  std::vector<MutantProgram> out;
  for (auto& d : mutation_sites(cut)) {
    Program p;
    try {
      p = apply_mutation(cut, d);
    } catch (const Error&) {
      continue;
    }
    if (p == cut || !validate_program(p).empty()) continue;
    const bool duplicate =
        std::any_of(out.begin(), out.end(), [&](const MutantProgram& m) { return m.program == p; });
    if (duplicate) continue;
    out.push_back(MutantProgram{descriptor_id(d), std::move(p), std::move(d)});
  }
  return out;
}

/// Tiles a portal may observe: on some descent path, excluding the tower
/// (a critter entering the tower has already finished).
inline std::vector<TileCoord> observable_tiles(const Board& board, const DistanceField& field) {
  auto tiles = path_tiles(board, field);
  std::erase(tiles, board.tower);
  return tiles;
}

inline bool equivalent_states(const Board& board, const DistanceField& field,
                              const StateSets& cut_states, const StateSets& mutant_states) {
  for (TileCoord t : observable_tiles(board, field)) {
    if (cut_states.at(t) != mutant_states.at(t)) return false;
  }
  return true;
}

/// True iff no portal anywhere could tell the mutant from the CUT: reachable
/// state sets agree on every observable tile.
inline bool is_equivalent(const Board& board, const Program& cut, const MutantProgram& m) {
  const DistanceField field = distance_field(board);
  return equivalent_states(board, field, reachable_states(board, field, cut),
                           reachable_states(board, field, m.program));
}

}  // namespace critters
