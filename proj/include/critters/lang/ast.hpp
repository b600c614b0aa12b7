#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace critters {

enum class Attribute : std::uint8_t { shirt, hat, hair };
enum class Color : std::uint8_t { red, orange, yellow, green, blue, purple, black, white };
enum class Terrain : std::uint8_t { grass, dirt, ice, water, wood };
enum class RelOp : std::uint8_t { lt, le, eq, ge, gt, ne };
enum class Axis : std::uint8_t { x, y };

inline constexpr std::array kAttributes{Attribute::shirt, Attribute::hat, Attribute::hair};
inline constexpr std::array kColors{Color::red,  Color::orange, Color::yellow, Color::green,
                                    Color::blue, Color::purple, Color::black,  Color::white};
inline constexpr std::array kTerrains{Terrain::grass, Terrain::dirt, Terrain::ice, Terrain::water,
                                      Terrain::wood};
inline constexpr std::array kWalkableTerrains{Terrain::grass, Terrain::dirt, Terrain::ice};
inline constexpr std::array kRelOps{RelOp::lt, RelOp::le, RelOp::eq,
                                    RelOp::ge, RelOp::gt, RelOp::ne};
// Coordinates admit every relation except inequality.
inline constexpr std::array kCoordOps{RelOp::lt, RelOp::le, RelOp::eq, RelOp::ge, RelOp::gt};

inline constexpr int kBoardSize = 16;
inline constexpr int kMaxIfDepth = 3;

inline constexpr std::string_view to_string(Attribute a) {
  constexpr std::array<std::string_view, 3> names{"shirt", "hat", "hair"};
  return names[static_cast<std::size_t>(a)];
}

inline constexpr std::string_view to_string(Color c) {
  constexpr std::array<std::string_view, 8> names{"red",  "orange", "yellow", "green",
                                                  "blue", "purple", "black",  "white"};
  return names[static_cast<std::size_t>(c)];
}

inline constexpr std::string_view to_string(Terrain t) {
  constexpr std::array<std::string_view, 5> names{"grass", "dirt", "ice", "water", "wood"};
  return names[static_cast<std::size_t>(t)];
}

inline constexpr std::string_view to_string(RelOp op) {
  constexpr std::array<std::string_view, 6> names{"<", "<=", "==", ">=", ">", "!="};
  return names[static_cast<std::size_t>(op)];
}

inline constexpr std::string_view to_string(Axis axis) { return axis == Axis::x ? "x" : "y"; }

namespace detail {

template <class Enum, std::size_t N>
constexpr std::optional<Enum> lookup(std::string_view word, const std::array<Enum, N>& values) {
  for (Enum v : values) {
    if (to_string(v) == word) return v;
  }
  return std::nullopt;
}

}  // namespace detail

inline constexpr std::optional<Attribute> attribute_from(std::string_view w) {
  return detail::lookup(w, kAttributes);
}
inline constexpr std::optional<Color> color_from(std::string_view w) {
  return detail::lookup(w, kColors);
}
inline constexpr std::optional<Terrain> terrain_from(std::string_view w) {
  return detail::lookup(w, kTerrains);
}
inline constexpr std::optional<RelOp> relop_from(std::string_view w) {
  return detail::lookup(w, kRelOps);
}

inline constexpr bool is_walkable(Terrain t) {
  return t == Terrain::grass || t == Terrain::dirt || t == Terrain::ice;
}

inline constexpr bool compare(long long lhs, RelOp op, long long rhs) {
  switch (op) {
    case RelOp::lt: return lhs < rhs;
    case RelOp::le: return lhs <= rhs;
    case RelOp::eq: return lhs == rhs;
    case RelOp::ge: return lhs >= rhs;
    case RelOp::gt: return lhs > rhs;
    case RelOp::ne: return lhs != rhs;
  }
  return false;
}

/// Heap-allocated value with deep copy and value comparison; lets the
/// condition tree stay a plain value type.
template <class T>
class Box {
 public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT(implicit)
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;
  ~Box() = default;

  const T& operator*() const { return *ptr_; }
  T& operator*() { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }
  T* operator->() { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a == *b; }

 private:
  std::unique_ptr<T> ptr_;
};

struct Condition;

struct TerrainIs {
  Terrain kind;
  bool operator==(const TerrainIs&) const = default;
};

struct CoordCompare {
  Axis axis;
  RelOp op;
  int bound;
  bool operator==(const CoordCompare&) const = default;
};

struct VarCompare {
  std::string name;
  RelOp op;
  int bound;
  bool operator==(const VarCompare&) const = default;
};

struct Or {
  Box<Condition> left;
  Box<Condition> right;
  bool operator==(const Or&) const = default;
};

struct And {
  Box<Condition> left;
  Box<Condition> right;
  bool operator==(const And&) const = default;
};

struct Condition {
  std::variant<TerrainIs, CoordCompare, VarCompare, Or, And> node;
  bool operator==(const Condition&) const = default;
};

struct Statement;

struct SetAttribute {
  Attribute attr;
  Color value;
  bool operator==(const SetAttribute&) const = default;
};

struct SetVariable {
  std::string name;
  int value;
  bool operator==(const SetVariable&) const = default;
};

/// An absent else-branch is stored as an empty one.
struct If {
  Condition cond;
  std::vector<Statement> then_branch;
  std::vector<Statement> else_branch;
  bool operator==(const If&) const = default;
};

struct Statement {
  std::variant<SetAttribute, SetVariable, If> node;
  bool operator==(const Statement&) const = default;
};

using Block = std::vector<Statement>;

/// A critter program: assignments run once at spawn, then `on_tile` runs on
/// every tile the critter enters.
struct Program {
  Block init;
  Block on_tile;
  bool operator==(const Program&) const = default;
};

struct CritterState {
  std::array<Color, 3> attributes{Color::white, Color::white, Color::black};
  std::map<std::string, int, std::less<>> variables;

  Color get(Attribute a) const { return attributes[static_cast<std::size_t>(a)]; }
  void set(Attribute a, Color c) { attributes[static_cast<std::size_t>(a)] = c; }

  auto operator<=>(const CritterState&) const = default;
  bool operator==(const CritterState&) const = default;
};

struct TileContext {
  int x = 0;
  int y = 0;
  Terrain terrain = Terrain::grass;
};

struct AttrEquals {
  Attribute attr;
  Color value;
  bool operator==(const AttrEquals&) const = default;
};

using AtomicTest = std::variant<AttrEquals, VarCompare>;

/// Conjunction of atomic tests; empty means "pass always".
struct Predicate {
  std::vector<AtomicTest> conjuncts;
  bool operator==(const Predicate&) const = default;
};

// Convenience constructors, mostly for tests and synthesized programs.
inline Condition terrain_is(Terrain t) { return Condition{TerrainIs{t}}; }
inline Condition coord(Axis axis, RelOp op, int bound) {
  return Condition{CoordCompare{axis, op, bound}};
}
inline Condition var_cmp(std::string name, RelOp op, int bound) {
  return Condition{VarCompare{std::move(name), op, bound}};
}
inline Condition any_of(Condition a, Condition b) {
  return Condition{Or{std::move(a), std::move(b)}};
}
inline Condition all_of(Condition a, Condition b) {
  return Condition{And{std::move(a), std::move(b)}};
}
inline Statement set_attr(Attribute a, Color c) { return Statement{SetAttribute{a, c}}; }
inline Statement set_var(std::string name, int value) {
  return Statement{SetVariable{std::move(name), value}};
}
inline Statement if_then(Condition c, Block then_branch, Block else_branch = {}) {
  return Statement{If{std::move(c), std::move(then_branch), std::move(else_branch)}};
}

}  // namespace critters
