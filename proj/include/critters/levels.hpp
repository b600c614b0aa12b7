#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "critters/adequacy.hpp"
#include "critters/error.hpp"
#include "critters/level.hpp"

namespace critters {

// Level document layout (line oriented, '#' lines in the header are comments):
//
//   id: level01
//   name: Orange Trail
//   tier: tutorial|beginner|advanced
//   healthy: 8
//   required_portals: 2
//   stars: 500 800 950            (optional)
//   village: <x> <y>
//   tower: <x> <y>
//   grid:
//   <16 rows of 16 characters: G grass, D dirt, I ice, W water, T wood>
//   cut:
//   <program text>
//   mutant: <id> count=<n>        (repeated)
//   # mutation: <descriptor>      (optional, first line of the block)
//   <program text>

inline constexpr char terrain_char(Terrain t) {
  constexpr std::array<char, 5> chars{'G', 'D', 'I', 'W', 'T'};
  return chars[static_cast<std::size_t>(t)];
}

inline std::optional<Terrain> terrain_from_char(char c) {
  for (Terrain t : kTerrains) {
    if (terrain_char(t) == c) return t;
  }
  return std::nullopt;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

class LevelReader {
 public:
  LevelReader(std::string_view text, std::string source) : source_(std::move(source)) {
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines_.push_back(std::move(line));
    }
  }

  LevelDefinition read() {
    LevelDefinition level;
    std::map<std::string, std::pair<std::string, int>> header;
    std::size_t i = 0;
    for (; i < lines_.size(); ++i) {
      const std::string line = trim(lines_[i]);
      if (line.empty() || line.starts_with('#')) continue;
      if (line == "grid:") break;
      const auto colon = line.find(':');
      if (colon == std::string::npos) fail(i, "expected 'key: value'");
      std::string key = trim(line.substr(0, colon));
      if (header.contains(key)) fail(i, "duplicate field '" + key + "'");
      header[key] = {trim(line.substr(colon + 1)), static_cast<int>(i)};
    }
    if (i == lines_.size()) fail(i, "missing 'grid:' section");

    static const std::set<std::string> known{"id",      "name",    "tier",  "healthy",
                                             "required_portals", "stars", "village", "tower"};
    for (const auto& [key, value] : header) {
      if (!known.contains(key)) fail(static_cast<std::size_t>(value.second), "unknown field '" + key + "'");
    }
    auto field = [&](const std::string& key) -> std::pair<std::string, int> {
      const auto it = header.find(key);
      if (it == header.end()) fail(i, "missing field '" + key + "'");
      return it->second;
    };

    level.id = field("id").first;
    level.name = field("name").first;
    {
      const auto [value, line] = field("tier");
      const auto tier = lookup(value, kTiers);
      if (!tier) fail(static_cast<std::size_t>(line), "tier: unknown tier '" + value + "'");
      level.tier = *tier;
    }
    level.healthy_count = integers(field("healthy"), "healthy", 1)[0];
    level.required_portals = integers(field("required_portals"), "required_portals", 1)[0];
    if (header.contains("stars")) {
      const auto s = integers(header["stars"], "stars", 3);
      level.star_thresholds = StarThresholds{s[0], s[1], s[2]};
    }
    const auto v = integers(field("village"), "village", 2);
    level.board.village = TileCoord{v[0], v[1]};
    const auto t = integers(field("tower"), "tower", 2);
    level.board.tower = TileCoord{t[0], t[1]};

    ++i;
    for (int row = 0; row < kBoardSize; ++row, ++i) {
      if (i >= lines_.size()) fail(i, "grid: expected 16 rows");
      const std::string cells = trim(lines_[i]);
      if (cells.size() != kBoardSize) {
        fail(i, "grid row " + std::to_string(row) + ": expected 16 characters");
      }
      for (int x = 0; x < kBoardSize; ++x) {
        const auto kind = terrain_from_char(cells[static_cast<std::size_t>(x)]);
        if (!kind) {
          fail(i, "grid row " + std::to_string(row) + ": unknown terrain character '" +
                      cells[static_cast<std::size_t>(x)] + "'");
        }
        level.board.set(TileCoord{x, row}, *kind);
      }
    }

    while (i < lines_.size() && trim(lines_[i]).empty()) ++i;
    if (i >= lines_.size() || trim(lines_[i]) != "cut:") fail(i, "expected 'cut:' section");
    ++i;
    auto [cut_text, cut_line] = section(i);
    level.cut = program(cut_text, cut_line, "cut");

    while (i < lines_.size()) {
      const std::string head = trim(lines_[i]);
      const std::size_t head_line = i;
      std::istringstream words(head.substr(std::string_view("mutant:").size()));
      std::string id, count_word, extra;
      words >> id >> count_word;
      if (id.empty() || !count_word.starts_with("count=") || (words >> extra)) {
        fail(head_line, "expected 'mutant: <id> count=<n>'");
      }
      MutantSpawn spawn;
      spawn.mutant.id = id;
      try {
        spawn.count = std::stoi(count_word.substr(6));
      } catch (const std::exception&) {
        fail(head_line, "mutant " + id + ": count is not an integer");
      }
      ++i;
      auto [text, first_line] = section(i);
      spawn.mutant.program = program(text, first_line, "mutant " + id);
      spawn.mutant.descriptor = annotation(text, first_line, id);
      level.mutants.push_back(std::move(spawn));
    }
    return level;
  }

 private:
  [[noreturn]] void fail(std::size_t line, const std::string& msg) const {
    throw Error(source_ + ":" + std::to_string(line + 1) + ": " + msg);
  }

  std::vector<int> integers(const std::pair<std::string, int>& value, const std::string& key,
                            std::size_t count) const {
    std::istringstream in(value.first);
    std::vector<int> out;
    for (std::string word; in >> word;) {
      try {
        std::size_t used = 0;
        out.push_back(std::stoi(word, &used));
        if (used != word.size()) throw std::invalid_argument(word);
      } catch (const std::exception&) {
        fail(static_cast<std::size_t>(value.second), key + ": expected integer, got '" + word + "'");
      }
    }
    if (out.size() != count) {
      fail(static_cast<std::size_t>(value.second),
           key + ": expected " + std::to_string(count) + " integer(s)");
    }
    return out;
  }

  // Lines up to the next "mutant:" header or end of document.
  std::pair<std::string, std::size_t> section(std::size_t& i) const {
    const std::size_t first = i;
    std::string text;
    for (; i < lines_.size() && !trim(lines_[i]).starts_with("mutant:"); ++i) {
      text += lines_[i];
      text += '\n';
    }
    return {text, first};
  }

  Program program(const std::string& text, std::size_t first_line, const std::string& what) const {
    try {
      return parse_program(text);
    } catch (const ParseError& e) {
      fail(first_line + static_cast<std::size_t>(e.line()) - 1,
           what + ": " + e.message());
    } catch (const ValidationError& e) {
      fail(first_line, what + ": " + e.what());
    }
  }

  std::optional<MutationDescriptor> annotation(const std::string& text, std::size_t first_line,
                                               const std::string& id) const {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line) && trim(line).empty()) {
    }
    line = trim(line);
    constexpr std::string_view tag = "# mutation:";
    if (!line.starts_with(tag)) return std::nullopt;
    try {
      return parse_descriptor(trim(line.substr(tag.size())));
    } catch (const Error& e) {
      fail(first_line, "mutant " + id + ": " + e.what());
    }
  }

  std::vector<std::string> lines_;
  std::string source_;
};

}  // namespace detail

/// Parses a level document without checking level invariants.
inline LevelDefinition parse_level(std::string_view text, std::string source = "level") {
  return detail::LevelReader(text, std::move(source)).read();
}

inline std::string grid_row(const Board& board, int y) {
  std::string row;
  for (int x = 0; x < kBoardSize; ++x) row += terrain_char(board.at(TileCoord{x, y}));
  return row;
}

/// Canonical level document; parse_level(serialize_level(l)) == l.
inline std::string serialize_level(const LevelDefinition& level) {
  std::ostringstream out;
  out << "id: " << level.id << "\n"
      << "name: " << level.name << "\n"
      << "tier: " << to_string(level.tier) << "\n"
      << "healthy: " << level.healthy_count << "\n"
      << "required_portals: " << level.required_portals << "\n";
  if (level.star_thresholds) {
    const auto& s = *level.star_thresholds;
    out << "stars: " << s.one << " " << s.two << " " << s.three << "\n";
  }
  out << "village: " << level.board.village.x << " " << level.board.village.y << "\n"
      << "tower: " << level.board.tower.x << " " << level.board.tower.y << "\n"
      << "grid:\n";
  for (int y = 0; y < kBoardSize; ++y) out << grid_row(level.board, y) << "\n";
  out << "\ncut:\n" << to_text(level.cut);
  for (const auto& m : level.mutants) {
    out << "\nmutant: " << m.mutant.id << " count=" << m.count << "\n";
    if (m.mutant.descriptor) out << "# mutation: " << to_text(*m.mutant.descriptor) << "\n";
    out << to_text(m.mutant.program);
  }
  return out.str();
}

/// Every invariant violation, including solvability and the stored
/// required-portal count. Empty means the level is playable.
inline std::vector<std::string> validate_level(const LevelDefinition& level) {
  std::vector<std::string> v;
  if (level.id.empty()) v.push_back("level id is empty");
  for (auto& b : validate_board(level.board)) v.push_back(std::move(b));
  for (auto& p : validate_program(level.cut)) v.push_back("cut: " + p);

  if (level.healthy_count < 0) v.push_back("healthy count is negative");
  if (level.critter_count() != kCrittersPerLevel) {
    v.push_back("critter count ≠ 20 (got " + std::to_string(level.critter_count()) + ")");
  }
  if (level.star_thresholds) {
    const auto& s = *level.star_thresholds;
    if (!(0 <= s.one && s.one <= s.two && s.two <= s.three && s.three <= 1000)) {
      v.push_back("star thresholds must be ascending within 0..1000");
    }
  }
  std::set<std::string> ids;
  for (const auto& m : level.mutants) {
    if (!ids.insert(m.mutant.id).second) v.push_back("duplicate mutant id " + m.mutant.id);
    if (m.count < 1) v.push_back("mutant " + m.mutant.id + ": spawn count must be positive");
    for (auto& p : validate_program(m.mutant.program)) {
      v.push_back("mutant " + m.mutant.id + ": " + p);
    }
    if (m.mutant.program == level.cut) v.push_back("identical mutant " + m.mutant.id);
    if (m.mutant.descriptor) {
      try {
        if (apply_mutation(level.cut, *m.mutant.descriptor) != m.mutant.program) {
          v.push_back("mutant " + m.mutant.id + ": program does not match its mutation");
        }
      } catch (const Error& e) {
        v.push_back("mutant " + m.mutant.id + ": " + e.what());
      }
    }
  }

  if (!validate_board(level.board).empty() || !validate_program(level.cut).empty()) return v;
  const DiscriminationReport report = analyze_level(level);
  for (const auto& id : report.equivalent) {
    if (level.find_mutant(id)->program != level.cut) v.push_back("equivalent mutant " + id);
  }
  for (const auto& id : report.undetectable) {
    v.push_back("unsolvable: mutant " + id + " has no discriminating tile");
  }
  if (report.solvable() && report.minimal_count != level.required_portals) {
    v.push_back("required_portals mismatch: level says " + std::to_string(level.required_portals) +
                ", minimum is " + std::to_string(report.minimal_count));
  }
  return v;
}

/// Parse plus full validation; throws ValidationError listing every violation.
inline LevelDefinition load_level(std::string_view document, std::string source = "level") {
  LevelDefinition level = parse_level(document, std::move(source));
  if (auto v = validate_level(level); !v.empty()) throw ValidationError(std::move(v));
  return level;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline constexpr std::string_view kLevelExtension = ".lvl";

/// Accepts the path as given or with the level extension appended.
inline std::filesystem::path resolve_level_path(const std::filesystem::path& path) {
  if (std::filesystem::is_regular_file(path)) return path;
  auto with_ext = path;
  with_ext += kLevelExtension;
  if (std::filesystem::is_regular_file(with_ext)) return with_ext;
  throw Error("level file not found: " + path.string());
}

inline LevelDefinition parse_level_file(const std::filesystem::path& path) {
  const auto resolved = resolve_level_path(path);
  return parse_level(read_file(resolved), resolved.filename().string());
}

inline LevelDefinition load_level_file(const std::filesystem::path& path) {
  const auto resolved = resolve_level_path(path);
  return load_level(read_file(resolved), resolved.filename().string());
}

/// All `*.lvl` files in a directory, validated, ordered by id.
inline std::vector<LevelDefinition> load_level_directory(const std::filesystem::path& dir) {
  std::vector<LevelDefinition> levels;
  if (!std::filesystem::is_directory(dir)) throw Error("not a directory: " + dir.string());
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == kLevelExtension) {
      levels.push_back(load_level_file(entry.path()));
    }
  }
  std::sort(levels.begin(), levels.end(),
            [](const LevelDefinition& a, const LevelDefinition& b) { return a.id < b.id; });
  return levels;
}

}  // namespace critters
