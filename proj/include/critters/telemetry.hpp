#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "critters/error.hpp"

namespace critters {

enum class TelemetryKind : std::uint8_t {
  level_start,
  portal_placed,
  portal_removed,
  run_started,
  mutant_killed,
  healthy_collected,
  healthy_finished,
  level_end,
};

inline constexpr std::array kTelemetryKinds{
    TelemetryKind::level_start,   TelemetryKind::portal_placed,     TelemetryKind::portal_removed,
    TelemetryKind::run_started,   TelemetryKind::mutant_killed,     TelemetryKind::healthy_collected,
    TelemetryKind::healthy_finished, TelemetryKind::level_end};

inline constexpr std::string_view to_string(TelemetryKind k) {
  constexpr std::array<std::string_view, 8> names{
      "level_start",   "portal_placed",     "portal_removed",   "run_started",
      "mutant_killed", "healthy_collected", "healthy_finished", "level_end"};
  return names[static_cast<std::size_t>(k)];
}

inline std::optional<TelemetryKind> telemetry_kind_from(std::string_view text) {
  for (TelemetryKind k : kTelemetryKinds) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

// Log line layout, one object per line, fields in this order:
//   {"ts":<ms since epoch>,"player":"anna","level":"level01","kind":"<kind>","payload":{...}}
// Payload fields by kind (all carry "session"):
//   level_start                      {}
//   portal_placed / portal_removed   "x","y","predicate"
//   run_started                      "run","seed","portals"
//   mutant_killed / healthy_collected "run","critter","x","y" (+"mutant" for mutants)
//   healthy_finished                 "run","critter"
//   level_end                        "run","seed","points","stars","required_portals",
//                                    "mutants_total","healthy_total","outcome"{...}
struct TelemetryEvent {
  std::int64_t timestamp_ms = 0;
  std::string player;
  std::string level;
  TelemetryKind kind = TelemetryKind::level_start;
  nlohmann::ordered_json payload = nlohmann::ordered_json::object();

  bool operator==(const TelemetryEvent&) const = default;
};

inline nlohmann::ordered_json to_json(const TelemetryEvent& e) {
  return nlohmann::ordered_json{{"ts", e.timestamp_ms},
                                {"player", e.player},
                                {"level", e.level},
                                {"kind", std::string(to_string(e.kind))},
                                {"payload", e.payload}};
}

inline TelemetryEvent telemetry_from_json(const nlohmann::ordered_json& j) {
  try {
    TelemetryEvent e;
    e.timestamp_ms = j.at("ts").get<std::int64_t>();
    e.player = j.at("player").get<std::string>();
    e.level = j.at("level").get<std::string>();
    const auto kind_text = j.at("kind").get<std::string>();
    const auto kind = telemetry_kind_from(kind_text);
    if (!kind) throw Error("unknown telemetry kind '" + kind_text + "'");
    e.kind = *kind;
    if (j.contains("payload")) e.payload = j.at("payload");
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(std::string("malformed telemetry record: ") + ex.what());
  }
}

inline std::string to_jsonl(const std::vector<TelemetryEvent>& events) {
  std::string out;
  for (const auto& e : events) {
    out += to_json(e).dump();
    out += '\n';
  }
  return out;
}

/// Blank lines are skipped; a malformed line reports its 1-based number.
inline std::vector<TelemetryEvent> telemetry_from_jsonl(std::string_view text) {
  std::vector<TelemetryEvent> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(telemetry_from_json(nlohmann::ordered_json::parse(line)));
    } catch (const nlohmann::json::exception& ex) {
      throw Error("telemetry line " + std::to_string(number) + ": " + ex.what());
    } catch (const Error& ex) {
      throw Error("telemetry line " + std::to_string(number) + ": " + ex.what());
    }
  }
  return out;
}

}  // namespace critters
