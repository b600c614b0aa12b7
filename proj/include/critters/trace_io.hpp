#pragma once

#include <sstream>
#include <string>

#include "json.hpp"

#include "critters/error.hpp"
#include "critters/simulation.hpp"

namespace critters {

// One JSON object per line. Field order is fixed:
//   {"event":"spawn","tick":0,"critter":3,"kind":"healthy"|"mutant","mutant":"m1","x":..,"y":..,"state":{..}}
//   {"event":"move","tick":5,"critter":3,"from":[x,y],"to":[x,y],"state":{..}}
//   {"event":"check","tick":5,"critter":3,"x":..,"y":..,"passed":true}
//   {"event":"collected","tick":5,"critter":3,"x":..,"y":..}
//   {"event":"finished","tick":9,"critter":3}
//   {"event":"end","tick":48,"outcome":{"mutants_collected":..,"mutants_escaped":..,
//     "healthy_finished":..,"healthy_collected":..,"portals_used":..}}
// state = {"shirt":"red","hat":"white","hair":"black","vars":{"name":int,...}}

using ojson = nlohmann::ordered_json;

inline ojson to_json(const CritterState& s) {
  ojson j;
  for (Attribute a : kAttributes) j[std::string(to_string(a))] = std::string(to_string(s.get(a)));
  ojson vars = ojson::object();
  for (const auto& [name, value] : s.variables) vars[name] = value;
  j["vars"] = std::move(vars);
  return j;
}

inline ojson to_json(const Outcome& o) {
  return ojson{{"mutants_collected", o.mutants_collected},
               {"mutants_escaped", o.mutants_escaped},
               {"healthy_finished", o.healthy_finished},
               {"healthy_collected", o.healthy_collected},
               {"portals_used", o.portals_used}};
}

inline ojson to_json(const TraceEvent& e) {
  return std::visit(
      [](const auto& v) -> ojson {
        using T = std::decay_t<decltype(v)>;
        ojson j;
        if constexpr (std::is_same_v<T, event::Spawn>) {
          j["event"] = "spawn";
          j["tick"] = v.tick;
          j["critter"] = v.critter;
          j["kind"] = v.mutant.empty() ? "healthy" : "mutant";
          if (!v.mutant.empty()) j["mutant"] = v.mutant;
          j["x"] = v.tile.x;
          j["y"] = v.tile.y;
          j["state"] = to_json(v.state);
        } else if constexpr (std::is_same_v<T, event::Move>) {
          j["event"] = "move";
          j["tick"] = v.tick;
          j["critter"] = v.critter;
          j["from"] = {v.from.x, v.from.y};
          j["to"] = {v.to.x, v.to.y};
          j["state"] = to_json(v.state);
        } else if constexpr (std::is_same_v<T, event::PortalCheck>) {
          j["event"] = "check";
          j["tick"] = v.tick;
          j["critter"] = v.critter;
          j["x"] = v.tile.x;
          j["y"] = v.tile.y;
          j["passed"] = v.passed;
        } else if constexpr (std::is_same_v<T, event::Collected>) {
          j["event"] = "collected";
          j["tick"] = v.tick;
          j["critter"] = v.critter;
          j["x"] = v.tile.x;
          j["y"] = v.tile.y;
        } else if constexpr (std::is_same_v<T, event::Finished>) {
          j["event"] = "finished";
          j["tick"] = v.tick;
          j["critter"] = v.critter;
        } else {
          j["event"] = "end";
          j["tick"] = v.tick;
          j["outcome"] = to_json(v.outcome);
        }
        return j;
      },
      e);
}

inline ojson to_json(const Trace& trace) {
  ojson arr = ojson::array();
  for (const auto& e : trace.events) arr.push_back(to_json(e));
  return arr;
}

inline std::string to_jsonl(const Trace& trace) {
  std::string out;
  for (const auto& e : trace.events) {
    out += to_json(e).dump();
    out += '\n';
  }
  return out;
}

inline CritterState state_from_json(const ojson& j) {
  CritterState s;
  for (Attribute a : kAttributes) {
    const auto c = color_from(j.at(std::string(to_string(a))).get<std::string>());
    if (!c) throw Error("malformed trace: unknown color");
    s.set(a, *c);
  }
  for (const auto& [name, value] : j.at("vars").items()) s.variables[name] = value.get<int>();
  return s;
}

inline Outcome outcome_from_json(const ojson& j) {
  return Outcome{j.at("mutants_collected").get<int>(), j.at("mutants_escaped").get<int>(),
                 j.at("healthy_finished").get<int>(), j.at("healthy_collected").get<int>(),
                 j.at("portals_used").get<int>()};
}

inline TraceEvent event_from_json(const ojson& j) {
  const auto kind = j.at("event").get<std::string>();
  const int tick = j.at("tick").get<int>();
  auto tile = [&](const char* key) {
    const auto& a = j.at(key);
    return TileCoord{a.at(0).get<int>(), a.at(1).get<int>()};
  };
  auto xy = [&] { return TileCoord{j.at("x").get<int>(), j.at("y").get<int>()}; };
  if (kind == "spawn") {
    return event::Spawn{tick, j.at("critter").get<int>(), j.value("mutant", std::string{}), xy(),
                        state_from_json(j.at("state"))};
  }
  if (kind == "move") {
    return event::Move{tick, j.at("critter").get<int>(), tile("from"), tile("to"),
                       state_from_json(j.at("state"))};
  }
  if (kind == "check") {
    return event::PortalCheck{tick, j.at("critter").get<int>(), xy(), j.at("passed").get<bool>()};
  }
  if (kind == "collected") return event::Collected{tick, j.at("critter").get<int>(), xy()};
  if (kind == "finished") return event::Finished{tick, j.at("critter").get<int>()};
  if (kind == "end") return event::End{tick, outcome_from_json(j.at("outcome"))};
  throw Error("malformed trace: unknown event '" + kind + "'");
}

inline Trace trace_from_jsonl(std::string_view text) {
  Trace trace;
  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.empty()) continue;
    try {
      trace.events.push_back(event_from_json(ojson::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error("malformed trace: line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return trace;
}

}  // namespace critters
