#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "critters/error.hpp"
#include "critters/level.hpp"
#include "critters/portals.hpp"
#include "critters/scoring.hpp"
#include "critters/simulation.hpp"
#include "critters/telemetry.hpp"

namespace critters {

/// Milliseconds since the Unix epoch.
using Clock = std::function<std::int64_t()>;

inline std::int64_t system_clock_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

// 53 bits, so seeds survive a round trip through JavaScript numbers.
inline std::uint64_t random_seed() {
  std::random_device rd;
  const std::uint64_t bits = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  return bits & ((std::uint64_t{1} << 53) - 1);
}

struct RunRecord {
  std::uint64_t seed = 0;
  Outcome outcome;
  ScoreResult score;
  bool operator==(const RunRecord&) const = default;
};

struct Session {
  std::string id;
  std::string player;
  std::string level_id;
  std::vector<PortalPlacement> portals;
  std::int64_t started_at = 0;
  std::vector<RunRecord> runs;
  bool operator==(const Session&) const = default;
};

struct RunResponse {
  Session session;
  int run = 0;
  std::uint64_t seed = 0;
  Trace trace;
  Outcome outcome;
  ScoreResult score;
};

struct LeaderboardEntry {
  std::string player;
  int total_points = 0;
  int total_stars = 0;
  bool operator==(const LeaderboardEntry&) const = default;
};

inline constexpr std::array<std::string_view, 3> kUiEventKinds{"pause", "speed", "reset"};

struct StoreOptions {
  std::optional<std::filesystem::path> data_dir;  // no persistence when empty
  Clock clock = system_clock_ms;
  std::function<std::uint64_t()> seed_source = random_seed;
};

/// Sessions, runs and the leaderboard, all derived from an append-only
/// telemetry log. Every mutation is expressed as events that are first
/// written to the log and then applied, so replaying the log on start-up
/// rebuilds exactly the same state.
class SessionStore {
 public:
  static constexpr const char* kEventLog = "events.jsonl";
  static constexpr const char* kUiLog = "ui_events.jsonl";

  explicit SessionStore(std::vector<LevelDefinition> levels, StoreOptions options = {})
      : levels_(std::move(levels)), options_(std::move(options)) {
    if (!options_.data_dir) return;
    std::filesystem::create_directories(*options_.data_dir);
    const auto log = *options_.data_dir / kEventLog;
    if (std::filesystem::exists(log)) {
      std::ifstream in(log, std::ios::binary);
      const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      for (auto& e : telemetry_from_jsonl(text)) {
        apply(e);
        events_.push_back(std::move(e));
      }
    }
    const auto ui = *options_.data_dir / kUiLog;
    if (std::filesystem::exists(ui)) {
      std::ifstream in(ui);
      std::string line;
      while (std::getline(in, line)) {
        if (!line.empty()) ui_events_.push_back(nlohmann::ordered_json::parse(line));
      }
    }
    log_.open(log, std::ios::app | std::ios::binary);
    ui_log_.open(ui, std::ios::app | std::ios::binary);
    if (!log_ || !ui_log_) throw Error("cannot open event log in " + options_.data_dir->string());
  }

  const std::vector<LevelDefinition>& levels() const { return levels_; }

  const LevelDefinition& level(std::string_view id) const {
    for (const auto& l : levels_) {
      if (l.id == id) return l;
    }
    throw NotFound("unknown level");
  }

  std::string anonymous_name() {
    std::lock_guard lock(mu_);
    static constexpr char kHex[] = "0123456789abcdef";
    std::uint64_t bits = options_.seed_source();
    std::string name = "guest-";
    for (int i = 0; i < 6; ++i, bits >>= 4) name += kHex[bits & 15];
    return name;
  }

  Session create_session(const std::string& player, const std::string& level_id) {
    if (player.empty()) throw Error("player name required");
    level(level_id);
    std::lock_guard lock(mu_);
    TelemetryEvent e = make_event(player, level_id, TelemetryKind::level_start);
    const std::string id = "s" + std::to_string(sessions_.size() + 1);
    e.payload["session"] = id;
    commit({std::move(e)});
    return sessions_.at(id);
  }

  std::optional<Session> session(const std::string& id) const {
    std::lock_guard lock(mu_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) return std::nullopt;
    return it->second;
  }

  /// Replaces the session's portals. Validation happens against the level
  /// board before anything is logged; the log receives only the difference.
  Session set_portals(const std::string& id, const std::vector<PortalPlacement>& portals) {
    std::lock_guard lock(mu_);
    const Session& s = find(id);
    validate_portals(level(s.level_id).board, portals);

    std::vector<TelemetryEvent> batch;
    auto portal_event = [&](TelemetryKind kind, const PortalPlacement& p) {
      TelemetryEvent e = make_event(s.player, s.level_id, kind);
      e.payload["session"] = s.id;
      e.payload["x"] = p.tile.x;
      e.payload["y"] = p.tile.y;
      e.payload["predicate"] = to_text(p.predicate);
      batch.push_back(std::move(e));
    };
    for (const auto& old : s.portals) {
      if (std::find(portals.begin(), portals.end(), old) == portals.end()) {
        portal_event(TelemetryKind::portal_removed, old);
      }
    }
    for (const auto& p : portals) {
      if (std::find(s.portals.begin(), s.portals.end(), p) == s.portals.end()) {
        portal_event(TelemetryKind::portal_placed, p);
      }
    }
    commit(std::move(batch));
    return sessions_.at(id);
  }

  /// Simulates outside the lock; the run is numbered and logged on commit.
  RunResponse run_session(const std::string& id, std::optional<std::uint64_t> seed = std::nullopt) {
    std::vector<PortalPlacement> portals;
    const LevelDefinition* lvl = nullptr;
    {
      std::lock_guard lock(mu_);
      const Session& s = find(id);
      portals = s.portals;
      lvl = &level(s.level_id);
      if (!seed) seed = options_.seed_source();
    }
    SimConfig config;
    config.total_critters = lvl->critter_count();
    config.seed = *seed;
    RunResult result = run(*lvl, portals, config);
    const ScoreResult score = compute_score(result.outcome, lvl->required_portals, lvl->thresholds());

    std::lock_guard lock(mu_);
    const Session& s = find(id);
    const int run_index = static_cast<int>(s.runs.size()) + 1;
    std::vector<TelemetryEvent> batch;
    auto add = [&](TelemetryKind kind) -> nlohmann::ordered_json& {
      TelemetryEvent e = make_event(s.player, s.level_id, kind);
      e.payload["session"] = s.id;
      e.payload["run"] = run_index;
      batch.push_back(std::move(e));
      return batch.back().payload;
    };
    auto& started = add(TelemetryKind::run_started);
    started["seed"] = *seed;
    started["portals"] = static_cast<int>(portals.size());

    std::map<int, std::string> mutant_of;
    for (const auto& ev : result.trace.events) {
      if (const auto* sp = std::get_if<event::Spawn>(&ev)) {
        mutant_of[sp->critter] = sp->mutant;
      } else if (const auto* c = std::get_if<event::Collected>(&ev)) {
        const std::string& mutant = mutant_of[c->critter];
        auto& p = add(mutant.empty() ? TelemetryKind::healthy_collected : TelemetryKind::mutant_killed);
        p["critter"] = c->critter;
        p["x"] = c->tile.x;
        p["y"] = c->tile.y;
        if (!mutant.empty()) p["mutant"] = mutant;
      } else if (const auto* f = std::get_if<event::Finished>(&ev)) {
        if (mutant_of[f->critter].empty()) add(TelemetryKind::healthy_finished)["critter"] = f->critter;
      }
    }
    auto& end = add(TelemetryKind::level_end);
    end["seed"] = *seed;
    end["points"] = score.points;
    end["stars"] = score.stars;
    end["base_points"] = score.base_points;
    end["portal_penalty"] = score.portal_penalty;
    end["required_portals"] = lvl->required_portals;
    end["mutants_total"] = lvl->mutant_count();
    end["healthy_total"] = lvl->healthy_count;
    end["outcome"] = {{"mutants_collected", result.outcome.mutants_collected},
                      {"mutants_escaped", result.outcome.mutants_escaped},
                      {"healthy_finished", result.outcome.healthy_finished},
                      {"healthy_collected", result.outcome.healthy_collected},
                      {"portals_used", result.outcome.portals_used}};
    commit(std::move(batch));

    RunResponse response;
    response.session = sessions_.at(id);
    response.run = run_index;
    response.seed = *seed;
    response.trace = std::move(result.trace);
    response.outcome = result.outcome;
    response.score = score;
    return response;
  }

  /// Per player: sum of best points per level (with that run's stars).
  /// Ordered by points, then stars, then name. `top` = 0 means everyone.
  std::vector<LeaderboardEntry> leaderboard(std::size_t top = 0) const {
    std::lock_guard lock(mu_);
    std::map<std::string, std::map<std::string, std::pair<int, int>>> best;
    for (const auto& [id, s] : sessions_) {
      for (const auto& r : s.runs) {
        auto [it, fresh] = best[s.player].try_emplace(s.level_id, r.score.points, r.score.stars);
        if (!fresh) it->second = std::max(it->second, std::pair{r.score.points, r.score.stars});
      }
    }
    std::vector<LeaderboardEntry> out;
    for (const auto& [player, levels] : best) {
      LeaderboardEntry e{player, 0, 0};
      for (const auto& [level_id, score] : levels) {
        e.total_points += score.first;
        e.total_stars += score.second;
      }
      out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      if (a.total_points != b.total_points) return a.total_points > b.total_points;
      if (a.total_stars != b.total_stars) return a.total_stars > b.total_stars;
      return a.player < b.player;
    });
    if (top > 0 && out.size() > top) out.resize(top);
    return out;
  }

  /// Client playback controls, kept apart from the game telemetry.
  void record_ui_event(const std::string& player, const std::string& level_id,
                       const std::string& kind, nlohmann::ordered_json payload = {}) {
    if (std::find(kUiEventKinds.begin(), kUiEventKinds.end(), kind) == kUiEventKinds.end()) {
      throw Error("unknown ui event kind '" + kind + "'");
    }
    std::lock_guard lock(mu_);
    nlohmann::ordered_json j{{"ts", options_.clock()},
                             {"player", player},
                             {"level", level_id},
                             {"kind", kind},
                             {"payload", payload.is_null() ? nlohmann::ordered_json::object() : payload}};
    if (ui_log_.is_open()) {
      ui_log_ << j.dump() << '\n';
      ui_log_.flush();
    }
    ui_events_.push_back(std::move(j));
  }

  std::vector<TelemetryEvent> events() const {
    std::lock_guard lock(mu_);
    return events_;
  }

  std::vector<nlohmann::ordered_json> ui_events() const {
    std::lock_guard lock(mu_);
    return ui_events_;
  }

 private:
  const Session& find(const std::string& id) const {
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) throw NotFound("unknown session " + id);
    return it->second;
  }

  TelemetryEvent make_event(const std::string& player, const std::string& level_id,
                            TelemetryKind kind) const {
    TelemetryEvent e;
    e.timestamp_ms = options_.clock();
    e.player = player;
    e.level = level_id;
    e.kind = kind;
    return e;
  }

  // Caller holds mu_.
  void commit(std::vector<TelemetryEvent> batch) {
    if (log_.is_open()) {
      log_ << to_jsonl(batch);
      log_.flush();
    }
    for (auto& e : batch) {
      apply(e);
      events_.push_back(std::move(e));
    }
  }

  void apply(const TelemetryEvent& e) {
    const std::string id = e.payload.value("session", "");
    if (e.kind == TelemetryKind::level_start) {
      sessions_[id] = Session{id, e.player, e.level, {}, e.timestamp_ms, {}};
      return;
    }
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) return;
    Session& s = it->second;
    switch (e.kind) {
      case TelemetryKind::portal_placed:
      case TelemetryKind::portal_removed: {
        PortalPlacement p{{e.payload.at("x").get<int>(), e.payload.at("y").get<int>()},
                          parse_predicate(e.payload.at("predicate").get<std::string>())};
        if (e.kind == TelemetryKind::portal_removed) {
          s.portals.erase(std::remove(s.portals.begin(), s.portals.end(), p), s.portals.end());
        } else {
          s.portals.push_back(std::move(p));
        }
        break;
      }
      case TelemetryKind::level_end: {
        RunRecord r;
        r.seed = e.payload.at("seed").get<std::uint64_t>();
        const auto& o = e.payload.at("outcome");
        r.outcome = Outcome{o.at("mutants_collected").get<int>(), o.at("mutants_escaped").get<int>(),
                            o.at("healthy_finished").get<int>(), o.at("healthy_collected").get<int>(),
                            o.at("portals_used").get<int>()};
        r.score = ScoreResult{e.payload.at("points").get<int>(), e.payload.at("stars").get<int>(),
                              e.payload.value("base_points", 0), e.payload.value("portal_penalty", 0)};
        s.runs.push_back(r);
        break;
      }
      default:
        break;
    }
  }

  std::vector<LevelDefinition> levels_;
  StoreOptions options_;
  mutable std::mutex mu_;
  std::map<std::string, Session> sessions_;
  std::vector<TelemetryEvent> events_;
  std::vector<nlohmann::ordered_json> ui_events_;
  std::ofstream log_;
  std::ofstream ui_log_;
};

}  // namespace critters
