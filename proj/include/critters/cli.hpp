#pragma once

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "critters/analytics.hpp"
#include "critters/http.hpp"
#include "critters/json_views.hpp"
#include "critters/levels.hpp"
#include "critters/portals.hpp"
#include "critters/scoring.hpp"
#include "critters/simulation.hpp"
#include "critters/trace_io.hpp"

namespace critters {

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("cannot write " + path.string());
}

inline int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  const LevelDefinition level = parse_level_file(path);
  const auto violations = validate_level(level);
  if (violations.empty()) {
    out << "ok: " << level.id << "\n";
    return 0;
  }
  for (const auto& v : violations) err << v << "\n";
  return 1;
}

inline int cmd_adequacy(const std::string& path, const std::string& format, std::ostream& out,
                        std::ostream& err) {
  const LevelDefinition level = parse_level_file(path);
  if (auto v = validate_board(level.board); !v.empty()) throw ValidationError(std::move(v));
  const DiscriminationReport report = analyze_level(level);
  if (format == "json") {
    ojson doc{{"level", level.id}};
    doc.update(to_json(report));
    out << doc.dump(2) << "\n";
  } else {
    out << "level: " << level.id << "\n"
        << "descent paths: " << report.path_count << "\n"
        << "minimal portal count: " << report.minimal_count << (report.exact ? "" : " (greedy)")
        << "\n";
    for (TileCoord t : report.witness) {
      out << "  " << t.x << "," << t.y << ": " << to_text(*report.oracle_at(t)) << "\n";
    }
    for (const auto& m : report.discriminating) {
      out << "mutant " << m.mutant << ": " << m.tiles.size() << " discriminating tiles";
      if (m.evading_paths > 0) out << ", escapes on " << m.evading_paths << " paths";
      out << "\n";
    }
    for (const auto& id : report.equivalent) out << "mutant " << id << ": equivalent\n";
  }
  if (!report.solvable()) {
    err << "unsolvable: mutant " << report.undetectable.front()
        << " has no discriminating tile\n";
    return 1;
  }
  return 0;
}

struct PlayArgs {
  std::string level;
  std::optional<std::string> portals;
  std::uint64_t seed = 0;
  std::optional<std::string> trace;
};

inline int cmd_play(const PlayArgs& args, std::ostream& out) {
  const LevelDefinition level = load_level_file(args.level);
  std::vector<PortalPlacement> portals;
  if (args.portals) portals = parse_portals(read_file(*args.portals));
  SimConfig config;
  config.total_critters = level.critter_count();
  config.seed = args.seed;
  const RunResult result = run(level, portals, config);
  const ScoreResult score = compute_score(result.outcome, level.required_portals, level.thresholds());
  if (args.trace) write_file(*args.trace, to_jsonl(result.trace));
  const Outcome& o = result.outcome;
  out << "mutants_collected: " << o.mutants_collected << "\n"
      << "mutants_escaped: " << o.mutants_escaped << "\n"
      << "healthy_finished: " << o.healthy_finished << "\n"
      << "healthy_collected: " << o.healthy_collected << "\n"
      << "portals_used: " << o.portals_used << " (required " << level.required_portals << ")\n"
      << "base_points: " << score.base_points << ", portal_penalty: " << score.portal_penalty
      << "\n"
      << "points: " << score.points << ", stars: " << score.stars << "\n";
  return 0;
}

struct ServeArgs {
  std::optional<std::string> host;
  std::optional<int> port;
  std::optional<std::string> data_dir;
  std::optional<std::string> level_dir;
  std::optional<std::string> static_dir;
};

inline int cmd_serve(const ServeArgs& args, std::ostream& err) {
  ServeConfig config = serve_config_from_env();
  if (args.host) config.host = *args.host;
  if (args.port) config.port = *args.port;
  if (args.data_dir) config.data_dir = *args.data_dir;
  if (args.level_dir) config.level_dir = *args.level_dir;
  if (args.static_dir) config.static_dir = *args.static_dir;

  StoreOptions options;
  options.data_dir = config.data_dir;
  SessionStore store(load_level_directory(config.level_dir), options);
  httplib::Server server;
  register_routes(server, store);
  if (config.static_dir && !server.set_mount_point("/", config.static_dir->string())) {
    throw Error("static directory not found: " + config.static_dir->string());
  }
  err << "serving " << store.levels().size() << " levels on http://" << config.host << ":"
      << config.port << "\n";
  if (!server.listen(config.host, config.port)) {
    throw Error("cannot listen on " + config.host + ":" + std::to_string(config.port));
  }
  return 0;
}

struct AnalyzeArgs {
  std::string log;
  std::string format = "text";
  std::optional<std::string> csv;
  std::optional<double> timeseries_minutes;
};

inline int cmd_analyze(const AnalyzeArgs& args, std::ostream& out) {
  const auto events = telemetry_from_jsonl(read_file(args.log));
  if (args.csv) write_file(*args.csv, export_csv(events));
  if (args.timeseries_minutes) {
    const auto width = static_cast<std::int64_t>(*args.timeseries_minutes * 60'000);
    if (width <= 0) throw Error("bin width must be positive");
    std::vector<TimeSeries> series{time_series(events, width)};
    for (int g = 1; g <= 3; ++g) series.push_back(time_series(events, width, {}, g));
    out << time_series_csv(series);
  } else if (args.format == "csv") {
    out << export_csv(events);
  } else {
    out << analytics_report(events);
  }
  return 0;
}

}  // namespace detail

/// Entry point behind the `critters` binary. `args` excludes the program
/// name. Data goes to `out`, diagnostics to `err`; returns the exit status.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Code Critters: levels, adequacy, headless play, service and analytics",
               "critters"};
  app.require_subcommand(1);

  std::string level_path;
  auto* validate = app.add_subcommand("validate", "check a level file against every invariant");
  validate->add_option("level", level_path, "level file (extension optional)")->required();

  std::string format = "json";
  auto* adequacy = app.add_subcommand("adequacy", "print the discrimination report of a level");
  adequacy->add_option("level", level_path, "level file (extension optional)")->required();
  adequacy->add_option("--format", format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));

  detail::PlayArgs play_args;
  auto* play = app.add_subcommand("play", "run one level headlessly and print the score");
  play->add_option("level", play_args.level, "level file (extension optional)")->required();
  play->add_option("--portals", play_args.portals, "portal file, one 'x,y: pass if ...' per line");
  play->add_option("--seed", play_args.seed, "simulation seed");
  play->add_option("--trace", play_args.trace, "write the JSONL trace to this file");

  detail::ServeArgs serve_args;
  auto* serve = app.add_subcommand("serve", "start the HTTP service");
  serve->add_option("--host", serve_args.host, "bind address (env CRITTERS_BIND)");
  serve->add_option("--port", serve_args.port, "port (env CRITTERS_BIND)");
  serve->add_option("--data-dir", serve_args.data_dir, "event log directory (env CRITTERS_DATA_DIR)");
  serve->add_option("--level-dir", serve_args.level_dir, "level directory (env CRITTERS_LEVEL_DIR)");
  serve->add_option("--static-dir", serve_args.static_dir, "web client files (env CRITTERS_STATIC_DIR)");

  detail::AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand("analyze", "study metrics from a telemetry log");
  analyze->add_option("log", analyze_args.log, "telemetry JSONL log")->required();
  analyze->add_option("--format", analyze_args.format, "text or csv")
      ->check(CLI::IsMember({"text", "csv"}));
  analyze->add_option("--csv", analyze_args.csv, "also write the per-attempt CSV here");
  analyze->add_option("--timeseries", analyze_args.timeseries_minutes,
                      "emit per-bin series with this bin width in minutes");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*validate) return detail::cmd_validate(level_path, out, err);
    if (*adequacy) return detail::cmd_adequacy(level_path, format, out, err);
    if (*play) return detail::cmd_play(play_args, out);
    if (*serve) return detail::cmd_serve(serve_args, err);
    if (*analyze) return detail::cmd_analyze(analyze_args, out);
  } catch (const ValidationError& e) {
    for (const auto& v : e.violations()) err << v << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace critters
