#pragma once

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

#include "httplib.h"
#include "json.hpp"

#include "critters/analytics.hpp"
#include "critters/json_views.hpp"
#include "critters/service.hpp"

#ifndef CRITTERS_DEFAULT_LEVEL_DIR
#define CRITTERS_DEFAULT_LEVEL_DIR "levels"
#endif

namespace critters {

// Routes (all bodies JSON unless noted):
//   GET  /api/levels                  {"tiers":[{"tier":..,"levels":[summary..]}]}
//   GET  /api/levels/{id}             level document, mutant programs withheld
//   POST /api/sessions                {"player":"anna","level":"level01"} → session
//                                     ("player" omitted → generated guest name)
//   GET  /api/sessions/{id}           session
//   PUT  /api/sessions/{id}/portals   {"portals":[{"x":3,"y":7,"predicate":"pass if .."}]} → session
//   POST /api/sessions/{id}/run       {"seed":7} or empty → {session,run,seed,outcome,score,trace}
//   GET  /api/leaderboard?top=N       {"entries":[{rank,player,total_points,total_stars}]}
//   POST /api/telemetry               {"player","level","kind":"pause"|"speed"|"reset","payload"?}
//   GET  /api/analytics/export.csv    text/csv
// Errors: {"error":"message"} with 400 (bad input) or 404 (unknown id).

namespace detail {

inline void send_json(httplib::Response& res, const ojson& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

inline ojson parse_body(const httplib::Request& req) {
  if (req.body.find_first_not_of(" \t\r\n") == std::string::npos) return ojson::object();
  ojson body = ojson::parse(req.body);
  if (!body.is_object()) throw Error("request body must be a JSON object");
  return body;
}

template <class Handler>
httplib::Server::Handler guarded(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const NotFound& e) {
      send_json(res, ojson{{"error", e.what()}}, 404);
    } catch (const Error& e) {
      send_json(res, ojson{{"error", e.what()}}, 400);
    } catch (const nlohmann::json::exception& e) {
      send_json(res, ojson{{"error", std::string("bad request body: ") + e.what()}}, 400);
    }
  };
}

}  // namespace detail

inline void register_routes(httplib::Server& server, SessionStore& store) {
  using detail::guarded;
  using detail::send_json;

  server.Get("/api/levels", guarded([&store](const auto&, auto& res) {
               send_json(res, levels_index_json(store.levels()));
             }));

  server.Get(R"(/api/levels/([^/]+))", guarded([&store](const auto& req, auto& res) {
               send_json(res, level_document_json(store.level(req.matches[1].str())));
             }));

  server.Post("/api/sessions", guarded([&store](const auto& req, auto& res) {
                const ojson body = detail::parse_body(req);
                if (!body.contains("level") || !body["level"].is_string()) {
                  throw Error("level required");
                }
                std::string player;
                if (!body.contains("player") || body["player"].is_null()) {
                  player = store.anonymous_name();
                } else {
                  player = body["player"].template get<std::string>();
                }
                send_json(res, to_json(store.create_session(player, body["level"].template get<std::string>())),
                          201);
              }));

  server.Get(R"(/api/sessions/([^/]+))", guarded([&store](const auto& req, auto& res) {
               const auto s = store.session(req.matches[1].str());
               if (!s) throw NotFound("unknown session " + req.matches[1].str());
               send_json(res, to_json(*s));
             }));

  server.Put(R"(/api/sessions/([^/]+)/portals)", guarded([&store](const auto& req, auto& res) {
               const ojson body = detail::parse_body(req);
               if (!body.contains("portals") || !body["portals"].is_array()) {
                 throw Error("portals array required");
               }
               std::vector<PortalPlacement> portals;
               for (const auto& p : body["portals"]) portals.push_back(portal_from_json(p));
               send_json(res, to_json(store.set_portals(req.matches[1].str(), portals)));
             }));

  server.Post(R"(/api/sessions/([^/]+)/run)", guarded([&store](const auto& req, auto& res) {
                const ojson body = detail::parse_body(req);
                std::optional<std::uint64_t> seed;
                if (body.contains("seed") && !body["seed"].is_null()) {
                  if (!body["seed"].is_number_unsigned()) throw Error("seed must be a non-negative integer");
                  seed = body["seed"].template get<std::uint64_t>();
                }
                send_json(res, to_json(store.run_session(req.matches[1].str(), seed)));
              }));

  server.Get("/api/leaderboard", guarded([&store](const auto& req, auto& res) {
               std::size_t top = 0;
               if (req.has_param("top")) {
                 const std::string text = req.get_param_value("top");
                 if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
                   throw Error("top must be a non-negative integer");
                 }
                 top = std::stoul(text);
               }
               send_json(res, leaderboard_json(store.leaderboard(top)));
             }));

  server.Post("/api/telemetry", guarded([&store](const auto& req, auto& res) {
                const ojson body = detail::parse_body(req);
                if (!body.contains("kind") || !body["kind"].is_string()) throw Error("kind required");
                store.record_ui_event(body.value("player", ""), body.value("level", ""),
                                      body["kind"].template get<std::string>(),
                                      body.value("payload", ojson::object()));
                send_json(res, ojson{{"ok", true}}, 202);
              }));

  server.Get("/api/analytics/export.csv", guarded([&store](const auto&, auto& res) {
               res.set_content(export_csv(store.events()), "text/csv");
             }));
}

struct ServeConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path data_dir = "data";
  std::filesystem::path level_dir = CRITTERS_DEFAULT_LEVEL_DIR;
  std::optional<std::filesystem::path> static_dir;
};

/// CRITTERS_BIND (host:port), CRITTERS_DATA_DIR, CRITTERS_LEVEL_DIR and
/// CRITTERS_STATIC_DIR override the defaults.
inline ServeConfig serve_config_from_env(ServeConfig config = {}) {
  if (const char* bind = std::getenv("CRITTERS_BIND")) {
    const std::string text = bind;
    const auto colon = text.rfind(':');
    if (colon == std::string::npos) throw Error("CRITTERS_BIND must be host:port");
    config.host = text.substr(0, colon);
    try {
      config.port = std::stoi(text.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error("CRITTERS_BIND must be host:port");
    }
  }
  if (const char* dir = std::getenv("CRITTERS_DATA_DIR")) config.data_dir = dir;
  if (const char* dir = std::getenv("CRITTERS_LEVEL_DIR")) config.level_dir = dir;
  if (const char* dir = std::getenv("CRITTERS_STATIC_DIR")) config.static_dir = dir;
  return config;
}

}  // namespace critters
