#pragma once

#include <cstdint>
#include <string>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "noisygame/analysis.hpp"
#include "noisygame/game_spec.hpp"
#include "noisygame/session.hpp"
#include "noisygame/solver.hpp"

namespace noisygame::api {

using nlohmann::json;

inline int http_status(SessionErrorCode code) {
  switch (code) {
    case SessionErrorCode::invalid_spec: return 400;
    case SessionErrorCode::illegal_move: return 422;
    case SessionErrorCode::out_of_turn: return 409;
    case SessionErrorCode::session_finished: return 409;
    case SessionErrorCode::session_not_found: return 404;
    case SessionErrorCode::session_busy: return 409;
  }
  return 500;
}

inline json error_body(SessionErrorCode code, const std::string& message) {
  return {{"error", {{"code", to_string(code)}, {"message", message}}}};
}

inline json solution_json(const Game& game, const SolvedGame& solved) {
  json positions = json::array();
  for (PositionId v = 0; v < game.graph.position_count(); ++v) {
    const auto& s = solved.at(v);
    positions.push_back({{"id", v},
                         {"label", game.graph.label(v)},
                         {"terminal", game.graph.is_terminal(v)},
                         {"value", s.value},
                         {"class", to_string(s.cls)},
                         {"followers", game.graph.followers(v)},
                         {"moves", game.move_labels.at(v)},
                         {"move_values", s.move_values},
                         {"optimal_moves", s.optimal_moves}});
  }
  return {{"start", game.graph.start()}, {"positions", std::move(positions)}};
}

inline json board_json(const PlaySession& s) {
  const PositionId v = s.current();
  return std::visit(
      [&](const auto& spec) -> json {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, Nim1Spec>) {
          return {{"kind", "nim1"}, {"chips", v}};
        } else if constexpr (std::is_same_v<T, NimSpec>) {
          return {{"kind", "nim"}, {"piles", NimMultiIndexer(spec.piles).tuple(v)}};
        } else if constexpr (std::is_same_v<T, ChompSpec>) {
          return {{"kind", "chomp"},
                  {"rows", spec.rows},
                  {"cols", spec.cols},
                  {"heights", ChompIndexer(spec.rows, spec.cols).heights(v)}};
        } else {
          return {{"kind", "explicit"}, {"position", v}};
        }
      },
      s.spec());
}

inline json half_move_json(const PlaySession& s, const HalfMove& h) {
  const auto& labels = s.game().move_labels.at(h.from);
  return {{"player", to_string(h.player)}, {"from", h.from},         {"sent", h.sent},
          {"sent_label", labels.at(h.sent)}, {"landed", h.landed}, {"landed_label", labels.at(h.landed)},
          {"to", h.to},                      {"channel_error", h.sent != h.landed}};
}

inline json session_json(const PlaySession& s) {
  json history = json::array();
  for (const auto& h : s.history()) history.push_back(half_move_json(s, h));
  const auto winner = s.winner();
  const PositionId v = s.current();
  return {{"id", s.id()},
          {"spec", to_json(s.spec())},
          {"seed", s.seed()},
          {"status", s.finished() ? "finished" : "live"},
          {"winner", winner ? json(to_string(*winner)) : json(nullptr)},
          {"to_move", to_string(s.to_move())},
          {"position", {{"id", v}, {"label", s.game().graph.label(v)}}},
          {"board", board_json(s)},
          {"moves", s.game().move_labels.at(v)},
          {"start_value", s.solved().value(s.game().graph.start())},
          {"history", std::move(history)}};
}

inline void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

inline void reply_error(httplib::Response& res, const SessionError& e) {
  reply(res, http_status(e.code()), error_body(e.code(), e.what()));
}

namespace detail {

inline std::size_t query_count(const httplib::Request& req, const char* key, std::size_t fallback) {
  if (!req.has_param(key)) return fallback;
  const std::string raw = req.get_param_value(key);
  std::size_t used = 0;
  unsigned long value = 0;
  try {
    value = std::stoul(raw, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != raw.size()) {
    throw SessionError(SessionErrorCode::invalid_spec, std::string("query parameter '") + key + "' must be an integer");
  }
  return value;
}

}  // namespace detail

// Registers the /api/v1 endpoints on `server`. `store` must outlive it.
inline void install_routes(httplib::Server& server, SessionStore& store) {
  server.Post("/api/v1/solve", [](const httplib::Request& req, httplib::Response& res) {
    try {
      const Game game = build_game(parse_game_spec(req.body));
      reply(res, 200, solution_json(game, solve(game.graph, game.model)));
    } catch (const std::exception& e) {
      reply(res, 400, error_body(SessionErrorCode::invalid_spec, e.what()));
    }
  });

  server.Get("/api/v1/sweep", [](const httplib::Request& req, httplib::Response& res) {
    try {
      const std::string game = req.has_param("game") ? req.get_param_value("game") : "nim1";
      const std::size_t points = detail::query_count(req, "points", 101);
      if (points < 2 || points > 100001) {
        throw SessionError(SessionErrorCode::invalid_spec, "points must lie in [2, 100001]");
      }
      std::vector<SweepRow> rows;
      if (game == "nim1") {
        const auto k = detail::query_count(req, "k", 3);
        if (k > 64) throw SessionError(SessionErrorCode::invalid_spec, "k must be at most 64");
        rows = sweep_nim1(static_cast<unsigned>(k), points);
      } else if (game == "chomp") {
        const auto r = detail::query_count(req, "rows", 2);
        const auto c = detail::query_count(req, "cols", 2);
        if (r == 0 || c == 0 || r > 6 || c > 6) {
          throw SessionError(SessionErrorCode::invalid_spec, "rows and cols must lie in [1, 6]");
        }
        const std::string variant = req.has_param("variant") ? req.get_param_value("variant") : "n8";
        rows = sweep_chomp(static_cast<unsigned>(r), static_cast<unsigned>(c), parse_chomp_variant(variant), points);
      } else {
        throw SessionError(SessionErrorCode::invalid_spec, "sweep supports game=nim1 or game=chomp");
      }
      json out = json::array();
      for (const auto& row : rows) {
        out.push_back({{"p", row.p}, {"value", row.value}, {"optimal_moves", row.optimal_moves}});
      }
      reply(res, 200, out);
    } catch (const SessionError& e) {
      reply_error(res, e);
    } catch (const std::exception& e) {
      reply(res, 400, error_body(SessionErrorCode::invalid_spec, e.what()));
    }
  });

  server.Post("/api/v1/sessions", [&store](const httplib::Request& req, httplib::Response& res) {
    try {
      json body;
      try {
        body = json::parse(req.body);
      } catch (const json::parse_error& e) {
        throw SessionError(SessionErrorCode::invalid_spec, std::string("malformed JSON: ") + e.what());
      }
      if (!body.is_object() || !body.contains("spec")) {
        throw SessionError(SessionErrorCode::invalid_spec, "body must be {spec, seed, human_first}");
      }
      GameSpec spec;
      try {
        spec = game_spec_from_json(body.at("spec"));
      } catch (const std::exception& e) {
        throw SessionError(SessionErrorCode::invalid_spec, e.what());
      }
      const std::uint64_t seed = body.value("seed", std::uint64_t{0});
      const bool human_first = body.value("human_first", true);
      const auto id = store.create(spec, seed, human_first);
      store.read(id, [&](const PlaySession& s) {
        reply(res, 201, session_json(s));
        return 0;
      });
    } catch (const SessionError& e) {
      reply_error(res, e);
    } catch (const json::exception& e) {
      reply(res, 400, error_body(SessionErrorCode::invalid_spec, e.what()));
    }
  });

  server.Get(R"(/api/v1/sessions/([^/]+))", [&store](const httplib::Request& req, httplib::Response& res) {
    try {
      store.read(req.matches[1].str(), [&](const PlaySession& s) {
        reply(res, 200, session_json(s));
        return 0;
      });
    } catch (const SessionError& e) {
      reply_error(res, e);
    }
  });

  server.Post(R"(/api/v1/sessions/([^/]+)/moves)", [&store](const httplib::Request& req, httplib::Response& res) {
    try {
      json body;
      try {
        body = json::parse(req.body);
      } catch (const json::parse_error& e) {
        throw SessionError(SessionErrorCode::illegal_move, std::string("malformed JSON: ") + e.what());
      }
      if (!body.is_object() || !body.contains("sent") || !body.at("sent").is_number_integer() ||
          body.at("sent").get<long long>() < 0) {
        throw SessionError(SessionErrorCode::illegal_move, "body must be {\"sent\": <move index>}");
      }
      const auto sent = body.at("sent").get<std::size_t>();
      store.submit(req.matches[1].str(), sent, [&](const PlaySession& s, const MoveOutcome& out) {
        reply(res, 200,
              {{"human", half_move_json(s, out.human)},
               {"engine", out.engine ? half_move_json(s, *out.engine) : json(nullptr)},
               {"state", session_json(s)}});
        return 0;
      });
    } catch (const SessionError& e) {
      reply_error(res, e);
    }
  });

  server.Get(R"(/api/v1/sessions/([^/]+)/hint)", [&store](const httplib::Request& req, httplib::Response& res) {
    try {
      store.read(req.matches[1].str(), [&](const PlaySession& s) {
        const auto h = s.hint();
        reply(res, 200,
              {{"position", s.current()},
               {"moves", s.game().move_labels.at(s.current())},
               {"move_values", h.move_values},
               {"optimal_moves", h.optimal_moves}});
        return 0;
      });
    } catch (const SessionError& e) {
      reply_error(res, e);
    }
  });
}

}  // namespace noisygame::api
