#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "noisygame/game_spec.hpp"
#include "noisygame/montecarlo.hpp"
#include "noisygame/solver.hpp"

namespace noisygame {

enum class SessionErrorCode { invalid_spec, illegal_move, out_of_turn, session_finished, session_not_found, session_busy };

inline const char* to_string(SessionErrorCode c) {
  switch (c) {
    case SessionErrorCode::invalid_spec: return "invalid_spec";
    case SessionErrorCode::illegal_move: return "illegal_move";
    case SessionErrorCode::out_of_turn: return "out_of_turn";
    case SessionErrorCode::session_finished: return "session_finished";
    case SessionErrorCode::session_not_found: return "session_not_found";
    case SessionErrorCode::session_busy: return "session_busy";
  }
  return "unknown";
}

class SessionError : public std::runtime_error {
 public:
  SessionError(SessionErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  SessionErrorCode code() const { return code_; }

 private:
  SessionErrorCode code_;
};

enum class Side { human, engine };

inline const char* to_string(Side s) { return s == Side::human ? "human" : "engine"; }
inline Side other(Side s) { return s == Side::human ? Side::engine : Side::human; }

struct HalfMove {
  Side player;
  PositionId from;
  std::size_t sent;
  std::size_t landed;
  PositionId to;
};

struct MoveOutcome {
  HalfMove human;
  std::optional<HalfMove> engine;
};

struct Hint {
  std::vector<double> move_values;
  std::vector<std::size_t> optimal_moves;
};

// One human-vs-engine game played through the channel. Not synchronized;
// SessionStore serializes access.
class PlaySession {
 public:
  PlaySession(std::string id, GameSpec spec, std::uint64_t seed, bool human_first)
      : id_(std::move(id)), spec_(std::move(spec)), seed_(seed), rng_(seed) {
    try {
      game_ = build_game(spec_);
      solved_ = std::make_shared<const SolvedGame>(solve(game_.graph, game_.model));
    } catch (const std::exception& e) {
      throw SessionError(SessionErrorCode::invalid_spec, e.what());
    }
    current_ = game_.graph.start();
    to_move_ = human_first ? Side::human : Side::engine;
    if (to_move_ == Side::engine && !finished()) play_engine();
  }

  const std::string& id() const { return id_; }
  const GameSpec& spec() const { return spec_; }
  const Game& game() const { return game_; }
  const SolvedGame& solved() const { return *solved_; }
  std::uint64_t seed() const { return seed_; }
  PositionId current() const { return current_; }
  Side to_move() const { return to_move_; }
  const std::vector<HalfMove>& history() const { return history_; }

  bool finished() const { return game_.graph.is_terminal(current_); }

  // The side facing a terminal position on its turn has lost.
  std::optional<Side> winner() const {
    if (!finished()) return std::nullopt;
    return other(to_move_);
  }

  MoveOutcome submit_move(std::size_t sent) {
    if (finished()) throw SessionError(SessionErrorCode::session_finished, "the game is over");
    if (to_move_ != Side::human) throw SessionError(SessionErrorCode::out_of_turn, "it is the engine's turn");
    const std::size_t legal = game_.graph.followers(current_).size();
    if (sent >= legal) {
      throw SessionError(SessionErrorCode::illegal_move, "move " + std::to_string(sent) + " is not one of the " +
                                                             std::to_string(legal) + " legal moves");
    }
    MoveOutcome out{advance(sent), std::nullopt};
    if (!finished()) out.engine = play_engine();
    return out;
  }

  Hint hint() const {
    if (finished()) throw SessionError(SessionErrorCode::session_finished, "no moves from a finished game");
    const auto& s = solved_->at(current_);
    return {s.move_values, s.optimal_moves};
  }

  // Replaying the landed moves from the start reproduces the current position.
  bool replay_consistent() const {
    PositionId v = game_.graph.start();
    for (const auto& h : history_) {
      if (h.from != v) return false;
      const auto& fs = game_.graph.followers(v);
      if (h.landed >= fs.size() || fs[h.landed] != h.to) return false;
      v = h.to;
    }
    return v == current_;
  }

 private:
  HalfMove advance(std::size_t sent) {
    const std::size_t landed = sample_received_move(game_.model, current_, sent, rng_.unit());
    const PositionId next = game_.graph.followers(current_)[landed];
    HalfMove h{to_move_, current_, sent, landed, next};
    history_.push_back(h);
    current_ = next;
    to_move_ = other(to_move_);
    return h;
  }

  HalfMove play_engine() { return advance(solved_->at(current_).canonical_move()); }

  std::string id_;
  GameSpec spec_;
  std::uint64_t seed_;
  Rng rng_;
  Game game_;
  std::shared_ptr<const SolvedGame> solved_;
  PositionId current_ = 0;
  Side to_move_ = Side::human;
  std::vector<HalfMove> history_;
};

// In-memory session registry with idle eviction. Reads of one session may
// overlap; a second move submitted while one is in flight is rejected.
class SessionStore {
 public:
  using Clock = std::chrono::steady_clock;

  explicit SessionStore(Clock::duration idle_timeout = std::chrono::minutes(30)) : idle_timeout_(idle_timeout) {}

  std::string create(const GameSpec& spec, std::uint64_t seed, bool human_first) {
    auto entry = std::make_shared<Entry>(new_id(), spec, seed, human_first);
    std::lock_guard lock(mutex_);
    evict_locked(Clock::now());
    const std::string id = entry->session.id();
    sessions_.emplace(id, std::move(entry));
    return id;
  }

  // Runs fn(const PlaySession&) under a shared lock.
  template <class Fn>
  auto read(const std::string& id, Fn&& fn) {
    auto entry = find(id);
    std::shared_lock lock(entry->mutex);
    return fn(static_cast<const PlaySession&>(entry->session));
  }

  template <class Fn>
  auto submit(const std::string& id, std::size_t sent, Fn&& on_done) {
    auto entry = find(id);
    bool expected = false;
    if (!entry->move_in_flight.compare_exchange_strong(expected, true)) {
      throw SessionError(SessionErrorCode::session_busy, "another move is being processed for this session");
    }
    struct Release {
      std::atomic<bool>& flag;
      ~Release() { flag = false; }
    } release{entry->move_in_flight};
    std::unique_lock lock(entry->mutex);
    auto outcome = entry->session.submit_move(sent);
    return on_done(static_cast<const PlaySession&>(entry->session), outcome);
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
  }

  std::size_t evict_idle() {
    std::lock_guard lock(mutex_);
    return evict_locked(Clock::now());
  }

 private:
  struct Entry {
    Entry(std::string id, const GameSpec& spec, std::uint64_t seed, bool human_first)
        : session(std::move(id), spec, seed, human_first), last_used(Clock::now().time_since_epoch().count()) {}
    PlaySession session;
    std::shared_mutex mutex;
    std::atomic<bool> move_in_flight{false};
    std::atomic<Clock::rep> last_used;
  };

  std::shared_ptr<Entry> find(const std::string& id) {
    std::lock_guard lock(mutex_);
    const auto now = Clock::now();
    evict_locked(now);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw SessionError(SessionErrorCode::session_not_found, "no session '" + id + "'");
    it->second->last_used = now.time_since_epoch().count();
    return it->second;
  }

  std::size_t evict_locked(Clock::time_point now) {
    std::size_t evicted = 0;
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      const Clock::time_point used{Clock::duration(it->second->last_used.load())};
      if (now - used > idle_timeout_) {
        it = sessions_.erase(it);
        ++evicted;
      } else {
        ++it;
      }
    }
    return evicted;
  }

  static std::string new_id() {
    static thread_local std::random_device device;
    static constexpr char hex[] = "0123456789abcdef";
    std::string id;
    for (int i = 0; i < 4; ++i) {
      std::uint32_t x = device();
      for (int nibble = 0; nibble < 8; ++nibble, x >>= 4) id += hex[x & 0xf];
    }
    return id;
  }

  Clock::duration idle_timeout_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

}  // namespace noisygame
