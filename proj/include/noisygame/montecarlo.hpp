#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "noisygame/error_model.hpp"
#include "noisygame/graph.hpp"
#include "noisygame/solver.hpp"

namespace noisygame {

// std::mt19937_64 has a standard-mandated output sequence, and unit draws are
// taken from its top 53 bits, so transcripts are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Generator for rollout `stream` of a run seeded with `seed`.
  static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
  }

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>(unit() * static_cast<double>(n)) % n;
  }

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

// Inverse-CDF draw over the channel row of `sent`, in stored row order.
inline std::size_t sample_received_move(const MoveErrorModel& model, PositionId v, std::size_t sent,
                                        double draw) {
  const auto& m = model.at(v);
  if (sent >= m.dim()) {
    throw std::out_of_range("sent move " + std::to_string(sent) + " is not a move of position " +
                            std::to_string(v));
  }
  auto row = m.row(sent);
  double cum = 0.0;
  std::size_t last_positive = sent;
  for (std::size_t u = 0; u < row.size(); ++u) {
    if (row[u] <= 0.0) continue;
    cum += row[u];
    last_positive = u;
    if (draw < cum) return u;
  }
  // rounding left the cumulative sum a hair under 1
  return last_positive;
}

enum class Player { first, second };

inline Player other(Player p) { return p == Player::first ? Player::second : Player::first; }
inline const char* to_string(Player p) { return p == Player::first ? "I" : "II"; }

class Strategy {
 public:
  enum class Kind { optimal, uniform_random, fixed_table };

  // Canonical (smallest-index) optimal move at every position.
  static Strategy optimal(const SolvedGame& solved) {
    Strategy s(Kind::optimal);
    s.table_.resize(solved.size(), 0);
    for (PositionId v = 0; v < solved.size(); ++v) {
      if (!solved.at(v).optimal_moves.empty()) s.table_[v] = solved.at(v).canonical_move();
    }
    return s;
  }

  static Strategy uniform_random() { return Strategy(Kind::uniform_random); }

  static Strategy fixed_table(std::vector<std::size_t> moves) {
    Strategy s(Kind::fixed_table);
    s.table_ = std::move(moves);
    return s;
  }

  Kind kind() const { return kind_; }

  // Checks that table entries are legal move indices of `graph`.
  void check(const GameGraph& graph) const {
    if (kind_ == Kind::uniform_random) return;
    if (table_.size() != graph.position_count()) {
      throw std::invalid_argument("strategy table covers " + std::to_string(table_.size()) +
                                  " positions, graph has " + std::to_string(graph.position_count()));
    }
    for (PositionId v = 0; v < table_.size(); ++v) {
      if (!graph.is_terminal(v) && table_[v] >= graph.followers(v).size()) {
        throw std::invalid_argument("strategy move " + std::to_string(table_[v]) +
                                    " is illegal at position " + std::to_string(v));
      }
    }
  }

  std::size_t choose(const GameGraph& graph, PositionId v, Rng& rng) const {
    if (kind_ == Kind::uniform_random) return rng.below(graph.followers(v).size());
    return table_.at(v);
  }

 private:
  explicit Strategy(Kind k) : kind_(k) {}

  Kind kind_;
  std::vector<std::size_t> table_;
};

struct TurnRecord {
  Player player;
  PositionId position;
  std::size_t sent;
  std::size_t landed;
  PositionId next;
};

struct Transcript {
  Player winner = Player::second;
  std::vector<TurnRecord> turns;
};

// Player I moves first; whoever faces a terminal position on their turn loses.
inline Transcript play_game(const GameGraph& graph, const MoveErrorModel& model, const Strategy& first,
                            const Strategy& second, Rng& rng) {
  Transcript t;
  PositionId v = graph.start();
  Player to_move = Player::first;
  while (!graph.is_terminal(v)) {
    const Strategy& s = to_move == Player::first ? first : second;
    const std::size_t sent = s.choose(graph, v, rng);
    const std::size_t landed = sample_received_move(model, v, sent, rng.unit());
    const PositionId next = graph.followers(v)[landed];
    t.turns.push_back({to_move, v, sent, landed, next});
    v = next;
    to_move = other(to_move);
  }
  t.winner = other(to_move);
  return t;
}

inline Transcript play_game(const GameGraph& graph, const MoveErrorModel& model, const Strategy& first,
                            const Strategy& second, std::uint64_t seed) {
  Rng rng(seed);
  return play_game(graph, model, first, second, rng);
}

struct SimulationReport {
  std::uint64_t games_played = 0;
  std::uint64_t first_player_wins = 0;
  double estimate = 0.0;
  double standard_error = 0.0;

  static SimulationReport from_counts(std::uint64_t games, std::uint64_t wins) {
    SimulationReport r;
    r.games_played = games;
    r.first_player_wins = wins;
    if (games > 0) {
      r.estimate = static_cast<double>(wins) / static_cast<double>(games);
      r.standard_error = std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(games));
    }
    return r;
  }

  SimulationReport merged(const SimulationReport& other) const {
    return from_counts(games_played + other.games_played, first_player_wins + other.first_player_wins);
  }

  friend bool operator==(const SimulationReport&, const SimulationReport&) = default;
};

// Rollout i uses Rng::for_stream(seed, i), so the report does not depend on
// how rollouts are spread over threads.
inline SimulationReport simulate(const GameGraph& graph, const MoveErrorModel& model, const Strategy& first,
                                 const Strategy& second, std::uint64_t games, std::uint64_t seed,
                                 unsigned threads = 0) {
  if (games == 0) throw std::invalid_argument("need at least one game");
  first.check(graph);
  second.check(graph);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, games));

  std::vector<std::uint64_t> wins(threads, 0);
  auto work = [&](unsigned worker) {
    for (std::uint64_t i = worker; i < games; i += threads) {
      Rng rng = Rng::for_stream(seed, i);
      if (play_game(graph, model, first, second, rng).winner == Player::first) ++wins[worker];
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }
  std::uint64_t total = 0;
  for (auto w : wins) total += w;
  return SimulationReport::from_counts(games, total);
}

// Both players follow the canonical optimal strategy of the solved game.
inline SimulationReport estimate_win_probability(const GameGraph& graph, const MoveErrorModel& model,
                                                 std::uint64_t games, std::uint64_t seed,
                                                 unsigned threads = 0) {
  const auto solved = solve(graph, model);
  const auto s = Strategy::optimal(solved);
  return simulate(graph, model, s, s, games, seed, threads);
}

}  // namespace noisygame
