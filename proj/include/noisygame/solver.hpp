#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "noisygame/error_model.hpp"
#include "noisygame/graph.hpp"

namespace noisygame {

inline constexpr double kTieTolerance = 1e-9;

// P: the player to move loses for sure, N: wins for sure, O: anything between.
enum class PositionClass { P, N, O };

inline const char* to_string(PositionClass c) {
  switch (c) {
    case PositionClass::P: return "P";
    case PositionClass::N: return "N";
    case PositionClass::O: return "O";
  }
  return "?";
}

inline PositionClass class_of_value(double value) {
  if (value <= kTieTolerance) return PositionClass::P;
  if (value >= 1.0 - kTieTolerance) return PositionClass::N;
  return PositionClass::O;
}

struct PositionSolution {
  double value = 0.0;                       // win probability of the player to move
  std::vector<double> move_values;          // aligned with the follower order
  std::vector<std::size_t> optimal_moves;   // ascending, within kTieTolerance of value
  PositionClass cls = PositionClass::P;

  // Smallest optimal move index; the deterministic representative.
  std::size_t canonical_move() const {
    if (optimal_moves.empty()) throw std::logic_error("terminal position has no optimal move");
    return optimal_moves.front();
  }
};

struct SolvedGame {
  std::vector<PositionSolution> positions;

  const PositionSolution& at(PositionId v) const { return positions.at(v); }
  double value(PositionId v) const { return positions.at(v).value; }
  std::size_t size() const { return positions.size(); }
};

// Win probability of transmitting each move: sum over landed moves u of
// (1 - N_u) weighted by the channel row of the sent move.
inline std::vector<double> move_values(std::span<const double> follower_values,
                                       const TransitionMatrix& matrix) {
  if (matrix.dim() != follower_values.size()) {
    throw std::invalid_argument("matrix dimension " + std::to_string(matrix.dim()) +
                                " does not match " + std::to_string(follower_values.size()) +
                                " follower values");
  }
  std::vector<double> out(matrix.dim(), 0.0);
  for (std::size_t w = 0; w < matrix.dim(); ++w) {
    double acc = 0.0;
    auto row = matrix.row(w);
    for (std::size_t u = 0; u < row.size(); ++u) acc += (1.0 - follower_values[u]) * row[u];
    out[w] = acc;
  }
  return out;
}

inline SolvedGame solve(const GameGraph& graph, const MoveErrorModel& model) {
  if (model.position_count() != graph.position_count()) {
    throw std::invalid_argument("model has " + std::to_string(model.position_count()) +
                                " matrices for " + std::to_string(graph.position_count()) +
                                " positions");
  }
  const auto order = topological_order(graph);

  SolvedGame solved;
  solved.positions.resize(graph.position_count());
  std::vector<double> follower_values;
  for (PositionId v : order) {
    auto& sol = solved.positions[v];
    const auto& fs = graph.followers(v);
    if (fs.empty()) {
      sol.value = 0.0;
      sol.cls = PositionClass::P;
      continue;
    }
    if (model.at(v).dim() != fs.size()) {
      throw std::invalid_argument("position " + std::to_string(v) + ": matrix dimension " +
                                  std::to_string(model.at(v).dim()) + " but " +
                                  std::to_string(fs.size()) + " followers");
    }
    follower_values.clear();
    for (PositionId u : fs) follower_values.push_back(solved.positions[u].value);

    sol.move_values = move_values(follower_values, model.at(v));
    sol.value = *std::max_element(sol.move_values.begin(), sol.move_values.end());
    for (std::size_t w = 0; w < sol.move_values.size(); ++w) {
      if (sol.move_values[w] >= sol.value - kTieTolerance) sol.optimal_moves.push_back(w);
    }
    sol.cls = class_of_value(sol.value);
  }
  return solved;
}

inline std::vector<PositionClass> classify(const SolvedGame& solved) {
  std::vector<PositionClass> out;
  out.reserve(solved.size());
  for (const auto& p : solved.positions) out.push_back(class_of_value(p.value));
  return out;
}

inline bool is_equiprobable(const TransitionMatrix& m, double tol = 1e-12) {
  const double target = m.empty() ? 0.0 : 1.0 / static_cast<double>(m.dim());
  for (std::size_t w = 0; w < m.dim(); ++w) {
    for (double x : m.row(w)) {
      if (std::abs(x - target) > tol) return false;
    }
  }
  return true;
}

// Conditions under which every O-position is worth exactly 1/2: the channel
// is equiprobable everywhere and every O-position has as many P-followers as
// N-followers.
inline bool fair_chance_hypotheses(const GameGraph& graph, const MoveErrorModel& model,
                                   const SolvedGame& solved) {
  if (model.position_count() != graph.position_count() || solved.size() != graph.position_count()) {
    return false;
  }
  for (PositionId v = 0; v < graph.position_count(); ++v) {
    if (!is_equiprobable(model.at(v))) return false;
  }
  for (PositionId v = 0; v < graph.position_count(); ++v) {
    if (class_of_value(solved.value(v)) != PositionClass::O) continue;
    std::size_t losing = 0;
    std::size_t winning = 0;
    for (PositionId u : graph.followers(v)) {
      switch (class_of_value(solved.value(u))) {
        case PositionClass::P: ++losing; break;
        case PositionClass::N: ++winning; break;
        case PositionClass::O: break;
      }
    }
    if (losing != winning) return false;
  }
  return true;
}

}  // namespace noisygame
