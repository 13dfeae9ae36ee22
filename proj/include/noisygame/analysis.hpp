#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "noisygame/game_spec.hpp"
#include "noisygame/games.hpp"
#include "noisygame/solver.hpp"

namespace noisygame {

// Runs fn(i) for i in [0, n) over a few threads; fn must only touch slot i.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned threads = 0) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += threads) fn(i);
    });
  }
}

// p_i = i / (points - 1), evaluated in double; points = 101 gives the i/100 grid.
inline std::vector<double> p_grid(std::size_t points) {
  if (points < 2) throw std::invalid_argument("a p-grid needs at least 2 points");
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) grid[i] = static_cast<double>(i) / static_cast<double>(points - 1);
  return grid;
}

struct SweepRow {
  double p = 0.0;
  double value = 0.0;
  std::vector<std::size_t> optimal_moves;
  std::vector<double> move_values;
};

// Solves the game built for every grid point and reports its start position.
inline std::vector<SweepRow> sweep(const std::function<Game(double)>& make_game, const std::vector<double>& grid,
                                   unsigned threads = 0) {
  std::vector<SweepRow> rows(grid.size());
  parallel_for(
      grid.size(),
      [&](std::size_t i) {
        const Game game = make_game(grid[i]);
        const auto solved = solve(game.graph, game.model);
        const auto& s = solved.at(game.graph.start());
        rows[i] = {grid[i], s.value, s.optimal_moves, s.move_values};
      },
      threads);
  return rows;
}

inline std::vector<SweepRow> sweep_nim1(unsigned k, std::size_t points, unsigned threads = 0) {
  return sweep([k](double p) { return build_game(Nim1Spec{k, p}); }, p_grid(points), threads);
}

inline std::vector<SweepRow> sweep_chomp(unsigned rows, unsigned cols, ChompVariant variant, std::size_t points,
                                         unsigned threads = 0) {
  return sweep([=](double p) { return build_game(ChompSpec{rows, cols, variant, p}); }, p_grid(points), threads);
}

// ---------------------------------------------------------------------------
// Number formatting and the sweep CSV.

inline std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15f", v);
  return buf;
}

// Grid points are printed with the fewest decimals (at least 2) that show
// i/(points-1) exactly when points-1 divides a power of ten; otherwise with 15
// significant digits.
inline std::string format_p(double p, std::size_t points) {
  const std::size_t steps = points > 1 ? points - 1 : 1;
  std::size_t scale = 1;
  for (int decimals = 0; decimals <= 9; ++decimals, scale *= 10) {
    if (scale % steps == 0) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.*f", std::max(decimals, 2), p);
      return buf;
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", p);
  return buf;
}

inline std::string format_moves(const std::vector<std::size_t>& moves, const char* sep = ";") {
  std::string s;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(moves[i]);
  }
  return s;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "p,N,optimal_moves\n";
  for (const auto& r : rows) {
    out << format_p(r.p, rows.size()) << ',' << format_value(r.value) << ',' << format_moves(r.optimal_moves)
        << '\n';
  }
}

inline std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "p,N,optimal_moves") {
    throw std::runtime_error("sweep CSV must start with the header 'p,N,optimal_moves'");
  }
  std::vector<SweepRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string p, value, moves;
    if (!std::getline(ss, p, ',') || !std::getline(ss, value, ',')) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": expected p,N,optimal_moves");
    }
    std::getline(ss, moves);
    SweepRow r;
    try {
      r.p = std::stod(p);
      r.value = std::stod(value);
      std::stringstream ms(moves);
      std::string tok;
      while (std::getline(ms, tok, ';')) {
        if (!tok.empty()) r.optimal_moves.push_back(std::stoul(tok));
      }
    } catch (const std::exception&) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": malformed number");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Published 1-pile Nim spot values (15 decimals). A tie at p = 1/2 is printed
// there as the range "0 - (k-1)", i.e. every move.

struct SpotValue {
  unsigned chips;
  unsigned percent;  // p = percent / 100
  double value;
  std::vector<std::size_t> optimal_moves;

  double p() const { return static_cast<double>(percent) / 100.0; }
};

inline std::vector<std::size_t> all_moves(unsigned chips) {
  std::vector<std::size_t> v(chips);
  for (unsigned i = 0; i < chips; ++i) v[i] = i;
  return v;
}

inline std::vector<SpotValue> appendix_spot_values() {
  return {
      {4, 25, 0.631250000000000, {0}},
      {4, 50, 0.500000000000000, all_moves(4)},
      {4, 75, 0.646634615384615, {3}},
      {4, 100, 1.000000000000000, {3}},
      {5, 75, 0.462488819320215, {3}},
      {5, 76, 0.454178272731180, {3}},
      {5, 77, 0.458703309461914, {4}},
      {6, 76, 0.471666277251390, {0}},
      {6, 79, 0.480657745012594, {4}},
      {7, 79, 0.489647199317731, {0}},
      {7, 80, 0.492023516195469, {4}},
      {8, 50, 0.500000000000000, all_moves(8)},
      {8, 75, 0.592533630732249, {7}},
      {8, 99, 0.970694959999281, {7}},
      {9, 50, 0.500000000000000, all_moves(9)},
      {9, 81, 0.492137510167114, {8}},
      {9, 82, 0.493999659131848, {4}},
      {10, 30, 0.527252488101950, {0}},
      {10, 99, 0.508830272700490, {4}},
  };
}

struct SpotCheck {
  SpotValue expected;
  double computed = 0.0;
  std::vector<std::size_t> computed_moves;
  double abs_error = 0.0;
  bool value_ok = false;
  bool moves_ok = false;
  bool pass() const { return value_ok && moves_ok; }
};

struct SpotReport {
  std::vector<SpotCheck> checks;
  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const SpotCheck& c) { return c.pass(); });
  }
};

inline SpotReport verify_spot_values(const std::vector<SpotValue>& expected, double tolerance = 1e-9) {
  SpotReport report;
  for (const auto& e : expected) {
    const auto pt = nim1_solve_at(e.chips, e.p());
    SpotCheck c{e, pt.value, pt.optimal_moves, std::abs(pt.value - e.value), false, false};
    c.value_ok = c.abs_error <= tolerance;
    c.moves_ok = c.computed_moves == e.optimal_moves;
    report.checks.push_back(std::move(c));
  }
  return report;
}

// Reads "chips,p,value,optimal" lines (optimal ';'-separated); '#' starts a comment.
inline std::vector<SpotValue> read_spot_values(std::istream& in) {
  std::vector<SpotValue> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string chips, p, value, moves;
    if (!std::getline(ss, chips, ',') || !std::getline(ss, p, ',') || !std::getline(ss, value, ',') ||
        !std::getline(ss, moves)) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": expected chips,p,value,optimal");
    }
    try {
      SpotValue s{static_cast<unsigned>(std::stoul(chips)),
                  static_cast<unsigned>(std::lround(std::stod(p) * 100.0)), std::stod(value), {}};
      std::stringstream ms(moves);
      std::string tok;
      while (std::getline(ms, tok, ';')) s.optimal_moves.push_back(std::stoul(tok));
      out.push_back(std::move(s));
    } catch (const std::exception&) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": malformed number");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scan of the two open conjectures on 1-pile Nim:
//   (1) p <= 1/2: N_k(p) >= 1/2 and leaving 0 chips is optimal;
//   (2) k a power of two: N_k(p) >= 1/2 for every p, and leaving k-1 chips is
//       optimal for p >= 1/2.
// Counterexample candidates are reported, never asserted away.

struct ConjectureCounterexample {
  int conjecture;
  unsigned chips;
  double p;
  double value;
  std::vector<std::size_t> optimal_moves;
  std::string reason;
};

struct OptimalMoveSwitch {
  unsigned chips;
  double p_before;
  double p_after;
  std::vector<std::size_t> before;
  std::vector<std::size_t> after;
};

struct ConjectureScanReport {
  std::size_t points_checked = 0;
  std::vector<ConjectureCounterexample> counterexamples;
  std::vector<OptimalMoveSwitch> switches;  // changes of optimal set between neighbouring p, p != 1/2
};

inline ConjectureScanReport conjecture_scan(unsigned max_chips, std::size_t points, unsigned threads = 0) {
  if (max_chips < 1) throw std::invalid_argument("max_chips must be >= 1");
  ConjectureScanReport report;
  constexpr double tol = kTieTolerance;
  for (unsigned k = 1; k <= max_chips; ++k) {
    const auto rows = sweep_nim1(k, points, threads);
    const bool power_of_two = (k & (k - 1)) == 0;
    auto has = [](const std::vector<std::size_t>& v, std::size_t x) {
      return std::find(v.begin(), v.end(), x) != v.end();
    };
    for (const auto& r : rows) {
      ++report.points_checked;
      if (r.p <= 0.5) {
        if (r.value < 0.5 - tol) {
          report.counterexamples.push_back({1, k, r.p, r.value, r.optimal_moves, "N_k(p) < 1/2"});
        }
        if (!has(r.optimal_moves, 0)) {
          report.counterexamples.push_back({1, k, r.p, r.value, r.optimal_moves, "leaving 0 chips not optimal"});
        }
      }
      if (power_of_two) {
        if (r.value < 0.5 - tol) {
          report.counterexamples.push_back({2, k, r.p, r.value, r.optimal_moves, "N_k(p) < 1/2"});
        }
        if (r.p >= 0.5 && !has(r.optimal_moves, k - 1)) {
          report.counterexamples.push_back(
              {2, k, r.p, r.value, r.optimal_moves, "leaving k-1 chips not optimal"});
        }
      }
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& a = rows[i - 1];
      const auto& b = rows[i];
      if (a.optimal_moves != b.optimal_moves && a.optimal_moves.size() < k && b.optimal_moves.size() < k) {
        report.switches.push_back({k, a.p, b.p, a.optimal_moves, b.optimal_moves});
      }
    }
  }
  return report;
}

}  // namespace noisygame
