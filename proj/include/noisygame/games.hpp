#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "noisygame/error_model.hpp"
#include "noisygame/graph.hpp"
#include "noisygame/solver.hpp"

namespace noisygame {

inline unsigned hamming(std::uint64_t a, std::uint64_t b) {
  return static_cast<unsigned>(std::popcount(a ^ b));
}

inline void check_probability(double p, const char* what = "p") {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0,1], got " + std::to_string(p));
  }
}

// ---------------------------------------------------------------------------
// 1-pile Nim through the binary Hamming channel.
//
// Position id == chips on the heap. A move is named by the chips it leaves,
// and F(m) = {0, 1, ..., m-1} in that order.

inline std::string nim1_move_label(std::size_t chips_left) {
  return "leave " + std::to_string(chips_left) + (chips_left == 1 ? " chip" : " chips");
}

inline GameGraph nim1_graph(unsigned k) {
  std::vector<std::vector<PositionId>> followers(k + 1);
  std::vector<std::string> labels(k + 1);
  for (unsigned m = 0; m <= k; ++m) {
    for (unsigned left = 0; left < m; ++left) followers[m].push_back(left);
    labels[m] = std::to_string(m) + (m == 1 ? " chip" : " chips");
  }
  return GameGraph(std::move(followers), k, std::move(labels));
}

// Channel row at a heap of m chips for the transmitted move `sent`. Codewords
// use the bit length of m, and the row is conditioned on landing on a valid
// move (retransmission). At p = 1 the row is the p -> 1 limit: uniform over
// the valid moves at maximal Hamming distance from `sent`.
inline std::vector<double> nim1_channel_row(unsigned m, unsigned sent, double p) {
  check_probability(p);
  if (sent >= m) throw std::invalid_argument("sent move must leave fewer chips than the heap holds");
  const int bits = std::bit_width(m);
  std::vector<double> row(m, 0.0);

  if (p == 1.0) {
    unsigned far = 0;
    for (unsigned j = 0; j < m; ++j) far = std::max(far, hamming(sent, j));
    double count = 0.0;
    for (unsigned j = 0; j < m; ++j) count += hamming(sent, j) == far ? 1.0 : 0.0;
    for (unsigned j = 0; j < m; ++j) row[j] = hamming(sent, j) == far ? 1.0 / count : 0.0;
    return row;
  }

  double total = 0.0;
  for (unsigned j = 0; j < m; ++j) {
    const int d = static_cast<int>(hamming(sent, j));
    row[j] = std::pow(p, d) * std::pow(1.0 - p, bits - d);
    total += row[j];
  }
  for (double& x : row) x /= total;
  return row;
}

inline MoveErrorModel nim1_model(unsigned k, double p) {
  check_probability(p);
  std::vector<TransitionMatrix> ms;
  ms.reserve(k + 1);
  for (unsigned m = 0; m <= k; ++m) {
    TransitionMatrix mat(m);
    for (unsigned s = 0; s < m; ++s) {
      auto row = nim1_channel_row(m, s, p);
      std::copy(row.begin(), row.end(), mat.row(s).begin());
    }
    ms.push_back(std::move(mat));
  }
  return MoveErrorModel(std::move(ms));
}

struct CurvePoint {
  double p = 0.0;
  double value = 0.0;
  std::vector<std::size_t> optimal_moves;
  std::vector<double> move_values;
};

inline CurvePoint nim1_solve_at(unsigned k, double p) {
  const auto solved = solve(nim1_graph(k), nim1_model(k, p));
  const auto& start = solved.at(k);
  return {p, start.value, start.optimal_moves, start.move_values};
}

inline std::vector<CurvePoint> nim1_solution_curve(unsigned k, const std::vector<double>& p_grid) {
  std::vector<CurvePoint> out;
  out.reserve(p_grid.size());
  const auto graph = nim1_graph(k);
  for (double p : p_grid) {
    const auto solved = solve(graph, nim1_model(k, p));
    const auto& start = solved.at(k);
    out.push_back({p, start.value, start.optimal_moves, start.move_values});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Multi-pile Nim. Positions are all pile tuples dominated by the initial one,
// numbered in mixed radix with the first pile most significant.

using PileTuple = std::vector<unsigned>;

namespace detail {

inline std::string tuple_label(const PileTuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(t[i]);
  }
  return s + ")";
}

}  // namespace detail

class NimMultiIndexer {
 public:
  explicit NimMultiIndexer(PileTuple piles) : piles_(std::move(piles)) {
    if (piles_.empty()) throw std::invalid_argument("multi-pile Nim needs at least one pile");
    strides_.assign(piles_.size(), 1);
    for (std::size_t i = piles_.size(); i-- > 1;) strides_[i - 1] = strides_[i] * (piles_[i] + 1);
    count_ = strides_[0] * (piles_[0] + 1);
  }

  std::size_t position_count() const { return count_; }
  const PileTuple& initial() const { return piles_; }

  PositionId index(const PileTuple& t) const {
    if (t.size() != piles_.size()) throw std::invalid_argument("pile tuple has the wrong arity");
    PositionId id = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] > piles_[i]) throw std::invalid_argument("pile tuple exceeds the initial piles");
      id += t[i] * strides_[i];
    }
    return id;
  }

  PileTuple tuple(PositionId id) const {
    PileTuple t(piles_.size());
    for (std::size_t i = 0; i < piles_.size(); ++i) {
      t[i] = static_cast<unsigned>(id / strides_[i]);
      id %= strides_[i];
    }
    return t;
  }

 private:
  PileTuple piles_;
  std::vector<std::size_t> strides_;
  std::size_t count_ = 0;
};

struct NimMove {
  std::size_t pile;
  unsigned left;
};

// Moves in follower order: pile by pile, chips left ascending.
inline std::vector<NimMove> nim_multi_moves(const PileTuple& t) {
  std::vector<NimMove> moves;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (unsigned left = 0; left < t[i]; ++left) moves.push_back({i, left});
  }
  return moves;
}

inline std::string nim_multi_move_label(const NimMove& m) {
  return "pile " + std::to_string(m.pile + 1) + ": " + nim1_move_label(m.left);
}

inline GameGraph nim_multi_graph(const PileTuple& piles) {
  NimMultiIndexer idx(piles);
  const std::size_t n = idx.position_count();
  std::vector<std::vector<PositionId>> followers(n);
  std::vector<std::string> labels(n);
  for (PositionId v = 0; v < n; ++v) {
    auto t = idx.tuple(v);
    labels[v] = detail::tuple_label(t);
    for (const auto& mv : nim_multi_moves(t)) {
      auto next = t;
      next[mv.pile] = mv.left;
      followers[v].push_back(idx.index(next));
    }
  }
  return GameGraph(std::move(followers), idx.index(piles), std::move(labels));
}

// Class predicted for equiprobable multi-pile Nim: tuples of 0s and 1s are
// decided by the parity of the 1-piles; anything with a pile >= 2 is O.
inline PositionClass nim_multi_expected_class(const PileTuple& t) {
  unsigned ones = 0;
  for (unsigned x : t) {
    if (x >= 2) return PositionClass::O;
    ones += x;
  }
  return ones % 2 == 1 ? PositionClass::N : PositionClass::P;
}

// ---------------------------------------------------------------------------
// Chomp! on an n x m bar. A position is the vector of column heights
// (non-increasing); the poisoned cell is column 0, row 0.

using ChompHeights = std::vector<unsigned>;

struct ChompCell {
  unsigned col;
  unsigned row;
  friend bool operator==(const ChompCell&, const ChompCell&) = default;
};

inline std::string chomp_move_label(const ChompCell& c) {
  return "chomp at (" + std::to_string(c.col) + "," + std::to_string(c.row) + ")";
}

inline std::string chomp_position_label(const ChompHeights& h) {
  std::string s = "[";
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(h[i]);
  }
  return s + "]";
}

inline bool chomp_has_cell(const ChompHeights& h, int col, int row) {
  return col >= 0 && row >= 0 && static_cast<std::size_t>(col) < h.size() &&
         static_cast<unsigned>(row) < h[static_cast<std::size_t>(col)];
}

// Remaining cells except the poisoned one, row-major (row 0 first). This is
// the move order of a Chomp position.
inline std::vector<ChompCell> chomp_moves(const ChompHeights& h) {
  std::vector<ChompCell> cells;
  const unsigned tallest = h.empty() ? 0 : h[0];
  for (unsigned r = 0; r < tallest; ++r) {
    for (unsigned c = 0; c < h.size(); ++c) {
      if (r < h[c] && !(c == 0 && r == 0)) cells.push_back({c, r});
    }
  }
  return cells;
}

inline ChompHeights chomp_apply(ChompHeights h, const ChompCell& cell) {
  for (std::size_t j = cell.col; j < h.size(); ++j) h[j] = std::min(h[j], cell.row);
  return h;
}

// All non-increasing height vectors with values in [0, n] and first entry >= 1.
inline std::vector<ChompHeights> chomp_positions(unsigned n, unsigned m) {
  std::vector<ChompHeights> out;
  ChompHeights cur(m, 0);
  auto rec = [&](auto&& self, std::size_t col, unsigned cap) -> void {
    if (col == m) {
      out.push_back(cur);
      return;
    }
    for (unsigned h = (col == 0 ? 1u : 0u); h <= cap; ++h) {
      cur[col] = h;
      self(self, col + 1, h);
    }
  };
  if (n >= 1 && m >= 1) rec(rec, 0, n);
  return out;
}

class ChompIndexer {
 public:
  ChompIndexer(unsigned n, unsigned m) : rows_(n), cols_(m), positions_(chomp_positions(n, m)) {
    if (n == 0 || m == 0) throw std::invalid_argument("Chomp bar needs at least one cell");
    for (PositionId i = 0; i < positions_.size(); ++i) ids_.emplace(positions_[i], i);
  }

  unsigned rows() const { return rows_; }
  unsigned cols() const { return cols_; }
  std::size_t position_count() const { return positions_.size(); }
  const ChompHeights& heights(PositionId v) const { return positions_.at(v); }
  PositionId index(const ChompHeights& h) const {
    auto it = ids_.find(h);
    if (it == ids_.end()) throw std::invalid_argument("not a Chomp position of this bar");
    return it->second;
  }
  PositionId full() const { return index(ChompHeights(cols_, rows_)); }

 private:
  unsigned rows_;
  unsigned cols_;
  std::vector<ChompHeights> positions_;
  std::map<ChompHeights, PositionId> ids_;
};

inline GameGraph chomp_graph(unsigned n, unsigned m) {
  ChompIndexer idx(n, m);
  std::vector<std::vector<PositionId>> followers(idx.position_count());
  std::vector<std::string> labels(idx.position_count());
  for (PositionId v = 0; v < idx.position_count(); ++v) {
    const auto& h = idx.heights(v);
    labels[v] = chomp_position_label(h);
    for (const auto& cell : chomp_moves(h)) followers[v].push_back(idx.index(chomp_apply(h, cell)));
  }
  return GameGraph(std::move(followers), idx.full(), std::move(labels));
}

enum class ChompVariant { n8, n4, lower_left, uniform };

inline const char* to_string(ChompVariant v) {
  switch (v) {
    case ChompVariant::n8: return "n8";
    case ChompVariant::n4: return "n4";
    case ChompVariant::lower_left: return "lower_left";
    case ChompVariant::uniform: return "uniform";
  }
  return "?";
}

inline ChompVariant parse_chomp_variant(const std::string& s) {
  if (s == "n8") return ChompVariant::n8;
  if (s == "n4") return ChompVariant::n4;
  if (s == "lower_left") return ChompVariant::lower_left;
  if (s == "uniform") return ChompVariant::uniform;
  throw std::invalid_argument("unknown Chomp error variant '" + s +
                              "' (expected n8, n4, lower_left or uniform)");
}

struct ChompErrorVariant {
  ChompVariant kind = ChompVariant::n8;
  double p = 1.0;  // accuracy; ignored by the uniform variant
};

namespace detail {

struct WeightedOffset {
  int dc;
  int dr;
  double weight;
};

inline std::vector<WeightedOffset> chomp_offsets(ChompVariant kind) {
  switch (kind) {
    case ChompVariant::n8:
      return {{-1, -1, 1}, {0, -1, 1}, {1, -1, 1}, {-1, 0, 1}, {1, 0, 1}, {-1, 1, 1}, {0, 1, 1}, {1, 1, 1}};
    case ChompVariant::n4:
      return {{0, -1, 1}, {-1, 0, 1}, {1, 0, 1}, {0, 1, 1}};
    case ChompVariant::lower_left:
      return {{-1, 0, 0.25}, {0, -1, 0.25}, {-1, -1, 0.5}};
    case ChompVariant::uniform:
      return {};
  }
  return {};
}

}  // namespace detail

// Channel matrix at one Chomp position. Off-target mass (1 - p) goes to the
// neighbouring cells that are still legal moves, split in proportion to the
// variant's offset weights (equal for n8/n4). The poisoned cell never
// receives mass. With no legal neighbour the target is hit surely.
inline TransitionMatrix chomp_matrix(const ChompHeights& h, const ChompErrorVariant& variant) {
  const auto cells = chomp_moves(h);
  TransitionMatrix mat(cells.size());
  if (cells.empty()) return mat;

  if (variant.kind == ChompVariant::uniform) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      for (std::size_t j = 0; j < cells.size(); ++j) mat(i, j) = 1.0 / static_cast<double>(cells.size());
    }
    return mat;
  }

  auto move_index = [&](int c, int r) -> std::ptrdiff_t {
    if (c == 0 && r == 0) return -1;
    if (!chomp_has_cell(h, c, r)) return -1;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i] == ChompCell{static_cast<unsigned>(c), static_cast<unsigned>(r)}) {
        return static_cast<std::ptrdiff_t>(i);
      }
    }
    return -1;
  };

  const auto offsets = detail::chomp_offsets(variant.kind);
  for (std::size_t t = 0; t < cells.size(); ++t) {
    const int c = static_cast<int>(cells[t].col);
    const int r = static_cast<int>(cells[t].row);
    std::vector<std::pair<std::size_t, double>> valid;
    double total = 0.0;
    for (const auto& off : offsets) {
      auto j = move_index(c + off.dc, r + off.dr);
      if (j >= 0) {
        valid.emplace_back(static_cast<std::size_t>(j), off.weight);
        total += off.weight;
      }
    }
    if (valid.empty()) {
      mat(t, t) = 1.0;
      continue;
    }
    mat(t, t) = variant.p;
    for (const auto& [j, weight] : valid) mat(t, j) += (1.0 - variant.p) * weight / total;
  }
  return mat;
}

inline MoveErrorModel chomp_model(unsigned n, unsigned m, const ChompErrorVariant& variant) {
  check_probability(variant.p);
  ChompIndexer idx(n, m);
  std::vector<TransitionMatrix> ms;
  ms.reserve(idx.position_count());
  for (PositionId v = 0; v < idx.position_count(); ++v) ms.push_back(chomp_matrix(idx.heights(v), variant));
  return MoveErrorModel(std::move(ms));
}

}  // namespace noisygame
