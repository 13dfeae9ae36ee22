#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "noisygame/error_model.hpp"
#include "noisygame/games.hpp"
#include "noisygame/solver.hpp"

using namespace noisygame;

TEST(Hamming, Examples) {
  EXPECT_EQ(hamming(3, 0), 2u);
  EXPECT_EQ(hamming(5, 5), 0u);
  EXPECT_EQ(hamming(1, 2), 2u);
  EXPECT_EQ(hamming(0b1011, 0b0110), 3u);
}

TEST(Nim1Row, ThreeChipsLeaveZero) {
  for (double p : {0.0, 0.1, 0.3, 0.5, 0.9}) {
    auto row = nim1_channel_row(3, 0, p);
    ASSERT_EQ(row.size(), 3u);
    EXPECT_NEAR(row[0], (1 - p) / (1 + p), 1e-15);
    EXPECT_NEAR(row[1], p / (1 + p), 1e-15);
    EXPECT_NEAR(row[2], p / (1 + p), 1e-15);
  }
}

TEST(Nim1Row, TwoChipsUseTwoBits) {
  for (double p : {0.1, 0.4, 0.8}) {
    auto row = nim1_channel_row(2, 1, p);
    EXPECT_NEAR(row[0], p, 1e-15);
    EXPECT_NEAR(row[1], 1 - p, 1e-15);
  }
}

TEST(Nim1Row, HalfIsUniform) {
  for (unsigned m = 1; m <= 12; ++m) {
    for (unsigned s = 0; s < m; ++s) {
      for (double x : nim1_channel_row(m, s, 0.5)) EXPECT_NEAR(x, 1.0 / m, 1e-15);
    }
  }
}

TEST(Nim1Row, ZeroIsIdentity) {
  for (unsigned m = 1; m <= 12; ++m) {
    for (unsigned s = 0; s < m; ++s) {
      auto row = nim1_channel_row(m, s, 0.0);
      for (unsigned j = 0; j < m; ++j) EXPECT_EQ(row[j], j == s ? 1.0 : 0.0);
    }
  }
}

TEST(Nim1Row, OneIsUniformOverFarthestValidMoves) {
  for (unsigned m = 1; m <= 16; ++m) {
    for (unsigned s = 0; s < m; ++s) {
      auto row = nim1_channel_row(m, s, 1.0);
      unsigned far = 0;
      for (unsigned j = 0; j < m; ++j) far = std::max(far, hamming(s, j));
      unsigned count = 0;
      for (unsigned j = 0; j < m; ++j) count += hamming(s, j) == far;
      for (unsigned j = 0; j < m; ++j) EXPECT_NEAR(row[j], hamming(s, j) == far ? 1.0 / count : 0.0, 1e-15);
    }
  }
  // 4 chips, 3-bit codes: leaving 3 (011) from 0 (000) is the only distance-2 move
  EXPECT_EQ(nim1_channel_row(4, 0, 1.0), (std::vector<double>{0, 0, 0, 1}));
}

TEST(Nim1Row, MatchesHammingWeightsByBruteForce) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const unsigned m = 1 + static_cast<unsigned>(rng() % 20);
    const unsigned s = static_cast<unsigned>(rng() % m);
    const double p = unit(rng);
    unsigned bits = 0;
    while ((1u << bits) <= m) ++bits;
    std::vector<double> w(m);
    double z = 0;
    for (unsigned j = 0; j < m; ++j) {
      const unsigned d = hamming(s, j);
      w[j] = std::pow(p, d) * std::pow(1 - p, bits - d);
      z += w[j];
    }
    auto row = nim1_channel_row(m, s, p);
    for (unsigned j = 0; j < m; ++j) EXPECT_NEAR(row[j], w[j] / z, 1e-12);
  }
}

TEST(Nim1Row, RejectsBadArguments) {
  EXPECT_THROW(nim1_channel_row(3, 3, 0.2), std::invalid_argument);
  EXPECT_THROW(nim1_channel_row(3, 0, 1.5), std::invalid_argument);
  EXPECT_THROW(nim1_channel_row(3, 0, -0.1), std::invalid_argument);
  EXPECT_THROW(nim1_channel_row(3, 0, std::nan("")), std::invalid_argument);
}

TEST(Nim1Model, StochasticEverywhereIncludingEndpoints) {
  for (unsigned k = 0; k <= 12; ++k) {
    const auto g = nim1_graph(k);
    for (int i = 0; i <= 100; ++i) {
      EXPECT_TRUE(validate_model(nim1_model(k, i / 100.0), g).empty()) << k << " " << i;
    }
  }
}

TEST(Nim1Graph, ZeroChipsIsTerminalStart) {
  const auto g = nim1_graph(0);
  EXPECT_EQ(g.position_count(), 1u);
  EXPECT_TRUE(g.is_terminal(g.start()));
  EXPECT_EQ(nim1_solve_at(0, 0.3).value, 0.0);
}

TEST(Nim1Graph, Labels) {
  const auto g = nim1_graph(2);
  EXPECT_EQ(g.label(1), "1 chip");
  EXPECT_EQ(g.label(2), "2 chips");
  EXPECT_EQ(nim1_move_label(1), "leave 1 chip");
  EXPECT_EQ(nim1_move_label(0), "leave 0 chips");
}

TEST(Nim1Curve, MatchesPointwiseSolves) {
  const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
  const auto curve = nim1_solution_curve(5, grid);
  ASSERT_EQ(curve.size(), grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto pt = nim1_solve_at(5, grid[i]);
    EXPECT_EQ(curve[i].p, grid[i]);
    EXPECT_EQ(curve[i].value, pt.value);
    EXPECT_EQ(curve[i].optimal_moves, pt.optimal_moves);
  }
}

TEST(NimMulti, TwoTwoHasNinePositions) {
  const auto g = nim_multi_graph({2, 2});
  EXPECT_EQ(g.position_count(), 9u);
  EXPECT_EQ(g.followers(g.start()).size(), 4u);
  EXPECT_EQ(g.label(g.start()), "(2,2)");
  EXPECT_EQ(nim_multi_move_label({1, 0}), "pile 2: leave 0 chips");
}

TEST(NimMulti, IndexerRoundTrip) {
  NimMultiIndexer idx({3, 1, 2});
  EXPECT_EQ(idx.position_count(), 4u * 2u * 3u);
  for (PositionId v = 0; v < idx.position_count(); ++v) EXPECT_EQ(idx.index(idx.tuple(v)), v);
  EXPECT_THROW(idx.index({4, 0, 0}), std::invalid_argument);
  EXPECT_THROW(idx.index({1, 0}), std::invalid_argument);
}

TEST(NimMulti, ExpectedClassExamples) {
  EXPECT_EQ(nim_multi_expected_class({0, 0}), PositionClass::P);
  EXPECT_EQ(nim_multi_expected_class({1, 0, 0}), PositionClass::N);
  EXPECT_EQ(nim_multi_expected_class({1, 1}), PositionClass::P);
  EXPECT_EQ(nim_multi_expected_class({1, 1, 1}), PositionClass::N);
  EXPECT_EQ(nim_multi_expected_class({2, 0}), PositionClass::O);
  EXPECT_EQ(nim_multi_expected_class({1, 3, 1}), PositionClass::O);
}

TEST(NimMulti, EquiprobableIsFairChance) {
  // every tuple with 1..3 piles of at most 4 chips
  std::vector<PileTuple> tuples;
  std::function<void(PileTuple)> gen = [&](PileTuple t) {
    if (!t.empty()) tuples.push_back(t);
    if (t.size() == 3) return;
    for (unsigned c = 0; c <= 4; ++c) {
      auto next = t;
      next.push_back(c);
      gen(next);
    }
  };
  gen({});
  ASSERT_EQ(tuples.size(), 5u + 25u + 125u);
  for (const auto& piles : tuples) {
    const auto g = nim_multi_graph(piles);
    const auto s = solve(g, equiprobable_model(g));
    const NimMultiIndexer idx(piles);
    for (PositionId v = 0; v < g.position_count(); ++v) {
      const auto expected = nim_multi_expected_class(idx.tuple(v));
      EXPECT_EQ(class_of_value(s.value(v)), expected);
      if (expected == PositionClass::O) {
        EXPECT_NEAR(s.value(v), 0.5, 1e-12);
      }
    }
  }
}

namespace {

std::size_t brute_force_chomp_count(unsigned n, unsigned m) {
  std::size_t count = 0;
  ChompHeights h(m, 0);
  std::function<void(unsigned)> rec = [&](unsigned col) {
    if (col == m) {
      bool ok = h[0] >= 1;
      for (unsigned j = 1; j < m; ++j) ok = ok && h[j] <= h[j - 1];
      count += ok;
      return;
    }
    for (unsigned x = 0; x <= n; ++x) {
      h[col] = x;
      rec(col + 1);
    }
  };
  rec(0);
  return count;
}

std::size_t binomial(unsigned n, unsigned k) {
  std::size_t r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST(Chomp, PositionCountsMatchBruteForce) {
  for (unsigned n = 1; n <= 4; ++n) {
    for (unsigned m = 1; m <= 4; ++m) {
      const auto count = chomp_graph(n, m).position_count();
      EXPECT_EQ(count, brute_force_chomp_count(n, m)) << n << "x" << m;
      EXPECT_EQ(count, binomial(n + m, m) - 1) << n << "x" << m;
    }
  }
}

TEST(Chomp, MovesAreRowMajorWithoutPoisonedCell) {
  const auto moves = chomp_moves({2, 2});
  ASSERT_EQ(moves.size(), 3u);
  EXPECT_EQ(moves[0], (ChompCell{1, 0}));
  EXPECT_EQ(moves[1], (ChompCell{0, 1}));
  EXPECT_EQ(moves[2], (ChompCell{1, 1}));
  EXPECT_TRUE(chomp_moves({1, 0}).empty());
  EXPECT_EQ(chomp_move_label({1, 0}), "chomp at (1,0)");
  EXPECT_EQ(chomp_position_label({2, 1}), "[2,1]");
}

TEST(Chomp, ApplyRemovesUpperRightQuadrant) {
  EXPECT_EQ(chomp_apply({3, 3, 3}, {1, 1}), (ChompHeights{3, 1, 1}));
  EXPECT_EQ(chomp_apply({3, 2, 1}, {0, 2}), (ChompHeights{2, 2, 1}));
  EXPECT_EQ(chomp_apply({2, 2}, {1, 0}), (ChompHeights{2, 0}));
}

TEST(Chomp, FollowersMatchMoves) {
  const ChompIndexer idx(3, 3);
  const auto g = chomp_graph(3, 3);
  for (PositionId v = 0; v < g.position_count(); ++v) {
    const auto moves = chomp_moves(idx.heights(v));
    ASSERT_EQ(g.followers(v).size(), moves.size());
    for (std::size_t i = 0; i < moves.size(); ++i) {
      EXPECT_EQ(idx.heights(g.followers(v)[i]), chomp_apply(idx.heights(v), moves[i]));
    }
  }
  EXPECT_EQ(g.start(), idx.full());
}

TEST(ChompMatrix, CornerRowsSplitEqually) {
  const double p = 0.6;
  // 2x2 full bar, top-right cell (1,1): two valid neighbours
  auto m22 = chomp_matrix({2, 2}, {ChompVariant::n8, p});
  EXPECT_NEAR(m22(2, 2), p, 1e-15);
  EXPECT_NEAR(m22(2, 0), (1 - p) / 2, 1e-15);
  EXPECT_NEAR(m22(2, 1), (1 - p) / 2, 1e-15);
  // 3x3 full bar, top-right cell (2,2): three valid neighbours
  auto m33 = chomp_matrix({3, 3, 3}, {ChompVariant::n8, p});
  const auto cells = chomp_moves({3, 3, 3});
  auto at = [&](unsigned c, unsigned r) {
    return static_cast<std::size_t>(std::find(cells.begin(), cells.end(), ChompCell{c, r}) - cells.begin());
  };
  const auto t = at(2, 2);
  EXPECT_NEAR(m33(t, t), p, 1e-15);
  for (auto [c, r] : {std::pair{1u, 1u}, {1u, 2u}, {2u, 1u}}) EXPECT_NEAR(m33(t, at(c, r)), (1 - p) / 3, 1e-15);
  // centre cell (1,1): seven valid neighbours, poisoned cell excluded
  const auto centre = at(1, 1);
  EXPECT_NEAR(m33(centre, centre), p, 1e-15);
  EXPECT_NEAR(m33(centre, at(0, 1)), (1 - p) / 7, 1e-15);
  // n4 at (1,0) in 2x2: only (1,1) is a valid orthogonal neighbour
  auto n4 = chomp_matrix({2, 2}, {ChompVariant::n4, p});
  EXPECT_NEAR(n4(0, 0), p, 1e-15);
  EXPECT_NEAR(n4(0, 2), 1 - p, 1e-15);
  EXPECT_EQ(n4(0, 1), 0.0);
}

TEST(ChompMatrix, UniformVariant) {
  for (unsigned n = 1; n <= 4; ++n) {
    for (unsigned m = 1; m <= 4; ++m) {
      if (n * m < 2) continue;
      auto mat = chomp_matrix(ChompHeights(m, n), {ChompVariant::uniform, 0.0});
      ASSERT_EQ(mat.dim(), n * m - 1);
      for (std::size_t w = 0; w < mat.dim(); ++w) {
        for (double x : mat.row(w)) EXPECT_NEAR(x, 1.0 / (n * m - 1), 1e-15);
      }
    }
  }
}

TEST(ChompMatrix, LowerLeftRedistribution) {
  const double p = 0.2;
  auto mat = chomp_matrix({3, 3, 3}, {ChompVariant::lower_left, p});
  const auto cells = chomp_moves({3, 3, 3});
  auto at = [&](unsigned c, unsigned r) {
    return static_cast<std::size_t>(std::find(cells.begin(), cells.end(), ChompCell{c, r}) - cells.begin());
  };
  const auto t = at(2, 2);
  EXPECT_NEAR(mat(t, at(1, 2)), 0.25 * (1 - p), 1e-15);
  EXPECT_NEAR(mat(t, at(2, 1)), 0.25 * (1 - p), 1e-15);
  EXPECT_NEAR(mat(t, at(1, 1)), 0.5 * (1 - p), 1e-15);
  // (1,1): the diagonal neighbour is the poisoned cell, so the two edges share
  const auto d = at(1, 1);
  EXPECT_NEAR(mat(d, at(0, 1)), 0.5 * (1 - p), 1e-15);
  EXPECT_NEAR(mat(d, at(1, 0)), 0.5 * (1 - p), 1e-15);
  // (1,0) has no valid lower-left neighbour
  const auto e = at(1, 0);
  EXPECT_EQ(mat(e, e), 1.0);
}

TEST(ChompModel, StochasticForEveryVariant) {
  for (auto kind : {ChompVariant::n8, ChompVariant::n4, ChompVariant::lower_left, ChompVariant::uniform}) {
    for (double p : {0.0, 0.3, 1.0}) {
      for (unsigned n = 1; n <= 4; ++n) {
        for (unsigned m = 1; m <= 4; ++m) {
          EXPECT_TRUE(validate_model(chomp_model(n, m, {kind, p}), chomp_graph(n, m)).empty());
        }
      }
    }
  }
}

TEST(ChompModel, TwoByTwoStartValue) {
  const auto g = chomp_graph(2, 2);
  for (int i = 0; i <= 100; ++i) {
    const double p = i / 100.0;
    const auto s = solve(g, chomp_model(2, 2, {ChompVariant::n8, p}));
    const auto& st = s.at(g.start());
    EXPECT_NEAR(st.value, std::max(p, (1 - p) / 2), 1e-12);
    if (p > 1.0 / 3) {
      EXPECT_EQ(st.optimal_moves, std::vector<std::size_t>{2});
    }
    if (p < 1.0 / 3) {
      EXPECT_EQ(st.optimal_moves, (std::vector<std::size_t>{0, 1}));
    }
  }
  const auto s = solve(g, chomp_model(2, 2, {ChompVariant::n8, 1.0 / 3}));
  for (double x : s.at(g.start()).move_values) EXPECT_NEAR(x, 1.0 / 3, 1e-12);
}

TEST(ChompVariantNames, ParseRoundTrip) {
  for (auto kind : {ChompVariant::n8, ChompVariant::n4, ChompVariant::lower_left, ChompVariant::uniform}) {
    EXPECT_EQ(parse_chomp_variant(to_string(kind)), kind);
  }
  EXPECT_THROW(parse_chomp_variant("diagonal"), std::invalid_argument);
}
