#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "noisygame/error_model.hpp"
#include "noisygame/games.hpp"
#include "noisygame/solver.hpp"
#include "support/oracles.hpp"

using namespace noisygame;

TEST(ValidateModel, EquiprobableAndIdentityAreClean) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = oracle::random_game(rng, 10, oracle::RowShape::any).graph;
    EXPECT_TRUE(validate_model(equiprobable_model(g), g).empty());
    EXPECT_TRUE(validate_model(identity_model(g), g).empty());
  }
}

TEST(ValidateModel, RowSumViolation) {
  GameGraph g({{}, {}, {0, 1}}, 2);
  auto m = equiprobable_model(g);
  m.at(2) = TransitionMatrix::from_rows({{0.5, 0.4}, {0.5, 0.5}});
  auto r = validate_model(m, g);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].kind, ModelViolationKind::row_sum);
  EXPECT_EQ(r[0].position, 2u);
  EXPECT_EQ(r[0].row, 0u);
}

TEST(ValidateModel, RangeViolation) {
  GameGraph g({{}, {}, {0, 1}}, 2);
  auto m = equiprobable_model(g);
  m.at(2) = TransitionMatrix::from_rows({{1.2, -0.2}, {0.5, 0.5}});
  auto r = validate_model(m, g);
  ASSERT_FALSE(r.empty());
  EXPECT_EQ(r[0].kind, ModelViolationKind::range);
}

TEST(ValidateModel, DimensionMismatch) {
  GameGraph g({{}, {0}}, 1);
  MoveErrorModel m({TransitionMatrix(0), TransitionMatrix(2)});
  auto r = validate_model(m, g);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].kind, ModelViolationKind::dimension);
  EXPECT_EQ(validate_model(MoveErrorModel({TransitionMatrix(0)}), g)[0].kind, ModelViolationKind::position_count);
}

TEST(IdentityModel, UnitRows) {
  const auto g = nim1_graph(4);
  const auto m = identity_model(g);
  for (PositionId v = 0; v <= 4; ++v) {
    ASSERT_EQ(m.at(v).dim(), v);
    for (std::size_t w = 0; w < v; ++w) {
      for (std::size_t u = 0; u < v; ++u) EXPECT_EQ(m.at(v)(w, u), w == u ? 1.0 : 0.0);
    }
  }
}

TEST(IdentityModel, TerminalOnlyGraphHasEmptyMatrices) {
  GameGraph g({{}, {}}, 0);
  auto m = identity_model(g);
  EXPECT_TRUE(m.at(0).empty());
  EXPECT_TRUE(m.at(1).empty());
}

TEST(EquiprobableModel, UniformRows) {
  GameGraph g({{}, {0}, {0, 1}, {0, 1, 2}, {0, 1, 2, 3}}, 4);
  auto m = equiprobable_model(g);
  for (std::size_t w = 0; w < 4; ++w) {
    for (std::size_t u = 0; u < 4; ++u) EXPECT_EQ(m.at(4)(w, u), 0.25);
  }
  EXPECT_EQ(m.at(1)(0, 0), 1.0);
}

TEST(Perturb, IdentityRowWorkedExample) {
  GameGraph g({{}, {}, {0, 1}}, 2);
  auto p = perturb(identity_model(g), g, 0.02);
  // brute-force evaluation of (x + eps/2) / (1 + eps)
  const double a = (1.0 + 0.02 / 2) / 1.02;
  const double b = (0.0 + 0.02 / 2) / 1.02;
  EXPECT_NEAR(p.at(2)(0, 0), 0.990196, 1e-6);
  EXPECT_NEAR(p.at(2)(0, 1), 0.009804, 1e-6);
  EXPECT_DOUBLE_EQ(p.at(2)(0, 0), a);
  EXPECT_DOUBLE_EQ(p.at(2)(0, 1), b);
  EXPECT_NEAR(p.at(2)(0, 0) + p.at(2)(0, 1), 1.0, 1e-15);
}

TEST(Perturb, UniformRowIsFixedPoint) {
  GameGraph g({{}, {}, {}, {0, 1, 2}}, 3);
  for (double eps : {1e-6, 0.1, 3.0}) {
    auto p = perturb(equiprobable_model(g), g, eps);
    for (std::size_t w = 0; w < 3; ++w) {
      for (std::size_t u = 0; u < 3; ++u) EXPECT_NEAR(p.at(3)(w, u), 1.0 / 3.0, 1e-15);
    }
  }
}

TEST(Perturb, RejectsNonPositiveEpsilon) {
  GameGraph g({{}, {0}}, 1);
  EXPECT_THROW(perturb(identity_model(g), g, 0.0), std::invalid_argument);
  EXPECT_THROW(perturb(identity_model(g), g, -1e-3), std::invalid_argument);
}

TEST(Perturb, StrictlyPositiveAndStochasticOnRandomModels) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    auto game = oracle::random_game(rng, 8, oracle::RowShape::any);
    auto p = perturb(game.model, game.graph, 1e-5);
    EXPECT_TRUE(validate_model(p, game.graph).empty());
    for (const auto& m : p.matrices()) {
      for (std::size_t w = 0; w < m.dim(); ++w) {
        for (double x : m.row(w)) EXPECT_GT(x, 0.0);
      }
    }
  }
}

TEST(Perturb, ValuesDriftLittleAndClearArgmaxesSurvive) {
  std::mt19937_64 rng(23);
  for (double eps : {1e-4, 1e-5}) {
    for (int trial = 0; trial < 200; ++trial) {
      auto game = oracle::random_game(rng, 20, oracle::RowShape::any);
      const auto base = solve(game.graph, game.model);
      const auto pert = solve(game.graph, perturb(game.model, game.graph, eps));
      for (PositionId v = 0; v < base.size(); ++v) {
        EXPECT_LE(std::abs(base.value(v) - pert.value(v)), 2 * eps);
        const auto& mv = base.at(v).move_values;
        if (mv.size() < 2 || base.at(v).optimal_moves.size() != 1) continue;
        double runner_up = -1.0;
        for (std::size_t w = 0; w < mv.size(); ++w) {
          if (w != base.at(v).optimal_moves[0]) runner_up = std::max(runner_up, mv[w]);
        }
        if (base.value(v) - runner_up >= 100 * eps) {
          EXPECT_EQ(pert.at(v).optimal_moves, base.at(v).optimal_moves);
        }
      }
    }
  }
}
