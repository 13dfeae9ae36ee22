#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "noisygame/graph.hpp"

namespace noisygame {

inline constexpr double kRowSumTolerance = 1e-9;

// Dense square matrix over the followers of one position.
// Entry (sent, received) is the probability that transmitting move `sent`
// results in move `received` being played.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  explicit TransitionMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

  static TransitionMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    TransitionMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) {
        throw std::invalid_argument("transition matrix row " + std::to_string(i) + " has " +
                                    std::to_string(rows[i].size()) + " entries, expected " +
                                    std::to_string(rows.size()));
      }
      for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t dim() const { return dim_; }
  bool empty() const { return dim_ == 0; }

  double& operator()(std::size_t sent, std::size_t received) { return data_[sent * dim_ + received]; }
  double operator()(std::size_t sent, std::size_t received) const { return data_[sent * dim_ + received]; }

  std::span<const double> row(std::size_t sent) const {
    return std::span<const double>(data_).subspan(sent * dim_, dim_);
  }
  std::span<double> row(std::size_t sent) { return std::span<double>(data_).subspan(sent * dim_, dim_); }

  std::vector<std::vector<double>> to_rows() const {
    std::vector<std::vector<double>> rows(dim_);
    for (std::size_t i = 0; i < dim_; ++i) rows[i].assign(row(i).begin(), row(i).end());
    return rows;
  }

  friend bool operator==(const TransitionMatrix&, const TransitionMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

// The move error distribution: one matrix per position, terminals carry an
// empty matrix.
class MoveErrorModel {
 public:
  MoveErrorModel() = default;
  explicit MoveErrorModel(std::vector<TransitionMatrix> matrices) : matrices_(std::move(matrices)) {}

  std::size_t position_count() const { return matrices_.size(); }
  const TransitionMatrix& at(PositionId v) const { return matrices_.at(v); }
  TransitionMatrix& at(PositionId v) { return matrices_.at(v); }
  const std::vector<TransitionMatrix>& matrices() const { return matrices_; }

  friend bool operator==(const MoveErrorModel&, const MoveErrorModel&) = default;

 private:
  std::vector<TransitionMatrix> matrices_;
};

enum class ModelViolationKind { position_count, dimension, range, row_sum };

inline const char* to_string(ModelViolationKind kind) {
  switch (kind) {
    case ModelViolationKind::position_count: return "position_count";
    case ModelViolationKind::dimension: return "dimension";
    case ModelViolationKind::range: return "range";
    case ModelViolationKind::row_sum: return "row_sum";
  }
  return "unknown";
}

struct ModelViolation {
  ModelViolationKind kind;
  PositionId position;
  std::size_t row;
  std::string message;
};

using ModelReport = std::vector<ModelViolation>;

inline ModelReport validate_model(const MoveErrorModel& model, const GameGraph& graph) {
  ModelReport report;
  if (model.position_count() != graph.position_count()) {
    report.push_back({ModelViolationKind::position_count, 0, 0,
                      "model has " + std::to_string(model.position_count()) +
                          " matrices for a graph of " + std::to_string(graph.position_count()) +
                          " positions"});
    return report;
  }
  for (PositionId v = 0; v < graph.position_count(); ++v) {
    const auto& m = model.at(v);
    const std::size_t degree = graph.followers(v).size();
    if (m.dim() != degree) {
      report.push_back({ModelViolationKind::dimension, v, 0,
                        "position " + std::to_string(v) + ": matrix is " + std::to_string(m.dim()) +
                            "x" + std::to_string(m.dim()) + " but it has " + std::to_string(degree) +
                            " followers"});
      continue;
    }
    for (std::size_t w = 0; w < m.dim(); ++w) {
      double sum = 0.0;
      bool in_range = true;
      for (double x : m.row(w)) {
        if (!(x >= 0.0 && x <= 1.0)) in_range = false;
        sum += x;
      }
      if (!in_range) {
        report.push_back({ModelViolationKind::range, v, w,
                          "position " + std::to_string(v) + " row " + std::to_string(w) +
                              ": entry outside [0,1]"});
      }
      if (!(std::abs(sum - 1.0) <= kRowSumTolerance)) {
        report.push_back({ModelViolationKind::row_sum, v, w,
                          "position " + std::to_string(v) + " row " + std::to_string(w) +
                              " sums to " + std::to_string(sum)});
      }
    }
  }
  return report;
}

// Noise-free channel: the sent move is always the one played.
inline MoveErrorModel identity_model(const GameGraph& graph) {
  std::vector<TransitionMatrix> ms;
  ms.reserve(graph.position_count());
  for (PositionId v = 0; v < graph.position_count(); ++v) {
    TransitionMatrix m(graph.followers(v).size());
    for (std::size_t i = 0; i < m.dim(); ++i) m(i, i) = 1.0;
    ms.push_back(std::move(m));
  }
  return MoveErrorModel(std::move(ms));
}

inline MoveErrorModel equiprobable_model(const GameGraph& graph) {
  std::vector<TransitionMatrix> ms;
  ms.reserve(graph.position_count());
  for (PositionId v = 0; v < graph.position_count(); ++v) {
    const std::size_t n = graph.followers(v).size();
    TransitionMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m(i, j) = 1.0 / static_cast<double>(n);
    }
    ms.push_back(std::move(m));
  }
  return MoveErrorModel(std::move(ms));
}

// Adds epsilon/|F(v)| to every entry and renormalizes by (1 + epsilon), which
// makes every entry strictly positive while keeping rows stochastic.
inline MoveErrorModel perturb(const MoveErrorModel& model, const GameGraph& graph, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("perturbation epsilon must be > 0");
  if (model.position_count() != graph.position_count()) {
    throw std::invalid_argument("model and graph disagree on position count");
  }
  MoveErrorModel out = model;
  for (PositionId v = 0; v < graph.position_count(); ++v) {
    auto& m = out.at(v);
    if (m.empty()) continue;
    const double bump = epsilon / static_cast<double>(m.dim());
    for (std::size_t w = 0; w < m.dim(); ++w) {
      for (double& x : m.row(w)) x = (x + bump) / (1.0 + epsilon);
    }
  }
  return out;
}

}  // namespace noisygame
