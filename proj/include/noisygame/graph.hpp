#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace noisygame {

using PositionId = std::size_t;

// Raised when a graph is not progressively bounded (contains a cycle).
class CycleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Finite game digraph. followers(v) is the ordered set F(v); its order fixes
// the row/column indexing of the error matrices and every move index.
class GameGraph {
 public:
  GameGraph() = default;

  GameGraph(std::vector<std::vector<PositionId>> followers, PositionId start,
            std::vector<std::string> labels = {})
      : followers_(std::move(followers)), labels_(std::move(labels)), start_(start) {
    labels_.resize(followers_.size());
  }

  std::size_t position_count() const { return followers_.size(); }
  PositionId start() const { return start_; }

  const std::vector<PositionId>& followers(PositionId v) const { return followers_.at(v); }
  const std::vector<std::vector<PositionId>>& all_followers() const { return followers_; }

  bool is_terminal(PositionId v) const { return followers_.at(v).empty(); }

  const std::string& label(PositionId v) const { return labels_.at(v); }
  const std::vector<std::string>& labels() const { return labels_; }

  friend bool operator==(const GameGraph&, const GameGraph&) = default;

 private:
  std::vector<std::vector<PositionId>> followers_;
  std::vector<std::string> labels_;
  PositionId start_ = 0;
};

enum class GraphViolationKind { empty_graph, bad_start, dangling_index, duplicate_follower, cycle };

inline const char* to_string(GraphViolationKind kind) {
  switch (kind) {
    case GraphViolationKind::empty_graph: return "empty_graph";
    case GraphViolationKind::bad_start: return "bad_start";
    case GraphViolationKind::dangling_index: return "dangling_index";
    case GraphViolationKind::duplicate_follower: return "duplicate_follower";
    case GraphViolationKind::cycle: return "cycle";
  }
  return "unknown";
}

struct GraphViolation {
  GraphViolationKind kind;
  PositionId position;
  std::string message;
};

using GraphReport = std::vector<GraphViolation>;

namespace detail {

// Kahn's algorithm on the reversed edges: a position becomes ready once all of
// its followers have been emitted. Returns a partial order when a cycle exists.
// Assumes every follower index is in range.
inline std::vector<PositionId> followers_first_order(const GameGraph& graph) {
  const std::size_t n = graph.position_count();
  std::vector<std::size_t> pending(n);
  std::vector<std::vector<PositionId>> predecessors(n);
  for (PositionId v = 0; v < n; ++v) {
    pending[v] = graph.followers(v).size();
    for (PositionId u : graph.followers(v)) predecessors[u].push_back(v);
  }

  std::vector<PositionId> order;
  order.reserve(n);
  for (PositionId v = 0; v < n; ++v) {
    if (pending[v] == 0) order.push_back(v);
  }
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (PositionId pred : predecessors[order[head]]) {
      if (--pending[pred] == 0) order.push_back(pred);
    }
  }
  return order;
}

}  // namespace detail

inline GraphReport validate_graph(const GameGraph& graph) {
  GraphReport report;
  const std::size_t n = graph.position_count();
  if (n == 0) {
    report.push_back({GraphViolationKind::empty_graph, 0, "graph has no positions"});
    return report;
  }
  if (graph.start() >= n) {
    report.push_back({GraphViolationKind::bad_start, graph.start(),
                      "start position " + std::to_string(graph.start()) + " out of range"});
  }

  bool indices_ok = true;
  for (PositionId v = 0; v < n; ++v) {
    std::vector<bool> seen(n, false);
    for (PositionId u : graph.followers(v)) {
      if (u >= n) {
        indices_ok = false;
        report.push_back({GraphViolationKind::dangling_index, v,
                          "position " + std::to_string(v) + " has follower " + std::to_string(u) +
                              " outside [0, " + std::to_string(n) + ")"});
        continue;
      }
      if (seen[u]) {
        report.push_back({GraphViolationKind::duplicate_follower, v,
                          "position " + std::to_string(v) + " lists follower " +
                              std::to_string(u) + " more than once"});
      }
      seen[u] = true;
    }
  }
  if (!indices_ok) return report;

  auto order = detail::followers_first_order(graph);
  if (order.size() != n) {
    std::vector<bool> placed(n, false);
    for (PositionId v : order) placed[v] = true;
    for (PositionId v = 0; v < n; ++v) {
      if (!placed[v]) {
        report.push_back({GraphViolationKind::cycle, v,
                          "position " + std::to_string(v) + " lies on or above a cycle"});
      }
    }
  }
  return report;
}

// Every position appears after all of its followers, so terminals come first.
inline std::vector<PositionId> topological_order(const GameGraph& graph) {
  const std::size_t n = graph.position_count();
  for (PositionId v = 0; v < n; ++v) {
    for (PositionId u : graph.followers(v)) {
      if (u >= n) throw std::out_of_range("follower index out of range at position " + std::to_string(v));
    }
  }
  auto order = detail::followers_first_order(graph);
  if (order.size() != n) {
    throw CycleError("game graph contains a cycle; it is not progressively bounded");
  }
  return order;
}

inline std::vector<PositionId> terminals(const GameGraph& graph) {
  std::vector<PositionId> out;
  for (PositionId v = 0; v < graph.position_count(); ++v) {
    if (graph.is_terminal(v)) out.push_back(v);
  }
  return out;
}

}  // namespace noisygame
