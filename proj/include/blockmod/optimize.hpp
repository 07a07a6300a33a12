#pragma once

#include "blockmod/modularity.hpp"
#include "blockmod/sbm.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace blockmod {

/// Tabu search settings. Unset iteration limits scale with the node count:
/// max_iters = 200 n, patience = 20 n.
struct TabuConfig {
  int tenure = 10;
  std::optional<std::int64_t> max_iters;
  std::optional<std::int64_t> patience;
  int restarts = 50;
  std::uint64_t seed = 1;
  /// Workers for independent restarts; the result does not depend on it.
  int threads = 1;

  std::int64_t max_iters_for(int n) const { return max_iters.value_or(200LL * n); }
  std::int64_t patience_for(int n) const { return patience.value_or(20LL * n); }
  void validate() const;
};

struct SearchResult {
  Labelling best;
  double best_value = 0.0;
  /// tabu_search: best value per restart. greedy_ascent / tabu_walk: value
  /// after every applied move, starting with the initial value.
  std::vector<double> trace;
  std::int64_t iterations = 0;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Incremental state for single-node relabelling moves: labelling, block
/// counts, and the number of neighbours every node has in every class.
class MoveState {
 public:
  MoveState(const Graph& graph, const ObjectiveTerms& terms, Labelling start);

  const Labelling& labels() const { return labels_; }
  const BlockCounts& counts() const { return counts_; }
  /// Running n^2 * objective, updated by deltas.
  double unnormalised() const { return value_; }

  /// Change in n^2 * objective if `node` moved to `label`.
  double delta(NodeId node, ClassLabel label) const;
  void move(NodeId node, ClassLabel label, double delta);
  void move(NodeId node, ClassLabel label) { move(node, label, delta(node, label)); }

 private:
  const Graph* graph_;
  const ObjectiveTerms* terms_;
  Labelling labels_;
  BlockCounts counts_;
  std::vector<std::int64_t> links_;
  double value_;
};

SearchResult tabu_search(const Graph& graph, int K, const ModularityKind& objective,
                         const TabuConfig& config);

/// One tabu trajectory from a given start; the trace records the current
/// value after each iteration.
SearchResult tabu_walk(const Graph& graph, const ModularityKind& objective,
                       const TabuConfig& config, const Labelling& start);

inline constexpr std::int64_t kDefaultEnumerationBudget = 2'000'000;

/// Exact maximiser by enumerating all K^n labellings in lexicographic order;
/// ties resolve to the lexicographically smallest labelling.
SearchResult exhaustive_map(const Graph& graph, int K, const ModularityKind& objective,
                            std::int64_t budget = kDefaultEnumerationBudget);

/// Steepest ascent over single-node moves until no move strictly improves.
SearchResult greedy_ascent(const Graph& graph, const ModularityKind& objective,
                           const Labelling& start);

}  // namespace blockmod
