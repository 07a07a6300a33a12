#include "blockmod/optimize.hpp"

#include "blockmod/parallel.hpp"
#include "blockmod/rng.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace blockmod {

namespace {

// Strict improvement, ignoring differences at the level of summation-order
// rounding.
bool improves(double candidate, double incumbent) {
  return candidate > incumbent + 1e-12 * std::max(1.0, std::abs(incumbent));
}

void check_inputs(const Graph& graph, int K) {
  if (K < 1) throw std::invalid_argument("K must be at least 1");
  if (graph.n() < 1) throw std::invalid_argument("graph must have at least one node");
}

SearchResult finish(const Graph& graph, const ModularityKind& objective, Labelling best,
                    std::vector<double> trace, std::int64_t iterations) {
  SearchResult result;
  result.best_value = evaluate(block_counts(graph, best), objective);
  result.best = std::move(best);
  result.trace = std::move(trace);
  result.iterations = iterations;
  return result;
}

struct RestartOutcome {
  Labelling best;
  std::int64_t iterations = 0;
};

RestartOutcome run_tabu(const Graph& graph, const ObjectiveTerms& terms, const TabuConfig& config,
                        Labelling start, std::vector<double>* trajectory) {
  const int n = graph.n();
  const int K = start.K();
  MoveState state(graph, terms, std::move(start));
  Labelling best = state.labels();
  double best_value = state.unnormalised();
  if (trajectory) trajectory->push_back(best_value);

  std::vector<std::int64_t> tabu_until(static_cast<std::size_t>(n), 0);
  const std::int64_t max_iters = config.max_iters_for(n);
  const std::int64_t patience = config.patience_for(n);
  std::int64_t stale = 0;
  std::int64_t iter = 0;

  for (; iter < max_iters && K > 1; ++iter) {
    NodeId move_node = -1;
    ClassLabel move_label = -1;
    double move_delta = -std::numeric_limits<double>::infinity();
    const double current = state.unnormalised();
    for (NodeId i = 0; i < n; ++i) {
      const bool is_tabu = iter < tabu_until[i];
      const ClassLabel own = state.labels()[i];
      for (ClassLabel b = 0; b < K; ++b) {
        if (b == own) continue;
        const double d = state.delta(i, b);
        if (!(d > move_delta)) continue;
        // aspiration: a tabu move is allowed when it beats the best so far
        if (is_tabu && !improves(current + d, best_value)) continue;
        move_node = i;
        move_label = b;
        move_delta = d;
      }
    }
    if (move_node < 0) break;

    state.move(move_node, move_label, move_delta);
    tabu_until[move_node] = iter + 1 + config.tenure;
    if (trajectory) trajectory->push_back(state.unnormalised());

    if (improves(state.unnormalised(), best_value)) {
      best_value = state.unnormalised();
      best = state.labels();
      stale = 0;
    } else if (++stale >= patience) {
      ++iter;
      break;
    }
  }
  return {std::move(best), iter};
}

Labelling random_labelling(int n, int K, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ClassLabel> labels(static_cast<std::size_t>(n));
  for (auto& c : labels) c = static_cast<ClassLabel>(rng.index(static_cast<std::uint64_t>(K)));
  return Labelling(std::move(labels), K);
}

}  // namespace

void TabuConfig::validate() const {
  if (tenure < 0) throw std::invalid_argument("TabuConfig: tenure must be non-negative");
  if (restarts < 1) throw std::invalid_argument("TabuConfig: restarts must be at least 1");
  if (max_iters && *max_iters < 0) throw std::invalid_argument("TabuConfig: max_iters must be non-negative");
  if (patience && *patience < 0) throw std::invalid_argument("TabuConfig: patience must be non-negative");
}

// ---------------------------------------------------------------------------

MoveState::MoveState(const Graph& graph, const ObjectiveTerms& terms, Labelling start)
    : graph_(&graph),
      terms_(&terms),
      labels_(std::move(start)),
      counts_(block_counts(graph, labels_)),
      links_(static_cast<std::size_t>(graph.n()) * labels_.K(), 0),
      value_(terms.unnormalised(counts_)) {
  const int K = labels_.K();
  for (NodeId i = 0; i < graph.n(); ++i)
    for (NodeId j : graph.neighbors(i)) ++links_[static_cast<std::size_t>(i) * K + labels_[j]];
}

double MoveState::delta(NodeId node, ClassLabel b) const {
  const ClassLabel a = labels_[node];
  if (a == b) return 0.0;
  const int K = labels_.K();
  const std::int64_t* d = &links_[static_cast<std::size_t>(node) * K];
  const auto& O = counts_.O();
  const std::int64_t size_a = counts_.size(a), size_b = counts_.size(b);
  const std::int64_t new_a = size_a - 1, new_b = size_b + 1;
  auto new_size = [&](int c) { return c == a ? new_a : c == b ? new_b : counts_.size(c); };

  const ObjectiveTerms& t = *terms_;
  double diff = 0.0;
  for (int c = 0; c < K; ++c) {
    // block {a, c}
    std::int64_t edges_ac;
    if (c == a)
      edges_ac = O(a, a) - d[a];
    else if (c == b)
      edges_ac = O(a, b) - d[b] + d[a];
    else
      edges_ac = O(a, c) - d[c];
    diff += t.pair_term(c == a, edges_ac, new_a, new_size(c)) -
            t.pair_term(c == a, O(a, c), size_a, counts_.size(c));
    if (c == a) continue;
    // block {b, c}; {b, a} was handled above
    const std::int64_t edges_bc = c == b ? O(b, b) + d[b] : O(b, c) + d[c];
    diff += t.pair_term(c == b, edges_bc, new_b, new_size(c)) -
            t.pair_term(c == b, O(b, c), size_b, counts_.size(c));
  }
  diff += t.size_term(new_a) + t.size_term(new_b) - t.size_term(size_a) - t.size_term(size_b);
  return diff;
}

void MoveState::move(NodeId node, ClassLabel label, double delta) {
  const ClassLabel old = labels_[node];
  if (old == label) return;
  const int K = labels_.K();
  apply_move(counts_, labels_, node, label,
             std::span<const std::int64_t>(&links_[static_cast<std::size_t>(node) * K],
                                           static_cast<std::size_t>(K)));
  for (NodeId j : graph_->neighbors(node)) {
    --links_[static_cast<std::size_t>(j) * K + old];
    ++links_[static_cast<std::size_t>(j) * K + label];
  }
  value_ += delta;
}

// ---------------------------------------------------------------------------

SearchResult tabu_search(const Graph& graph, int K, const ModularityKind& objective,
                         const TabuConfig& config) {
  check_inputs(graph, K);
  config.validate();
  const int n = graph.n();
  if (K == 1) {
    Labelling trivial = Labelling::constant(n, 1);
    auto result = finish(graph, objective, trivial, {}, 0);
    result.trace.assign(1, result.best_value);
    return result;
  }

  const ObjectiveTerms terms(objective, n);
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(config.restarts));
  std::vector<double> values(outcomes.size());
  parallel_for(outcomes.size(), config.threads, [&](std::size_t r) {
    const auto seed = derive_seed(config.seed, {static_cast<std::uint64_t>(r)});
    outcomes[r] = run_tabu(graph, terms, config, random_labelling(n, K, seed), nullptr);
    values[r] = evaluate(block_counts(graph, outcomes[r].best), objective);
  });

  std::size_t winner = 0;
  std::int64_t iterations = 0;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    iterations += outcomes[r].iterations;
    if (improves(values[r], values[winner])) winner = r;
  }
  return finish(graph, objective, std::move(outcomes[winner].best), std::move(values), iterations);
}

SearchResult tabu_walk(const Graph& graph, const ModularityKind& objective,
                       const TabuConfig& config, const Labelling& start) {
  check_inputs(graph, start.K());
  config.validate();
  if (start.n() != graph.n()) throw DimensionError("tabu_walk: start labelling length mismatch");
  const ObjectiveTerms terms(objective, graph.n());
  std::vector<double> trajectory;
  auto outcome = run_tabu(graph, terms, config, start, &trajectory);
  const double scale = 1.0 / (static_cast<double>(graph.n()) * graph.n());
  for (auto& v : trajectory) v *= scale;
  return finish(graph, objective, std::move(outcome.best), std::move(trajectory), outcome.iterations);
}

SearchResult exhaustive_map(const Graph& graph, int K, const ModularityKind& objective,
                            std::int64_t budget) {
  check_inputs(graph, K);
  const int n = graph.n();
  // K^n without overflow
  std::int64_t total = 1;
  for (int i = 0; i < n; ++i) {
    if (total > budget / K) {
      throw BudgetExceeded("exhaustive_map: " + std::to_string(K) + "^" + std::to_string(n) +
                           " labellings exceed the budget of " + std::to_string(budget));
    }
    total *= K;
  }
  if (total > budget) throw BudgetExceeded("exhaustive_map: enumeration budget exceeded");

  const ObjectiveTerms terms(objective, n);
  MoveState state(graph, terms, Labelling::constant(n, K));
  Labelling best = state.labels();
  double best_value = terms.unnormalised(state.counts());

  // odometer over labels, node 0 most significant
  for (std::int64_t step = 1; step < total; ++step) {
    NodeId i = n - 1;
    while (state.labels()[i] == K - 1) {
      state.move(i, 0, 0.0);
      --i;
    }
    state.move(i, state.labels()[i] + 1, 0.0);
    const double value = terms.unnormalised(state.counts());
    if (improves(value, best_value)) {
      best_value = value;
      best = state.labels();
    }
  }
  return finish(graph, objective, std::move(best), {}, total);
}

SearchResult greedy_ascent(const Graph& graph, const ModularityKind& objective,
                           const Labelling& start) {
  check_inputs(graph, start.K());
  if (start.n() != graph.n()) throw DimensionError("greedy_ascent: start labelling length mismatch");
  const int n = graph.n();
  const int K = start.K();
  const ObjectiveTerms terms(objective, n);
  MoveState state(graph, terms, start);
  const double scale = 1.0 / (static_cast<double>(n) * n);
  std::vector<double> trace{state.unnormalised() * scale};
  std::int64_t iterations = 0;

  for (;;) {
    NodeId best_node = -1;
    ClassLabel best_label = -1;
    double best_delta = 0.0;
    const double current = state.unnormalised();
    for (NodeId i = 0; i < n; ++i)
      for (ClassLabel b = 0; b < K; ++b) {
        if (b == state.labels()[i]) continue;
        const double d = state.delta(i, b);
        if (improves(current + d, current + best_delta)) {
          best_node = i;
          best_label = b;
          best_delta = d;
        }
      }
    if (best_node < 0) break;
    state.move(best_node, best_label, best_delta);
    trace.push_back(state.unnormalised() * scale);
    ++iterations;
  }
  return finish(graph, objective, state.labels(), std::move(trace), iterations);
}

}  // namespace blockmod
