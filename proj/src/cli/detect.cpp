#include "blockmod/experiments.hpp"

#include <json.hpp>

#include <chrono>
#include <ostream>

namespace blockmod::experiments {

DetectResult run_detect(const ExperimentConfig& config) {
  config.validate();
  if (config.K_values.size() != 1) throw ConfigError("detect: exactly one K is required");
  const auto start = std::chrono::steady_clock::now();
  DetectResult result;
  result.graph = load_dataset(config);
  const int K = config.K_values.front();
  if (K > result.graph.n()) throw ConfigError("detect: K exceeds the node count");

  TabuConfig tabu = config.tabu;
  tabu.seed = config.seed;
  tabu.threads = config.worker_count();
  result.search = tabu_search(result.graph, K, config.objective_kind(), tabu);
  result.search.best = canonical_labels(result.search.best);
  const auto counts = block_counts(result.graph, result.search.best);
  result.q_bayes = q_bayes(counts, config.hyper);
  result.q_likelihood = q_likelihood(counts);
  result.search.best_value = evaluate(counts, config.objective_kind());
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

void write_labels(std::ostream& out, const Labelling& labels, bool one_based_nodes) {
  const int base = one_based_nodes ? 1 : 0;
  for (NodeId i = 0; i < labels.n(); ++i) out << i + base << ' ' << labels[i] + 1 << '\n';
}

std::string detect_json(const DetectResult& result, const ExperimentConfig& config) {
  using json = nlohmann::ordered_json;
  json root;
  root["experiment"] = "detect";
  root["dataset"] = config.dataset;
  root["n"] = result.graph.n();
  root["edges"] = result.graph.edge_count();
  root["K"] = result.search.best.K();
  root["objective"] = config.objective_kind().name();
  root["value"] = result.search.best_value;
  root["q_bayes"] = result.q_bayes;
  root["q_likelihood"] = result.q_likelihood;
  root["seed"] = config.seed;
  root["restarts"] = config.tabu.restarts;
  root["iterations"] = result.search.iterations;
  root["class_sizes"] = result.search.best.class_sizes();
  if (config.timing) root["runtime_seconds"] = result.wall_seconds;
  return root.dump(2) + "\n";
}

}  // namespace blockmod::experiments
