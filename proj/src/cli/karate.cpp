#include "blockmod/edge_list.hpp"
#include "blockmod/experiments.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>

namespace blockmod::experiments {

namespace {

using json = nlohmann::ordered_json;

std::vector<ClassSummary> summarise_classes(const Graph& graph, const Labelling& e) {
  std::vector<ClassSummary> out(static_cast<std::size_t>(e.K()));
  for (int a = 0; a < e.K(); ++a) out[a].label = a + 1;
  for (NodeId i = 0; i < graph.n(); ++i) {
    auto& c = out[e[i]];
    c.members.push_back(i + 1);
    c.mean_degree += graph.degree(i);
    c.max_degree = std::max(c.max_degree, graph.degree(i));
  }
  for (auto& c : out)
    if (!c.members.empty()) c.mean_degree /= static_cast<double>(c.members.size());
  return out;
}

}  // namespace

Labelling canonical_labels(const Labelling& e) {
  std::vector<int> perm(static_cast<std::size_t>(e.K()), -1);
  int next = 0;
  for (NodeId i = 0; i < e.n(); ++i)
    if (perm[e[i]] < 0) perm[e[i]] = next++;
  for (auto& p : perm)
    if (p < 0) p = next++;
  return e.permuted(perm);
}

Graph load_dataset(const ExperimentConfig& config) {
  if (config.dataset == "karate") return karate_club();
  return load_edge_list(std::filesystem::path(config.dataset),
                        {.one_based = config.one_based, .n = config.nodes});
}

KarateReport run_karate(const ExperimentConfig& config) {
  config.validate();
  KarateReport report;
  report.graph = load_dataset(config);
  const Graph& g = report.graph;

  std::vector<int> order(static_cast<std::size_t>(g.n()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return g.degree(i) > g.degree(j); });
  for (std::size_t k = 0; k < std::min<std::size_t>(2, order.size()); ++k)
    report.top_degree_nodes.push_back(order[k] + 1);

  TabuConfig tabu = config.tabu;
  tabu.seed = config.seed;
  tabu.threads = config.worker_count();

  for (int K : config.K_values) {
    const ModularityKind kinds[] = {ModularityKind::bayes(config.hyper), ModularityKind::likelihood()};
    const std::size_t first = report.partitions.size();
    for (const auto& kind : kinds) {
      auto search = tabu_search(g, K, kind, tabu);
      KaratePartition p;
      p.K = K;
      p.objective = kind.tag == ObjectiveTag::Bayes ? "bayes" : "ml";
      p.labels = canonical_labels(search.best);
      const auto counts = block_counts(g, p.labels);
      p.value = evaluate(counts, kind);
      p.q_bayes = q_bayes(counts, config.hyper);
      p.q_likelihood = q_likelihood(counts);
      p.classes = summarise_classes(g, p.labels);
      report.partitions.push_back(std::move(p));
    }
    const auto& bayes = report.partitions[first];
    const auto& ml = report.partitions[first + 1];
    KarateComparison cmp;
    cmp.K = K;
    const auto match = best_permutation(coupling_matrix(ml.labels, bayes.labels));
    cmp.bayes_vs_ml_mismatch = g.n() - match.matched_count;
    if (report.top_degree_nodes.size() == 2) {
      const int u = report.top_degree_nodes[0] - 1;
      const int v = report.top_degree_nodes[1] - 1;
      cmp.top_degree_together_bayes = bayes.labels[u] == bayes.labels[v];
      cmp.top_degree_together_ml = ml.labels[u] == ml.labels[v];
    }
    report.comparisons.push_back(cmp);
  }
  return report;
}

std::string karate_json(const KarateReport& report, const ExperimentConfig& config) {
  json root;
  root["experiment"] = "karate";
  root["dataset"] = config.dataset;
  root["n"] = report.graph.n();
  root["edges"] = report.graph.edge_count();
  root["seed"] = config.seed;
  root["prior"] = {{"alpha", config.hyper.alpha},
                   {"beta1", config.hyper.beta1},
                   {"beta2", config.hyper.beta2}};
  root["tabu"] = {{"tenure", config.tabu.tenure},
                  {"restarts", config.tabu.restarts},
                  {"max_iters", config.tabu.max_iters_for(report.graph.n())},
                  {"patience", config.tabu.patience_for(report.graph.n())}};
  root["top_degree_nodes"] = report.top_degree_nodes;

  json parts = json::array();
  for (const auto& p : report.partitions) {
    json classes = json::array();
    for (const auto& c : p.classes)
      classes.push_back({{"label", c.label},
                         {"size", c.members.size()},
                         {"mean_degree", c.mean_degree},
                         {"max_degree", c.max_degree},
                         {"members", c.members}});
    parts.push_back({{"K", p.K},
                     {"objective", p.objective},
                     {"value", p.value},
                     {"q_bayes", p.q_bayes},
                     {"q_likelihood", p.q_likelihood},
                     {"labels", p.labels.one_based()},
                     {"classes", classes}});
  }
  root["partitions"] = parts;

  json cmps = json::array();
  for (const auto& c : report.comparisons)
    cmps.push_back({{"K", c.K},
                    {"bayes_vs_ml_mismatch", c.bayes_vs_ml_mismatch},
                    {"top_degree_together_bayes", c.top_degree_together_bayes},
                    {"top_degree_together_ml", c.top_degree_together_ml}});
  root["comparisons"] = cmps;
  return root.dump(2) + "\n";
}

}  // namespace blockmod::experiments
