#pragma once

#include "blockmod/metrics.hpp"
#include "blockmod/modularity.hpp"
#include "blockmod/optimize.hpp"
#include "blockmod/sbm.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace blockmod::experiments {

/// Bad configuration or command-line usage (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Output could not be written (exit code 2).
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { Sweep, Karate, Theory, Detect };

struct ModelConfig {
  Vector pi;
  /// Edge probabilities for the dense regime.
  std::optional<Matrix> P;
  /// Base matrix for the sparse regime P = rho S.
  std::optional<Matrix> S;
  std::vector<double> rho;
  /// Alternative to `rho`: target expected degrees (n - 1) pi^T P pi, solved
  /// for rho at each n.
  std::vector<double> expected_degree;

  bool dense() const { return P.has_value(); }
};

struct TheorySettings {
  std::vector<std::string> checks{"maximality", "gradient", "equivalence", "mismatch"};
  int maximality_trials = 10'000;
  std::vector<int> maximality_K{2, 3, 4};
  int gradient_configurations = 100;
  std::vector<int> gap_exhaustive_n{4, 5, 6, 7, 8};
  std::vector<int> gap_sampled_n{20, 50, 100, 200};
  int gap_samples = 1000;
  double gap_max_slope = 0.2;
  int mismatch_max_n = 6;
  int mismatch_max_K = 3;
  int mismatch_random_n = 200;
  std::int64_t mismatch_random_pairs = 10'000;
  /// Test hook: "corrupt_tau" evaluates G(lambda) with a perturbed tau.
  std::string fault_injection;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Sweep;
  std::uint64_t seed = 1;
  std::string output;
  ModelConfig model;
  std::vector<int> n_grid;
  int replications = 1;
  TabuConfig tabu;
  PriorHyper hyper;
  std::string objective = "bayes";
  /// detect: edge-list path, or "karate" for the built-in dataset.
  std::string dataset;
  std::vector<int> K_values{2};
  bool one_based = true;
  std::optional<int> nodes;
  TheorySettings theory;
  /// Record wall-clock times. Off by default so outputs are reproducible byte for byte.
  bool timing = false;
  /// Workers for replications and restarts; 0 picks default_thread_count().
  int threads = 0;

  int worker_count() const;

  ModularityKind objective_kind() const { return ModularityKind::parse(objective, hyper); }
  void validate() const;
};

ExperimentKind parse_kind(const std::string& name);
std::string kind_name(ExperimentKind kind);

/// Defaults for a given experiment (the model used by the consistency sweep,
/// karate settings, and so on).
ExperimentConfig default_config(ExperimentKind kind);

/// YAML config; keys absent from the file keep the defaults of `kind`.
ExperimentConfig parse_config(const std::string& yaml_text, std::optional<ExperimentKind> kind = {});
ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<ExperimentKind> kind = {});

// ---------------------------------------------------------------------------

struct SweepRecord {
  int n = 0;
  std::string regime;  // "dense" or "sparse"
  double rho = 1.0;
  double expected_degree = 0.0;
  int replication = 0;
  std::uint64_t seed = 0;
  double misclassification = 0.0;
  bool strong_recovery = false;
  double q_bayes_truth = 0.0;
  double q_bayes_estimate = 0.0;
  double wall_seconds = 0.0;
};

/// One record per (n, rho, replication) in that order.
std::vector<SweepRecord> run_sweep(const ExperimentConfig& config);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records, bool timing);
std::string sweep_csv_header(bool timing);

struct SweepSummary {
  int n = 0;
  std::string regime;
  double rho = 0.0;
  double expected_degree = 0.0;
  int replications = 0;
  double strong_recovery_rate = 0.0;
  double mean_misclassification = 0.0;
};

/// Groups records by (n, regime, rho), preserving order of first appearance.
std::vector<SweepSummary> summarise(const std::vector<SweepRecord>& records);

// ---------------------------------------------------------------------------

/// Renames classes in order of first appearance along the nodes, so equal
/// partitions print identically. Empty classes take the remaining labels.
Labelling canonical_labels(const Labelling& e);

/// The configured dataset: "karate" for the built-in network, else an edge-list path.
Graph load_dataset(const ExperimentConfig& config);

struct ClassSummary {
  int label = 0;  // 1-based
  std::vector<int> members;  // 1-based node ids
  double mean_degree = 0.0;
  int max_degree = 0;
};

struct KaratePartition {
  int K = 0;
  std::string objective;
  Labelling labels;
  double value = 0.0;
  double q_bayes = 0.0;
  double q_likelihood = 0.0;
  std::vector<ClassSummary> classes;
};

struct KarateComparison {
  int K = 0;
  /// Nodes on which the Bayes and likelihood partitions differ, after the
  /// best relabelling.
  std::int64_t bayes_vs_ml_mismatch = 0;
  /// The two highest-degree nodes (1-based) share a class in the Bayes partition.
  bool top_degree_together_bayes = false;
  bool top_degree_together_ml = false;
};

struct KarateReport {
  Graph graph;
  std::vector<KaratePartition> partitions;
  std::vector<KarateComparison> comparisons;
  std::vector<int> top_degree_nodes;  // 1-based
};

KarateReport run_karate(const ExperimentConfig& config);
std::string karate_json(const KarateReport& report, const ExperimentConfig& config);

// ---------------------------------------------------------------------------

struct TheoryCheckResult {
  std::string name;
  bool passed = false;
  std::string details_json;  // serialized object
};

struct TheoryReport {
  std::vector<TheoryCheckResult> checks;
  bool passed() const;
};

TheoryReport run_theory(const ExperimentConfig& config);
std::string theory_json(const TheoryReport& report, const ExperimentConfig& config);

/// Least-squares slope of log(stat) against log(n).
double log_log_slope(const std::vector<double>& n, const std::vector<double>& stat);

// ---------------------------------------------------------------------------

struct DetectResult {
  Graph graph;
  SearchResult search;
  double q_bayes = 0.0;
  double q_likelihood = 0.0;
  double wall_seconds = 0.0;
};

DetectResult run_detect(const ExperimentConfig& config);
/// "node label" per line, node ids in the input's indexing, labels 1-based.
void write_labels(std::ostream& out, const Labelling& labels, bool one_based_nodes);
std::string detect_json(const DetectResult& result, const ExperimentConfig& config);

// ---------------------------------------------------------------------------

/// Reads a sweep CSV and renders strong-recovery rate and mean
/// misclassification against n as an SVG document.
std::string render_recovery_svg(std::istream& csv);

/// Writes text to a file, creating parent directories; throws OutputError.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace blockmod::experiments
