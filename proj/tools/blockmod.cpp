// blockmod: community detection in the stochastic block model by Bayesian
// modularity maximisation, with experiment drivers.
//
//   blockmod sweep  [--config F] [--seed S] [--out sweep.csv]
//   blockmod karate [--config F] [--k 2 --k 4] [--out karate.json]
//   blockmod theory [--config F] [--out theory.json] [--inject-fault corrupt_tau]
//   blockmod detect --input graph.txt --k 2 [--objective bayes|ml] [--out labels.txt]
//   blockmod plot   --input sweep.csv [--out recovery.svg]
//
// Exit codes: 0 success, 1 a theory check failed, 2 usage, config or I/O error.

#include "blockmod/edge_list.hpp"
#include "blockmod/experiments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace ex = blockmod::experiments;

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> restarts;
  std::optional<int> threads;
  bool timing = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "YAML experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "master seed");
  cmd->add_option("--out", c.out, "output path ('-' for stdout)");
  cmd->add_option("--restarts", c.restarts, "tabu restarts")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", c.threads, "worker threads (default: BLOCKMOD_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
}

ex::ExperimentConfig resolve(ex::ExperimentKind kind, const Common& c) {
  auto config = c.config_path.empty() ? ex::default_config(kind) : ex::load_config(c.config_path, kind);
  if (c.seed) config.seed = *c.seed;
  if (!c.out.empty()) config.output = c.out;
  if (c.restarts) config.tabu.restarts = *c.restarts;
  if (c.threads) config.threads = *c.threads;
  if (c.timing) config.timing = true;
  return config;
}

void emit(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  ex::write_text_file(path, text);
}

std::string fixed(double x, int digits = 4) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << x;
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic block model community detection by Bayesian modularity"};
  app.require_subcommand(1);

  Common sweep_opts, karate_opts, theory_opts, detect_opts;
  std::optional<std::string> objective;

  auto* sweep = app.add_subcommand("sweep", "Monte Carlo recovery sweep, CSV output");
  add_common(sweep, sweep_opts);
  sweep->add_option("--objective", objective, "bayes or ml")->check(CLI::IsMember({"bayes", "ml"}));
  std::optional<int> replications;
  sweep->add_option("--replications", replications, "replications per grid point")
      ->check(CLI::PositiveNumber);
  sweep->add_flag("--timing", sweep_opts.timing, "add a wall_seconds column");

  auto* karate = app.add_subcommand("karate", "Bayesian and likelihood partitions of the karate club");
  add_common(karate, karate_opts);
  std::vector<int> karate_k;
  karate->add_option("--k", karate_k, "class counts (repeatable)")->check(CLI::PositiveNumber);

  auto* theory = app.add_subcommand("theory", "numerical checks of the population identities");
  add_common(theory, theory_opts);
  std::optional<std::string> fault;
  theory->add_option("--inject-fault", fault, "test hook")->check(CLI::IsMember({"corrupt_tau"}));
  std::optional<std::vector<std::string>> checks;
  theory->add_option("--checks", checks, "subset of maximality, gradient, equivalence, mismatch");

  auto* detect = app.add_subcommand("detect", "label the nodes of an edge list");
  add_common(detect, detect_opts);
  std::string input;
  std::optional<int> detect_k;
  std::optional<int> nodes;
  bool zero_based = false;
  std::string sidecar;
  detect->add_option("--input", input, "edge list path, or 'karate'");
  detect->add_option("--k", detect_k, "number of classes")->check(CLI::PositiveNumber);
  detect->add_option("--objective", objective, "bayes or ml")->check(CLI::IsMember({"bayes", "ml"}));
  detect->add_option("--n", nodes, "declared node count")->check(CLI::PositiveNumber);
  detect->add_flag("--zero-based", zero_based, "node ids start at 0");
  detect->add_option("--sidecar", sidecar, "summary JSON path (default: <out>.json)");
  detect->add_flag("--timing", detect_opts.timing, "record runtime in the summary");

  auto* plot = app.add_subcommand("plot", "render recovery curves from a sweep CSV as SVG");
  std::string plot_input, plot_out = "recovery.svg";
  plot->add_option("--input", plot_input, "sweep CSV")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", plot_out, "SVG path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sweep) {
      auto config = resolve(ex::ExperimentKind::Sweep, sweep_opts);
      if (objective) config.objective = *objective;
      if (replications) config.replications = *replications;
      const auto records = ex::run_sweep(config);
      std::ostringstream csv;
      ex::write_sweep_csv(csv, records, config.timing);
      emit(config.output, csv.str());
      for (const auto& s : ex::summarise(records))
        std::cerr << "n=" << s.n << " " << s.regime << " rho=" << s.rho
                  << " degree=" << fixed(s.expected_degree, 2)
                  << " strong_recovery=" << fixed(s.strong_recovery_rate, 3)
                  << " misclassification=" << fixed(s.mean_misclassification, 4) << '\n';
      return 0;
    }
    if (*karate) {
      auto config = resolve(ex::ExperimentKind::Karate, karate_opts);
      if (!karate_k.empty()) config.K_values = karate_k;
      const auto report = ex::run_karate(config);
      emit(config.output, ex::karate_json(report, config));
      for (const auto& p : report.partitions)
        std::cerr << "K=" << p.K << " " << p.objective << " value=" << fixed(p.value, 6) << '\n';
      for (const auto& c : report.comparisons)
        std::cerr << "K=" << c.K << " bayes/ml mismatch=" << c.bayes_vs_ml_mismatch
                  << " top-degree nodes together (bayes)=" << (c.top_degree_together_bayes ? "yes" : "no")
                  << '\n';
      return 0;
    }
    if (*theory) {
      auto config = resolve(ex::ExperimentKind::Theory, theory_opts);
      if (fault) config.theory.fault_injection = *fault;
      if (checks) config.theory.checks = *checks;
      const auto report = ex::run_theory(config);
      emit(config.output, ex::theory_json(report, config));
      for (const auto& c : report.checks)
        std::cerr << c.name << ": " << (c.passed ? "pass" : "FAIL") << '\n';
      return report.passed() ? 0 : 1;
    }
    if (*detect) {
      auto config = resolve(ex::ExperimentKind::Detect, detect_opts);
      if (!input.empty()) config.dataset = input;
      if (detect_k) config.K_values = {*detect_k};
      if (objective) config.objective = *objective;
      if (nodes) config.nodes = *nodes;
      if (zero_based) config.one_based = false;
      const auto result = ex::run_detect(config);
      std::ostringstream labels;
      ex::write_labels(labels, result.search.best, config.one_based);
      emit(config.output, labels.str());
      const std::string summary = ex::detect_json(result, config);
      if (sidecar.empty()) sidecar = config.output == "-" ? "" : config.output + ".json";
      if (sidecar.empty())
        std::cerr << summary;
      else
        emit(sidecar, summary);
      return 0;
    }
    if (*plot) {
      std::ifstream in(plot_input);
      if (!in) throw ex::OutputError("cannot read '" + plot_input + "'");
      emit(plot_out, ex::render_recovery_svg(in));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "blockmod: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
