#include "blockmod/experiments.hpp"
#include "blockmod/parallel.hpp"
#include "blockmod/rng.hpp"

#include <bit>
#include <chrono>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

namespace blockmod::experiments {

namespace {

struct Job {
  int n;
  double rho;
  int replication;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

SbmParams params_for(const ModelConfig& model, double rho) {
  if (model.dense()) return SbmParams(model.pi, *model.P);
  return SbmParams::sparse(model.pi, *model.S, rho);
}

std::vector<double> rho_grid(const ModelConfig& model, int n) {
  if (model.dense()) return {1.0};
  if (!model.expected_degree.empty()) {
    const double base_density = model.pi.dot(*model.S * model.pi);
    if (base_density <= 0) throw ConfigError("sweep: pi^T S pi must be positive");
    std::vector<double> out;
    for (double lambda : model.expected_degree) {
      const double rho = lambda / ((n - 1) * base_density);
      if (!(rho > 0) || rho * model.S->maxCoeff() > 1.0)
        throw ConfigError("sweep: expected degree " + fmt(lambda) + " is not attainable at n = " +
                          std::to_string(n));
      out.push_back(rho);
    }
    return out;
  }
  return model.rho;
}

}  // namespace

std::vector<SweepRecord> run_sweep(const ExperimentConfig& config) {
  config.validate();
  const auto objective = config.objective_kind();

  std::vector<Job> jobs;
  for (int n : config.n_grid)
    for (double rho : rho_grid(config.model, n))
      for (int r = 0; r < config.replications; ++r) jobs.push_back({n, rho, r});
  // Fail on bad parameters before spending time on any replication.
  for (int n : config.n_grid)
    for (double rho : rho_grid(config.model, n)) (void)params_for(config.model, rho);

  std::vector<SweepRecord> records(jobs.size());
  parallel_for(jobs.size(), config.worker_count(), [&](std::size_t j) {
    const auto& job = jobs[j];
    const auto start = std::chrono::steady_clock::now();
    const auto params = params_for(config.model, job.rho);
    const auto seed = derive_seed(config.seed, {static_cast<std::uint64_t>(job.n),
                                                std::bit_cast<std::uint64_t>(job.rho),
                                                static_cast<std::uint64_t>(job.replication)});
    const auto sample = generate_sbm(params, job.n, seed);

    TabuConfig tabu = config.tabu;
    tabu.seed = derive_seed(seed, {1});
    tabu.threads = 1;
    const auto search = tabu_search(sample.graph, params.K(), objective, tabu);

    SweepRecord& rec = records[j];
    rec.n = job.n;
    rec.regime = config.model.dense() ? "dense" : "sparse";
    rec.rho = job.rho;
    rec.expected_degree = params.expected_degree(job.n);
    rec.replication = job.replication;
    rec.seed = seed;
    rec.misclassification = misclassification(search.best, sample.truth, true);
    rec.strong_recovery = strong_recovery(search.best, sample.truth);
    rec.q_bayes_truth = q_bayes(block_counts(sample.graph, sample.truth), config.hyper);
    rec.q_bayes_estimate = q_bayes(block_counts(sample.graph, search.best), config.hyper);
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return records;
}

std::string sweep_csv_header(bool timing) {
  std::string h =
      "n,regime,rho,expected_degree,replication,seed,misclassification,strong_recovery,"
      "q_bayes_truth,q_bayes_estimate";
  if (timing) h += ",wall_seconds";
  return h;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records, bool timing) {
  out << sweep_csv_header(timing) << '\n';
  for (const auto& r : records) {
    out << r.n << ',' << r.regime << ',' << fmt(r.rho) << ',' << fmt(r.expected_degree) << ','
        << r.replication << ',' << r.seed << ',' << fmt(r.misclassification) << ','
        << (r.strong_recovery ? 1 : 0) << ',' << fmt(r.q_bayes_truth) << ','
        << fmt(r.q_bayes_estimate);
    if (timing) out << ',' << fmt(r.wall_seconds);
    out << '\n';
  }
}

std::vector<SweepSummary> summarise(const std::vector<SweepRecord>& records) {
  std::vector<SweepSummary> out;
  std::map<std::tuple<int, std::string, double>, std::size_t> index;
  for (const auto& r : records) {
    const auto key = std::make_tuple(r.n, r.regime, r.rho);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      out.push_back({r.n, r.regime, r.rho, r.expected_degree, 0, 0.0, 0.0});
    }
    auto& s = out[it->second];
    ++s.replications;
    s.strong_recovery_rate += r.strong_recovery ? 1.0 : 0.0;
    s.mean_misclassification += r.misclassification;
  }
  for (auto& s : out) {
    s.strong_recovery_rate /= s.replications;
    s.mean_misclassification /= s.replications;
  }
  return out;
}

}  // namespace blockmod::experiments
