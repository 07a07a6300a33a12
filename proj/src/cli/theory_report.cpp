#include "blockmod/experiments.hpp"
#include "blockmod/theory.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace blockmod::experiments {

namespace {

using json = nlohmann::ordered_json;

// Fault hook for the gradient check: a tau with the wrong curvature.
double corrupted_tau(double x) { return tau(x) + 0.01 * x * x; }

Matrix assortative(int K) {
  Matrix P = Matrix::Constant(K, K, 0.2);
  P.diagonal().setConstant(0.8);
  return P;
}

double finite_or_null(double x) { return std::isfinite(x) ? x : std::numeric_limits<double>::quiet_NaN(); }

TheoryCheckResult check_maximality(const TheorySettings& t, std::uint64_t seed) {
  json per_k = json::array();
  bool ok = true;
  for (int K : t.maximality_K) {
    const auto report = theory::maximality_check(assortative(K), Vector::Constant(K, 1.0 / K),
                                                 t.maximality_trials,
                                                 derive_seed(seed, {1, static_cast<std::uint64_t>(K)}));
    ok = ok && report.passed();
    per_k.push_back({{"K", K},
                     {"trials", report.trials},
                     {"h_violations", report.h_violations},
                     {"h_not_strict", report.h_not_strict},
                     {"g_violations", report.g_violations},
                     {"g_not_strict", report.g_not_strict},
                     {"min_h_gap", report.min_h_gap},
                     {"min_g_gap", report.min_g_gap},
                     {"passed", report.passed()}});
  }
  return {"maximality", ok, json{{"per_K", per_k}}.dump()};
}

TheoryCheckResult check_gradient(const TheorySettings& t, std::uint64_t seed) {
  if (!t.fault_injection.empty() && t.fault_injection != "corrupt_tau")
    throw ConfigError("unknown fault injection '" + t.fault_injection + "'");
  const TauFunction tau_fn = t.fault_injection == "corrupt_tau" ? corrupted_tau : tau;
  const auto report = theory::gradient_check(t.gradient_configurations, derive_seed(seed, {2}),
                                             1e-5, tau_fn);
  json details{{"configurations", report.configurations},
               {"failures", report.failures},
               {"max_relative_error", report.max_relative_error},
               {"tolerance", report.tolerance}};
  if (!t.fault_injection.empty()) details["fault_injection"] = t.fault_injection;
  return {"gradient", report.passed(), details.dump()};
}

TheoryCheckResult check_equivalence(const TheorySettings& t, const PriorHyper& hyper,
                                    std::uint64_t seed) {
  Matrix P(2, 2);
  P << 0.8, 0.2, 0.2, 0.8;
  const SbmParams params(Vector::Constant(2, 0.5), P);
  std::vector<double> ns, stats;
  json rows = json::array();
  auto record = [&](int n, const theory::GapStats& gap, const char* mode) {
    const double stat = gap.max_full_gap * n * n / std::log(static_cast<double>(n));
    ns.push_back(n);
    stats.push_back(stat);
    rows.push_back({{"n", n},
                    {"mode", mode},
                    {"labellings", gap.labellings},
                    {"max_gap", gap.max_full_gap},
                    {"max_bayes_ml_gap", gap.max_bayes_ml_gap},
                    {"statistic", stat}});
  };
  for (int n : t.gap_exhaustive_n) {
    const auto sample = generate_sbm(params, n, derive_seed(seed, {3, static_cast<std::uint64_t>(n)}));
    record(n, theory::equivalence_gap_exhaustive(sample.graph, 2, hyper), "exhaustive");
  }
  for (int n : t.gap_sampled_n) {
    const auto graph_seed = derive_seed(seed, {3, static_cast<std::uint64_t>(n)});
    const auto sample = generate_sbm(params, n, graph_seed);
    record(n, theory::equivalence_gap_sampled(sample.graph, 2, hyper, t.gap_samples,
                                              derive_seed(graph_seed, {4})),
           "sampled");
  }
  json details{{"rows", rows}, {"max_slope", t.gap_max_slope}};
  bool ok = true;
  if (ns.size() >= 2) {
    const double slope = log_log_slope(ns, stats);
    details["slope"] = finite_or_null(slope);
    ok = std::isfinite(slope) && slope <= t.gap_max_slope;
  }
  return {"equivalence", ok, details.dump()};
}

TheoryCheckResult check_mismatch(const TheorySettings& t, std::uint64_t seed) {
  const auto exhaustive = theory::mismatch_exhaustive(t.mismatch_max_n, t.mismatch_max_K);
  json details{{"exhaustive", {{"max_n", t.mismatch_max_n},
                               {"max_K", t.mismatch_max_K},
                               {"pairs", exhaustive.pairs},
                               {"failures", exhaustive.failures}}}};
  bool ok = exhaustive.passed();
  if (t.mismatch_random_pairs > 0) {
    const auto sampled = theory::mismatch_sampled(t.mismatch_random_n, std::max(2, t.mismatch_max_K),
                                                 t.mismatch_random_pairs, derive_seed(seed, {5}));
    details["sampled"] = {{"n", t.mismatch_random_n},
                          {"K", std::max(2, t.mismatch_max_K)},
                          {"pairs", sampled.pairs},
                          {"failures", sampled.failures}};
    ok = ok && sampled.passed();
  }
  return {"mismatch", ok, details.dump()};
}

}  // namespace

bool TheoryReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

double log_log_slope(const std::vector<double>& n, const std::vector<double>& stat) {
  if (n.size() != stat.size() || n.size() < 2)
    throw std::invalid_argument("log_log_slope: need at least two matching points");
  double mx = 0, my = 0;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(n[i] > 0) || !(stat[i] > 0)) return std::numeric_limits<double>::quiet_NaN();
    x.push_back(std::log(n[i]));
    y.push_back(std::log(stat[i]));
    mx += x.back();
    my += y.back();
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

TheoryReport run_theory(const ExperimentConfig& config) {
  config.validate();
  const auto& t = config.theory;
  TheoryReport report;
  for (const auto& name : t.checks) {
    if (name == "maximality")
      report.checks.push_back(check_maximality(t, config.seed));
    else if (name == "gradient")
      report.checks.push_back(check_gradient(t, config.seed));
    else if (name == "equivalence")
      report.checks.push_back(check_equivalence(t, config.hyper, config.seed));
    else if (name == "mismatch")
      report.checks.push_back(check_mismatch(t, config.seed));
    else
      throw ConfigError("unknown theory check '" + name + "'");
  }
  return report;
}

std::string theory_json(const TheoryReport& report, const ExperimentConfig& config) {
  json root;
  root["experiment"] = "theory";
  root["seed"] = config.seed;
  root["passed"] = report.passed();
  json checks = json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"details", json::parse(c.details_json)}});
  root["checks"] = checks;
  return root.dump(2) + "\n";
}

}  // namespace blockmod::experiments
