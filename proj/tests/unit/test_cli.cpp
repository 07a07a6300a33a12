#include "blockmod/edge_list.hpp"
#include "blockmod/experiments.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace blockmod;
using namespace blockmod::experiments;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "blockmod_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(BLOCKMOD_TOOL) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentConfig small_sweep() {
  auto c = parse_config(R"(
experiment: sweep
seed: 5
grid: {n: [20, 30]}
replications: 3
tabu: {restarts: 3}
)");
  c.threads = 1;
  return c;
}

}  // namespace

TEST(Config, DefaultsPerKind) {
  const auto sweep = default_config(ExperimentKind::Sweep);
  EXPECT_EQ(sweep.n_grid, (std::vector<int>{40, 80, 160}));
  EXPECT_EQ(sweep.replications, 50);
  ASSERT_TRUE(sweep.model.P);
  EXPECT_DOUBLE_EQ((*sweep.model.P)(0, 1), 0.2);
  EXPECT_NO_THROW(sweep.validate());
  const auto karate = default_config(ExperimentKind::Karate);
  EXPECT_EQ(karate.K_values, (std::vector<int>{2, 4}));
  EXPECT_EQ(karate.tabu.restarts, 50);
  EXPECT_DOUBLE_EQ(karate.hyper.alpha, 0.5);
}

TEST(Config, ParsesNestedKeys) {
  const auto c = parse_config(R"(
experiment: sweep
seed: 12345678901234
output: out.csv
objective: ml
model:
  pi: [0.25, 0.75]
  S: [[8, 2], [2, 8]]
  rho: [0.01, 0.02]
grid: {n: 100}
replications: 4
prior: {alpha: 1.0, beta1: 2.0, beta2: 3.0}
tabu: {tenure: 5, restarts: 7, max_iters: 1000, patience: 50}
threads: 2
)");
  EXPECT_EQ(c.kind, ExperimentKind::Sweep);
  EXPECT_EQ(c.seed, 12345678901234ULL);
  EXPECT_EQ(c.objective_kind().tag, ObjectiveTag::Likelihood);
  EXPECT_FALSE(c.model.dense());
  EXPECT_EQ(c.model.rho, (std::vector<double>{0.01, 0.02}));
  EXPECT_EQ(c.n_grid, (std::vector<int>{100}));
  EXPECT_DOUBLE_EQ(c.hyper.beta2, 3.0);
  EXPECT_EQ(c.tabu.tenure, 5);
  EXPECT_EQ(*c.tabu.patience, 50);
  EXPECT_EQ(c.worker_count(), 2);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, Rejections) {
  EXPECT_THROW(parse_config("bogus: 1"), ConfigError);
  EXPECT_THROW(parse_config("tabu: {tenure: 1, colour: red}"), ConfigError);
  EXPECT_THROW(parse_config("seed: [1, 2"), ConfigError);
  EXPECT_THROW(parse_config("seed: abc"), ConfigError);
  EXPECT_THROW(parse_config("experiment: karate", ExperimentKind::Sweep), ConfigError);
  EXPECT_THROW(parse_config("grid: {n: []}").validate(), ConfigError);
  EXPECT_THROW(parse_config("replications: 0").validate(), ConfigError);
  EXPECT_THROW(parse_config("model: {S: [[1, 0], [0, 1]]}").validate(), ConfigError);
  EXPECT_THROW(parse_config("model: {P: [[1, 0, 0], [0, 1]]}"), ConfigError);
  EXPECT_THROW(parse_config("objective: louvain").validate(), std::invalid_argument);
  EXPECT_THROW(parse_config("prior: {alpha: 0}").validate(), std::invalid_argument);
  EXPECT_THROW(load_config("/nonexistent/config.yaml"), ConfigError);
}

TEST(Config, ShippedConfigsLoad) {
  for (const auto& entry : fs::directory_iterator(fs::path(BLOCKMOD_SOURCE_DIR) / "configs")) {
    SCOPED_TRACE(entry.path().string());
    EXPECT_NO_THROW(load_config(entry.path()).validate());
  }
}

TEST(Sweep, RecordsInGridOrderWithSeeds) {
  const auto records = run_sweep(small_sweep());
  ASSERT_EQ(records.size(), 6u);
  EXPECT_EQ(records[0].n, 20);
  EXPECT_EQ(records[3].n, 30);
  EXPECT_EQ(records[4].replication, 1);
  for (const auto& r : records) {
    EXPECT_GE(r.misclassification, 0.0);
    EXPECT_LE(r.misclassification, 1.0);
    EXPECT_EQ(r.strong_recovery, r.misclassification == 0.0);
    // the recorded seed regenerates the instance
    const auto s = generate_sbm(SbmParams(Vector::Constant(2, 0.5), *small_sweep().model.P), r.n, r.seed);
    EXPECT_NEAR(q_bayes(block_counts(s.graph, s.truth), {}), r.q_bayes_truth, 1e-15);
  }
  const auto summary = summarise(records);
  ASSERT_EQ(summary.size(), 2u);
  EXPECT_EQ(summary[0].replications, 3);
}

TEST(Sweep, CsvIsByteIdenticalAcrossRunsAndWorkers) {
  auto c = small_sweep();
  std::ostringstream a, b, d;
  write_sweep_csv(a, run_sweep(c), false);
  write_sweep_csv(b, run_sweep(c), false);
  c.threads = 4;
  write_sweep_csv(d, run_sweep(c), false);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str(), d.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), sweep_csv_header(false));
}

TEST(Sweep, ExpectedDegreeGrid) {
  auto c = parse_config(R"(
experiment: sweep
model: {pi: [0.5, 0.5], S: [[8, 2], [2, 8]], expected_degree: [2, 10]}
grid: {n: [101]}
replications: 1
tabu: {restarts: 1}
)");
  const auto records = run_sweep(c);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_NEAR(records[0].expected_degree, 2.0, 1e-12);
  EXPECT_NEAR(records[1].rho, 10.0 / (100 * 5.0), 1e-15);
  c.model.expected_degree = {1000};
  EXPECT_THROW(run_sweep(c), ConfigError);
}

TEST(Sweep, TimingColumnOnlyOnRequest) {
  const auto records = run_sweep(small_sweep());
  std::ostringstream with;
  write_sweep_csv(with, records, true);
  EXPECT_NE(with.str().find("wall_seconds"), std::string::npos);
}

TEST(Karate, ReportStructure) {
  auto c = default_config(ExperimentKind::Karate);
  c.tabu.restarts = 10;
  c.threads = 1;
  const auto report = run_karate(c);
  EXPECT_EQ(report.top_degree_nodes, (std::vector<int>{34, 1}));
  ASSERT_EQ(report.partitions.size(), 4u);
  ASSERT_EQ(report.comparisons.size(), 2u);
  for (const auto& p : report.partitions) {
    EXPECT_EQ(p.labels[0], 0);  // canonical relabelling
    std::size_t members = 0;
    for (const auto& cls : p.classes) members += cls.members.size();
    EXPECT_EQ(members, 34u);
    EXPECT_DOUBLE_EQ(p.value, p.objective == "bayes" ? p.q_bayes : p.q_likelihood);
  }
  const auto json = karate_json(report, c);
  EXPECT_NE(json.find("\"comparisons\""), std::string::npos);
}

TEST(Theory, EmptyCheckListPasses) {
  auto c = parse_config("theory: {checks: []}", ExperimentKind::Theory);
  const auto report = run_theory(c);
  EXPECT_TRUE(report.checks.empty());
  EXPECT_TRUE(report.passed());
}

TEST(Theory, FaultInjectionFailsGradient) {
  auto c = parse_config("theory: {checks: [gradient], gradient_configurations: 20}", ExperimentKind::Theory);
  EXPECT_TRUE(run_theory(c).passed());
  c.theory.fault_injection = "corrupt_tau";
  const auto report = run_theory(c);
  ASSERT_EQ(report.checks.size(), 1u);
  EXPECT_FALSE(report.passed());
}

TEST(Theory, UnknownCheck) {
  auto c = parse_config("theory: {checks: [proof]}", ExperimentKind::Theory);
  EXPECT_THROW(run_theory(c), ConfigError);
}

TEST(Theory, LogLogSlope) {
  EXPECT_NEAR(log_log_slope({1, 10, 100}, {3, 30, 300}), 1.0, 1e-12);
  EXPECT_NEAR(log_log_slope({2, 4, 8}, {5, 5, 5}), 0.0, 1e-12);
}

TEST(Detect, TwoTrianglesSeparated) {
  const auto path = scratch("triangles.txt");
  write_text_file(path, "1 2\n2 3\n1 3\n4 5\n5 6\n4 6\n");
  auto c = default_config(ExperimentKind::Detect);
  c.dataset = path.string();
  c.K_values = {2};
  c.tabu.restarts = 5;
  const auto r = run_detect(c);
  EXPECT_EQ(r.search.best.one_based(), (std::vector<int>{1, 1, 1, 2, 2, 2}));
  std::ostringstream out;
  write_labels(out, r.search.best, true);
  EXPECT_EQ(out.str(), "1 1\n2 1\n3 1\n4 2\n5 2\n6 2\n");
}

TEST(Detect, SingleClass) {
  auto c = default_config(ExperimentKind::Detect);
  c.dataset = "karate";
  c.K_values = {1};
  const auto r = run_detect(c);
  for (int label : r.search.best.one_based()) EXPECT_EQ(label, 1);
}

TEST(Detect, KarateMatchesKarateExperiment) {
  auto dc = default_config(ExperimentKind::Detect);
  dc.dataset = (fs::path(BLOCKMOD_SOURCE_DIR) / "data" / "karate.edgelist").string();
  dc.K_values = {2};
  auto kc = default_config(ExperimentKind::Karate);
  kc.K_values = {2};
  EXPECT_EQ(run_detect(dc).search.best, run_karate(kc).partitions.front().labels);
}

TEST(Detect, ParseErrorsPropagate) {
  const auto path = scratch("bad.txt");
  write_text_file(path, "1 1\n");
  auto c = default_config(ExperimentKind::Detect);
  c.dataset = path.string();
  EXPECT_THROW(run_detect(c), ParseError);
}

TEST(Detect, SidecarOmitsRuntimeUnlessTiming) {
  auto c = default_config(ExperimentKind::Detect);
  c.dataset = "karate";
  c.tabu.restarts = 2;
  const auto r = run_detect(c);
  EXPECT_EQ(detect_json(r, c).find("runtime_seconds"), std::string::npos);
  c.timing = true;
  EXPECT_NE(detect_json(r, c).find("runtime_seconds"), std::string::npos);
}

TEST(Plot, RendersSvg) {
  std::ostringstream csv;
  write_sweep_csv(csv, run_sweep(small_sweep()), false);
  std::istringstream in(csv.str());
  const auto svg = render_recovery_svg(in);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  std::istringstream bad("n,regime\n1,dense\n");
  EXPECT_THROW(render_recovery_svg(bad), ConfigError);
}

TEST(Output, UnwritablePath) {
  EXPECT_THROW(write_text_file("/proc/blockmod/cannot/write.csv", "x"), OutputError);
}

TEST(Tool, ExitCodes) {
  const auto out = scratch("tool_out");
  EXPECT_EQ(run_tool("theory --checks gradient --out " + (out / "t.json").string()), 0);
  EXPECT_EQ(run_tool("theory --checks gradient --inject-fault corrupt_tau --out " + (out / "f.json").string()), 1);
  EXPECT_EQ(run_tool("theory --checks nothing --out " + (out / "x.json").string()), 2);
  EXPECT_EQ(run_tool("frobnicate"), 2);
  EXPECT_EQ(run_tool("detect --input /nonexistent/file --k 2"), 2);
  EXPECT_EQ(run_tool("sweep --config /nonexistent.yaml"), 2);
  EXPECT_EQ(run_tool("detect --input karate --k 2 --restarts 3 --out " + (out / "labels.txt").string()), 0);
  EXPECT_TRUE(fs::exists(out / "labels.txt.json"));
  EXPECT_EQ(run_tool("sweep --replications 2 --restarts 2 --out /proc/nope/sweep.csv"), 2);
}

TEST(Tool, SweepBytesIndependentOfThreads) {
  const auto cfg = scratch("tiny_sweep.yaml");
  write_text_file(cfg, "experiment: sweep\nseed: 3\ngrid: {n: [16, 24]}\nreplications: 4\ntabu: {restarts: 2}\n");
  const auto a = scratch("sweep_a.csv"), b = scratch("sweep_b.csv");
  ASSERT_EQ(run_tool("sweep --config " + cfg.string() + " --threads 1 --out " + a.string()), 0);
  ASSERT_EQ(run_tool("sweep --config " + cfg.string() + " --threads 3 --out " + b.string()), 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(slurp(a).empty());
  const auto svg = scratch("sweep.svg");
  EXPECT_EQ(run_tool("plot --input " + a.string() + " --out " + svg.string()), 0);
  EXPECT_NE(slurp(svg).find("</svg>"), std::string::npos);
}
