#include "blockmod/experiments.hpp"
#include "blockmod/parallel.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

namespace blockmod::experiments {

namespace {

void reject_unknown(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& where) {
  if (!node.IsMap()) throw ConfigError(where + " must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("invalid value for '" + key + "'");
  }
}

template <class T>
std::vector<T> list(const YAML::Node& node, const std::string& key) {
  if (node.IsScalar()) return {scalar<T>(node, key)};
  if (!node.IsSequence()) throw ConfigError("'" + key + "' must be a list");
  std::vector<T> out;
  for (const auto& item : node) out.push_back(scalar<T>(item, key));
  return out;
}

Matrix matrix(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence() || node.size() == 0) throw ConfigError("'" + key + "' must be a list of rows");
  const auto rows = static_cast<Eigen::Index>(node.size());
  Matrix M(rows, rows);
  for (Eigen::Index a = 0; a < rows; ++a) {
    const auto row = list<double>(node[static_cast<std::size_t>(a)], key);
    if (static_cast<Eigen::Index>(row.size()) != rows) throw ConfigError("'" + key + "' must be square");
    for (Eigen::Index b = 0; b < rows; ++b) M(a, b) = row[static_cast<std::size_t>(b)];
  }
  return M;
}

Vector vector(const YAML::Node& node, const std::string& key) {
  const auto values = list<double>(node, key);
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Matrix two_block(double within, double between) {
  Matrix M(2, 2);
  M << within, between, between, within;
  return M;
}

}  // namespace

ExperimentKind parse_kind(const std::string& name) {
  if (name == "sweep") return ExperimentKind::Sweep;
  if (name == "karate") return ExperimentKind::Karate;
  if (name == "theory") return ExperimentKind::Theory;
  if (name == "detect") return ExperimentKind::Detect;
  throw ConfigError("unknown experiment kind '" + name + "'");
}

std::string kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Sweep: return "sweep";
    case ExperimentKind::Karate: return "karate";
    case ExperimentKind::Theory: return "theory";
    case ExperimentKind::Detect: return "detect";
  }
  return "unknown";
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig config;
  config.kind = kind;
  switch (kind) {
    case ExperimentKind::Sweep:
      config.model.pi = Vector::Constant(2, 0.5);
      config.model.P = two_block(0.8, 0.2);
      config.n_grid = {40, 80, 160};
      config.replications = 50;
      config.tabu.restarts = 10;
      config.output = "sweep.csv";
      break;
    case ExperimentKind::Karate:
      config.dataset = "karate";
      config.K_values = {2, 4};
      config.output = "karate.json";
      break;
    case ExperimentKind::Theory:
      config.output = "theory.json";
      break;
    case ExperimentKind::Detect:
      config.output = "labels.txt";
      break;
  }
  return config;
}

void ExperimentConfig::validate() const {
  hyper.validate();
  tabu.validate();
  (void)objective_kind();
  if (replications < 1) throw ConfigError("replications must be at least 1");
  if (threads < 0) throw ConfigError("threads must be nonnegative");
  for (int K : K_values)
    if (K < 1) throw ConfigError("K must be at least 1");
  if (kind == ExperimentKind::Sweep) {
    if (n_grid.empty()) throw ConfigError("sweep: n grid must be nonempty");
    for (int n : n_grid)
      if (n < 2) throw ConfigError("sweep: every n must be at least 2");
    if (model.pi.size() < 1) throw ConfigError("sweep: model.pi is required");
    if (model.P && model.S) throw ConfigError("sweep: give either model.P (dense) or model.S (sparse)");
    if (!model.P && !model.S) throw ConfigError("sweep: model.P or model.S is required");
    if (model.S && model.rho.empty() && model.expected_degree.empty())
      throw ConfigError("sweep: sparse model needs a nonempty rho or expected_degree grid");
    if (model.S && !model.rho.empty() && !model.expected_degree.empty())
      throw ConfigError("sweep: give rho or expected_degree, not both");
  }
  if (kind == ExperimentKind::Detect && dataset.empty())
    throw ConfigError("detect: an edge-list path is required");
}

int ExperimentConfig::worker_count() const { return threads > 0 ? threads : default_thread_count(); }

ExperimentConfig parse_config(const std::string& yaml_text, std::optional<ExperimentKind> kind) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  reject_unknown(root,
                 {"experiment", "seed", "output", "objective", "replications", "timing", "threads",
                  "model", "grid", "prior", "tabu", "dataset", "K", "one_based", "nodes", "theory"},
                 "config");

  ExperimentKind resolved = kind.value_or(ExperimentKind::Sweep);
  if (root["experiment"]) {
    const auto declared = parse_kind(scalar<std::string>(root["experiment"], "experiment"));
    if (kind && *kind != declared)
      throw ConfigError("config is for '" + kind_name(declared) + "' but was given to '" +
                        kind_name(*kind) + "'");
    resolved = declared;
  }
  ExperimentConfig c = default_config(resolved);

  if (auto v = root["seed"]) c.seed = scalar<std::uint64_t>(v, "seed");
  if (auto v = root["output"]) c.output = scalar<std::string>(v, "output");
  if (auto v = root["objective"]) c.objective = scalar<std::string>(v, "objective");
  if (auto v = root["replications"]) c.replications = scalar<int>(v, "replications");
  if (auto v = root["timing"]) c.timing = scalar<bool>(v, "timing");
  if (auto v = root["threads"]) c.threads = scalar<int>(v, "threads");
  if (auto v = root["dataset"]) c.dataset = scalar<std::string>(v, "dataset");
  if (auto v = root["K"]) c.K_values = list<int>(v, "K");
  if (auto v = root["one_based"]) c.one_based = scalar<bool>(v, "one_based");
  if (auto v = root["nodes"]) c.nodes = scalar<int>(v, "nodes");

  if (auto model = root["model"]) {
    reject_unknown(model, {"pi", "P", "S", "rho", "expected_degree"}, "model");
    if (model["pi"]) c.model.pi = vector(model["pi"], "model.pi");
    if (model["P"] || model["S"]) {
      c.model.P.reset();
      c.model.S.reset();
    }
    if (model["P"]) c.model.P = matrix(model["P"], "model.P");
    if (model["S"]) c.model.S = matrix(model["S"], "model.S");
    if (model["rho"]) c.model.rho = list<double>(model["rho"], "model.rho");
    if (model["expected_degree"])
      c.model.expected_degree = list<double>(model["expected_degree"], "model.expected_degree");
  }
  if (auto grid = root["grid"]) {
    reject_unknown(grid, {"n"}, "grid");
    if (grid["n"]) c.n_grid = list<int>(grid["n"], "grid.n");
  }
  if (auto prior = root["prior"]) {
    reject_unknown(prior, {"alpha", "beta1", "beta2"}, "prior");
    if (prior["alpha"]) c.hyper.alpha = scalar<double>(prior["alpha"], "prior.alpha");
    if (prior["beta1"]) c.hyper.beta1 = scalar<double>(prior["beta1"], "prior.beta1");
    if (prior["beta2"]) c.hyper.beta2 = scalar<double>(prior["beta2"], "prior.beta2");
  }
  if (auto tabu = root["tabu"]) {
    reject_unknown(tabu, {"tenure", "restarts", "max_iters", "patience"}, "tabu");
    if (tabu["tenure"]) c.tabu.tenure = scalar<int>(tabu["tenure"], "tabu.tenure");
    if (tabu["restarts"]) c.tabu.restarts = scalar<int>(tabu["restarts"], "tabu.restarts");
    if (tabu["max_iters"]) c.tabu.max_iters = scalar<std::int64_t>(tabu["max_iters"], "tabu.max_iters");
    if (tabu["patience"]) c.tabu.patience = scalar<std::int64_t>(tabu["patience"], "tabu.patience");
  }
  if (auto theory = root["theory"]) {
    reject_unknown(theory,
                   {"checks", "maximality_trials", "maximality_K", "gradient_configurations",
                    "gap_exhaustive_n", "gap_sampled_n", "gap_samples", "gap_max_slope",
                    "mismatch_max_n", "mismatch_max_K", "mismatch_random_n", "mismatch_random_pairs",
                    "fault_injection"},
                   "theory");
    auto& t = c.theory;
    if (auto v = theory["checks"]) t.checks = v.IsNull() ? std::vector<std::string>{} : list<std::string>(v, "theory.checks");
    if (auto v = theory["maximality_trials"]) t.maximality_trials = scalar<int>(v, "theory.maximality_trials");
    if (auto v = theory["maximality_K"]) t.maximality_K = list<int>(v, "theory.maximality_K");
    if (auto v = theory["gradient_configurations"]) t.gradient_configurations = scalar<int>(v, "theory.gradient_configurations");
    if (auto v = theory["gap_exhaustive_n"]) t.gap_exhaustive_n = list<int>(v, "theory.gap_exhaustive_n");
    if (auto v = theory["gap_sampled_n"]) t.gap_sampled_n = list<int>(v, "theory.gap_sampled_n");
    if (auto v = theory["gap_samples"]) t.gap_samples = scalar<int>(v, "theory.gap_samples");
    if (auto v = theory["gap_max_slope"]) t.gap_max_slope = scalar<double>(v, "theory.gap_max_slope");
    if (auto v = theory["mismatch_max_n"]) t.mismatch_max_n = scalar<int>(v, "theory.mismatch_max_n");
    if (auto v = theory["mismatch_max_K"]) t.mismatch_max_K = scalar<int>(v, "theory.mismatch_max_K");
    if (auto v = theory["mismatch_random_n"]) t.mismatch_random_n = scalar<int>(v, "theory.mismatch_random_n");
    if (auto v = theory["mismatch_random_pairs"]) t.mismatch_random_pairs = scalar<std::int64_t>(v, "theory.mismatch_random_pairs");
    if (auto v = theory["fault_injection"]) t.fault_injection = scalar<std::string>(v, "theory.fault_injection");
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<ExperimentKind> kind) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), kind);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError("cannot write '" + path.string() + "'");
  out << text;
  out.flush();
  if (!out) throw OutputError("failed writing '" + path.string() + "'");
}

}  // namespace blockmod::experiments
