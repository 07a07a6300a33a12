#include "blockmod/sbm.hpp"

#include "blockmod/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace blockmod {

namespace {

constexpr double kSumTolerance = 1e-12;
constexpr double kSymmetryTolerance = 1e-12;

void check_square(const Matrix& P, int K, const char* what) {
  if (P.rows() != K || P.cols() != K)
    throw DimensionError(std::string(what) + " must be K x K with K = " + std::to_string(K));
}

}  // namespace

SbmParams::SbmParams(Vector pi, Matrix P) : pi_(std::move(pi)), P_(std::move(P)) {
  const int K = static_cast<int>(pi_.size());
  if (K < 1) throw std::invalid_argument("SbmParams: K must be at least 1");
  check_square(P_, K, "P");
  if ((pi_.array() < 0.0).any() || !pi_.allFinite())
    throw std::invalid_argument("SbmParams: class proportions must be non-negative");
  if (std::abs(pi_.sum() - 1.0) > kSumTolerance)
    throw std::invalid_argument("SbmParams: class proportions must sum to 1");
  if (!P_.allFinite() || (P_.array() < 0.0).any() || (P_.array() > 1.0).any())
    throw std::invalid_argument("SbmParams: edge probabilities must lie in [0, 1]");
  for (int a = 0; a < K; ++a)
    for (int b = a + 1; b < K; ++b) {
      if (std::abs(P_(a, b) - P_(b, a)) > kSymmetryTolerance)
        throw std::invalid_argument("SbmParams: P must be symmetric");
      P_(b, a) = P_(a, b);
    }
}

SbmParams SbmParams::sparse(Vector pi, const Matrix& S, double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("SbmParams: rho must lie in (0, 1]");
  if ((S.array() < 0.0).any()) throw std::invalid_argument("SbmParams: S must be non-negative");
  SbmParams params(std::move(pi), rho * S);
  params.rho_ = rho;
  params.base_ = S;
  return params;
}

bool SbmParams::identifiable() const {
  const int K = this->K();
  for (int a = 0; a < K; ++a)
    for (int b = a + 1; b < K; ++b) {
      bool same = true;
      for (int c = 0; c < K && same; ++c)
        if (pi_[c] > 0.0 && P_(a, c) != P_(b, c)) same = false;
      if (same) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------

Graph::Graph(int n)
    : n_(n),
      words_per_row_((static_cast<std::size_t>(std::max(n, 0)) + 63) / 64),
      bits_(words_per_row_ * static_cast<std::size_t>(std::max(n, 0)), 0),
      neighbors_(static_cast<std::size_t>(std::max(n, 0))) {
  if (n < 0) throw std::invalid_argument("Graph: negative node count");
}

bool Graph::insert(NodeId i, NodeId j) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_)
    throw std::out_of_range("Graph: node index out of range");
  if (i == j) throw std::invalid_argument("Graph: self-loop on node " + std::to_string(i));
  auto& word = bits_[static_cast<std::size_t>(i) * words_per_row_ + (j >> 6)];
  const std::uint64_t mask = std::uint64_t{1} << (j & 63);
  if (word & mask) return false;
  word |= mask;
  bits_[static_cast<std::size_t>(j) * words_per_row_ + (i >> 6)] |= std::uint64_t{1} << (i & 63);
  neighbors_[i].push_back(j);
  neighbors_[j].push_back(i);
  ++edge_count_;
  return true;
}

Graph Graph::from_edges(int n, std::span<const std::pair<NodeId, NodeId>> edges) {
  Graph g(n);
  for (const auto& [i, j] : edges) g.insert(i, j);
  for (auto& list : g.neighbors_) std::sort(list.begin(), list.end());
  return g;
}

bool Graph::has_edge(NodeId i, NodeId j) const {
  return (bits_[static_cast<std::size_t>(i) * words_per_row_ + (j >> 6)] >> (j & 63)) & 1U;
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(static_cast<std::size_t>(edge_count_));
  for (NodeId i = 0; i < n_; ++i)
    for (NodeId j : neighbors_[i])
      if (i < j) out.emplace_back(i, j);
  return out;
}

// ---------------------------------------------------------------------------

Labelling::Labelling(std::vector<ClassLabel> labels, int K) : labels_(std::move(labels)), K_(K) {
  if (K < 1) throw std::invalid_argument("Labelling: K must be at least 1");
  for (auto c : labels_)
    if (c < 0 || c >= K) throw std::out_of_range("Labelling: label out of range");
}

Labelling Labelling::constant(int n, int K) {
  return Labelling(std::vector<ClassLabel>(static_cast<std::size_t>(n), 0), K);
}

Labelling Labelling::from_one_based(std::span<const int> labels, int K) {
  std::vector<ClassLabel> zero_based(labels.size());
  std::transform(labels.begin(), labels.end(), zero_based.begin(), [](int c) { return c - 1; });
  return Labelling(std::move(zero_based), K);
}

void Labelling::set(NodeId i, ClassLabel c) {
  if (i < 0 || i >= n()) throw std::out_of_range("Labelling: node index out of range");
  if (c < 0 || c >= K_) throw std::out_of_range("Labelling: label out of range");
  labels_[i] = c;
}

std::vector<int> Labelling::one_based() const {
  std::vector<int> out(labels_.size());
  std::transform(labels_.begin(), labels_.end(), out.begin(), [](ClassLabel c) { return c + 1; });
  return out;
}

std::vector<std::int64_t> Labelling::class_sizes() const {
  std::vector<std::int64_t> sizes(static_cast<std::size_t>(K_), 0);
  for (auto c : labels_) ++sizes[c];
  return sizes;
}

Labelling Labelling::permuted(std::span<const int> perm) const {
  if (static_cast<int>(perm.size()) != K_) throw DimensionError("Labelling: permutation size");
  std::vector<ClassLabel> out(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) out[i] = perm[labels_[i]];
  return Labelling(std::move(out), K_);
}

// ---------------------------------------------------------------------------

BlockCounts::BlockCounts(int K, int n)
    : O_(CountMatrix::Zero(K, K)), sizes_(static_cast<std::size_t>(K), 0), n_(n) {}

std::int64_t BlockCounts::total_edges() const {
  std::int64_t total = 0;
  for (int a = 0; a < K(); ++a)
    for (int b = a; b < K(); ++b) total += O_(a, b);
  return total;
}

BlockCounts BlockCounts::permuted(std::span<const int> perm) const {
  const int K = this->K();
  if (static_cast<int>(perm.size()) != K) throw DimensionError("BlockCounts: permutation size");
  BlockCounts out(K, n_);
  for (int a = 0; a < K; ++a) {
    out.sizes_[perm[a]] = sizes_[a];
    for (int b = 0; b < K; ++b) out.O_(perm[a], perm[b]) = O_(a, b);
  }
  return out;
}

BlockCounts block_counts(const Graph& graph, const Labelling& e) {
  if (e.n() != graph.n())
    throw DimensionError("block_counts: labelling has " + std::to_string(e.n()) +
                         " entries for a graph on " + std::to_string(graph.n()) + " nodes");
  BlockCounts counts(e.K(), graph.n());
  counts.sizes_ = e.class_sizes();
  for (const auto& [i, j] : graph.edges()) {
    const int a = e[i], b = e[j];
    ++counts.O_(a, b);
    if (a != b) ++counts.O_(b, a);
  }
  return counts;
}

void apply_move(BlockCounts& counts, Labelling& e, NodeId node, ClassLabel new_label,
                std::span<const std::int64_t> links) {
  if (node < 0 || node >= e.n()) throw std::out_of_range("apply_move: node index out of range");
  if (new_label < 0 || new_label >= e.K()) throw std::out_of_range("apply_move: label out of range");
  const int old_label = e[node];
  if (old_label == new_label) return;
  auto& O = counts.O_;
  const int K = counts.K();
  for (int c = 0; c < K; ++c) {
    if (links[c] == 0) continue;
    // remove edges node -> class c from block (old, c)
    O(old_label, c) -= links[c];
    if (c != old_label) O(c, old_label) -= links[c];
    // and add them to block (new, c)
    O(new_label, c) += links[c];
    if (c != new_label) O(c, new_label) += links[c];
  }
  --counts.sizes_[old_label];
  ++counts.sizes_[new_label];
  e.set(node, new_label);
}

void apply_move(BlockCounts& counts, const Graph& graph, Labelling& e, NodeId node,
                ClassLabel new_label) {
  if (node < 0 || node >= graph.n()) throw std::out_of_range("apply_move: node index out of range");
  std::vector<std::int64_t> links(static_cast<std::size_t>(e.K()), 0);
  for (NodeId j : graph.neighbors(node)) ++links[e[j]];
  apply_move(counts, e, node, new_label, links);
}

Matrix expected_counts(const SbmParams& params, const Labelling& e, const Labelling& z) {
  if (e.n() != z.n()) throw DimensionError("expected_counts: labellings differ in length");
  if (z.K() != params.K()) throw DimensionError("expected_counts: truth K differs from params K");
  const int n = e.n();
  Matrix R = Matrix::Zero(e.K(), z.K());
  for (int i = 0; i < n; ++i) R(e[i], z[i]) += 1.0 / n;
  Matrix out = static_cast<double>(n) * static_cast<double>(n) * R * params.P() * R.transpose();
  const Vector diag_term = R * params.P().diagonal();
  out.diagonal() -= static_cast<double>(n) * diag_term;
  return out;
}

SbmSample generate_sbm(const SbmParams& params, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_sbm: n must be at least 1");
  Rng rng(seed);
  const int K = params.K();
  std::vector<double> cumulative(static_cast<std::size_t>(K));
  double running = 0.0;
  for (int a = 0; a < K; ++a) cumulative[a] = (running += params.pi()[a]);

  std::vector<ClassLabel> labels(static_cast<std::size_t>(n));
  for (auto& label : labels) {
    const double u = rng.uniform() * running;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    label = static_cast<ClassLabel>(std::min<std::ptrdiff_t>(it - cumulative.begin(), K - 1));
  }

  const Matrix& P = params.P();
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (rng.bernoulli(P(labels[i], labels[j]))) edges.emplace_back(i, j);

  return {Graph::from_edges(n, edges), Labelling(std::move(labels), K)};
}

}  // namespace blockmod
