#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace blockmod {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

using NodeId = std::int32_t;
/// Class labels are 0-based in memory; every external interface is 1-based.
using ClassLabel = std::int32_t;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Class proportions `pi` and a symmetric edge-probability matrix `P`.
/// Optionally `P = rho * S` for a fixed base matrix `S` (sparse regime).
class SbmParams {
 public:
  SbmParams(Vector pi, Matrix P);

  static SbmParams sparse(Vector pi, const Matrix& S, double rho);

  int K() const { return static_cast<int>(pi_.size()); }
  const Vector& pi() const { return pi_; }
  const Matrix& P() const { return P_; }
  std::optional<double> rho() const { return rho_; }
  const std::optional<Matrix>& base() const { return base_; }

  /// Probability of an edge between two uniformly chosen nodes, pi^T P pi.
  double edge_density() const { return pi_.dot(P_ * pi_); }
  /// (n - 1) * edge_density().
  double expected_degree(int n) const { return (n - 1) * edge_density(); }

  /// Rows of P pairwise distinct after dropping columns of zero-mass classes.
  bool identifiable() const;

 private:
  Vector pi_;
  Matrix P_;
  std::optional<double> rho_;
  std::optional<Matrix> base_;
};

/// Simple undirected graph without self-loops. Immutable once built.
/// Keeps a dense bit matrix for O(1) adjacency queries and sorted neighbor
/// lists for O(degree) traversal.
class Graph {
 public:
  explicit Graph(int n = 0);

  /// Duplicate edges (in either orientation) collapse; self-loops throw.
  static Graph from_edges(int n, std::span<const std::pair<NodeId, NodeId>> edges);

  int n() const { return n_; }
  std::int64_t edge_count() const { return edge_count_; }
  bool has_edge(NodeId i, NodeId j) const;
  int degree(NodeId i) const { return static_cast<int>(neighbors_[i].size()); }
  std::span<const NodeId> neighbors(NodeId i) const { return neighbors_[i]; }

  /// All edges as (i, j) with i < j, lexicographically sorted.
  std::vector<std::pair<NodeId, NodeId>> edges() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.neighbors_ == b.neighbors_;
  }

 private:
  bool insert(NodeId i, NodeId j);

  int n_;
  std::size_t words_per_row_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::vector<NodeId>> neighbors_;
  std::int64_t edge_count_ = 0;
};

/// Assignment of each node to one of K classes. Empty classes are allowed.
class Labelling {
 public:
  Labelling() = default;
  Labelling(std::vector<ClassLabel> labels, int K);

  /// All nodes in class 0.
  static Labelling constant(int n, int K);
  static Labelling from_one_based(std::span<const int> labels, int K);

  int n() const { return static_cast<int>(labels_.size()); }
  int K() const { return K_; }
  ClassLabel operator[](NodeId i) const { return labels_[i]; }
  void set(NodeId i, ClassLabel c);
  const std::vector<ClassLabel>& labels() const { return labels_; }
  std::vector<int> one_based() const;
  std::vector<std::int64_t> class_sizes() const;

  /// Relabel classes: node in class c moves to perm[c].
  Labelling permuted(std::span<const int> perm) const;

  friend bool operator==(const Labelling&, const Labelling&) = default;

 private:
  std::vector<ClassLabel> labels_;
  int K_ = 1;
};

/// Block sufficient statistics of a (graph, labelling) pair.
///   O(a,b): edges between classes a and b (within a when a == b), symmetric.
///   size(a): nodes in class a.
///   pairs(a,b): node pairs available, n_a n_b off-diagonal and
///               n_a (n_a - 1) / 2 on the diagonal.
class BlockCounts {
 public:
  BlockCounts(int K, int n);

  int K() const { return static_cast<int>(sizes_.size()); }
  int n() const { return n_; }
  std::int64_t O(int a, int b) const { return O_(a, b); }
  const CountMatrix& O() const { return O_; }
  std::int64_t size(int a) const { return sizes_[a]; }
  const std::vector<std::int64_t>& sizes() const { return sizes_; }

  std::int64_t pairs(int a, int b) const {
    return a == b ? sizes_[a] * (sizes_[a] - 1) / 2 : sizes_[a] * sizes_[b];
  }
  /// O(a,b) off-diagonal, 2 O(a,a) on the diagonal.
  std::int64_t O_tilde(int a, int b) const { return a == b ? 2 * O_(a, a) : O_(a, b); }

  std::int64_t total_edges() const;

  /// Copy with class c renamed to perm[c].
  BlockCounts permuted(std::span<const int> perm) const;

  friend bool operator==(const BlockCounts& x, const BlockCounts& y) {
    return x.n_ == y.n_ && x.sizes_ == y.sizes_ && x.O_ == y.O_;
  }

 private:
  friend BlockCounts block_counts(const Graph&, const Labelling&);
  friend void apply_move(BlockCounts&, const Graph&, Labelling&, NodeId, ClassLabel);
  friend void apply_move(BlockCounts&, Labelling&, NodeId, ClassLabel,
                         std::span<const std::int64_t>);

  CountMatrix O_;
  std::vector<std::int64_t> sizes_;
  int n_;
};

BlockCounts block_counts(const Graph& graph, const Labelling& e);

/// Moves `node` to `new_label`, updating both the labelling and the counts in
/// O(degree(node) + K).
void apply_move(BlockCounts& counts, const Graph& graph, Labelling& e, NodeId node,
                ClassLabel new_label);

/// Same, with the number of neighbours of `node` in each class supplied by
/// the caller (O(K)).
void apply_move(BlockCounts& counts, Labelling& e, NodeId node, ClassLabel new_label,
                std::span<const std::int64_t> links_to_class);

/// E(O~(e) | Z = z) as n^2 R P R^T - n Diag(R diag(P)), with R = R(e, z).
Matrix expected_counts(const SbmParams& params, const Labelling& e, const Labelling& z);

struct SbmSample {
  Graph graph;
  Labelling truth;
};

/// Labels i.i.d. from pi, then each pair i < j joined with probability
/// P(z_i, z_j). Deterministic in `seed`.
SbmSample generate_sbm(const SbmParams& params, int n, std::uint64_t seed);

}  // namespace blockmod
