#pragma once

#include "blockmod/sbm.hpp"

#include <cstdint>
#include <vector>

namespace blockmod {

/// Joint label frequencies of two labellings, stored as integer counts so
/// that identities in units of 1/n can be checked exactly.
/// R(a, b) = #{i : e_i = a, c_i = b} / n.
class CouplingMatrix {
 public:
  CouplingMatrix(CountMatrix counts, int n) : counts_(std::move(counts)), n_(n) {}

  int K() const { return static_cast<int>(counts_.rows()); }
  int n() const { return n_; }
  const CountMatrix& counts() const { return counts_; }
  double operator()(int a, int b) const { return static_cast<double>(counts_(a, b)) / n_; }
  Matrix R() const { return counts_.cast<double>() / static_cast<double>(n_); }

  /// n f(e): row sums.
  std::vector<std::int64_t> row_counts() const;
  /// n f(c): column sums.
  std::vector<std::int64_t> column_counts() const;

 private:
  CountMatrix counts_;
  int n_;
};

/// sigma maps true class b to estimated class sigma[b]; matched counts
/// sum_b n R(sigma(b), b).
struct PermutationMatch {
  std::vector<int> sigma;
  std::int64_t matched_count = 0;
  int n = 0;

  double matched_fraction() const { return n == 0 ? 1.0 : static_cast<double>(matched_count) / n; }
};

CouplingMatrix coupling_matrix(const Labelling& e, const Labelling& c);

/// Exact maximiser of sum_b R(sigma(b), b). Lexicographically smallest sigma
/// among ties for K <= 8 (full enumeration); Hungarian method above that.
PermutationMatch best_permutation(const CouplingMatrix& R);

/// #{i : e_i != c_i}.
std::int64_t mismatch_count(const Labelling& e, const Labelling& c);

/// n * (1/2) || Diag(f(c)) - R(e, c) ||_1, computed from counts. Always an
/// integer; equals mismatch_count.
std::int64_t half_l1_discrepancy(const CouplingMatrix& R);

/// Fraction of misclassified nodes. With match = false this is the raw
/// mismatch fraction; with match = true it is minimised over relabellings.
double misclassification(const Labelling& e, const Labelling& c, bool match);

/// Exact recovery up to a permutation of class labels.
bool strong_recovery(const Labelling& e, const Labelling& c);

}  // namespace blockmod
