#include "blockmod/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace blockmod {

namespace {

void check_pair(const Labelling& e, const Labelling& c) {
  if (e.n() != c.n()) throw DimensionError("labellings differ in length");
  if (e.K() != c.K()) throw DimensionError("labellings differ in class count");
}

constexpr int kEnumerationLimit = 8;

PermutationMatch enumerate_permutations(const CountMatrix& counts, int n) {
  const int K = static_cast<int>(counts.rows());
  std::vector<int> sigma(static_cast<std::size_t>(K));
  std::iota(sigma.begin(), sigma.end(), 0);
  PermutationMatch best{sigma, -1, n};
  do {
    std::int64_t matched = 0;
    for (int b = 0; b < K; ++b) matched += counts(sigma[b], b);
    if (matched > best.matched_count) {
      best.sigma = sigma;
      best.matched_count = matched;
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return best;
}

// Hungarian method (potentials, O(K^3)) maximising sum counts(sigma(b), b).
PermutationMatch hungarian(const CountMatrix& counts, int n) {
  const int K = static_cast<int>(counts.rows());
  constexpr auto inf = std::numeric_limits<std::int64_t>::max() / 4;
  // rows of the cost matrix: true classes b; columns: estimated classes a
  auto cost = [&](int b, int a) { return -counts(a, b); };
  std::vector<std::int64_t> u(K + 1, 0), v(K + 1, 0);
  std::vector<int> owner(K + 1, 0), way(K + 1, 0);
  for (int row = 1; row <= K; ++row) {
    owner[0] = row;
    int col0 = 0;
    std::vector<std::int64_t> minv(K + 1, inf);
    std::vector<char> used(K + 1, 0);
    do {
      used[col0] = 1;
      const int row0 = owner[col0];
      std::int64_t delta = inf;
      int col1 = 0;
      for (int col = 1; col <= K; ++col) {
        if (used[col]) continue;
        const std::int64_t cur = cost(row0 - 1, col - 1) - u[row0] - v[col];
        if (cur < minv[col]) {
          minv[col] = cur;
          way[col] = col0;
        }
        if (minv[col] < delta) {
          delta = minv[col];
          col1 = col;
        }
      }
      for (int col = 0; col <= K; ++col) {
        if (used[col]) {
          u[owner[col]] += delta;
          v[col] -= delta;
        } else {
          minv[col] -= delta;
        }
      }
      col0 = col1;
    } while (owner[col0] != 0);
    do {
      const int col1 = way[col0];
      owner[col0] = owner[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  PermutationMatch match{std::vector<int>(static_cast<std::size_t>(K)), 0, n};
  for (int col = 1; col <= K; ++col) match.sigma[owner[col] - 1] = col - 1;
  for (int b = 0; b < K; ++b) match.matched_count += counts(match.sigma[b], b);
  return match;
}

}  // namespace

std::vector<std::int64_t> CouplingMatrix::row_counts() const {
  std::vector<std::int64_t> out(static_cast<std::size_t>(counts_.rows()));
  for (Eigen::Index a = 0; a < counts_.rows(); ++a) out[a] = counts_.row(a).sum();
  return out;
}

std::vector<std::int64_t> CouplingMatrix::column_counts() const {
  std::vector<std::int64_t> out(static_cast<std::size_t>(counts_.cols()));
  for (Eigen::Index b = 0; b < counts_.cols(); ++b) out[b] = counts_.col(b).sum();
  return out;
}

CouplingMatrix coupling_matrix(const Labelling& e, const Labelling& c) {
  check_pair(e, c);
  CountMatrix counts = CountMatrix::Zero(e.K(), c.K());
  for (int i = 0; i < e.n(); ++i) ++counts(e[i], c[i]);
  return CouplingMatrix(std::move(counts), e.n());
}

PermutationMatch best_permutation(const CouplingMatrix& R) {
  if (R.K() < 1) throw std::invalid_argument("best_permutation: K must be at least 1");
  if (R.counts().rows() != R.counts().cols()) throw DimensionError("best_permutation: R must be square");
  return R.K() <= kEnumerationLimit ? enumerate_permutations(R.counts(), R.n())
                                    : hungarian(R.counts(), R.n());
}

std::int64_t mismatch_count(const Labelling& e, const Labelling& c) {
  if (e.n() != c.n()) throw DimensionError("labellings differ in length");
  std::int64_t count = 0;
  for (int i = 0; i < e.n(); ++i) count += e[i] != c[i];
  return count;
}

std::int64_t half_l1_discrepancy(const CouplingMatrix& R) {
  const auto column = R.column_counts();
  const auto& counts = R.counts();
  std::int64_t l1 = 0;
  for (Eigen::Index a = 0; a < counts.rows(); ++a)
    for (Eigen::Index b = 0; b < counts.cols(); ++b) {
      const std::int64_t diag = a == b ? column[b] : 0;
      l1 += std::abs(diag - counts(a, b));
    }
  if (l1 % 2 != 0) throw std::logic_error("half_l1_discrepancy: odd L1 distance");
  return l1 / 2;
}

double misclassification(const Labelling& e, const Labelling& c, bool match) {
  check_pair(e, c);
  const int n = e.n();
  if (n == 0) return 0.0;
  const auto R = coupling_matrix(e, c);
  if (!match) {
    const auto direct = mismatch_count(e, c);
    if (direct != half_l1_discrepancy(R))
      throw std::logic_error("misclassification: mismatch count disagrees with coupling discrepancy");
    return static_cast<double>(direct) / n;
  }
  const auto best = best_permutation(R);
  return static_cast<double>(n - best.matched_count) / n;
}

bool strong_recovery(const Labelling& e, const Labelling& c) {
  check_pair(e, c);
  return best_permutation(coupling_matrix(e, c)).matched_count == e.n();
}

}  // namespace blockmod
