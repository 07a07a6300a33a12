#pragma once

#include "blockmod/modularity.hpp"
#include "blockmod/rng.hpp"
#include "blockmod/sbm.hpp"
#include "blockmod/special.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace blockmod::theory {

/// Throws unless R is K x K, entrywise >= 0 and sums to 1 within `tol`.
void check_probability_matrix(const Matrix& R, double tol = 1e-9);

/// Random K x K probability matrix, Dirichlet(1, ..., 1) over the K^2 cells.
Matrix random_probability_matrix(int K, Rng& rng);

/// True if some row permutation of R is diagonal, i.e. every row and column
/// holds at most one nonzero entry.
bool is_permuted_diagonal(const Matrix& R);

/// Population likelihood functional
///   H_P(R) = 1/2 sum_{a,b} r_a r_b tau((R P R^T)_ab / (r_a r_b)),  r = R 1,
/// with 0 tau(0/0) = 0.
double h_p(const Matrix& R, const Matrix& P, TauFunction tau_fn = tau);

/// Same with tau0(u) = u log u - u; the small-rho limit of H.
double g_p(const Matrix& R, const Matrix& P);

struct FiniteNValue {
  double value = 0.0;
  /// Terms dropped because r_a (r_b - 1/n) < 0 or the tau argument left [0, 1].
  int degenerate_terms = 0;
};

/// Finite-n version of H_P that removes self-pairs from the diagonal blocks:
///   1/2 sum_{a,b} r_a (r_b - d_ab/n) tau( ((R P R^T)_ab - d_ab (R diag P)_a / n)
///                                         / (r_a (r_b - d_ab/n)) ).
FiniteNValue h_p_n(const Matrix& R, const Matrix& P, double n, TauFunction tau_fn = tau);

/// Bernoulli Kullback-Leibler divergence K(p || q); +inf when p is not
/// absolutely continuous with respect to q.
double kl_bernoulli(double p, double q);
/// Poisson divergence s log(s/t) + t - s.
double kl_poisson(double s, double t);

/// Coordinates R = Diag(f) + sum_{b != b'} lambda(b, b') Delta_{bb'}, where
/// Delta_{bb'} has +1 at (b, b') and -1 at (b', b'). The column sums of R
/// stay equal to f. The diagonal of `lambda` is ignored.
struct LambdaCoords {
  Vector f;
  Matrix lambda;

  static LambdaCoords at_zero(Vector f);
  /// Inverse map: f = R^T 1, lambda(b, b') = R(b, b') off the diagonal.
  static LambdaCoords from_matrix(const Matrix& R);

  int K() const { return static_cast<int>(f.size()); }
  Matrix reconstruct() const;
  /// Entrywise >= 0 after reconstruction.
  bool feasible() const;
};

Matrix delta_basis(int K, int b, int b_prime);

/// G(lambda) = H_{P,n}(R(lambda)).
double g_lambda(const LambdaCoords& coords, const Matrix& P, double n, TauFunction tau_fn = tau);

/// Closed-form partial derivative of G at lambda = 0 along lambda(b, b'):
///   -sum_a f_a K(P_ab' || P_ab) + K(P_b'b' || P_bb) / (2n).
double grad_g_zero(const Vector& f, const Matrix& P, double n, int b, int b_prime);

/// Central difference (fn(x + h) - fn(x - h)) / 2h.
double central_difference(const std::function<double(double)>& fn, double x, double h = 1e-6);

struct GradientCheckReport {
  int configurations = 0;
  int failures = 0;
  double max_relative_error = 0.0;
  double tolerance = 0.0;
  bool passed() const { return failures == 0; }
};

/// Compares grad_g_zero with central differences of g_lambda on random
/// configurations (K in {2,3}, n in {50,500}, P in [0.1,0.9]).
GradientCheckReport gradient_check(int configurations, std::uint64_t seed, double tolerance = 1e-5,
                                   TauFunction tau_fn = tau);

struct GapStats {
  double max_full_gap = 0.0;      // max |Q_B - Q_ML - Q_P|
  double max_bayes_ml_gap = 0.0;  // max |Q_B - Q_ML|
  std::int64_t labellings = 0;
};

GapStats equivalence_gap(const Graph& graph, const PriorHyper& hyper,
                         std::span<const Labelling> labellings);

/// All K^n labellings (budget-limited like exhaustive_map).
GapStats equivalence_gap_exhaustive(const Graph& graph, int K, const PriorHyper& hyper,
                                    std::int64_t budget = 2'000'000);

/// `count` uniformly random labellings.
GapStats equivalence_gap_sampled(const Graph& graph, int K, const PriorHyper& hyper, int count,
                                 std::uint64_t seed);

struct MaximalityReport {
  int trials = 0;
  int h_violations = 0;  // H_P(R) > H_P(Diag(R^T 1)) + slack
  int h_not_strict = 0;  // gap <= 0 for R not a permuted diagonal
  int g_violations = 0;
  int g_not_strict = 0;
  double min_h_gap = 0.0;
  double min_g_gap = 0.0;
  bool passed() const {
    return h_violations == 0 && h_not_strict == 0 && g_violations == 0 && g_not_strict == 0;
  }
};

/// Samples random probability matrices R and checks
/// H_P(R) <= H_P(Diag(R^T 1)) (and the same for G_P), strictly unless R is a
/// permuted diagonal. Requires (P, pi) identifiable.
MaximalityReport maximality_check(const Matrix& P, const Vector& pi, int trials, std::uint64_t seed,
                                  double slack = 1e-12);

struct MismatchReport {
  std::int64_t pairs = 0;
  std::int64_t failures = 0;
  bool passed() const { return failures == 0; }
};

/// Direct mismatch count against n/2 ||Diag(f(c)) - R(e,c)||_1 for every
/// pair of labellings with n <= max_n and K <= max_K.
MismatchReport mismatch_exhaustive(int max_n, int max_K);

/// Same on `pairs` random pairs at size n with K classes.
MismatchReport mismatch_sampled(int n, int K, std::int64_t pairs, std::uint64_t seed);

}  // namespace blockmod::theory
