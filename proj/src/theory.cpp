#include "blockmod/theory.hpp"

#include "blockmod/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace blockmod::theory {

namespace {

constexpr double kRatioSlack = 1e-12;

// Clamp rounding overshoot of a ratio that is mathematically in [0, 1].
double clamp_unit(double x) {
  if (x < 0.0 && x > -kRatioSlack) return 0.0;
  if (x > 1.0 && x < 1.0 + kRatioSlack) return 1.0;
  return x;
}

void check_square(const Matrix& R, const Matrix& P) {
  if (R.rows() != R.cols() || P.rows() != P.cols() || R.rows() != P.rows())
    throw DimensionError("R and P must be square matrices of the same size");
}

// Odometer over {0..K-1}^n, node 0 most significant.
template <class Fn>
void for_each_labelling(int n, int K, Fn&& fn) {
  std::vector<ClassLabel> labels(static_cast<std::size_t>(n), 0);
  for (;;) {
    fn(labels);
    int i = n - 1;
    while (i >= 0 && labels[i] == K - 1) labels[i--] = 0;
    if (i < 0) return;
    ++labels[i];
  }
}

void accumulate_gap(GapStats& stats, const BlockCounts& counts, const PriorHyper& hyper) {
  const double qb = q_bayes(counts, hyper);
  const double qml = q_likelihood(counts);
  const double qp = q_prior(counts, hyper.alpha);
  stats.max_full_gap = std::max(stats.max_full_gap, std::abs(qb - qml - qp));
  stats.max_bayes_ml_gap = std::max(stats.max_bayes_ml_gap, std::abs(qb - qml));
  ++stats.labellings;
}

bool mismatch_holds(const Labelling& e, const Labelling& c) {
  return mismatch_count(e, c) == half_l1_discrepancy(coupling_matrix(e, c));
}

}  // namespace

void check_probability_matrix(const Matrix& R, double tol) {
  if (R.rows() != R.cols()) throw DimensionError("probability matrix must be square");
  if ((R.array() < 0.0).any()) throw std::invalid_argument("probability matrix has negative entries");
  if (std::abs(R.sum() - 1.0) > tol) throw std::invalid_argument("probability matrix must sum to 1");
}

Matrix random_probability_matrix(int K, Rng& rng) {
  Matrix R(K, K);
  for (int a = 0; a < K; ++a)
    for (int b = 0; b < K; ++b) R(a, b) = rng.exponential();
  return R / R.sum();
}

bool is_permuted_diagonal(const Matrix& R) {
  for (Eigen::Index a = 0; a < R.rows(); ++a)
    if ((R.row(a).array() != 0.0).count() > 1) return false;
  for (Eigen::Index b = 0; b < R.cols(); ++b)
    if ((R.col(b).array() != 0.0).count() > 1) return false;
  return true;
}

double h_p(const Matrix& R, const Matrix& P, TauFunction tau_fn) {
  check_square(R, P);
  const Vector r = R.rowwise().sum();
  const Matrix M = R * P * R.transpose();
  double total = 0.0;
  for (Eigen::Index a = 0; a < R.rows(); ++a)
    for (Eigen::Index b = 0; b < R.rows(); ++b) {
      const double mass = r[a] * r[b];
      if (mass == 0.0) continue;
      total += mass * tau_fn(clamp_unit(M(a, b) / mass));
    }
  return 0.5 * total;
}

double g_p(const Matrix& R, const Matrix& P) {
  check_square(R, P);
  const Vector r = R.rowwise().sum();
  const Matrix M = R * P * R.transpose();
  double total = 0.0;
  for (Eigen::Index a = 0; a < R.rows(); ++a)
    for (Eigen::Index b = 0; b < R.rows(); ++b) {
      const double mass = r[a] * r[b];
      if (mass == 0.0) continue;
      total += mass * tau0(std::max(0.0, M(a, b) / mass));
    }
  return 0.5 * total;
}

FiniteNValue h_p_n(const Matrix& R, const Matrix& P, double n, TauFunction tau_fn) {
  check_square(R, P);
  if (!(n >= 2.0)) throw std::invalid_argument("h_p_n: n must be at least 2");
  const Vector r = R.rowwise().sum();
  const Matrix M = R * P * R.transpose();
  const Vector self = R * P.diagonal();  // (R diag P)_a = sum_k R_ak P_kk
  FiniteNValue out;
  double total = 0.0;
  for (Eigen::Index a = 0; a < R.rows(); ++a)
    for (Eigen::Index b = 0; b < R.rows(); ++b) {
      const bool diagonal = a == b;
      const double mass = r[a] * (r[b] - (diagonal ? 1.0 / n : 0.0));
      const double edges = M(a, b) - (diagonal ? self[a] / n : 0.0);
      if (mass == 0.0) continue;
      const double ratio = clamp_unit(edges / mass);
      if (mass < 0.0 || !(ratio >= 0.0 && ratio <= 1.0)) {
        ++out.degenerate_terms;
        continue;
      }
      total += mass * tau_fn(ratio);
    }
  out.value = 0.5 * total;
  return out;
}

double kl_bernoulli(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0))
    throw std::domain_error("kl_bernoulli: arguments must lie in [0, 1]");
  auto part = [](double x, double y) {
    if (x == 0.0) return 0.0;
    if (y == 0.0) return std::numeric_limits<double>::infinity();
    return x * std::log(x / y);
  };
  return part(p, q) + part(1.0 - p, 1.0 - q);
}

double kl_poisson(double s, double t) {
  if (!(s >= 0.0 && t >= 0.0)) throw std::domain_error("kl_poisson: arguments must be non-negative");
  if (s == 0.0) return t;
  if (t == 0.0) return std::numeric_limits<double>::infinity();
  return s * std::log(s / t) + t - s;
}

// ---------------------------------------------------------------------------

LambdaCoords LambdaCoords::at_zero(Vector f) {
  const auto K = f.size();
  return {std::move(f), Matrix::Zero(K, K)};
}

LambdaCoords LambdaCoords::from_matrix(const Matrix& R) {
  if (R.rows() != R.cols()) throw DimensionError("LambdaCoords: R must be square");
  LambdaCoords coords{R.colwise().sum().transpose(), R};
  coords.lambda.diagonal().setZero();
  return coords;
}

Matrix LambdaCoords::reconstruct() const {
  const int K = this->K();
  if (lambda.rows() != K || lambda.cols() != K) throw DimensionError("LambdaCoords: lambda must be K x K");
  Matrix R = f.asDiagonal();
  for (int b = 0; b < K; ++b)
    for (int bp = 0; bp < K; ++bp) {
      if (b == bp) continue;
      R(b, bp) += lambda(b, bp);
      R(bp, bp) -= lambda(b, bp);
    }
  return R;
}

bool LambdaCoords::feasible() const {
  for (int b = 0; b < K(); ++b)
    for (int bp = 0; bp < K(); ++bp)
      if (b != bp && lambda(b, bp) < 0.0) return false;
  return (reconstruct().array() >= 0.0).all();
}

Matrix delta_basis(int K, int b, int b_prime) {
  if (b < 0 || b_prime < 0 || b >= K || b_prime >= K)
    throw std::out_of_range("delta_basis: class index out of range");
  if (b == b_prime) throw std::invalid_argument("delta_basis: classes must differ");
  Matrix D = Matrix::Zero(K, K);
  D(b, b_prime) = 1.0;
  D(b_prime, b_prime) = -1.0;
  return D;
}

double g_lambda(const LambdaCoords& coords, const Matrix& P, double n, TauFunction tau_fn) {
  return h_p_n(coords.reconstruct(), P, n, tau_fn).value;
}

double grad_g_zero(const Vector& f, const Matrix& P, double n, int b, int b_prime) {
  const auto K = f.size();
  if (P.rows() != K || P.cols() != K) throw DimensionError("grad_g_zero: P must be K x K");
  if (b < 0 || b_prime < 0 || b >= K || b_prime >= K)
    throw std::out_of_range("grad_g_zero: class index out of range");
  if (b == b_prime) throw std::invalid_argument("grad_g_zero: classes must differ");
  if (!((P.array() > 0.0).all() && (P.array() < 1.0).all()))
    throw std::domain_error("grad_g_zero: P entries must lie strictly inside (0, 1)");
  if (!((f.array() > 0.0).all())) throw std::domain_error("grad_g_zero: f must be strictly positive");
  double total = 0.0;
  for (Eigen::Index a = 0; a < K; ++a) total -= f[a] * kl_bernoulli(P(a, b_prime), P(a, b));
  return total + kl_bernoulli(P(b_prime, b_prime), P(b, b)) / (2.0 * n);
}

double central_difference(const std::function<double(double)>& fn, double x, double h) {
  return (fn(x + h) - fn(x - h)) / (2.0 * h);
}

GradientCheckReport gradient_check(int configurations, std::uint64_t seed, double tolerance,
                                   TauFunction tau_fn) {
  GradientCheckReport report;
  report.tolerance = tolerance;
  Rng rng(seed);
  for (int i = 0; i < configurations; ++i) {
    const int K = 2 + (i % 2);
    const double n = (i / 2) % 2 == 0 ? 50.0 : 500.0;
    Matrix P(K, K);
    for (int a = 0; a < K; ++a)
      for (int b = a; b < K; ++b) P(a, b) = P(b, a) = 0.1 + 0.8 * rng.uniform();
    Vector f(K);
    do {
      for (int a = 0; a < K; ++a) f[a] = rng.exponential();
      f /= f.sum();
    } while (f.minCoeff() < 0.1);
    const int b = static_cast<int>(rng.index(K));
    int b_prime = static_cast<int>(rng.index(K - 1));
    if (b_prime >= b) ++b_prime;

    const double analytic = grad_g_zero(f, P, n, b, b_prime);
    auto along = [&](double x) {
      auto coords = LambdaCoords::at_zero(f);
      coords.lambda(b, b_prime) = x;
      return g_lambda(coords, P, n, tau_fn);
    };
    const double numeric = central_difference(along, 0.0);
    const double scale = std::max(std::abs(analytic), std::abs(numeric));
    const double rel = scale == 0.0 ? 0.0 : std::abs(analytic - numeric) / scale;
    report.max_relative_error = std::max(report.max_relative_error, rel);
    if (!(rel <= tolerance)) ++report.failures;
    ++report.configurations;
  }
  return report;
}

// ---------------------------------------------------------------------------

GapStats equivalence_gap(const Graph& graph, const PriorHyper& hyper,
                         std::span<const Labelling> labellings) {
  if (labellings.empty()) throw std::invalid_argument("equivalence_gap: empty labelling sample");
  GapStats stats;
  for (const auto& e : labellings) accumulate_gap(stats, block_counts(graph, e), hyper);
  return stats;
}

GapStats equivalence_gap_exhaustive(const Graph& graph, int K, const PriorHyper& hyper,
                                    std::int64_t budget) {
  const int n = graph.n();
  double total = std::pow(static_cast<double>(K), n);
  if (total > static_cast<double>(budget))
    throw std::invalid_argument("equivalence_gap_exhaustive: K^n exceeds budget");
  GapStats stats;
  for_each_labelling(n, K, [&](const std::vector<ClassLabel>& labels) {
    accumulate_gap(stats, block_counts(graph, Labelling(labels, K)), hyper);
  });
  return stats;
}

GapStats equivalence_gap_sampled(const Graph& graph, int K, const PriorHyper& hyper, int count,
                                 std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("equivalence_gap_sampled: count must be positive");
  Rng rng(seed);
  GapStats stats;
  std::vector<ClassLabel> labels(static_cast<std::size_t>(graph.n()));
  for (int s = 0; s < count; ++s) {
    for (auto& c : labels) c = static_cast<ClassLabel>(rng.index(K));
    accumulate_gap(stats, block_counts(graph, Labelling(labels, K)), hyper);
  }
  return stats;
}

MaximalityReport maximality_check(const Matrix& P, const Vector& pi, int trials, std::uint64_t seed,
                                  double slack) {
  if (trials < 1) throw std::invalid_argument("maximality_check: trials must be positive");
  const SbmParams params(pi, P);
  if (!params.identifiable()) throw std::invalid_argument("maximality_check: (P, pi) not identifiable");
  const int K = params.K();
  Rng rng(seed);
  MaximalityReport report;
  report.min_h_gap = report.min_g_gap = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const Matrix R = random_probability_matrix(K, rng);
    const Matrix D = Matrix(R.colwise().sum().transpose().asDiagonal());
    const bool diagonal_like = is_permuted_diagonal(R);
    const double h_gap = h_p(D, params.P()) - h_p(R, params.P());
    const double g_gap = g_p(D, params.P()) - g_p(R, params.P());
    report.min_h_gap = std::min(report.min_h_gap, h_gap);
    report.min_g_gap = std::min(report.min_g_gap, g_gap);
    if (h_gap < -slack) ++report.h_violations;
    if (g_gap < -slack) ++report.g_violations;
    if (!diagonal_like && !(h_gap > 0.0)) ++report.h_not_strict;
    if (!diagonal_like && !(g_gap > 0.0)) ++report.g_not_strict;
    ++report.trials;
  }
  return report;
}

MismatchReport mismatch_exhaustive(int max_n, int max_K) {
  MismatchReport report;
  for (int n = 1; n <= max_n; ++n)
    for (int K = 1; K <= max_K; ++K)
      for_each_labelling(n, K, [&](const std::vector<ClassLabel>& c_labels) {
        const Labelling c(c_labels, K);
        for_each_labelling(n, K, [&](const std::vector<ClassLabel>& e_labels) {
          ++report.pairs;
          if (!mismatch_holds(Labelling(e_labels, K), c)) ++report.failures;
        });
      });
  return report;
}

MismatchReport mismatch_sampled(int n, int K, std::int64_t pairs, std::uint64_t seed) {
  Rng rng(seed);
  MismatchReport report;
  std::vector<ClassLabel> e(static_cast<std::size_t>(n)), c(static_cast<std::size_t>(n));
  for (std::int64_t p = 0; p < pairs; ++p) {
    for (int i = 0; i < n; ++i) {
      e[i] = static_cast<ClassLabel>(rng.index(K));
      c[i] = static_cast<ClassLabel>(rng.index(K));
    }
    ++report.pairs;
    if (!mismatch_holds(Labelling(e, K), Labelling(c, K))) ++report.failures;
  }
  return report;
}

}  // namespace blockmod::theory
