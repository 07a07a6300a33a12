#include "blockmod/theory.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace blockmod;
using namespace blockmod::theory;

namespace {

Matrix two_block(double in, double out) {
  Matrix P(2, 2);
  P << in, out, out, in;
  return P;
}

Matrix random_symmetric(int K, Rng& rng, double lo = 0.0, double hi = 1.0) {
  Matrix P(K, K);
  for (int a = 0; a < K; ++a)
    for (int b = a; b < K; ++b) P(a, b) = P(b, a) = lo + (hi - lo) * rng.uniform();
  return P;
}

Matrix permute_rows(const Matrix& R, const std::vector<int>& perm) {
  Matrix out(R.rows(), R.cols());
  for (Eigen::Index a = 0; a < R.rows(); ++a) out.row(perm[a]) = R.row(a);
  return out;
}

}  // namespace

TEST(HP, DiagonalReducesToBlockEntropies) {
  Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    const int K = 1 + static_cast<int>(rng.index(4));
    const Matrix P = random_symmetric(K, rng);
    Vector f = Vector::NullaryExpr(K, [&] { return rng.exponential(); });
    f /= f.sum();
    double expected = 0;
    for (int a = 0; a < K; ++a)
      for (int b = 0; b < K; ++b) expected += f[a] * f[b] * tau(P(a, b));
    EXPECT_NEAR(h_p(Matrix(f.asDiagonal()), P), 0.5 * expected, 1e-14);
  }
  Matrix half(1, 1);
  half << 0.5;
  EXPECT_NEAR(h_p(Matrix::Ones(1, 1), half), -0.5 * std::log(2.0), 1e-15);
}

TEST(HP, ConstantPGivesConstantValue) {
  Rng rng(42);
  for (int K : {2, 3, 4}) {
    const Matrix R = random_probability_matrix(K, rng);
    EXPECT_NEAR(h_p(R, Matrix::Constant(K, K, 0.5)), -0.5 * std::log(2.0), 1e-14);
  }
}

TEST(HP, EmptyRowsContributeZero) {
  Matrix R(2, 2);
  R << 0.4, 0.6, 0.0, 0.0;
  EXPECT_TRUE(std::isfinite(h_p(R, two_block(0.8, 0.2))));
  EXPECT_TRUE(std::isfinite(g_p(R, two_block(0.8, 0.2))));
}

TEST(HP, RowPermutationInvariance) {
  Rng rng(43);
  const std::vector<int> perm{2, 0, 1};
  for (int t = 0; t < 20; ++t) {
    const Matrix R = random_probability_matrix(3, rng);
    const Matrix P = random_symmetric(3, rng);
    const Matrix PR = permute_rows(R, perm);
    EXPECT_NEAR(h_p(PR, P), h_p(R, P), 1e-14);
    EXPECT_NEAR(g_p(PR, P), g_p(R, P), 1e-14);
    EXPECT_TRUE(PR.colwise().sum().isApprox(R.colwise().sum()));
  }
}

TEST(GP, SingleBlock) {
  Matrix s(1, 1);
  s << 0.3;
  EXPECT_NEAR(g_p(Matrix::Ones(1, 1), s), 0.5 * tau0(0.3), 1e-15);
}

TEST(GP, SmallRhoLimitOfH) {
  Rng rng(44);
  const Matrix S = two_block(3.0, 1.0);
  for (int t = 0; t < 5; ++t) {
    const Matrix R = random_probability_matrix(2, rng);
    const Matrix D = Matrix(R.colwise().sum().transpose().asDiagonal());
    const double target = g_p(D, S) - g_p(R, S);
    std::vector<double> err;
    for (double rho : {1e-2, 1e-3, 1e-4}) {
      const double scaled = (h_p(D, rho * S) - h_p(R, rho * S)) / rho;
      err.push_back(std::abs(scaled - target));
    }
    EXPECT_LT(err[1], err[0]);
    EXPECT_LT(err[2], err[1]);
    EXPECT_LT(err[2], 1e-3 * std::max(1.0, std::abs(target)));
  }
}

TEST(HPn, SingleClass) {
  for (double n : {2.0, 10.0, 1000.0}) {
    Matrix P(1, 1);
    P << 0.3;
    const auto v = h_p_n(Matrix::Ones(1, 1), P, n);
    EXPECT_NEAR(v.value, 0.5 * (1 - 1 / n) * tau(0.3), 1e-14);
    EXPECT_EQ(v.degenerate_terms, 0);
  }
}

TEST(HPn, ZeroP) {
  Rng rng(45);
  EXPECT_EQ(h_p_n(random_probability_matrix(3, rng), Matrix::Zero(3, 3), 20).value, 0.0);
}

TEST(HPn, ConvergesToHPAtRateOneOverN) {
  Rng rng(46);
  for (int t = 0; t < 5; ++t) {
    const Matrix R = random_probability_matrix(3, rng);
    const Matrix P = random_symmetric(3, rng, 0.1, 0.9);
    std::vector<double> ns, errs;
    for (double n : {100.0, 1000.0, 10000.0, 100000.0}) {
      ns.push_back(std::log(n));
      errs.push_back(std::log(std::abs(h_p_n(R, P, n).value - h_p(R, P))));
    }
    const double slope = (errs.back() - errs.front()) / (ns.back() - ns.front());
    EXPECT_NEAR(slope, -1.0, 0.1);
  }
}

TEST(HPn, GuardFlagsDegenerateTerms) {
  Matrix R(2, 2);
  R << 0.98, 0.0, 0.0, 0.02;  // class 2 holds less than one node at n = 10
  const auto v = h_p_n(R, two_block(0.8, 0.2), 10);
  EXPECT_GT(v.degenerate_terms, 0);
  EXPECT_TRUE(std::isfinite(v.value));
}

TEST(HPn, ExpectedLikelihoodIdentity) {
  // n^2 H_{P,n}(R(e,z)) written with E(O~|Z) in place of the random counts
  // equals the pair-summed expectation inside tau.
  Rng rng(47);
  for (int t = 0; t < 30; ++t) {
    const int n = 5 + static_cast<int>(rng.index(30)), K = 1 + static_cast<int>(rng.index(3));
    const Matrix P = random_symmetric(K, rng);
    const auto e = oracle::random_labelling(n, K, rng), z = oracle::random_labelling(n, K, rng);
    const Matrix M = oracle::expected_counts(P, e, z);
    const auto sizes = e.class_sizes();
    double direct = 0;
    for (int a = 0; a < K; ++a)
      for (int b = 0; b < K; ++b) {
        const double pairs = static_cast<double>(sizes[a]) * (sizes[b] - (a == b));
        if (pairs > 0) direct += pairs * tau(M(a, b) / pairs);
      }
    direct /= 2.0 * n * n;
    const Matrix R = oracle::coupling(e, z);
    EXPECT_NEAR(h_p_n(R, P, n).value, direct, 1e-12);
  }
}

TEST(KL, Values) {
  EXPECT_EQ(kl_bernoulli(0.3, 0.3), 0.0);
  EXPECT_EQ(kl_poisson(2.0, 2.0), 0.0);
  EXPECT_NEAR(kl_bernoulli(0.5, 0.25), 0.143841, 1e-6);
  EXPECT_NEAR(kl_bernoulli(0.5, 0.25), 0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0), 1e-15);
  EXPECT_EQ(kl_bernoulli(0.0, 0.0), 0.0);
  EXPECT_EQ(kl_bernoulli(1.0, 1.0), 0.0);
  EXPECT_NEAR(kl_bernoulli(0.0, 0.5), std::log(2.0), 1e-15);
  EXPECT_TRUE(std::isinf(kl_bernoulli(0.5, 0.0)));
  EXPECT_TRUE(std::isinf(kl_bernoulli(0.5, 1.0)));
  EXPECT_NEAR(kl_poisson(0.0, 1.5), 1.5, 1e-15);
  EXPECT_THROW(kl_bernoulli(-0.1, 0.5), std::domain_error);
  EXPECT_THROW(kl_bernoulli(0.5, 1.1), std::domain_error);
  EXPECT_THROW(kl_poisson(-1.0, 1.0), std::domain_error);
}

TEST(KL, GibbsInequality) {
  Rng rng(48);
  for (int t = 0; t < 10000; ++t) {
    const double p = rng.uniform(), q = rng.uniform_open_zero() * 0.999;
    EXPECT_GE(kl_bernoulli(p, q), -1e-14);
    const double s = 5 * rng.uniform(), u = 5 * rng.uniform_open_zero();
    EXPECT_GE(kl_poisson(s, u), -1e-14);
  }
}

TEST(KL, PoissonLimit) {
  for (auto [s, t] : {std::pair{2.0, 3.0}, {0.5, 4.0}, {7.0, 1.0}}) {
    const double rho = 1e-4;
    EXPECT_NEAR(kl_bernoulli(rho * s, rho * t) / rho, kl_poisson(s, t), 1e-3 * kl_poisson(s, t));
  }
}

TEST(LambdaCoords, RoundTripAndColumnSums) {
  Rng rng(49);
  for (int K : {2, 3, 4}) {
    const Matrix R = random_probability_matrix(K, rng);
    const auto coords = LambdaCoords::from_matrix(R);
    EXPECT_TRUE(coords.reconstruct().isApprox(R, 1e-14));
    EXPECT_TRUE(coords.feasible());
    EXPECT_TRUE(Vector(coords.reconstruct().colwise().sum().transpose()).isApprox(coords.f));
  }
  const Matrix D = delta_basis(3, 0, 2);
  EXPECT_EQ(D(0, 2), 1.0);
  EXPECT_EQ(D(2, 2), -1.0);
  EXPECT_EQ(D.cwiseAbs().sum(), 2.0);
}

TEST(Gradient, IdenticalColumnsGiveZero) {
  Matrix P(3, 3);
  P << 0.4, 0.4, 0.2, 0.4, 0.4, 0.2, 0.2, 0.2, 0.7;
  const Vector f = Vector::Constant(3, 1.0 / 3);
  EXPECT_NEAR(grad_g_zero(f, P, 100, 0, 1), 0.0, 1e-15);
}

TEST(Gradient, LargeNLimit) {
  Rng rng(50);
  const Matrix P = random_symmetric(3, rng, 0.1, 0.9);
  const Vector f = Vector::Constant(3, 1.0 / 3);
  double limit = 0;
  for (int a = 0; a < 3; ++a) limit -= f[a] * kl_bernoulli(P(a, 2), P(a, 0));
  EXPECT_NEAR(grad_g_zero(f, P, 1e12, 0, 2), limit, 1e-10);
}

TEST(Gradient, MatchesFiniteDifferences) {
  const auto report = gradient_check(100, 2024);
  EXPECT_EQ(report.configurations, 100);
  EXPECT_EQ(report.failures, 0);
  EXPECT_LT(report.max_relative_error, 1e-5);
}

TEST(Gradient, DomainChecks) {
  const Vector f = Vector::Constant(2, 0.5);
  EXPECT_THROW(grad_g_zero(f, two_block(1.0, 0.2), 10, 0, 1), std::domain_error);
  EXPECT_THROW(grad_g_zero(f, two_block(0.8, 0.2), 10, 1, 1), std::invalid_argument);
  EXPECT_THROW(grad_g_zero(f, two_block(0.8, 0.2), 10, 0, 2), std::out_of_range);
}

TEST(Maximality, DiagonalIsEquality) {
  Rng rng(51);
  const Matrix P = two_block(0.8, 0.2);
  Vector f(2);
  f << 0.3, 0.7;
  const Matrix D = Matrix(f.asDiagonal());
  EXPECT_NEAR(h_p(D, P), h_p(Matrix(D.colwise().sum().transpose().asDiagonal()), P), 1e-12);
  Matrix swapped(2, 2);
  swapped << 0.0, 0.7, 0.3, 0.0;
  EXPECT_TRUE(is_permuted_diagonal(swapped));
  EXPECT_NEAR(h_p(swapped, P), h_p(D, P), 1e-12);
}

TEST(Maximality, RandomMatricesStrict) {
  const auto r = maximality_check(two_block(0.8, 0.2), Vector::Constant(2, 0.5), 10000, 7);
  EXPECT_TRUE(r.passed());
  EXPECT_GT(r.min_h_gap, 0.0);
  EXPECT_GT(r.min_g_gap, 0.0);
  EXPECT_THROW(maximality_check(two_block(0.5, 0.5), Vector::Constant(2, 0.5), 10, 7),
               std::invalid_argument);
}

TEST(EquivalenceGap, SingleClassIsDirect) {
  Rng rng(52);
  const auto g = oracle::random_graph(10, 0.4, rng);
  const std::vector<Labelling> one{Labelling::constant(10, 1)};
  const auto c = block_counts(g, one.front());
  const auto stats = equivalence_gap(g, {}, one);
  EXPECT_NEAR(stats.max_full_gap, std::abs(q_bayes(c, {}) - q_likelihood(c) - q_prior(c, 0.5)), 1e-15);
  EXPECT_EQ(stats.labellings, 1);
}

TEST(EquivalenceGap, ExhaustiveStatisticBounded) {
  Matrix P = two_block(0.8, 0.2);
  const SbmParams params(Vector::Constant(2, 0.5), P);
  for (int n = 4; n <= 8; ++n) {
    const auto s = generate_sbm(params, n, 100 + n);
    const auto stats = equivalence_gap_exhaustive(s.graph, 2, {});
    EXPECT_EQ(stats.labellings, 1 << n);
    EXPECT_LT(stats.max_full_gap * n * n / std::log(n), 5.0);
  }
}

TEST(EquivalenceGap, SampledBayesMinusLikelihoodBounded) {
  // |Q_B - Q_ML| is dominated by Q_P = O(log n / n): bounded once scaled by n / log n.
  const SbmParams params(Vector::Constant(2, 0.5), two_block(0.8, 0.2));
  for (int n : {20, 50, 100, 200}) {
    const auto s = generate_sbm(params, n, 7 + n);
    const auto stats = equivalence_gap_sampled(s.graph, 2, {}, 1000, 11);
    EXPECT_LE(stats.max_bayes_ml_gap * n / std::log(n), 1.05) << "n=" << n;
  }
}

TEST(MismatchIdentity, Reports) {
  EXPECT_TRUE(mismatch_exhaustive(5, 3).passed());
  const auto r = mismatch_sampled(200, 4, 2000, 3);
  EXPECT_EQ(r.pairs, 2000);
  EXPECT_TRUE(r.passed());
}

TEST(RandomProbabilityMatrix, IsAProbabilityMatrix) {
  Rng rng(53);
  for (int K : {1, 2, 5}) {
    const Matrix R = random_probability_matrix(K, rng);
    EXPECT_NO_THROW(check_probability_matrix(R));
    EXPECT_NEAR(R.sum(), 1.0, 1e-14);
    EXPECT_GE(R.minCoeff(), 0.0);
  }
}
