#include "blockmod/modularity.hpp"
#include "blockmod/optimize.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace blockmod;

namespace {

Graph graph_of(int n, std::vector<std::pair<NodeId, NodeId>> edges) { return Graph::from_edges(n, edges); }

std::vector<std::vector<int>> all_perms(int K) {
  std::vector<int> p(static_cast<std::size_t>(K));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace

TEST(Special, GoldenValues) {
  EXPECT_NEAR(log_gamma(2.5), std::log(0.75 * std::sqrt(std::numbers::pi)), 1e-14);
  EXPECT_NEAR(log_beta(1.5, 0.5), std::log(std::numbers::pi / 2), 1e-14);
  EXPECT_NEAR(log_gamma(0.5), 0.5 * std::log(std::numbers::pi), 1e-14);
  EXPECT_EQ(tau(0.0), 0.0);
  EXPECT_EQ(tau(1.0), 0.0);
  EXPECT_NEAR(tau(0.5), -std::log(2.0), 1e-15);
  EXPECT_TRUE(std::isnan(tau(1.5)));
  EXPECT_EQ(tau0(0.0), 0.0);
  EXPECT_NEAR(tau0(2.0), 2 * std::log(2.0) - 2, 1e-15);
}

TEST(Special, LogGammaTableMatchesDirect) {
  const LogGammaTable t(0.5, 100, 50);
  for (std::int64_t k : {0, 1, 7, 50, 51, 100, 1000}) EXPECT_DOUBLE_EQ(t(k), std::lgamma(k + 0.5));
}

TEST(Special, TauModulusBound) {
  Rng rng(11);
  for (int i = 0; i < 100'000; ++i) {
    const double x = rng.uniform(), y = rng.uniform();
    EXPECT_LE(std::abs(tau(x) - tau(y)), tau_modulus(std::abs(x - y)) + 1e-12);
  }
  for (double x : {0.0, 1e-12, 1e-6, 0.5})
    EXPECT_LE(std::abs(tau(x) - tau(0.0)), tau_modulus(x) + 1e-12);
}

TEST(PriorHyper, Validation) {
  EXPECT_NO_THROW(PriorHyper{}.validate());
  EXPECT_THROW((PriorHyper{0.0, 0.5, 0.5}.validate()), std::invalid_argument);
  EXPECT_THROW((PriorHyper{0.5, -1, 0.5}.validate()), std::invalid_argument);
  EXPECT_THROW((PriorHyper{0.5, 0.5, std::nan("")}.validate()), std::invalid_argument);
}

TEST(ModularityKind, Parse) {
  EXPECT_EQ(ModularityKind::parse("bayes").tag, ObjectiveTag::Bayes);
  EXPECT_EQ(ModularityKind::parse("ml").tag, ObjectiveTag::Likelihood);
  EXPECT_EQ(ModularityKind::parse("likelihood").tag, ObjectiveTag::Likelihood);
  EXPECT_EQ(ModularityKind::parse("ml-tilde").tag, ObjectiveTag::LikelihoodTilde);
  EXPECT_THROW(ModularityKind::parse("louvain"), std::invalid_argument);
}

TEST(QBayes, TwoNodesOneEdge) {
  const auto c = block_counts(graph_of(2, {{0, 1}}), Labelling::constant(2, 1));
  const double expected = 0.25 * (std::log(std::numbers::pi / 2) + std::lgamma(2.5));
  EXPECT_NEAR(q_bayes(c, {}), expected, 1e-14);
  EXPECT_NEAR(q_bayes(c, {}), 0.184066, 1e-6);
}

TEST(QBayes, EmptyBlockContributesPriorBeta) {
  // Class 1 empty: the (0,0) and (0,1) blocks have no pairs.
  const auto g = graph_of(3, {{0, 1}});
  const auto c = block_counts(g, Labelling({1, 1, 1}, 2));
  const double lb = log_beta(0.5, 0.5);
  const double expected = (2 * lb + log_beta(1.5, 2.5) + std::lgamma(0.5) + std::lgamma(3.5)) / 9;
  EXPECT_NEAR(q_bayes(c, {}), expected, 1e-14);
}

TEST(QBayes, ExactlyTheLogJointUpToAConstant) {
  Rng rng(12);
  const PriorHyper hypers[] = {{0.5, 0.5, 0.5}, {1.0, 2.0, 0.7}, {2.5, 1.0, 1.0}};
  for (const auto& h : hypers)
    for (int n = 2; n <= 6; ++n)
      for (int K = 1; K <= 3; ++K) {
        const auto g = oracle::random_graph(n, 0.5, rng);
        std::vector<ClassLabel> v(static_cast<std::size_t>(n), 0);
        double offset = 0.0;
        bool first = true;
        do {
          const Labelling e(v, K);
          const double diff = n * n * q_bayes(block_counts(g, e), h) - oracle::log_joint(g, e, h);
          if (first) offset = diff;
          first = false;
          ASSERT_NEAR(diff, offset, 1e-9);
        } while (oracle::next_labelling(v, K));
      }
}

TEST(QBayes, ArgmaxEqualsArgmaxOfLogPosterior) {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 6;
    const auto g = oracle::random_graph(n, 0.5, rng);
    std::vector<ClassLabel> v(n, 0);
    double best_q = -1e300, best_lp = -1e300;
    std::vector<ClassLabel> arg_q, arg_lp;
    do {
      const Labelling e(v, 2);
      const double q = q_bayes(block_counts(g, e), {});
      const double lp = oracle::log_joint(g, e, {});
      if (q > best_q + 1e-12) best_q = q, arg_q = v;
      if (lp > best_lp + 1e-9) best_lp = lp, arg_lp = v;
    } while (oracle::next_labelling(v, 2));
    EXPECT_EQ(arg_q, arg_lp);
    EXPECT_EQ(exhaustive_map(g, 2, ModularityKind::bayes()).best.labels(), arg_q);
  }
}

TEST(QLikelihood, Examples) {
  EXPECT_EQ(q_likelihood(block_counts(graph_of(2, {{0, 1}}), Labelling::constant(2, 1))), 0.0);
  const double v = q_likelihood(block_counts(graph_of(3, {{0, 2}}), Labelling::constant(3, 1)));
  EXPECT_NEAR(v, 3 * tau(1.0 / 3) / 9, 1e-15);
  EXPECT_NEAR(v, -0.212171, 1e-6);
}

TEST(QLikelihood, MatchesOracle) {
  Rng rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.index(30));
    const int K = 1 + static_cast<int>(rng.index(4));
    const auto g = oracle::random_graph(n, rng.uniform(), rng);
    const auto e = oracle::random_labelling(n, K, rng);
    EXPECT_NEAR(q_likelihood(block_counts(g, e)), oracle::q_likelihood(g, e), 1e-13);
  }
}

TEST(QPrior, Examples) {
  // single class of size n
  const auto one = block_counts(graph_of(5, {}), Labelling({2, 2, 2, 2, 2}, 3));
  EXPECT_NEAR(q_prior(one, 0.5), 5 * std::log(5.0) / 25 - 0.2, 1e-15);
  // a singleton class is excluded when alpha < 1
  const auto single = block_counts(graph_of(3, {}), Labelling({0, 1, 1}, 2));
  EXPECT_NEAR(q_prior(single, 0.5), 2 * std::log(2.0) / 9 - 1.0 / 3, 1e-15);
  EXPECT_NEAR(q_prior(single, 1.0), 2 * std::log(2.0) / 9 - 1.0 / 3, 1e-15);  // 1 log 1 = 0 anyway
  // sizes (2, 2)
  const auto halves = block_counts(graph_of(4, {}), Labelling({0, 0, 1, 1}, 2));
  EXPECT_NEAR(q_prior(halves, 0.5), 4 * std::log(2.0) / 16 - 0.25, 1e-15);
  EXPECT_NEAR(q_prior(halves, 0.5), -0.0767132, 1e-7);
}

TEST(LLTilde, Examples) {
  EXPECT_EQ(ll_tilde(block_counts(graph_of(4, {}), Labelling::constant(4, 1))), 0.0);
  // K=1: (2n^2)^-1 n^2 tau(2 O / n^2)
  const auto g = graph_of(4, {{0, 1}, {1, 2}});
  EXPECT_NEAR(ll_tilde(block_counts(g, Labelling::constant(4, 1))), 0.5 * tau(4.0 / 16), 1e-15);
}

TEST(LLTilde, CloseToLikelihoodModularity) {
  Rng rng(15);
  for (int n : {50, 100, 200, 400}) {
    double worst = 0;
    const auto g = oracle::random_graph(n, 0.3, rng);
    for (int t = 0; t < 30; ++t) {
      const auto e = oracle::random_labelling(n, 3, rng);
      const auto c = block_counts(g, e);
      worst = std::max(worst, std::abs(ll_tilde(c) - q_likelihood(c)));
    }
    EXPECT_LE(worst, 2.0 * std::log(n) / n) << "n=" << n;
  }
}

TEST(Objectives, PermutationInvariance) {
  Rng rng(16);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + static_cast<int>(rng.index(20));
    const int K = 1 + static_cast<int>(rng.index(4));
    const auto g = oracle::random_graph(n, rng.uniform(), rng);
    const auto e = oracle::random_labelling(n, K, rng);
    const auto c = block_counts(g, e);
    for (const auto& perm : all_perms(K)) {
      const auto pc = c.permuted(perm);
      EXPECT_EQ(pc, block_counts(g, e.permuted(perm)));
      EXPECT_NEAR(q_bayes(pc, {}), q_bayes(c, {}), 1e-14);
      EXPECT_NEAR(q_likelihood(pc), q_likelihood(c), 1e-14);
      EXPECT_NEAR(q_prior(pc, 0.5), q_prior(c, 0.5), 1e-14);
      EXPECT_NEAR(ll_tilde(pc), ll_tilde(c), 1e-14);
    }
  }
}

TEST(ObjectiveTerms, AgreeWithDirectEvaluation) {
  Rng rng(17);
  for (const auto& kind : {ModularityKind::bayes(), ModularityKind::bayes({1.5, 0.3, 2.0}),
                           ModularityKind::likelihood(), ModularityKind::likelihood_tilde()}) {
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 2 + static_cast<int>(rng.index(40));
      const int K = 1 + static_cast<int>(rng.index(4));
      const auto g = oracle::random_graph(n, rng.uniform(), rng);
      const auto c = block_counts(g, oracle::random_labelling(n, K, rng));
      const ObjectiveTerms terms(kind, n);
      EXPECT_NEAR(terms.value(c), evaluate(c, kind), 1e-12) << kind.name();
    }
  }
}

TEST(Objectives, FiniteWithEmptyClasses) {
  const auto c = block_counts(graph_of(3, {{0, 1}}), Labelling({0, 0, 0}, 4));
  EXPECT_TRUE(std::isfinite(q_bayes(c, {})));
  EXPECT_TRUE(std::isfinite(q_likelihood(c)));
  EXPECT_TRUE(std::isfinite(ll_tilde(c)));
  EXPECT_TRUE(std::isfinite(q_prior(c, 0.5)));
}
